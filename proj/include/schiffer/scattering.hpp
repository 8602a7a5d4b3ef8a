#pragma once

#include <utility>
#include <vector>

#include "schiffer/schiffer.hpp"

namespace schiffer {

// (conj b1, conj b2) = S (a1, a2) with
//   S = [[-conj T11, -conj T21], [-conj T12, -conj T22]]
// blocks[0][0] acts A(caps) -> conj A(caps), blocks[1][0] A(caps) -> conj A(complement), ...
struct ScatteringMatrix {
  OperatorMatrix blocks[2][2];
  int N = 0;
  int caps = 0;
  double completion_residual = 0.0;  // ||T11* T11 + T12* T12 - I|| before completion

  MatrixXc assembled() const;
};

struct RefinementLevel {
  int N = 0;
  int quad = 0;  // kernel grid used for T11
  int J = 0;
  double defect = 0.0;
};

struct ScatteringReport {
  double unitarity_defect = 0.0;
  double block_norms[4] = {0, 0, 0, 0};
  int truncation = 0;
  std::vector<RefinementLevel> refinement_history;
};

ScatteringMatrix assemble_scattering(const SchifferOperators& ops, double completion_threshold = 1e-2);
ScatteringMatrix assemble_scattering(const CapComplex& cx);
ScatteringReport scattering_report(const ScatteringMatrix& S);
std::pair<CoeffVector, CoeffVector> scatter(const ScatteringMatrix& S, const CoeffVector& alpha1,
                                            const CoeffVector& alpha2);

// Sigma_1 side of the exact overfare of T12 gamma_bar: (T11 gamma_bar, -gamma_bar),
// with holomorphic rows up to the operators' J.
HarmonicPair overfare_exact_form(const SchifferOperators& ops, const CoeffVector& gamma_bar);
// T12 gamma_bar as a form on the complement.
HarmonicPair complement_image(const SchifferOperators& ops, const CoeffVector& gamma_bar);

struct OverfareCheck {
  double mismatch = 0.0;               // H^{-1/2} weighted, all curves
  std::vector<cplx> periods_sigma1;    // oriented, per curve
  std::vector<cplx> periods_sigma2;
};
OverfareCheck overfare_check(const SchifferOperators& ops, const CoeffVector& gamma_bar);

// Refinement ladder for the given cap specs.
ScatteringReport refinement_ladder(const std::vector<CapSpec>& specs, const std::vector<int>& truncations,
                                   int samples = 1024);

struct HarmonicMeasureOptions {
  int terms = 0;  // Laurent terms per cap, 0 picks a default
  double oversampling = 2.0;
  double svd_cutoff = 1e-12;
  double max_condition = 1e12;
};

struct HarmonicMeasure {
  double constant = 0.0;
  std::vector<double> log_coeffs;                  // per cap
  std::vector<std::vector<cplx>> laurent_coeffs;   // per cap, multiplies ((z - p)/rho)^{-m}
  double boundary_residual = 0.0;                  // max over collocation points
};

struct HarmonicMeasures {
  std::vector<HarmonicMeasure> measures;
  Eigen::MatrixXd period_matrix;  // Pi(j, k) = integral over curve j of *d omega_k
  double condition = 0.0;
  std::vector<cplx> centers;
  std::vector<double> radii;

  double evaluate(int k, cplx z) const;
  // Pi with the last row and column removed
  Eigen::MatrixXd reduced() const;
};

HarmonicMeasures harmonic_measures(const CapComplex& cx, const HarmonicMeasureOptions& opts = {});

}  // namespace schiffer
