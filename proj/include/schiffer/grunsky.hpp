#pragma once

#include <vector>

#include "schiffer/capmap.hpp"
#include "schiffer/common.hpp"
#include "schiffer/series.hpp"

namespace schiffer {

// Expansion constant + pure_z(z) + pure_w(w) + sum b_{mn} z^m w^n.
struct BivariateSeries {
  MatrixXc coeffs;  // b_{mn} at (m-1, n-1)
  TruncatedSeries pure_z;
  TruncatedSeries pure_w;
  cplx constant{};

  cplx mixed(int m, int n) const { return coeffs(m - 1, n - 1); }
};

// Mixed coefficients, z-degree up to rows and w-degree up to cols, of
//   same:  log((f(z) - f(w)) / (z - w))   with f = cap_z = cap_w
//   else:  log(f_z(z) - f_w(w))           principal branch at z = w = 0
BivariateSeries grunsky_generating(const CapMap& cap_z, const CapMap& cap_w, bool same, int rows, int cols);
BivariateSeries grunsky_generating(const CapMap& cap_z, const CapMap& cap_w, bool same, int N);

// blocks[j*n + k](m-1, l-1) = -sqrt(m l) b^{jk}_{ml}
struct GrunskyMatrix {
  int caps = 0;
  int N = 0;
  int rows = 0;
  std::vector<MatrixXc> blocks;

  const MatrixXc& block(int j, int k) const { return blocks[static_cast<std::size_t>(j * caps + k)]; }
  MatrixXc assembled() const;
};

GrunskyMatrix grunsky_matrix(const CapComplex& cx, int rows = 0);

struct SpectralNormResult {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// Largest singular value by power iteration on M* M.
SpectralNormResult spectral_norm_report(const MatrixXc& m, double tol = 1e-10, int max_iterations = 10000);
double spectral_norm(const MatrixXc& m);
double spectral_norm(const GrunskyMatrix& g);

}  // namespace schiffer
