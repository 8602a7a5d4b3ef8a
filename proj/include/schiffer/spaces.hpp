#pragma once

#include <span>
#include <string>
#include <vector>

#include "schiffer/capmap.hpp"
#include "schiffer/common.hpp"

namespace schiffer {

enum class BasisKind { DiskInterior, DiskExterior, CapPullback, ComplementLaurent };

// Orthonormal basis of a truncated Bergman space.
//  DiskInterior      e_n = sqrt(n/pi) z^{n-1} dz on the disk
//  DiskExterior      sqrt(n/pi) z^{-n-1} dz on |z| > 1
//  CapPullback       (f_k^{-1})^* e_n on cap k; cap = -1 stacks all caps
//  ComplementLaurent Gram-Schmidt of sqrt(n/pi) (z - p_k)^{-n-1} dz,
//                    cap-major and increasing n, on the complement
// Multi-cap index of (k, n) is k*truncation + n - 1.
struct BasisId {
  BasisKind kind = BasisKind::DiskInterior;
  int truncation = 0;
  int caps = 1;
  int cap = -1;

  static BasisId disk_interior(int N) { return {BasisKind::DiskInterior, N, 1, -1}; }
  static BasisId disk_exterior(int N) { return {BasisKind::DiskExterior, N, 1, -1}; }
  static BasisId cap_pullback(int N, int caps, int cap = -1) { return {BasisKind::CapPullback, N, caps, cap}; }
  static BasisId complement(int N, int caps) { return {BasisKind::ComplementLaurent, N, caps, -1}; }

  int dimension() const;
  bool on_caps() const { return kind == BasisKind::DiskInterior || kind == BasisKind::CapPullback; }
  bool operator==(const BasisId&) const = default;
  std::string describe() const;
};

struct CoeffVector {
  BasisId basis;
  VectorXc coeffs;
  bool conjugated = false;

  static CoeffVector zero(const BasisId& b, bool conjugated = false);
  static CoeffVector unit(const BasisId& b, int index, bool conjugated = false);
  double norm() const { return coeffs.norm(); }
};

// alpha + conj(beta) with alpha holomorphic and conj(beta) antiholomorphic
struct HarmonicPair {
  CoeffVector holo;
  CoeffVector antiholo;
};

enum class Side { Sigma1, Sigma2 };
enum class Component { Holo, Antiholo };

// Pullback of a one-form under theta -> f_k(e^{i theta}), written as
// (sum_j c_j e^{i j theta}) d theta for |j| <= J.
struct BoundaryOneForm {
  int curve = 0;
  int J = 0;
  Side side = Side::Sigma1;
  std::vector<cplx> fourier;  // c_j at index j + J
  double aliasing = 0.0;      // high-mode energy ratio of the sampled pullback

  cplx coeff(int j) const;
  cplx period() const { return 2.0 * pi * coeff(0); }
  // Period along the curve oriented as the boundary of the given side.
  cplx oriented_period() const { return side == Side::Sigma1 ? period() : -period(); }
  double hminus_half_seminorm() const;
};

double hminus_half_distance(const BoundaryOneForm& a, const BoundaryOneForm& b);

cplx inner_product(const CoeffVector& a, const CoeffVector& b);
CoeffVector project(const HarmonicPair& form, Component which);

// Orthonormal basis of the truncated exact forms on the complement.
// Built from the family
//   phi_{k,l}(z) = sqrt(l/pi) [w^l] (z - f_k(w))^{-1} dz,
// which spans the same flag as the Laurent family. Its Gram matrix follows from
// boundary Fourier data: for exact forms on the complement
//   <a, b> = -pi sum_curves sum_{j != 0} a_j conj(b_j) / j.
class ComplementBasis {
 public:
  ComplementBasis(const CapComplex& cx, int N);

  int truncation() const { return N_; }
  int caps() const { return n_; }
  int dimension() const { return n_ * N_; }
  BasisId basis() const { return BasisId::complement(N_, n_); }

  // Gram matrix of the phi family
  const MatrixXc& gram() const { return gram_; }
  // phi_p = sum_i e_i B(i, p); B is upper triangular
  const MatrixXc& family_matrix() const { return B_; }
  // coordinates y in the phi family of the form with orthonormal coordinates x
  VectorXc family_coordinates(const VectorXc& x) const;
  // coefficients on sqrt(n/pi) (z - p_k)^{-n-1} dz
  VectorXc laurent_coefficients(const VectorXc& x) const;
  // dz-coefficient of the form at a point of the complement
  cplx evaluate(const VectorXc& x, cplx z) const;
  // pullback samples of the phi family on curve c, M x (nN)
  const MatrixXc& pullback_samples(int curve) const { return samples_[static_cast<std::size_t>(curve)]; }
  int samples() const { return M_; }

 private:
  int N_, n_, M_;
  std::vector<cplx> centers_;
  std::vector<std::vector<cplx>> taylor_;
  std::vector<cplx> a1_;
  std::vector<MatrixXc> samples_;
  MatrixXc gram_;
  MatrixXc B_;
};

// dz-coefficients of phi_{k,1..N} at z (Taylor coefficients f_0..f_N of cap k).
void cauchy_family(const std::vector<cplx>& taylor, int N, cplx z, std::span<cplx> out);

BoundaryOneForm boundary_restriction(const HarmonicPair& form, const CapComplex& cx, int curve, int J,
                                     const ComplementBasis* complement = nullptr);

std::string to_csv(const CoeffVector& v);
std::string to_csv(const BoundaryOneForm& b);

}  // namespace schiffer
