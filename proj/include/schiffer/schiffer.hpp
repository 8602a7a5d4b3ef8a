#pragma once

#include <optional>
#include <vector>

#include "schiffer/capmap.hpp"
#include "schiffer/common.hpp"
#include "schiffer/spaces.hpp"

namespace schiffer {

enum class Piece { Sigma1, Sigma2 };
enum class Route { Contour, Area };

// entries(i, j) = < T(domain_j), codomain_i >
struct OperatorMatrix {
  BasisId domain;
  bool domain_conjugated = false;
  BasisId codomain;
  bool codomain_conjugated = false;
  MatrixXc entries;

  CoeffVector apply(const CoeffVector& v) const;
};

// Taylor coefficients K_{ab}, a < rows, b < cols, of the kernel on caps (j, k)
//   f_j'(z) f_k'(w) / (f_j(z) - f_k(w))^2  [ - 1/(z - w)^2 when j == k ]
// sampled on the torus and extracted by a 2D FFT. The grid doubles until the
// wrapped (negative-frequency) part is at rounding level.
struct KernelCoefficients {
  MatrixXc coeffs;
  int grid = 0;
};
KernelCoefficients t11_kernel_coefficients(const CapComplex& cx, int j, int k, int rows, int cols);

// Matrix of T11 : conj A(caps) -> A(caps) in CapPullback bases, rows per cap
// block may exceed the truncation (rows = 0 means N).
OperatorMatrix t11_matrix(const CapComplex& cx, int rows = 0, int* grid = nullptr);
OperatorMatrix t11_matrix_area(const CapComplex& cx, const QuadratureRule& quad);
// Matrix of T12 : conj A(caps) -> A(complement) in the ComplementLaurent basis.
OperatorMatrix t12_matrix(const ComplementBasis& basis);
OperatorMatrix t12_matrix_area(const CapComplex& cx, const ComplementBasis& basis, const QuadratureRule& quad);

OperatorMatrix t_matrix(const CapComplex& cx, Piece to, const QuadratureRule& quad, Route route = Route::Contour);

// Keeps the first `rows` rows of every cap block of the codomain.
OperatorMatrix leading_rows(const OperatorMatrix& t, int rows);

// Value of T12 conj(e_l) on cap k at z by area quadrature (independent check).
cplx t12_area_value(const CapMap& cap, int l, cplx z, const QuadratureRule& quad);

struct ThetaResult {
  OperatorMatrix theta;
  double sigma_min = 0.0;
};
ThetaResult theta_matrix(const CapComplex& cx, const QuadratureRule& quad);
ThetaResult theta_matrix(const OperatorMatrix& t12);

struct AdjointReport {
  double max_defect = 0.0;
  std::vector<double> column_defects;
};
AdjointReport adjoint_check(const OperatorMatrix& t11, const OperatorMatrix& t12);
AdjointReport adjoint_check(const CapComplex& cx);

// Everything assembled once for a complex at its truncation.
struct SchifferOperators {
  CapComplex complex;
  int N = 0;
  int J = 0;
  ComplementBasis complement;
  OperatorMatrix t11;      // N rows per cap
  OperatorMatrix t11_ext;  // J rows per cap
  OperatorMatrix t12;
  int kernel_grid = 0;
};

SchifferOperators assemble_operators(const CapComplex& cx, int J = 0);

double min_singular_value(const MatrixXc& m);

}  // namespace schiffer
