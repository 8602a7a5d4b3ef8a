#include "schiffer/schiffer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "schiffer/fourier.hpp"

namespace schiffer {

CoeffVector OperatorMatrix::apply(const CoeffVector& v) const {
  if (!(v.basis == domain) || v.conjugated != domain_conjugated)
    throw BasisMismatch("operator domain is " + domain.describe() + ", got " + v.basis.describe());
  return {codomain, entries * v.coeffs, codomain_conjugated};
}

namespace {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

constexpr int max_kernel_grid = 2048;

void check_rule(const QuadratureRule& quad, int N) {
  if (quad.radial_order < 2 * N)
    throw QuadratureError("area quadrature order " + std::to_string(quad.radial_order) + " is below 2N");
  double s = 0.0;
  for (const auto& nd : quad.area_nodes) s += nd.weight / pi;
  if (std::abs(s - 1.0) > 1e-10) throw QuadratureError("area quadrature fails to reproduce <e1, e1> = 1");
}

}  // namespace

KernelCoefficients t11_kernel_coefficients(const CapComplex& cx, int j, int k, int rows, int cols) {
  const CapMap& cz = cx.caps[static_cast<std::size_t>(j)];
  const CapMap& cw = cx.caps[static_cast<std::size_t>(k)];
  bool same = j == k;
  int P = std::max(128, next_pow2(4 * (rows + cols)));
  double delta = same ? 0.5 : 0.0;
  for (;;) {
    std::vector<cplx> z(static_cast<std::size_t>(P)), fz(z.size()), dz(z.size());
    std::vector<cplx> w(z.size()), fw(z.size()), dw(z.size());
    for (int s = 0; s < P; ++s) {
      z[static_cast<std::size_t>(s)] = std::polar(1.0, 2.0 * pi * s / P);
      fz[static_cast<std::size_t>(s)] = cz(z[static_cast<std::size_t>(s)]);
      dz[static_cast<std::size_t>(s)] = cz.derivative(z[static_cast<std::size_t>(s)]);
      w[static_cast<std::size_t>(s)] = std::polar(1.0, 2.0 * pi * (s + delta) / P);
      fw[static_cast<std::size_t>(s)] = cw(w[static_cast<std::size_t>(s)]);
      dw[static_cast<std::size_t>(s)] = cw.derivative(w[static_cast<std::size_t>(s)]);
    }
    MatrixXc K(P, P);
    double scale = 0.0, terms = 0.0;
    for (int t = 0; t < P; ++t) {
      for (int s = 0; s < P; ++s) {
        cplx d = fz[static_cast<std::size_t>(s)] - fw[static_cast<std::size_t>(t)];
        cplx v = dz[static_cast<std::size_t>(s)] * dw[static_cast<std::size_t>(t)] / (d * d);
        terms += std::abs(v);
        if (same) {
          cplx e = z[static_cast<std::size_t>(s)] - w[static_cast<std::size_t>(t)];
          v -= 1.0 / (e * e);
          terms += 1.0 / std::norm(e);
        }
        K(s, t) = v;
        scale = std::max(scale, std::abs(v));
      }
    }
    MatrixXc X = dft2(K) / double(P * P);
    double wrapped = 0.0;
    for (int t = 0; t < P; ++t)
      for (int s = 0; s < P; ++s)
        if (2 * s >= P || 2 * t >= P) wrapped = std::max(wrapped, std::abs(X(s, t)));
    // cancellation in the regularised diagonal kernel leaves noise ~ eps * mean |term|
    double noise = 100.0 * std::numeric_limits<double>::epsilon() * terms / (double(P) * P);
    bool resolved = wrapped <= 1e-12 * std::max(1.0, scale) + noise;
    if (resolved || P >= max_kernel_grid) {
      if (!resolved)
        throw AliasingError("T11 kernel not resolved on a " + std::to_string(P) + " grid", wrapped);
      KernelCoefficients out;
      out.grid = P;
      out.coeffs.resize(rows, cols);
      for (int b = 0; b < cols; ++b) {
        cplx phase = std::polar(1.0, -2.0 * pi * b * delta / P);
        for (int a = 0; a < rows; ++a) out.coeffs(a, b) = X(a, b) * phase;
      }
      return out;
    }
    P *= 2;
  }
}

OperatorMatrix t11_matrix(const CapComplex& cx, int rows, int* grid) {
  int N = cx.truncation;
  int R = rows > 0 ? rows : N;
  int n = cx.n();
  OperatorMatrix t;
  t.domain = BasisId::cap_pullback(N, n);
  t.domain_conjugated = true;
  t.codomain = BasisId::cap_pullback(R, n);
  t.codomain_conjugated = false;
  t.entries = MatrixXc::Zero(n * R, n * N);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      KernelCoefficients kc = t11_kernel_coefficients(cx, j, k, R, N);
      if (grid) *grid = std::max(*grid, kc.grid);
      for (int l = 1; l <= N; ++l)
        for (int m = 1; m <= R; ++m)
          t.entries(j * R + m - 1, k * N + l - 1) = kc.coeffs(m - 1, l - 1) / std::sqrt(double(m) * l);
    }
  }
  return t;
}

OperatorMatrix t11_matrix_area(const CapComplex& cx, const QuadratureRule& quad) {
  int N = cx.truncation;
  int n = cx.n();
  check_rule(quad, N);
  OperatorMatrix t;
  t.domain = BasisId::cap_pullback(N, n);
  t.domain_conjugated = true;
  t.codomain = BasisId::cap_pullback(N, n);
  t.entries = MatrixXc::Zero(n * N, n * N);
  int Pe = std::max(64, next_pow2(4 * N));
  std::size_t nodes = quad.area_nodes.size();
  for (int k = 0; k < n; ++k) {
    const CapMap& cw = cx.caps[static_cast<std::size_t>(k)];
    std::vector<cplx> fw(nodes), dw(nodes);
    MatrixXc Wt(static_cast<Eigen::Index>(nodes), N);
    for (std::size_t i = 0; i < nodes; ++i) {
      cplx w = quad.area_nodes[i].point;
      fw[i] = cw(w);
      dw[i] = cw.derivative(w);
      cplx p = 1.0;
      for (int l = 1; l <= N; ++l) {
        Wt(static_cast<Eigen::Index>(i), l - 1) = quad.area_nodes[i].weight * std::sqrt(l / pi) * std::conj(p) / pi;
        p *= w;
      }
    }
    for (int j = 0; j < n; ++j) {
      const CapMap& cz = cx.caps[static_cast<std::size_t>(j)];
      double rho = j == k ? 0.9 : 1.0;
      MatrixXc K(Pe, static_cast<Eigen::Index>(nodes));
      for (int s = 0; s < Pe; ++s) {
        cplx z = std::polar(rho, 2.0 * pi * s / Pe);
        cplx f = cz(z), d = cz.derivative(z);
        for (std::size_t i = 0; i < nodes; ++i) {
          cplx e = f - fw[i];
          cplx v = d * dw[i] / (e * e);
          if (j == k) {
            cplx u = z - quad.area_nodes[i].point;
            v -= 1.0 / (u * u);
          }
          K(s, static_cast<Eigen::Index>(i)) = v;
        }
      }
      MatrixXc H = K * Wt;
      MatrixXc X = dft_columns(H) / double(Pe);
      for (int m = 1; m <= N; ++m) {
        double r = std::pow(rho, m - 1);
        for (int l = 1; l <= N; ++l)
          t.entries(j * N + m - 1, k * N + l - 1) = X(m - 1, l - 1) / r * std::sqrt(pi / m);
      }
    }
  }
  return t;
}

OperatorMatrix t12_matrix(const ComplementBasis& basis) {
  OperatorMatrix t;
  t.domain = BasisId::cap_pullback(basis.truncation(), basis.caps());
  t.domain_conjugated = true;
  t.codomain = basis.basis();
  t.codomain_conjugated = false;
  t.entries = basis.family_matrix().triangularView<Eigen::Upper>();
  return t;
}

cplx t12_area_value(const CapMap& cap, int l, cplx z, const QuadratureRule& quad) {
  cplx acc{};
  for (const auto& nd : quad.area_nodes) {
    cplx e = cap(nd.point) - z;
    acc += nd.weight * cap.derivative(nd.point) / (e * e) * std::pow(std::conj(nd.point), l - 1);
  }
  return acc * std::sqrt(l / pi) / pi;
}

namespace {

// Radius beyond 1 on which cap k is still univalent and clear of the others.
double continuation_radius(const CapComplex& cx, int k) {
  const CapMap& cap = cx.caps[static_cast<std::size_t>(k)];
  int M = 512;
  for (double rho : {1.2, 1.1, 1.05}) {
    std::vector<cplx> poly(static_cast<std::size_t>(M)), der(static_cast<std::size_t>(M));
    bool ok = true;
    for (int s = 0; s < M && ok; ++s) {
      cplx w = std::polar(rho, 2.0 * pi * s / M);
      poly[static_cast<std::size_t>(s)] = cap(w);
      der[static_cast<std::size_t>(s)] = cap.derivative(w);
      if (!std::isfinite(std::abs(poly[static_cast<std::size_t>(s)]))) ok = false;
    }
    if (!ok || winding_number(der, 0.0) != 0 || !polygon_is_simple(poly)) continue;
    for (int c = 0; c < cx.n() && ok; ++c) {
      if (c == k) continue;
      if (point_in_polygon(poly, cx.caps[static_cast<std::size_t>(c)].center())) ok = false;
      else if (polygon_distance(poly, cx.polygons[static_cast<std::size_t>(c)]) < 0.05) ok = false;
    }
    if (ok) return rho;
  }
  throw QuadratureError("area route: cap " + std::to_string(k) + " has no usable analytic continuation");
}

}  // namespace

OperatorMatrix t12_matrix_area(const CapComplex& cx, const ComplementBasis& basis, const QuadratureRule& quad) {
  int N = basis.truncation();
  int n = cx.n();
  check_rule(quad, N);
  int D = n * N;
  int Pe = 256;
  int half = Pe / 2;
  int M = basis.samples();
  MatrixXc Binv = basis.family_matrix().triangularView<Eigen::Upper>().solve(MatrixXc::Identity(D, D));
  OperatorMatrix t;
  t.domain = BasisId::cap_pullback(N, n);
  t.domain_conjugated = true;
  t.codomain = basis.basis();
  t.entries = MatrixXc::Zero(D, D);
  for (int c = 0; c < n; ++c) {
    // Fourier data of the orthonormal basis on curve c, modes |j| < half
    MatrixXc Fb = dft_columns(basis.pullback_samples(c)) / double(M);
    MatrixXc E(2 * half - 1, D);
    Eigen::VectorXd wgt = Eigen::VectorXd::Zero(2 * half - 1);
    for (int j = -(half - 1); j <= half - 1; ++j) {
      E.row(j + half - 1) = Fb.row(static_cast<Eigen::Index>(mode_index(j, M)));
      if (j != 0) wgt(j + half - 1) = 1.0 / j;
    }
    E = (E * Binv).eval();
    for (int k = 0; k < n; ++k) {
      const CapMap& cap_c = cx.caps[static_cast<std::size_t>(c)];
      const CapMap& cap_k = cx.caps[static_cast<std::size_t>(k)];
      double rho = c == k ? continuation_radius(cx, k) : 1.0;
      MatrixXc G(Pe, N);
      for (int s = 0; s < Pe; ++s) {
        cplx w = std::polar(rho, 2.0 * pi * s / Pe);
        cplx z = cap_c(w);
        cplx dz = I * w * cap_c.derivative(w);
        for (int l = 1; l <= N; ++l) G(s, l - 1) = t12_area_value(cap_k, l, z, quad) * dz;
      }
      MatrixXc X = dft_columns(G) / double(Pe);
      MatrixXc Gm(2 * half - 1, N);
      for (int j = -(half - 1); j <= half - 1; ++j)
        Gm.row(j + half - 1) = X.row(static_cast<Eigen::Index>(mode_index(j, Pe))) / std::pow(rho, j);
      t.entries.middleCols(k * N, N) += -pi * (E.adjoint() * wgt.asDiagonal() * Gm);
    }
  }
  return t;
}

OperatorMatrix t_matrix(const CapComplex& cx, Piece to, const QuadratureRule& quad, Route route) {
  if (to == Piece::Sigma1) return route == Route::Contour ? t11_matrix(cx) : t11_matrix_area(cx, quad);
  ComplementBasis basis(cx, cx.truncation);
  return route == Route::Contour ? t12_matrix(basis) : t12_matrix_area(cx, basis, quad);
}

OperatorMatrix leading_rows(const OperatorMatrix& t, int rows) {
  int R = t.codomain.truncation;
  int n = t.codomain.caps;
  if (t.codomain.kind != BasisKind::CapPullback || rows > R) throw PreconditionError("leading_rows: bad codomain");
  OperatorMatrix out = t;
  out.codomain.truncation = rows;
  out.entries.resize(n * rows, t.entries.cols());
  for (int j = 0; j < n; ++j) out.entries.middleRows(j * rows, rows) = t.entries.middleRows(j * R, rows);
  return out;
}

double min_singular_value(const MatrixXc& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXc> svd(m);
  return svd.singularValues().minCoeff();
}

ThetaResult theta_matrix(const OperatorMatrix& t12) {
  ThetaResult r;
  r.theta = t12;
  r.theta.entries = -t12.entries;
  r.sigma_min = min_singular_value(r.theta.entries);
  return r;
}

ThetaResult theta_matrix(const CapComplex& cx, const QuadratureRule& quad) {
  return theta_matrix(t_matrix(cx, Piece::Sigma2, quad));
}

AdjointReport adjoint_check(const OperatorMatrix& t11, const OperatorMatrix& t12) {
  if (t11.entries.cols() != t12.entries.cols()) throw BasisMismatch("adjoint_check: domain sizes differ");
  AdjointReport r;
  for (Eigen::Index p = 0; p < t11.entries.cols(); ++p) {
    double d = std::abs(t11.entries.col(p).squaredNorm() + t12.entries.col(p).squaredNorm() - 1.0);
    r.column_defects.push_back(d);
    r.max_defect = std::max(r.max_defect, d);
  }
  return r;
}

AdjointReport adjoint_check(const CapComplex& cx) {
  ComplementBasis basis(cx, cx.truncation);
  return adjoint_check(t11_matrix(cx), t12_matrix(basis));
}

SchifferOperators assemble_operators(const CapComplex& cx, int J) {
  int N = cx.truncation;
  int Jr = J > 0 ? J : 4 * N;
  if (Jr < N) throw PreconditionError("boundary cutoff J must be at least N");
  SchifferOperators ops{cx, N, Jr, ComplementBasis(cx, N), {}, {}, {}, 0};
  ops.t11_ext = t11_matrix(cx, Jr, &ops.kernel_grid);
  ops.t11 = leading_rows(ops.t11_ext, N);
  ops.t12 = t12_matrix(ops.complement);
  return ops;
}

}  // namespace schiffer
