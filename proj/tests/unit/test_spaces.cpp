#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "schiffer/spaces.hpp"

using namespace schiffer;

namespace {

VectorXc random_vec(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  VectorXc v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {nd(rng), nd(rng)};
  return v;
}

// Gauss-Legendre on [0, 1] via Newton on P_n
void legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = 0.5 * (1.0 + t);
    w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

TEST_CASE("inner product on an orthonormal basis") {
  BasisId b = BasisId::disk_interior(4);
  CoeffVector e1 = CoeffVector::unit(b, 0), e2 = CoeffVector::unit(b, 1);
  CHECK(std::abs(inner_product(e1, e1) - 1.0) < 1e-15);
  CHECK(std::abs(inner_product(e1, e2)) < 1e-15);
  CoeffVector s{b, (e1.coeffs + e2.coeffs) / std::sqrt(2.0), false};
  CHECK(std::abs(inner_product(s, e1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(inner_product(CoeffVector{b, I * e1.coeffs, false}, e1) - I) < 1e-15);
  CHECK_THROWS_AS(inner_product(e1, CoeffVector::unit(BasisId::disk_exterior(4), 0)), BasisMismatch);
  CHECK_THROWS_AS(inner_product(e1, CoeffVector::unit(b, 0, true)), BasisMismatch);
}

TEST_CASE("boundary restriction on the unit circle") {
  CapComplex cx = build_complex({CapSpec{0.0, {1.0}, false}}, 4);
  BasisId b = BasisId::disk_interior(4);
  // pullback of (1/sqrt pi) dz under theta -> e^{i theta} is (i/sqrt pi) e^{i theta} d theta
  HarmonicPair e1{CoeffVector::unit(b, 0), CoeffVector{b, VectorXc(), true}};
  BoundaryOneForm r = boundary_restriction(e1, cx, 0, 8);
  for (int j = -8; j <= 8; ++j) {
    if (j == 1) CHECK(std::abs(r.coeff(j) - I / std::sqrt(pi)) < 1e-15);
    else CHECK(std::abs(r.coeff(j)) == 0.0);
  }
  // (1/sqrt pi) z^{-2} dz pulls back to (i/sqrt pi) e^{-i theta} d theta
  BasisId ex = BasisId::disk_exterior(4);
  HarmonicPair f1{CoeffVector::unit(ex, 0), CoeffVector{ex, VectorXc(), true}};
  r = boundary_restriction(f1, cx, 0, 8);
  CHECK(r.side == Side::Sigma2);
  for (int j = -8; j <= 8; ++j) {
    if (j == -1) CHECK(std::abs(std::abs(r.coeff(j)) - 1.0 / std::sqrt(pi)) < 1e-15);
    else CHECK(std::abs(r.coeff(j)) == 0.0);
  }
  HarmonicPair zero{CoeffVector::zero(b), CoeffVector::zero(b, true)};
  r = boundary_restriction(zero, cx, 0, 8);
  for (cplx c : r.fourier) CHECK(c == cplx(0));
}

TEST_CASE("conjugated disk forms land on negative modes") {
  CapComplex cx = build_complex({CapSpec{0.0, {1.0}, false}}, 4);
  BasisId b = BasisId::disk_interior(4);
  // conj(sqrt(2/pi) z dz) = sqrt(2/pi) e^{-i theta} (-i e^{-i theta}) d theta
  HarmonicPair a{CoeffVector{b, VectorXc(), false}, CoeffVector::unit(b, 1, true)};
  BoundaryOneForm r = boundary_restriction(a, cx, 0, 6);
  CHECK(std::abs(r.coeff(-2) + I * std::sqrt(2.0 / pi)) < 1e-15);
}

TEST_CASE("projection") {
  BasisId b = BasisId::disk_interior(3);
  std::mt19937_64 rng(31);
  HarmonicPair p{CoeffVector{b, random_vec(rng, 3), false}, CoeffVector{b, random_vec(rng, 3), true}};
  CHECK(project(p, Component::Holo).coeffs == p.holo.coeffs);
  CHECK(project(p, Component::Antiholo).coeffs == p.antiholo.coeffs);
  HarmonicPair anti{CoeffVector::zero(b), p.antiholo};
  CHECK(project(anti, Component::Holo).norm() == 0.0);
  HarmonicPair re{project(p, Component::Holo), project(p, Component::Antiholo)};
  CHECK(re.holo.coeffs == p.holo.coeffs);
  CHECK(re.antiholo.coeffs == p.antiholo.coeffs);
}

TEST_CASE("restriction is linear") {
  CapComplex cx = build_complex({CapSpec{0.0, {1.0, 0.3}, false}, CapSpec{3.0, {0.5, 0.05}, false}}, 6);
  ComplementBasis cb(cx, 6);
  std::mt19937_64 rng(32);
  BasisId caps = BasisId::cap_pullback(6, 2);
  for (int trial = 0; trial < 5; ++trial) {
    HarmonicPair x{CoeffVector{caps, random_vec(rng, 12), false}, CoeffVector{caps, random_vec(rng, 12), true}};
    HarmonicPair y{CoeffVector{caps, random_vec(rng, 12), false}, CoeffVector{caps, random_vec(rng, 12), true}};
    cplx a(0.7, -1.3);
    HarmonicPair s{CoeffVector{caps, a * x.holo.coeffs + y.holo.coeffs, false},
                   CoeffVector{caps, a * x.antiholo.coeffs + y.antiholo.coeffs, true}};
    for (int c = 0; c < 2; ++c) {
      BoundaryOneForm rx = boundary_restriction(x, cx, c, 24), ry = boundary_restriction(y, cx, c, 24),
                      rs = boundary_restriction(s, cx, c, 24);
      for (int j = -24; j <= 24; ++j) CHECK(std::abs(rs.coeff(j) - (a * rx.coeff(j) + ry.coeff(j))) < 1e-12);
    }
    HarmonicPair u{CoeffVector{cb.basis(), random_vec(rng, 12), false}, CoeffVector{cb.basis(), VectorXc(), true}};
    HarmonicPair v{CoeffVector{cb.basis(), random_vec(rng, 12), false}, CoeffVector{cb.basis(), VectorXc(), true}};
    HarmonicPair w{CoeffVector{cb.basis(), a * u.holo.coeffs + v.holo.coeffs, false}, u.antiholo};
    for (int c = 0; c < 2; ++c) {
      BoundaryOneForm ru = boundary_restriction(u, cx, c, 24, &cb), rv = boundary_restriction(v, cx, c, 24, &cb),
                      rw = boundary_restriction(w, cx, c, 24, &cb);
      double scale = 0.0;
      for (cplx q : rw.fourier) scale = std::max(scale, std::abs(q));
      for (int j = -24; j <= 24; ++j) CHECK(std::abs(rw.coeff(j) - (a * ru.coeff(j) + rv.coeff(j))) < 1e-12 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("exact forms on the complement have periods summing to zero") {
  CapComplex cx = build_complex({CapSpec{0.0, {1.0, 0.3}, false}, CapSpec{3.0, {0.5, 0.05}, false},
                                 CapSpec{cplx(1.0, 3.0), {0.6}, false}},
                                8);
  ComplementBasis cb(cx, 8);
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    HarmonicPair u{CoeffVector{cb.basis(), random_vec(rng, 24), false}, CoeffVector{cb.basis(), VectorXc(), true}};
    cplx total{};
    for (int c = 0; c < 3; ++c) total += boundary_restriction(u, cx, c, 32, &cb).period();
    CHECK(std::abs(total) < 1e-10);
  }
}

TEST_CASE("complement basis is orthonormal for the unit disk") {
  // exterior of the unit circle: the basis is DiskExterior up to unimodular factors
  CapComplex cx = build_complex({CapSpec{0.0, {1.0}, false}}, 6);
  ComplementBasis cb(cx, 6);
  MatrixXc B = cb.family_matrix();
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 6; ++k) CHECK(std::abs(std::abs(B(i, k)) - (i == k ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("complement basis evaluates through its Laurent coefficients") {
  CapComplex cx = build_complex({CapSpec{0.0, {1.0, 0.3}, false}, CapSpec{3.0, {0.5, 0.05}, false}}, 6);
  ComplementBasis cb(cx, 6);
  std::mt19937_64 rng(34);
  VectorXc x = random_vec(rng, 12);
  VectorXc L = cb.laurent_coefficients(x);
  std::vector<cplx> centers = {cx.caps[0].center(), cx.caps[1].center()};
  for (cplx z : {cplx(1.5, 1.2), cplx(-2.0, 0.3), cplx(5.0, -1.0)}) {
    cplx v{};
    for (int k = 0; k < 2; ++k)
      for (int n = 1; n <= 6; ++n) v += L(k * 6 + n - 1) * std::sqrt(n / pi) * std::pow(z - centers[static_cast<std::size_t>(k)], -n - 1);
    CHECK(std::abs(v - cb.evaluate(x, z)) < 1e-10 * std::max(1.0, std::abs(v)));
  }
}

TEST_CASE("complement basis is orthonormal under area quadrature") {
  // Complement of the cap z + 0.3 z^2: map the exterior of the cap through 1/z,
  // the image is a bounded star-shaped region integrated in polar coordinates.
  double t = 0.3;
  CapComplex cx = build_complex({CapSpec{0.0, {1.0, t}, false}}, 5);
  ComplementBasis cb(cx, 5);
  std::vector<double> x, w;
  legendre(48, x, w);
  int A = 256;
  MatrixXc G = MatrixXc::Zero(5, 5);
  for (int a = 0; a < A; ++a) {
    double phi = 2.0 * pi * a / A;
    // boundary radius of the inverted region along angle phi: solve arg(1/f(e^{i th})) = phi
    double lo = phi - 1.0, hi = phi + 1.0;
    auto arg_err = [&](double th) {
      cplx u = 1.0 / cx.caps[0](std::polar(1.0, -th));
      return std::remainder(std::arg(u) - phi, 2.0 * pi);
    };
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (arg_err(mid) > 0 ? hi : lo) = mid;
    }
    double R = std::abs(1.0 / cx.caps[0](std::polar(1.0, -0.5 * (lo + hi))));
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = R * x[i];
      cplx u = std::polar(r, phi);
      double wt = w[i] * R * r * (2.0 * pi / A);
      // form h(z) dz with z = 1/u: |h|^2 dA_z = |h(1/u)|^2 / |u|^4 dA_u
      std::vector<cplx> h(5);
      for (int k = 0; k < 5; ++k) {
        VectorXc e = VectorXc::Zero(5);
        e(k) = 1.0;
        h[static_cast<std::size_t>(k)] = cb.evaluate(e, 1.0 / u) / (u * u);
      }
      for (int p = 0; p < 5; ++p)
        for (int q = 0; q < 5; ++q) G(p, q) += wt * h[static_cast<std::size_t>(q)] * std::conj(h[static_cast<std::size_t>(p)]);
    }
  }
  CHECK((G - MatrixXc::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("cap pullback is an isometry under area quadrature over the cap") {
  double t = 0.3;
  CapComplex cx = build_complex({CapSpec{0.0, {1.0, t}, false}}, 8);
  std::vector<double> x, w;
  legendre(48, x, w);
  std::mt19937_64 rng(35);
  VectorXc v = random_vec(rng, 8);
  auto finv = [&](cplx z) { return (-1.0 + std::sqrt(1.0 + 4.0 * t * z)) / (2.0 * t); };
  int A = 256;
  double norm2 = 0.0;
  for (int a = 0; a < A; ++a) {
    double phi = 2.0 * pi * a / A;
    double lo = phi - 1.0, hi = phi + 1.0;
    auto arg_err = [&](double th) { return std::remainder(std::arg(cx.caps[0](std::polar(1.0, th))) - phi, 2.0 * pi); };
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (arg_err(mid) > 0 ? hi : lo) = mid;
    }
    double R = std::abs(cx.caps[0](std::polar(1.0, 0.5 * (lo + hi))));
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = R * x[i];
      cplx z = std::polar(r, phi);
      cplx g = finv(z), dg = 1.0 / std::sqrt(1.0 + 4.0 * t * z);
      cplx h{};
      for (int n = 1; n <= 8; ++n) h += v(n - 1) * std::sqrt(n / pi) * std::pow(g, n - 1) * dg;
      norm2 += w[i] * R * r * (2.0 * pi / A) * std::norm(h);
    }
  }
  CHECK(std::abs(norm2 - v.squaredNorm()) < 1e-8 * v.squaredNorm());
}

TEST_CASE("disk exterior basis is orthonormal") {
  QuadratureRule q = gauss_area_rule(16, 40);
  int N = 6;
  MatrixXc G = MatrixXc::Zero(N, N);
  for (const auto& nd : q.area_nodes) {
    cplx u = nd.point;
    if (std::abs(u) == 0.0) continue;
    // z = 1/u, dA_z = dA_u / |u|^4
    for (int m = 1; m <= N; ++m)
      for (int n = 1; n <= N; ++n) {
        cplx z = 1.0 / u;
        cplx a = std::sqrt(m / pi) * std::pow(z, -m - 1), b = std::sqrt(n / pi) * std::pow(z, -n - 1);
        G(m - 1, n - 1) += nd.weight * b * std::conj(a) / std::pow(std::abs(u), 4);
      }
  }
  CHECK((G - MatrixXc::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("csv export") {
  CoeffVector v = CoeffVector::unit(BasisId::disk_interior(2), 1);
  CHECK(to_csv(v) == "index,re,im\n0,0,0\n1,1,0\n");
}
