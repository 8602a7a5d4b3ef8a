#include <algorithm>
#include <cmath>
#include <limits>

#include "schiffer/scattering.hpp"

namespace schiffer {

namespace {

// Real harmonic basis on the complement:
//   1, log|z - p_j| - log|z - p_last| (j < last), Re/Im ((z - p_j)/rho_j)^{-m}
struct HarmonicBasis {
  std::vector<cplx> p;
  std::vector<double> rho;
  int K = 0;

  int n() const { return static_cast<int>(p.size()); }
  int size() const { return 1 + (n() - 1) + 2 * n() * K; }

  void row(cplx z, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> out) const {
    int c = 0;
    out(c++) = 1.0;
    double last = std::log(std::abs(z - p.back()));
    for (int j = 0; j + 1 < n(); ++j) out(c++) = std::log(std::abs(z - p[static_cast<std::size_t>(j)])) - last;
    for (int j = 0; j < n(); ++j) {
      cplx w = rho[static_cast<std::size_t>(j)] / (z - p[static_cast<std::size_t>(j)]);
      cplx pw = 1.0;
      for (int m = 1; m <= K; ++m) {
        pw *= w;
        out(c++) = pw.real();
        out(c++) = pw.imag();
      }
    }
  }
};

}  // namespace

double HarmonicMeasures::evaluate(int k, cplx z) const {
  const HarmonicMeasure& h = measures[static_cast<std::size_t>(k)];
  double v = h.constant;
  for (std::size_t j = 0; j < centers.size(); ++j) {
    v += h.log_coeffs[j] * std::log(std::abs(z - centers[j]));
    cplx w = radii[j] / (z - centers[j]);
    cplx pw = 1.0;
    for (const cplx& a : h.laurent_coeffs[j]) {
      pw *= w;
      v += (a * pw).real();
    }
  }
  return v;
}

Eigen::MatrixXd HarmonicMeasures::reduced() const {
  Eigen::Index n = period_matrix.rows();
  return period_matrix.topLeftCorner(n - 1, n - 1);
}

HarmonicMeasures harmonic_measures(const CapComplex& cx, const HarmonicMeasureOptions& opts) {
  int n = cx.n();
  if (n < 2) throw PreconditionError("harmonic measures need at least two caps");
  HarmonicBasis hb;
  for (int j = 0; j < n; ++j) {
    const CapMap& cap = cx.caps[static_cast<std::size_t>(j)];
    hb.p.push_back(cap.center());
    double r = std::numeric_limits<double>::infinity();
    for (cplx z : cx.polygons[static_cast<std::size_t>(j)]) r = std::min(r, std::abs(z - cap.center()));
    hb.rho.push_back(r);
  }

  std::vector<int> ladder;
  if (opts.terms > 0) ladder = {opts.terms};
  else ladder = {8, 12, 16, 24, 32};

  HarmonicMeasures best;
  double best_res = std::numeric_limits<double>::infinity();
  bool have = false;
  for (int K : ladder) {
    hb.K = K;
    int U = hb.size();
    int per_curve = static_cast<int>(std::ceil(opts.oversampling * U / n));
    int P = per_curve * n;
    Eigen::MatrixXd A(P, U);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(P, n);
    for (int j = 0; j < n; ++j) {
      const CapMap& cap = cx.caps[static_cast<std::size_t>(j)];
      for (int s = 0; s < per_curve; ++s) {
        cplx z = cap(std::polar(1.0, 2.0 * pi * s / per_curve));
        hb.row(z, A.row(j * per_curve + s));
        rhs(j * per_curve + s, j) = 1.0;
      }
    }
    Eigen::VectorXd scale = A.colwise().norm().transpose();
    for (Eigen::Index c = 0; c < U; ++c)
      if (scale(c) == 0.0) scale(c) = 1.0;
    Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if (cond > opts.max_condition) {
      if (have) break;
      throw IllConditioned("harmonic measure collocation is ill-conditioned", cond);
    }
    Eigen::VectorXd inv(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > opts.svd_cutoff * sv(0) ? 1.0 / sv(i) : 0.0;
    Eigen::MatrixXd X = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * rhs;
    X = (scale.cwiseInverse().asDiagonal() * X).eval();
    double res = (A * X - rhs).cwiseAbs().maxCoeff();

    HarmonicMeasures out;
    out.condition = cond;
    out.centers = hb.p;
    out.radii = hb.rho;
    for (int k = 0; k < n; ++k) {
      HarmonicMeasure h;
      int c = 0;
      h.constant = X(c++, k);
      h.log_coeffs.assign(static_cast<std::size_t>(n), 0.0);
      for (int j = 0; j + 1 < n; ++j) {
        double v = X(c++, k);
        h.log_coeffs[static_cast<std::size_t>(j)] = v;
        h.log_coeffs.back() -= v;
      }
      for (int j = 0; j < n; ++j) {
        std::vector<cplx> a;
        for (int m = 1; m <= K; ++m) {
          double re = X(c++, k), im = X(c++, k);
          a.emplace_back(re, -im);  // Re(w) re + Im(w) im = Re((re - i im) w)
        }
        h.laurent_coeffs.push_back(std::move(a));
      }
      h.boundary_residual = (A * X.col(k) - rhs.col(k)).cwiseAbs().maxCoeff();
      out.measures.push_back(std::move(h));
    }

    // Pi(j, k) = -int_0^{2pi} Im(2 d_z omega_k(z(t)) z'(t)) dt over curve j
    out.period_matrix = Eigen::MatrixXd::Zero(n, n);
    int Mq = cx.samples;
    for (int j = 0; j < n; ++j) {
      const CapMap& cap = cx.caps[static_cast<std::size_t>(j)];
      for (int s = 0; s < Mq; ++s) {
        cplx w0 = std::polar(1.0, 2.0 * pi * s / Mq);
        cplx z = cap(w0);
        cplx dz = I * w0 * cap.derivative(w0);
        for (int k = 0; k < n; ++k) {
          const HarmonicMeasure& h = out.measures[static_cast<std::size_t>(k)];
          cplx g{};
          for (int i = 0; i < n; ++i) {
            cplx u = z - hb.p[static_cast<std::size_t>(i)];
            g += h.log_coeffs[static_cast<std::size_t>(i)] / u;
            cplx w = hb.rho[static_cast<std::size_t>(i)] / u;
            cplx pw = 1.0;
            for (int m = 1; m <= K; ++m) {
              // d/dz w^m = -m w^m / u
              pw *= w;
              g += h.laurent_coeffs[static_cast<std::size_t>(i)][static_cast<std::size_t>(m - 1)] * (-double(m)) * pw / u;
            }
          }
          out.period_matrix(j, k) -= (g * dz).imag() * (2.0 * pi / Mq);
        }
      }
    }
    if (res < best_res) {
      best_res = res;
      best = std::move(out);
      have = true;
    }
    if (res <= 1e-11) break;
  }
  return best;
}

}  // namespace schiffer
