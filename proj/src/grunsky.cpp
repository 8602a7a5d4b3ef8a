#include "schiffer/grunsky.hpp"

#include <cmath>
#include <random>

namespace schiffer {

namespace {

using Vec = std::vector<cplx>;

// a * b truncated to length L
void mul_acc(const Vec& a, const Vec& b, cplx scale, Vec& out) {
  std::size_t L = out.size();
  for (std::size_t i = 0; i < L; ++i) {
    if (a[i] == cplx{}) continue;
    cplx ai = scale * a[i];
    for (std::size_t j = 0; i + j < L; ++j) out[i + j] += ai * b[j];
  }
}

Vec mul_trunc(const Vec& a, const Vec& b) {
  Vec out(a.size());
  mul_acc(a, b, 1.0, out);
  return out;
}

Vec to_vec(const TruncatedSeries& s, int L) {
  Vec v(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) v[static_cast<std::size_t>(k)] = s[k];
  return v;
}

const CapMap& with_order(const CapMap& cap, int need, CapMap& storage) {
  if (cap.series_order() >= need) return cap;
  storage = cap.with_series_order(need);
  return storage;
}

}  // namespace

BivariateSeries grunsky_generating(const CapMap& cap_z_in, const CapMap& cap_w_in, bool same, int rows, int cols) {
  if (rows < 1 || cols < 1) throw PreconditionError("grunsky_generating: degrees must be positive");
  int need = rows + cols + 2;
  CapMap sz = cap_z_in, sw = cap_w_in;
  const CapMap& cz = with_order(cap_z_in, need, sz);
  const CapMap& cw = with_order(cap_w_in, need, sw);
  int L = cols + 1;  // w-series length

  // P(z, w) = log Q(z, w) = sum_i P_i(w) z^i, with i Q_i = sum_{j=1}^{i} j P_j Q_{i-j}
  std::vector<Vec> Q;  // Q_i(w); off-diagonal Q_i (i >= 1) are constants
  Vec q0(static_cast<std::size_t>(L));
  if (same) {
    const TruncatedSeries& f = cz.series();
    for (int i = 0; i <= rows; ++i) {
      Vec qi(static_cast<std::size_t>(L));
      for (int j = 0; j < L; ++j) qi[static_cast<std::size_t>(j)] = f[i + j + 1];
      Q.push_back(std::move(qi));
    }
  } else {
    const TruncatedSeries& fz = cz.series();
    const TruncatedSeries& fw = cw.series();
    Vec qi(static_cast<std::size_t>(L));
    for (int j = 0; j < L; ++j) qi[static_cast<std::size_t>(j)] = -fw[j];
    qi[0] += fz[0];
    Q.push_back(std::move(qi));
    for (int i = 1; i <= rows; ++i) {
      Vec c(static_cast<std::size_t>(L));
      c[0] = fz[i];
      Q.push_back(std::move(c));
    }
  }
  if (Q[0][0] == cplx{}) throw OverlapViolation("grunsky_generating: caps share their center");
  TruncatedSeries Q0(0, Q[0], L);
  Vec inv0 = to_vec(reciprocal(Q0), L);
  std::vector<Vec> P;
  P.push_back(to_vec(log_series(Q0), L));
  for (int i = 1; i <= rows; ++i) {
    Vec acc = Q[static_cast<std::size_t>(i)];
    for (int j = 1; j < i; ++j) {
      if (!same) {
        cplx c = Q[static_cast<std::size_t>(i - j)][0];
        if (c == cplx{}) continue;
        cplx s = -double(j) / i * c;
        for (int t = 0; t < L; ++t) acc[static_cast<std::size_t>(t)] += s * P[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
      } else {
        mul_acc(P[static_cast<std::size_t>(j)], Q[static_cast<std::size_t>(i - j)], -double(j) / i, acc);
      }
    }
    P.push_back(mul_trunc(acc, inv0));
  }

  BivariateSeries out;
  out.coeffs.resize(rows, cols);
  for (int m = 1; m <= rows; ++m)
    for (int n = 1; n <= cols; ++n) out.coeffs(m - 1, n - 1) = P[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)];
  out.constant = P[0][0];
  Vec pw(P[0]);
  pw[0] = 0.0;
  out.pure_w = TruncatedSeries(0, pw, L);
  Vec pz(static_cast<std::size_t>(rows + 1));
  for (int m = 1; m <= rows; ++m) pz[static_cast<std::size_t>(m)] = P[static_cast<std::size_t>(m)][0];
  out.pure_z = TruncatedSeries(0, pz, rows + 1);
  return out;
}

BivariateSeries grunsky_generating(const CapMap& cap_z, const CapMap& cap_w, bool same, int N) {
  return grunsky_generating(cap_z, cap_w, same, N, N);
}

MatrixXc GrunskyMatrix::assembled() const {
  MatrixXc A(caps * rows, caps * N);
  for (int j = 0; j < caps; ++j)
    for (int k = 0; k < caps; ++k) A.block(j * rows, k * N, rows, N) = block(j, k);
  return A;
}

GrunskyMatrix grunsky_matrix(const CapComplex& cx, int rows) {
  GrunskyMatrix g;
  g.caps = cx.n();
  g.N = cx.truncation;
  g.rows = rows > 0 ? rows : cx.truncation;
  for (int j = 0; j < g.caps; ++j) {
    for (int k = 0; k < g.caps; ++k) {
      BivariateSeries b = grunsky_generating(cx.caps[static_cast<std::size_t>(j)], cx.caps[static_cast<std::size_t>(k)],
                                             j == k, g.rows, g.N);
      MatrixXc blk(g.rows, g.N);
      for (int m = 1; m <= g.rows; ++m)
        for (int l = 1; l <= g.N; ++l) blk(m - 1, l - 1) = -std::sqrt(double(m) * l) * b.mixed(m, l);
      g.blocks.push_back(std::move(blk));
    }
  }
  return g;
}

SpectralNormResult spectral_norm_report(const MatrixXc& m, double tol, int max_iterations) {
  SpectralNormResult r;
  if (m.size() == 0) return r;
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> nd;
  VectorXc v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(nd(rng), nd(rng));
  v.normalize();
  double sigma = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    VectorXc u = m * v;
    VectorXc w = m.adjoint() * u;
    double un = u.norm();
    double wn = w.norm();
    r.iterations = it;
    if (wn == 0.0) {
      r.value = 0.0;
      r.residual = 0.0;
      return r;
    }
    double next = std::sqrt(wn);
    VectorXc vn = w / wn;
    r.residual = (w - un * un * v).norm();
    v = vn;
    if (std::abs(next - sigma) <= tol * next) {
      r.value = next;
      return r;
    }
    sigma = next;
  }
  throw ConvergenceError("spectral_norm: power iteration did not converge", r.residual);
}

double spectral_norm(const MatrixXc& m) { return spectral_norm_report(m).value; }

double spectral_norm(const GrunskyMatrix& g) { return spectral_norm(g.assembled()); }

}  // namespace schiffer
