#include "schiffer/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace schiffer {

TruncatedSeries::TruncatedSeries(int lo, std::vector<cplx> coeffs, int trunc)
    : lo_(lo), trunc_(trunc), coeffs_(std::move(coeffs)) {
  if (trunc < lo) throw PreconditionError("series window has trunc < lo");
  if (static_cast<int>(coeffs_.size()) > trunc - lo)
    throw PreconditionError("more coefficients than the truncation window holds");
  coeffs_.resize(static_cast<std::size_t>(trunc - lo), cplx{});
}

TruncatedSeries TruncatedSeries::zero(int trunc) { return {0, {}, std::max(trunc, 0)}; }

TruncatedSeries TruncatedSeries::constant(cplx c, int trunc) {
  if (trunc <= 0) return zero(0);
  return {0, {c}, trunc};
}

TruncatedSeries TruncatedSeries::monomial(int exponent, cplx c, int trunc) {
  if (trunc <= exponent) return {exponent, {}, exponent};
  return {exponent, {c}, trunc};
}

TruncatedSeries TruncatedSeries::power(std::span<const cplx> c, int trunc) {
  std::vector<cplx> v(c.begin(), c.begin() + std::min<std::ptrdiff_t>(c.size(), trunc));
  return {0, std::move(v), trunc};
}

cplx TruncatedSeries::operator[](int k) const {
  if (k >= trunc_)
    throw PreconditionError("coefficient z^" + std::to_string(k) + " is beyond truncation " +
                            std::to_string(trunc_));
  if (k < lo_) return {};
  return coeffs_[static_cast<std::size_t>(k - lo_)];
}

void TruncatedSeries::set(int k, cplx value) {
  if (k < lo_ || k >= trunc_) throw PreconditionError("set outside series window");
  coeffs_[static_cast<std::size_t>(k - lo_)] = value;
}

int TruncatedSeries::valuation(double tol) const {
  for (int k = lo_; k < trunc_; ++k)
    if (std::abs(coeffs_[static_cast<std::size_t>(k - lo_)]) > tol) return k;
  return trunc_;
}

TruncatedSeries TruncatedSeries::truncated(int new_trunc) const {
  int t = std::min(new_trunc, trunc_);
  if (t <= lo_) return {lo_, {}, std::max(t, lo_)};
  return {lo_, std::vector<cplx>(coeffs_.begin(), coeffs_.begin() + (t - lo_)), t};
}

TruncatedSeries TruncatedSeries::trimmed(double tol) const {
  int v = valuation(tol);
  if (v >= trunc_) return {trunc_, {}, trunc_};
  return {v, std::vector<cplx>(coeffs_.begin() + (v - lo_), coeffs_.end()), trunc_};
}

cplx TruncatedSeries::evaluate(cplx z) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return lo_ == 0 ? acc : acc * std::pow(z, lo_);
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

TruncatedSeries& TruncatedSeries::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

namespace {

TruncatedSeries combine(const TruncatedSeries& a, const TruncatedSeries& b, double sign) {
  int lo = std::min(a.lo(), b.lo());
  int trunc = std::min(a.trunc(), b.trunc());
  if (trunc <= lo) return {lo, {}, std::max(lo, trunc)};
  std::vector<cplx> c(static_cast<std::size_t>(trunc - lo));
  for (int k = lo; k < trunc; ++k) c[static_cast<std::size_t>(k - lo)] = a[k] + sign * b[k];
  return {lo, std::move(c), trunc};
}

cplx coeff_or_zero(const TruncatedSeries& s, int k) {
  if (k < s.lo() || k >= s.trunc()) return {};
  return s.coeffs()[static_cast<std::size_t>(k - s.lo())];
}

void require_power_series(const TruncatedSeries& a, const char* op) {
  for (int k = a.lo(); k < std::min(0, a.trunc()); ++k)
    if (a[k] != cplx{}) throw PreconditionError(std::string(op) + ": negative powers present");
}

// coefficients of a power series over exponents 0 .. n-1
std::vector<cplx> dense(const TruncatedSeries& a, int n) {
  std::vector<cplx> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = a[k];
  return v;
}

}  // namespace

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  return combine(a, b, 1.0);
}
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  return combine(a, b, -1.0);
}
TruncatedSeries operator*(cplx s, TruncatedSeries a) { return a *= s; }
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return mul(a, b); }

// Each product pair is summed with its mirror first so that mul(a, b) and
// mul(b, a) agree bit for bit.
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  int lo = a.lo() + b.lo();
  int trunc = std::min(a.trunc() + b.lo(), b.trunc() + a.lo());
  if (trunc <= lo) throw PreconditionError("mul: validity windows do not overlap");
  int emin = std::min(a.lo(), b.lo());
  std::vector<cplx> c(static_cast<std::size_t>(trunc - lo));
  for (int k = lo; k < trunc; ++k) {
    cplx acc{};
    for (int e = emin; 2 * e <= k; ++e) {
      int f = k - e;
      if (e == f) {
        acc += coeff_or_zero(a, e) * coeff_or_zero(b, e);
      } else {
        acc += coeff_or_zero(a, e) * coeff_or_zero(b, f) + coeff_or_zero(a, f) * coeff_or_zero(b, e);
      }
    }
    c[static_cast<std::size_t>(k - lo)] = acc;
  }
  return {lo, std::move(c), trunc};
}

TruncatedSeries reciprocal(const TruncatedSeries& a) {
  int v = a.valuation();
  if (v >= a.trunc()) throw PreconditionError("reciprocal of a series with no known nonzero term");
  int len = a.trunc() - v;
  std::vector<cplx> c(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) c[static_cast<std::size_t>(i)] = a[v + i];
  std::vector<cplx> d(static_cast<std::size_t>(len));
  cplx inv0 = 1.0 / c[0];
  d[0] = inv0;
  for (int n = 1; n < len; ++n) {
    cplx s{};
    for (int i = 1; i <= n; ++i) s += c[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(n - i)];
    d[static_cast<std::size_t>(n)] = -s * inv0;
  }
  return {-v, std::move(d), -v + len};
}

TruncatedSeries divide(const TruncatedSeries& a, const TruncatedSeries& b) {
  return mul(a, reciprocal(b));
}

TruncatedSeries derivative(const TruncatedSeries& a) {
  int lo = a.lo() == 0 ? 0 : a.lo() - 1;
  int trunc = a.trunc() - 1;
  if (trunc <= lo) return {lo, {}, std::max(lo, trunc)};
  std::vector<cplx> c(static_cast<std::size_t>(trunc - lo));
  for (int k = lo; k < trunc; ++k) c[static_cast<std::size_t>(k - lo)] = double(k + 1) * a[k + 1];
  return {lo, std::move(c), trunc};
}

TruncatedSeries pow(const TruncatedSeries& a, int n) {
  if (n < 0) return pow(reciprocal(a), -n);
  TruncatedSeries result = TruncatedSeries::constant(1.0, a.trunc() - a.lo() + 1);
  TruncatedSeries base = a;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : mul(result, base);
      first = false;
    }
    n >>= 1;
    if (n > 0) base = mul(base, base);
  }
  return result;
}

TruncatedSeries log1p_series(const TruncatedSeries& a) {
  require_power_series(a, "log1p_series");
  int T = a.trunc();
  if (T <= 0) return TruncatedSeries::zero(0);
  if (a[0] != cplx{}) throw PreconditionError("log1p_series: nonzero constant term");
  // L' = a' / (1 + a)
  std::vector<cplx> b = dense(a, T);
  b[0] = 1.0;
  std::vector<cplx> q(static_cast<std::size_t>(std::max(T - 1, 0)));
  for (int n = 0; n < T - 1; ++n) {
    cplx s = double(n + 1) * b[static_cast<std::size_t>(n + 1)];
    for (int i = 1; i <= n; ++i) s -= b[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(n - i)];
    q[static_cast<std::size_t>(n)] = s;
  }
  std::vector<cplx> L(static_cast<std::size_t>(T));
  for (int k = 1; k < T; ++k) L[static_cast<std::size_t>(k)] = q[static_cast<std::size_t>(k - 1)] / double(k);
  return {0, std::move(L), T};
}

TruncatedSeries log_series(const TruncatedSeries& a) {
  require_power_series(a, "log_series");
  if (a.trunc() <= 0) throw PreconditionError("log_series: empty series");
  cplx c = a[0];
  if (c == cplx{}) throw PreconditionError("log_series: zero constant term");
  TruncatedSeries u = (1.0 / c) * a;
  u.set(0, 0.0);
  if (u.lo() > 0) u = u + TruncatedSeries::zero(u.trunc());
  TruncatedSeries r = log1p_series(u);
  r.set(0, std::log(c));
  return r;
}

TruncatedSeries exp_series(const TruncatedSeries& a) {
  require_power_series(a, "exp_series");
  int T = a.trunc();
  if (T <= 0) return TruncatedSeries::zero(0);
  if (a[0] != cplx{}) throw PreconditionError("exp_series: nonzero constant term");
  std::vector<cplx> av = dense(a, T);
  std::vector<cplx> E(static_cast<std::size_t>(T));
  E[0] = 1.0;
  for (int n = 1; n < T; ++n) {
    cplx s{};
    for (int k = 1; k <= n; ++k)
      s += double(k) * av[static_cast<std::size_t>(k)] * E[static_cast<std::size_t>(n - k)];
    E[static_cast<std::size_t>(n)] = s / double(n);
  }
  return {0, std::move(E), T};
}

TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
  if (outer.lo() < 0) throw PreconditionError("compose: outer must be a power series");
  require_power_series(inner, "compose");
  int To = outer.trunc();
  if (To <= 0) return TruncatedSeries::zero(0);
  int v = inner.valuation();
  if (To == 1) {
    // constant outer: unknown terms start at z^{v}
    int t = v >= inner.trunc() ? inner.trunc() : v;
    if (v == 0) throw PreconditionError("compose: inner has a nonzero constant term");
    return TruncatedSeries::constant(outer[0], t);
  }
  if (v == 0) throw PreconditionError("compose: inner has a nonzero constant term");
  long long R = inner.trunc();
  if (v < inner.trunc()) R = std::min<long long>(R, static_cast<long long>(To) * v);
  int T = static_cast<int>(R);
  std::vector<cplx> g = dense(inner, T);
  std::vector<cplx> acc(static_cast<std::size_t>(T));
  std::vector<cplx> tmp(static_cast<std::size_t>(T));
  for (int k = To - 1; k >= 0; --k) {
    std::fill(tmp.begin(), tmp.end(), cplx{});
    for (int i = 0; i < T; ++i) {
      if (acc[static_cast<std::size_t>(i)] == cplx{}) continue;
      for (int j = 1; i + j < T; ++j)
        tmp[static_cast<std::size_t>(i + j)] += acc[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)];
    }
    tmp[0] += outer[k];
    acc.swap(tmp);
  }
  return {0, std::move(acc), T};
}

TruncatedSeries reversion(const TruncatedSeries& f) {
  require_power_series(f, "reversion");
  int T = f.trunc();
  if (T < 2) throw PreconditionError("reversion: series too short");
  if (f[0] != cplx{}) throw PreconditionError("reversion: f(0) != 0");
  if (f[1] == cplx{}) throw PreconditionError("reversion: vanishing linear coefficient");
  // Lagrange inversion: [z^n] g = (1/n) [w^{n-1}] (w / f(w))^n
  std::vector<cplx> q(static_cast<std::size_t>(T - 1));
  for (int k = 0; k < T - 1; ++k) q[static_cast<std::size_t>(k)] = f[k + 1];
  TruncatedSeries h = reciprocal(TruncatedSeries(0, std::move(q), T - 1));
  int L = h.trunc();
  std::vector<cplx> hv = dense(h, L);
  std::vector<cplx> p = hv;
  std::vector<cplx> tmp(static_cast<std::size_t>(L));
  std::vector<cplx> g(static_cast<std::size_t>(T));
  for (int n = 1; n < T; ++n) {
    g[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n - 1)] / double(n);
    if (n + 1 >= T) break;
    std::fill(tmp.begin(), tmp.end(), cplx{});
    for (int i = 0; i < L; ++i)
      for (int j = 0; i + j < L; ++j)
        tmp[static_cast<std::size_t>(i + j)] += p[static_cast<std::size_t>(i)] * hv[static_cast<std::size_t>(j)];
    p.swap(tmp);
  }
  return {0, std::move(g), T};
}

}  // namespace schiffer
