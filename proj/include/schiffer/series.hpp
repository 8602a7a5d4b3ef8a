#pragma once

#include <span>
#include <vector>

#include "schiffer/common.hpp"

namespace schiffer {

// Truncated Laurent series: coefficients for exponents lo .. trunc-1,
// everything at or above trunc is unknown.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(int lo, std::vector<cplx> coeffs, int trunc);

  static TruncatedSeries zero(int trunc);
  static TruncatedSeries constant(cplx c, int trunc);
  static TruncatedSeries monomial(int exponent, cplx c, int trunc);
  // c[k] is the coefficient of z^k
  static TruncatedSeries power(std::span<const cplx> c, int trunc);

  int lo() const { return lo_; }
  int trunc() const { return trunc_; }
  int size() const { return trunc_ - lo_; }
  std::span<const cplx> coeffs() const { return coeffs_; }

  // Coefficient of z^k; zero below the window, throws at or above trunc.
  cplx operator[](int k) const;
  void set(int k, cplx value);

  // Smallest exponent with |coefficient| > tol, or trunc if none.
  int valuation(double tol = 0.0) const;
  TruncatedSeries truncated(int new_trunc) const;
  // Drops leading coefficients with |c| <= tol.
  TruncatedSeries trimmed(double tol = 0.0) const;
  cplx evaluate(cplx z) const;
  bool is_power_series() const { return lo_ >= 0; }

  TruncatedSeries operator-() const;
  TruncatedSeries& operator*=(cplx s);

 private:
  int lo_ = 0;
  int trunc_ = 0;
  std::vector<cplx> coeffs_;
};

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(cplx s, TruncatedSeries a);
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries reciprocal(const TruncatedSeries& a);
TruncatedSeries divide(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries derivative(const TruncatedSeries& a);
TruncatedSeries pow(const TruncatedSeries& a, int n);
// log(1 + a); a must be a power series with zero constant term
TruncatedSeries log1p_series(const TruncatedSeries& a);
// Principal log of a power series with nonzero constant term.
TruncatedSeries log_series(const TruncatedSeries& a);
// exp(a) for a power series with zero constant term
TruncatedSeries exp_series(const TruncatedSeries& a);
TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner);
TruncatedSeries reversion(const TruncatedSeries& f);

}  // namespace schiffer
