#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "schiffer/capmap.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Mixed coefficient of z^m w^n in log(1 + t(z + w)), expanded term by term.
inline double log1p_sum_coeff(double t, int m, int n) {
  int k = m + n;
  double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return sign * std::pow(t, k) * binomial(k, m) / k;
}

// Coefficients of the inverse of z + t z^2: (-1)^n Catalan(n) t^n at z^{n+1}.
inline double quadratic_inverse_coeff(double t, int n) {
  double catalan = binomial(2 * n, n) / (n + 1);
  return (n % 2 ? -1.0 : 1.0) * catalan * std::pow(t, n);
}

// Random cap map z + sum a_k z^k with |a_k| <= bound / k^2.
inline schiffer::CapSpec random_cap(std::mt19937_64& rng, double bound, int degree) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  schiffer::CapSpec s;
  s.coeffs.push_back(1.0);
  for (int k = 2; k <= degree; ++k)
    s.coeffs.push_back(std::polar(bound / (k * k) * u(rng), 2.0 * M_PI * u(rng)));
  return s;
}

}  // namespace oracle
