#pragma once

#include <span>
#include <vector>

#include "schiffer/common.hpp"

namespace schiffer {

// Unnormalized forward DFT, X_j = sum_s x_s exp(-2 pi i j s / M).
std::vector<cplx> dft(std::span<const cplx> x);

// Column-wise forward DFT of every column of a matrix.
MatrixXc dft_columns(const MatrixXc& x);

// 2D forward DFT (unnormalized).
MatrixXc dft2(const MatrixXc& x);

// Fourier coefficients c_{-J..J} of equispaced samples g(2 pi s / M), stored at
// index j + J, with c_j = (1/M) sum_s g_s exp(-i j theta_s).
std::vector<cplx> fourier_coefficients(std::span<const cplx> samples, int J);

// Fraction of spectral energy in modes with |j| >= 3M/8.
double high_mode_ratio(std::span<const cplx> spectrum);

inline std::size_t mode_index(int j, std::size_t M) {
  return j >= 0 ? static_cast<std::size_t>(j) : M - static_cast<std::size_t>(-j);
}

}  // namespace schiffer
