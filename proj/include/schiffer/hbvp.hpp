#pragma once

#include <cstdint>

#include "schiffer/scattering.hpp"

namespace schiffer {

struct HbvpData {
  HarmonicPair delta;  // on the caps: holo on CapPullback (any rows), antiholo conj CapPullback(N)
  double tolerance = 1e-6;
};

struct HbvpSolution {
  CoeffVector beta;        // on the complement
  CoeffVector gamma_bar;   // conj A(caps)
  double residual = 0.0;
  double boundary_mismatch = 0.0;
};

struct Unsolvable : Error {
  double residual;
  CoeffVector best_gamma_bar;
  Unsolvable(const std::string& what, double r, CoeffVector g)
      : Error(what), residual(r), best_gamma_bar(std::move(g)) {}
};

// ||holo(delta) + T11 antiholo(delta)|| / max(1, ||delta||)
double solvability_residual(const SchifferOperators& ops, const HbvpData& data);
HbvpSolution solve(const SchifferOperators& ops, const HbvpData& data);

// Least-squares gamma_bar minimising ||(I - T11) gamma_bar - delta|| and the
// attained distance from delta to the range of I - T11.
struct LeastSquaresFit {
  CoeffVector gamma_bar;
  double distance = 0.0;
};
LeastSquaresFit least_squares_fit(const SchifferOperators& ops, const HarmonicPair& delta);

// delta = (I - T11) gamma_bar, holomorphic rows up to J.
HarmonicPair manufactured_datum(const SchifferOperators& ops, const CoeffVector& gamma_bar);

struct StabilityReport {
  double max_ratio = 0.0;
  int trials = 0;
};
StabilityReport stability_bound_check(const SchifferOperators& ops, int trials, std::uint64_t seed = 1);

CoeffVector random_gamma_bar(const SchifferOperators& ops, std::uint64_t seed);

}  // namespace schiffer
