#include "schiffer/hbvp.hpp"

#include <cmath>
#include <random>

namespace schiffer {

namespace {

// T11 with the row count used by the holomorphic part of delta.
MatrixXc t11_rows(const SchifferOperators& ops, const CoeffVector& holo) {
  const BasisId& b = holo.basis;
  bool ok = (b.kind == BasisKind::CapPullback && b.cap < 0 && b.caps == ops.complex.n()) ||
            (b.kind == BasisKind::DiskInterior && ops.complex.n() == 1);
  if (!ok || holo.conjugated) throw BasisMismatch("HBVP datum: holomorphic part must live on the caps");
  if (b.truncation > ops.J) throw PreconditionError("HBVP datum has more holomorphic modes than J");
  return leading_rows(ops.t11_ext, b.truncation).entries;
}

void check_antiholo(const SchifferOperators& ops, const CoeffVector& a) {
  if (!a.conjugated || a.coeffs.size() != ops.t11.entries.cols())
    throw BasisMismatch("HBVP datum: antiholomorphic part must be conj CapPullback at truncation N");
}

CoeffVector as_domain(const SchifferOperators& ops, const CoeffVector& a) {
  return {ops.t11.domain, a.coeffs, true};
}

}  // namespace

double solvability_residual(const SchifferOperators& ops, const HbvpData& data) {
  check_antiholo(ops, data.delta.antiholo);
  MatrixXc T = t11_rows(ops, data.delta.holo);
  VectorXc r = data.delta.holo.coeffs + T * data.delta.antiholo.coeffs;
  double dn = std::sqrt(data.delta.holo.coeffs.squaredNorm() + data.delta.antiholo.coeffs.squaredNorm());
  return r.norm() / std::max(1.0, dn);
}

LeastSquaresFit least_squares_fit(const SchifferOperators& ops, const HarmonicPair& delta) {
  check_antiholo(ops, delta.antiholo);
  MatrixXc T = t11_rows(ops, delta.holo);
  Eigen::Index D = T.cols(), R = T.rows();
  MatrixXc A(D + R, D);
  A.topRows(D) = MatrixXc::Identity(D, D);
  A.bottomRows(R) = -T;
  VectorXc b(D + R);
  b.head(D) = delta.antiholo.coeffs;
  b.tail(R) = delta.holo.coeffs;
  VectorXc x = A.colPivHouseholderQr().solve(b);
  return {CoeffVector{ops.t11.domain, x, true}, (A * x - b).norm()};
}

HbvpSolution solve(const SchifferOperators& ops, const HbvpData& data) {
  double res = solvability_residual(ops, data);
  if (res > data.tolerance)
    throw Unsolvable("HBVP datum is not in the range of I - T11", res, least_squares_fit(ops, data.delta).gamma_bar);
  HbvpSolution sol;
  sol.residual = res;
  sol.gamma_bar = as_domain(ops, data.delta.antiholo);
  sol.beta = ops.t12.apply(sol.gamma_bar);
  sol.beta.coeffs = -sol.beta.coeffs;

  HarmonicPair outside{sol.beta, CoeffVector{sol.beta.basis, VectorXc(), true}};
  double s = 0.0;
  for (int c = 0; c < ops.complex.n(); ++c) {
    BoundaryOneForm inner = boundary_restriction(data.delta, ops.complex, c, ops.J);
    BoundaryOneForm outer = boundary_restriction(outside, ops.complex, c, ops.J, &ops.complement);
    double d = hminus_half_distance(inner, outer);
    s += d * d;
  }
  sol.boundary_mismatch = std::sqrt(s);
  return sol;
}

HarmonicPair manufactured_datum(const SchifferOperators& ops, const CoeffVector& gamma_bar) {
  HarmonicPair d;
  d.holo = ops.t11_ext.apply(gamma_bar);
  d.holo.coeffs = -d.holo.coeffs;
  d.antiholo = gamma_bar;
  return d;
}

CoeffVector random_gamma_bar(const SchifferOperators& ops, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  VectorXc v(ops.t11.entries.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(nd(rng), nd(rng));
  v.normalize();
  return {ops.t11.domain, v, true};
}

StabilityReport stability_bound_check(const SchifferOperators& ops, int trials, std::uint64_t seed) {
  StabilityReport r;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    CoeffVector g = random_gamma_bar(ops, rng());
    HbvpData data{manufactured_datum(ops, g), 1e-6};
    HbvpSolution sol = solve(ops, data);
    double dn = std::sqrt(data.delta.holo.coeffs.squaredNorm() + data.delta.antiholo.coeffs.squaredNorm());
    r.max_ratio = std::max(r.max_ratio, sol.beta.norm() / dn);
    ++r.trials;
  }
  return r;
}

}  // namespace schiffer
