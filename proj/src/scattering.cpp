#include "schiffer/scattering.hpp"

#include <cmath>

namespace schiffer {

namespace {

double op_norm(const MatrixXc& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXc> svd(m);
  return svd.singularValues()(0);
}

double hermitian_norm(const MatrixXc& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

OperatorMatrix block(BasisId dom, BasisId cod, MatrixXc entries) {
  return {dom, false, cod, true, std::move(entries)};
}

}  // namespace

MatrixXc ScatteringMatrix::assembled() const {
  Eigen::Index r0 = blocks[0][0].entries.rows(), c0 = blocks[0][0].entries.cols();
  Eigen::Index r1 = blocks[1][1].entries.rows(), c1 = blocks[1][1].entries.cols();
  MatrixXc S(r0 + r1, c0 + c1);
  S.topLeftCorner(r0, c0) = blocks[0][0].entries;
  S.topRightCorner(r0, c1) = blocks[0][1].entries;
  S.bottomLeftCorner(r1, c0) = blocks[1][0].entries;
  S.bottomRightCorner(r1, c1) = blocks[1][1].entries;
  return S;
}

ScatteringMatrix assemble_scattering(const SchifferOperators& ops, double completion_threshold) {
  const MatrixXc& A = ops.t11.entries;
  const MatrixXc& B = ops.t12.entries;
  Eigen::Index D = A.cols();
  ScatteringMatrix S;
  S.N = ops.N;
  S.caps = ops.complex.n();
  S.completion_residual = hermitian_norm(A.adjoint() * A + B.adjoint() * B - MatrixXc::Identity(D, D));
  if (S.completion_residual > completion_threshold)
    throw CompletionFailure("column isometry residual too large for unitary completion", S.completion_residual);
  // T21 = T12^T by kernel symmetry; T22 = -T12 conj(T11) conj(T12)^{-1} completes the isometry.
  MatrixXc Bbar_inv = B.conjugate().triangularView<Eigen::Upper>().solve(MatrixXc::Identity(D, D));
  MatrixXc T22 = -B * A.conjugate() * Bbar_inv;
  BasisId caps = ops.t11.domain;
  BasisId comp = ops.t12.codomain;
  S.blocks[0][0] = block(caps, caps, -A.conjugate());
  S.blocks[0][1] = block(comp, caps, -B.adjoint());
  S.blocks[1][0] = block(caps, comp, -B.conjugate());
  S.blocks[1][1] = block(comp, comp, -T22.conjugate());
  return S;
}

ScatteringMatrix assemble_scattering(const CapComplex& cx) { return assemble_scattering(assemble_operators(cx)); }

ScatteringReport scattering_report(const ScatteringMatrix& S) {
  ScatteringReport r;
  MatrixXc M = S.assembled();
  r.unitarity_defect = hermitian_norm(M.adjoint() * M - MatrixXc::Identity(M.cols(), M.cols()));
  r.block_norms[0] = op_norm(S.blocks[0][0].entries);
  r.block_norms[1] = op_norm(S.blocks[0][1].entries);
  r.block_norms[2] = op_norm(S.blocks[1][0].entries);
  r.block_norms[3] = op_norm(S.blocks[1][1].entries);
  r.truncation = S.N;
  return r;
}

std::pair<CoeffVector, CoeffVector> scatter(const ScatteringMatrix& S, const CoeffVector& alpha1,
                                            const CoeffVector& alpha2) {
  CoeffVector b1 = S.blocks[0][0].apply(alpha1);
  b1.coeffs += S.blocks[0][1].apply(alpha2).coeffs;
  CoeffVector b2 = S.blocks[1][0].apply(alpha1);
  b2.coeffs += S.blocks[1][1].apply(alpha2).coeffs;
  return {b1, b2};
}

HarmonicPair overfare_exact_form(const SchifferOperators& ops, const CoeffVector& gamma_bar) {
  HarmonicPair p;
  p.holo = ops.t11_ext.apply(gamma_bar);
  p.antiholo = gamma_bar;
  p.antiholo.coeffs = -gamma_bar.coeffs;
  return p;
}

HarmonicPair complement_image(const SchifferOperators& ops, const CoeffVector& gamma_bar) {
  HarmonicPair p;
  p.holo = ops.t12.apply(gamma_bar);
  p.antiholo = CoeffVector{ops.t12.codomain, VectorXc(), true};
  return p;
}

OverfareCheck overfare_check(const SchifferOperators& ops, const CoeffVector& gamma_bar) {
  HarmonicPair inside = overfare_exact_form(ops, gamma_bar);
  HarmonicPair outside = complement_image(ops, gamma_bar);
  OverfareCheck r;
  double s = 0.0;
  for (int c = 0; c < ops.complex.n(); ++c) {
    BoundaryOneForm b1 = boundary_restriction(inside, ops.complex, c, ops.J);
    BoundaryOneForm b2 = boundary_restriction(outside, ops.complex, c, ops.J, &ops.complement);
    double d = hminus_half_distance(b1, b2);
    s += d * d;
    r.periods_sigma1.push_back(b1.oriented_period());
    r.periods_sigma2.push_back(b2.oriented_period());
  }
  r.mismatch = std::sqrt(s);
  return r;
}

ScatteringReport refinement_ladder(const std::vector<CapSpec>& specs, const std::vector<int>& truncations,
                                   int samples) {
  if (truncations.empty()) throw PreconditionError("refinement ladder needs at least one level");
  ScatteringReport last;
  std::vector<RefinementLevel> history;
  for (int N : truncations) {
    CapComplex cx = build_complex(specs, N, samples);
    SchifferOperators ops = assemble_operators(cx);
    ScatteringReport r = scattering_report(assemble_scattering(ops));
    history.push_back({N, ops.kernel_grid, ops.J, r.unitarity_defect});
    last = r;
  }
  last.refinement_history = std::move(history);
  return last;
}

}  // namespace schiffer
