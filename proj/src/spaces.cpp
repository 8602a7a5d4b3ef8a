#include "schiffer/spaces.hpp"

#include <cmath>
#include <sstream>

#include "schiffer/fourier.hpp"

namespace schiffer {

int BasisId::dimension() const {
  if (kind == BasisKind::CapPullback && cap < 0) return truncation * caps;
  if (kind == BasisKind::ComplementLaurent) return truncation * caps;
  return truncation;
}

std::string BasisId::describe() const {
  std::ostringstream os;
  switch (kind) {
    case BasisKind::DiskInterior: os << "DiskInterior"; break;
    case BasisKind::DiskExterior: os << "DiskExterior"; break;
    case BasisKind::CapPullback:
      os << "CapPullback(" << (cap < 0 ? std::string("all") : std::to_string(cap)) << ")";
      break;
    case BasisKind::ComplementLaurent: os << "ComplementLaurent"; break;
  }
  os << "[N=" << truncation << ",caps=" << caps << "]";
  return os.str();
}

CoeffVector CoeffVector::zero(const BasisId& b, bool conjugated) {
  return {b, VectorXc::Zero(b.dimension()), conjugated};
}

CoeffVector CoeffVector::unit(const BasisId& b, int index, bool conjugated) {
  CoeffVector v = zero(b, conjugated);
  if (index < 0 || index >= b.dimension()) throw PreconditionError("basis index out of range");
  v.coeffs(index) = 1.0;
  return v;
}

cplx BoundaryOneForm::coeff(int j) const {
  if (j < -J || j > J) return {};
  return fourier[static_cast<std::size_t>(j + J)];
}

double BoundaryOneForm::hminus_half_seminorm() const {
  double s = 0.0;
  for (int j = -J; j <= J; ++j)
    if (j != 0) s += std::norm(coeff(j)) / std::abs(j);
  return std::sqrt(s);
}

double hminus_half_distance(const BoundaryOneForm& a, const BoundaryOneForm& b) {
  int J = std::max(a.J, b.J);
  double s = std::norm(a.coeff(0) - b.coeff(0));
  for (int j = -J; j <= J; ++j)
    if (j != 0) s += std::norm(a.coeff(j) - b.coeff(j)) / std::abs(j);
  return std::sqrt(s);
}

cplx inner_product(const CoeffVector& a, const CoeffVector& b) {
  if (!(a.basis == b.basis) || a.conjugated != b.conjugated)
    throw BasisMismatch("inner_product: " + a.basis.describe() + " vs " + b.basis.describe());
  if (a.coeffs.size() != b.coeffs.size()) throw BasisMismatch("inner_product: length mismatch");
  return b.coeffs.dot(a.coeffs);  // Eigen's dot conjugates its left operand
}

CoeffVector project(const HarmonicPair& form, Component which) {
  return which == Component::Holo ? form.holo : form.antiholo;
}

void cauchy_family(const std::vector<cplx>& taylor, int N, cplx z, std::span<cplx> out) {
  // 1/(z - f(w)) = sum_l Q_l w^l with (z - p) Q_l = delta_{l0} + sum_{i=1}^{l} f_i Q_{l-i}
  cplx inv = 1.0 / (z - taylor[0]);
  std::vector<cplx> Q(static_cast<std::size_t>(N + 1));
  Q[0] = inv;
  for (int l = 1; l <= N; ++l) {
    cplx s{};
    for (int i = 1; i <= l; ++i) s += taylor[static_cast<std::size_t>(i)] * Q[static_cast<std::size_t>(l - i)];
    Q[static_cast<std::size_t>(l)] = s * inv;
    out[static_cast<std::size_t>(l - 1)] = std::sqrt(l / pi) * Q[static_cast<std::size_t>(l)];
  }
}

ComplementBasis::ComplementBasis(const CapComplex& cx, int N) : N_(N), n_(cx.n()), M_(cx.samples) {
  if (N < 1) throw PreconditionError("complement basis needs N >= 1");
  if (2 * N + 2 > M_) throw PreconditionError("too few boundary samples for the complement basis");
  for (const auto& cap : cx.caps) {
    std::vector<cplx> t(static_cast<std::size_t>(N + 1));
    for (int i = 0; i <= N; ++i) t[static_cast<std::size_t>(i)] = cap.series()[i];
    centers_.push_back(t[0]);
    a1_.push_back(t[1]);
    taylor_.push_back(std::move(t));
  }
  int D = dimension();
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(M_);
  for (int j = 1; 2 * j < M_; ++j) {
    weight(static_cast<Eigen::Index>(mode_index(j, M_))) = 1.0 / j;
    weight(static_cast<Eigen::Index>(mode_index(-j, M_))) = -1.0 / j;
  }
  gram_ = MatrixXc::Zero(D, D);
  std::vector<cplx> row(static_cast<std::size_t>(N));
  for (int c = 0; c < n_; ++c) {
    const CapMap& cap = cx.caps[static_cast<std::size_t>(c)];
    MatrixXc P(M_, D);
    for (int s = 0; s < M_; ++s) {
      cplx w = std::polar(1.0, 2.0 * pi * s / M_);
      cplx z = cap(w);
      cplx dz = I * w * cap.derivative(w);
      for (int k = 0; k < n_; ++k) {
        cauchy_family(taylor_[static_cast<std::size_t>(k)], N, z, row);
        for (int l = 0; l < N; ++l) P(s, k * N + l) = row[static_cast<std::size_t>(l)] * dz;
      }
    }
    MatrixXc F = dft_columns(P) / double(M_);
    for (int p = 0; p < D; ++p) {
      std::vector<cplx> col(F.col(p).data(), F.col(p).data() + M_);
      double ratio = high_mode_ratio(col);
      if (ratio > 1e-8)
        throw AliasingError("complement basis: boundary samples do not resolve curve " + std::to_string(c), ratio);
    }
    gram_ += -pi * (F.adjoint() * weight.asDiagonal() * F);
    samples_.push_back(std::move(P));
  }
  gram_ = 0.5 * (gram_ + gram_.adjoint()).eval();
  Eigen::LLT<MatrixXc> llt(gram_);
  if (llt.info() != Eigen::Success)
    throw Error("complement Gram matrix is not positive definite; increase samples");
  MatrixXc R = llt.matrixU();
  B_ = R;
  for (int k = 0; k < n_; ++k) {
    cplx u = a1_[static_cast<std::size_t>(k)] / std::abs(a1_[static_cast<std::size_t>(k)]);
    cplx ph = 1.0;
    for (int l = 0; l < N; ++l) {
      ph *= u;
      B_.row(k * N + l) *= ph;
    }
  }
}

VectorXc ComplementBasis::family_coordinates(const VectorXc& x) const {
  if (x.size() != dimension()) throw BasisMismatch("complement coordinates have wrong length");
  return B_.triangularView<Eigen::Upper>().solve(x);
}

VectorXc ComplementBasis::laurent_coefficients(const VectorXc& x) const {
  VectorXc y = family_coordinates(x);
  VectorXc out = VectorXc::Zero(dimension());
  for (int k = 0; k < n_; ++k) {
    const auto& t = taylor_[static_cast<std::size_t>(k)];
    std::vector<cplx> h(t.begin(), t.end());
    h[0] = 0.0;
    TruncatedSeries hs = TruncatedSeries::power(h, N_ + 1);
    TruncatedSeries pw = hs;
    for (int m = 1; m <= N_; ++m) {
      cplx acc{};
      for (int l = m; l <= N_; ++l) acc += std::sqrt(double(l) / m) * pw[l] * y(k * N_ + l - 1);
      out(k * N_ + m - 1) = acc;
      if (m < N_) pw = mul(pw, hs);
    }
  }
  return out;
}

cplx ComplementBasis::evaluate(const VectorXc& x, cplx z) const {
  VectorXc y = family_coordinates(x);
  std::vector<cplx> row(static_cast<std::size_t>(N_));
  cplx acc{};
  for (int k = 0; k < n_; ++k) {
    cauchy_family(taylor_[static_cast<std::size_t>(k)], N_, z, row);
    for (int l = 0; l < N_; ++l) acc += y(k * N_ + l) * row[static_cast<std::size_t>(l)];
  }
  return acc;
}

namespace {

Side side_of(const BasisId& b) { return b.on_caps() ? Side::Sigma1 : Side::Sigma2; }

// Adds the exact pullback of a disk-basis block to the Fourier array.
void add_disk_block(std::vector<cplx>& c, int J, const VectorXc& x, Eigen::Index offset, int N,
                    bool exterior, bool conjugated) {
  for (int n = 1; n <= N; ++n) {
    cplx v = x(offset + n - 1);
    if (v == cplx{}) continue;
    int mode = exterior ? -n : n;
    cplx coef = I * std::sqrt(n / pi);
    if (conjugated) {
      mode = -mode;
      coef = std::conj(coef);
    }
    if (std::abs(mode) <= J) c[static_cast<std::size_t>(mode + J)] += coef * v;
  }
}

}  // namespace

BoundaryOneForm boundary_restriction(const HarmonicPair& form, const CapComplex& cx, int curve, int J,
                                     const ComplementBasis* complement) {
  if (curve < 0 || curve >= cx.n()) throw PreconditionError("curve index out of range");
  if (J < 0) throw PreconditionError("J must be non-negative");
  BoundaryOneForm out;
  out.curve = curve;
  out.J = J;
  out.fourier.assign(static_cast<std::size_t>(2 * J + 1), cplx{});

  const CoeffVector* parts[2] = {&form.holo, &form.antiholo};
  bool have_side = false;
  for (const CoeffVector* v : parts) {
    if (v->coeffs.size() == 0) continue;
    Side s = side_of(v->basis);
    if (have_side && s != out.side) throw BasisMismatch("harmonic pair mixes the two sides of the curve");
    out.side = s;
    have_side = true;
  }

  for (const CoeffVector* v : parts) {
    if (v->coeffs.size() == 0) continue;
    if (v->coeffs.size() != v->basis.dimension()) throw BasisMismatch("coefficient length does not match basis");
    const BasisId& b = v->basis;
    switch (b.kind) {
      case BasisKind::DiskInterior:
        add_disk_block(out.fourier, J, v->coeffs, 0, b.truncation, false, v->conjugated);
        break;
      case BasisKind::DiskExterior:
        add_disk_block(out.fourier, J, v->coeffs, 0, b.truncation, true, v->conjugated);
        break;
      case BasisKind::CapPullback: {
        if (b.cap >= 0) {
          if (b.cap != curve) continue;  // supported on another cap
          add_disk_block(out.fourier, J, v->coeffs, 0, b.truncation, false, v->conjugated);
        } else {
          if (b.caps != cx.n()) throw BasisMismatch("cap count does not match the complex");
          add_disk_block(out.fourier, J, v->coeffs, curve * b.truncation, b.truncation, false, v->conjugated);
        }
        break;
      }
      case BasisKind::ComplementLaurent: {
        if (complement == nullptr) throw PreconditionError("restricting a complement form needs its ComplementBasis");
        if (!(complement->basis() == b)) throw BasisMismatch("complement basis does not match the vector");
        int M = complement->samples();
        if (2 * J + 1 > M) throw PreconditionError("insufficient samples for J boundary modes");
        VectorXc x = v->conjugated ? VectorXc(v->coeffs.conjugate()) : v->coeffs;
        VectorXc g = complement->pullback_samples(curve) * complement->family_coordinates(x);
        if (v->conjugated) g = g.conjugate().eval();
        std::vector<cplx> s(g.data(), g.data() + M);
        std::vector<cplx> X = dft(s);
        double ratio = high_mode_ratio(X);
        out.aliasing = std::max(out.aliasing, ratio);
        if (ratio > 1e-8) throw AliasingError("boundary_restriction: insufficient samples", ratio);
        for (int j = -J; j <= J; ++j) out.fourier[static_cast<std::size_t>(j + J)] += X[mode_index(j, M)] / double(M);
        break;
      }
    }
  }
  return out;
}

std::string to_csv(const CoeffVector& v) {
  std::ostringstream os;
  os.precision(17);
  os << "index,re,im\n";
  for (Eigen::Index i = 0; i < v.coeffs.size(); ++i)
    os << i << ',' << v.coeffs(i).real() << ',' << v.coeffs(i).imag() << '\n';
  return os.str();
}

std::string to_csv(const BoundaryOneForm& b) {
  std::ostringstream os;
  os.precision(17);
  os << "index,re,im\n";
  for (int j = -b.J; j <= b.J; ++j) os << j << ',' << b.coeff(j).real() << ',' << b.coeff(j).imag() << '\n';
  return os.str();
}

}  // namespace schiffer
