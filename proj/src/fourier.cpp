#include "schiffer/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>

namespace schiffer {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::vector<cplx> dft(std::span<const cplx> x) {
  std::vector<cplx> in(x.begin(), x.end());
  std::vector<cplx> out(x.size());
  if (x.empty()) return out;
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(x.size()), as_fftw(in.data()), as_fftw(out.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  return out;
}

MatrixXc dft_columns(const MatrixXc& x) {
  MatrixXc in = x;
  MatrixXc out(x.rows(), x.cols());
  if (x.size() == 0) return out;
  int n = static_cast<int>(x.rows());
  int howmany = static_cast<int>(x.cols());
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_many_dft(1, &n, howmany, as_fftw(in.data()), nullptr, 1, n,
                                  as_fftw(out.data()), nullptr, 1, n, FFTW_FORWARD, FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  return out;
}

MatrixXc dft2(const MatrixXc& x) {
  // Eigen is column-major, so hand FFTW the transposed shape.
  MatrixXc in = x;
  MatrixXc out(x.rows(), x.cols());
  if (x.size() == 0) return out;
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_2d(static_cast<int>(x.cols()), static_cast<int>(x.rows()),
                                as_fftw(in.data()), as_fftw(out.data()), FFTW_FORWARD, FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  return out;
}

std::vector<cplx> fourier_coefficients(std::span<const cplx> samples, int J) {
  std::size_t M = samples.size();
  if (2 * static_cast<std::size_t>(J) + 1 > M)
    throw PreconditionError("fourier_coefficients: need at least 2J+1 samples");
  std::vector<cplx> X = dft(samples);
  std::vector<cplx> c(2 * static_cast<std::size_t>(J) + 1);
  for (int j = -J; j <= J; ++j) c[static_cast<std::size_t>(j + J)] = X[mode_index(j, M)] / double(M);
  return c;
}

double high_mode_ratio(std::span<const cplx> spectrum) {
  std::size_t M = spectrum.size();
  double total = 0.0, high = 0.0;
  std::size_t cut = (3 * M + 7) / 8;
  for (std::size_t s = 0; s < M; ++s) {
    double e = std::norm(spectrum[s]);
    total += e;
    std::size_t j = s <= M / 2 ? s : M - s;
    if (j >= cut) high += e;
  }
  return total > 0.0 ? high / total : 0.0;
}

}  // namespace schiffer
