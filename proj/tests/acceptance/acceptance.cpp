// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "schiffer/grunsky.hpp"
#include "schiffer/hbvp.hpp"
#include "schiffer/scattering.hpp"

using namespace schiffer;

namespace {

constexpr std::uint64_t seed = 20240611;

constexpr double tol_trivial = 1e-12;
constexpr double tol_series = 1e-10;
constexpr double grunsky_margin = 1e-6;
constexpr double tol_conjugation = 1e-7;
constexpr double tol_unitarity = 1e-4;
constexpr double tol_circle = 1e-10;
constexpr double ladder_floor = 1e-12;
constexpr double tol_pythagoras = 1e-4;
constexpr double tol_overfare = 1e-6;
constexpr double tol_periods = 1e-9;
constexpr double theta_drift = 0.10;
constexpr double theta_floor = 1e-2;
constexpr double tol_recover = 1e-9;
constexpr double tol_hbvp_boundary = 1e-6;
constexpr double tol_unsolvable = 1e-12;
constexpr double tol_annulus = 1e-6;
constexpr double tol_symmetry = 1e-8;
constexpr double tol_invariance = 1e-7;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s criterion %2d %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

CapSpec cap(std::vector<cplx> c, cplx center = 0.0, bool inf = false) { return {center, std::move(c), inf}; }

CapSpec random_cap(std::mt19937_64& rng, double bound, int degree, cplx center = 0.0, cplx a1 = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CapSpec s{center, {a1}, false};
  for (int k = 2; k <= degree; ++k) s.coeffs.push_back(a1 * std::polar(bound / (k * k) * u(rng), 2.0 * pi * u(rng)));
  return s;
}

struct Named {
  std::string name;
  std::vector<CapSpec> caps;
  int samples = 1024;
};

// Maps the operator criteria run over.
std::vector<Named> corpus() {
  std::mt19937_64 rng(seed);
  std::vector<Named> c;
  c.push_back({"quadratic t=0.1", {cap({1.0, 0.1})}});
  c.push_back({"quadratic t=0.3", {cap({1.0, 0.3})}});
  for (int i = 0; i < 3; ++i) c.push_back({"random cap " + std::to_string(i), {random_cap(rng, 0.2, 8)}});
  c.push_back({"two caps", {random_cap(rng, 0.2, 6), random_cap(rng, 0.2, 6, 3.0, 0.6)}});
  c.push_back({"three caps",
               {random_cap(rng, 0.2, 5), random_cap(rng, 0.2, 5, 3.0, 0.5), random_cap(rng, 0.2, 5, cplx(1.0, 3.0), 0.6)}});
  c.push_back({"annulus", {cap({0.25}), cap({1.0}, 0.0, true)}, 2048});
  return c;
}

CapComplex build(const Named& m, int N) { return build_complex(m.caps, N, m.samples); }

Eigen::VectorXd svals(const MatrixXc& m) { return Eigen::JacobiSVD<MatrixXc>(m).singularValues(); }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

int main() {
  const std::vector<Named> maps = corpus();
  const std::vector<int> ladder = {8, 16, 24};

  report(1, "grunsky_triviality", [] {
    auto t0 = std::chrono::steady_clock::now();
    CapComplex id = build_complex({cap({1.0})}, 16);
    double worst = grunsky_matrix(id).assembled().cwiseAbs().maxCoeff();
    for (Mobius m : {Mobius{1.0, 0.0, -0.5, 1.0}, Mobius{2.0, 1.0, 1.0, 3.0}, Mobius{cplx(0, 1), 0.3, cplx(0.2, 0.2), 1.0}})
      worst = std::max(worst, grunsky_matrix(transform(id, m)).assembled().cwiseAbs().maxCoeff());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Outcome{worst < tol_trivial && secs < 1.0, fmt("max entry %.3g < %.0e, runtime %.3f s < 1 s", worst, tol_trivial, secs)};
  });

  report(2, "grunsky_series_oracle", [] {
    double worst = 0.0;
    for (double t : {0.1, 0.3}) {
      CapComplex cx = build_complex({cap({1.0, t})}, 9);
      BivariateSeries b = grunsky_generating(cx.caps[0], cx.caps[0], true, 9);
      // log(1 + t(z + w)) expanded term by term
      for (int m = 1; m <= 9; ++m)
        for (int n = 1; m + n <= 10; ++n) {
          int k = m + n;
          double o = (k % 2 ? 1.0 : -1.0) * std::pow(t, k) * binomial(k, m) / k;
          worst = std::max(worst, std::abs(b.mixed(m, n) - o));
        }
    }
    return Outcome{worst < tol_series, fmt("max |b_mn - oracle| %.3g < %.0e", worst, tol_series)};
  });

  report(3, "grunsky_inequality", [] {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed + 3);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      CapComplex cx = build_complex({random_cap(rng, 0.2, 12)}, 16);
      worst = std::max(worst, spectral_norm(grunsky_matrix(cx)));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Outcome{worst < 1.0 - grunsky_margin && secs < 60.0,
                   fmt("max norm %.6f < 1 - %.0e over 20 maps, runtime %.2f s", worst, grunsky_margin, secs)};
  });

  report(4, "conjugation_identity", [&] {
    double worst = 0.0;
    for (const auto& m : maps) {
      CapComplex cx = build(m, 16);
      worst = std::max(worst, (grunsky_matrix(cx).assembled() + t11_matrix(cx).entries).cwiseAbs().maxCoeff());
    }
    return Outcome{worst < tol_conjugation, fmt("max |Gr + T11| %.3g < %.0e at N=16", worst, tol_conjugation)};
  });

  // operators on the ladder, shared by 5, 6, 7, 8, 9
  struct Level {
    double defect, pythagoras, sigma_min;
  };
  std::vector<std::vector<Level>> levels(maps.size());
  std::vector<SchifferOperators> finals;
  std::string build_error;
  try {
    for (std::size_t i = 0; i < maps.size(); ++i) {
      for (int N : ladder) {
        SchifferOperators ops = assemble_operators(build(maps[i], N));
        double d = scattering_report(assemble_scattering(ops)).unitarity_defect;
        levels[i].push_back({d, adjoint_check(ops.t11_ext, ops.t12).max_defect, theta_matrix(ops.t12).sigma_min});
        if (N == ladder.back()) finals.push_back(std::move(ops));
      }
    }
  } catch (const std::exception& e) {
    build_error = e.what();
  }
  auto need_ops = [&]() -> std::optional<Outcome> {
    if (!build_error.empty()) return Outcome{false, "operator assembly failed: " + build_error};
    return std::nullopt;
  };

  report(5, "scattering_unitarity", [&] {
    if (auto o = need_ops()) return *o;
    bool ok = true;
    double final_worst = 0.0;
    std::string where;
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const auto& L = levels[i];
      for (std::size_t k = 1; k < L.size(); ++k) {
        bool dec = L[k].defect < L[k - 1].defect || (L[k].defect <= ladder_floor && L[k - 1].defect <= ladder_floor);
        if (!dec) {
          ok = false;
          where += " [" + maps[i].name + " N=" + std::to_string(ladder[k]) + "]";
        }
      }
      final_worst = std::max(final_worst, L.back().defect);
    }
    CapComplex circle = build_complex({cap({1.0})}, 24);
    double circ = scattering_report(assemble_scattering(circle)).unitarity_defect;
    ok = ok && final_worst < tol_unitarity && circ < tol_circle;
    return Outcome{ok, fmt("final defect %.3g < %.0e, ", final_worst, tol_unitarity) + fmt("circle %.3g < %.0e, ", circ, tol_circle) +
                           fmt("ladder 8/16/24 decreasing (floor %.0e)", ladder_floor) + where};
  });

  report(6, "column_pythagoras", [&] {
    if (auto o = need_ops()) return *o;
    double worst = 0.0;
    for (const auto& L : levels) worst = std::max(worst, L.back().pythagoras);
    return Outcome{worst < tol_pythagoras, fmt("max column defect %.3g < %.0e at N=24", worst, tol_pythagoras)};
  });

  double overfare_worst = 0.0, period_worst = 0.0;
  std::string overfare_error;
  try {
    if (build_error.empty()) {
      std::mt19937_64 rng(seed + 7);
      for (const auto& ops : finals)
        for (int t = 0; t < 10; ++t) {
          OverfareCheck oc = overfare_check(ops, random_gamma_bar(ops, rng()));
          overfare_worst = std::max(overfare_worst, oc.mismatch);
          for (std::size_t c = 0; c < oc.periods_sigma1.size(); ++c)
            period_worst = std::max(period_worst, std::abs(oc.periods_sigma1[c] + oc.periods_sigma2[c]));
        }
    }
  } catch (const std::exception& e) {
    overfare_error = e.what();
  }

  report(7, "overfare_boundary_agreement", [&] {
    if (auto o = need_ops()) return *o;
    if (!overfare_error.empty()) return Outcome{false, "exception: " + overfare_error};
    return Outcome{overfare_worst < tol_overfare,
                   fmt("max H^-1/2 mismatch %.3g < %.0e, 10 draws per map", overfare_worst, tol_overfare)};
  });

  report(8, "period_antisymmetry", [&] {
    if (auto o = need_ops()) return *o;
    if (!overfare_error.empty()) return Outcome{false, "exception: " + overfare_error};
    return Outcome{period_worst < tol_periods, fmt("max |P1 + P2| %.3g < %.0e", period_worst, tol_periods)};
  });

  report(9, "theta_isomorphism", [&] {
    if (auto o = need_ops()) return *o;
    double drift = 0.0, smin = 1.0;
    for (const auto& L : levels) {
      for (std::size_t k = 1; k < L.size(); ++k)
        drift = std::max(drift, std::abs(L[k].sigma_min - L[k - 1].sigma_min) / L[k - 1].sigma_min);
      for (const auto& l : L) smin = std::min(smin, l.sigma_min);
    }
    return Outcome{drift < theta_drift && smin > theta_floor,
                   fmt("relative change %.3g < %.2f, ", drift, theta_drift) + fmt("min sigma %.4f > %.0e", smin, theta_floor)};
  });

  report(10, "hbvp_manufactured", [&] {
    if (auto o = need_ops()) return *o;
    std::mt19937_64 rng(seed + 10);
    double rec = 0.0, mism = 0.0;
    for (const auto& ops : finals)
      for (int t = 0; t < 3; ++t) {
        CoeffVector g = random_gamma_bar(ops, rng());
        HbvpSolution sol = solve(ops, HbvpData{manufactured_datum(ops, g)});
        rec = std::max(rec, (sol.gamma_bar.coeffs - g.coeffs).norm());
        mism = std::max(mism, sol.boundary_mismatch);
      }
    SchifferOperators circle = assemble_operators(build_complex({cap({1.0})}, 8));
    HbvpData bad{{CoeffVector::unit(BasisId::cap_pullback(8, 1), 0), CoeffVector::zero(circle.t11.domain, true)}};
    double res = -1.0;
    bool rejected = false;
    try {
      solve(circle, bad);
    } catch (const Unsolvable& e) {
      rejected = true;
      res = e.residual;
    }
    bool ok = rec < tol_recover && mism < tol_hbvp_boundary && rejected && std::abs(res - 1.0) < tol_unsolvable;
    return Outcome{ok, fmt("recovery %.3g < %.0e, boundary %.3g", rec, tol_recover, mism) +
                           fmt(" < %.0e, unsolvable residual %.15g", tol_hbvp_boundary, res)};
  });

  report(11, "harmonic_measures", [] {
    CapComplex ann = build_complex({cap({0.25}), cap({1.0}, 0.0, true)}, 8, 2048);
    double p11 = harmonic_measures(ann).period_matrix(0, 0);
    double exact = 2.0 * pi / std::log(4.0);
    bool annulus = std::abs(p11 - exact) < tol_annulus && std::abs(p11 - 4.5324) < 5e-5;
    std::mt19937_64 rng(seed + 11);
    CapComplex three = build_complex(
        {random_cap(rng, 0.2, 5), random_cap(rng, 0.2, 5, 3.0, 0.5), random_cap(rng, 0.2, 5, cplx(1.0, 3.0), 0.6)}, 8);
    HarmonicMeasures hm = harmonic_measures(three);
    double asym = (hm.period_matrix - hm.period_matrix.transpose()).cwiseAbs().maxCoeff();
    Eigen::MatrixXd R = hm.reduced();
    double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (R + R.transpose())).eigenvalues().minCoeff();
    bool ok = annulus && asym < tol_symmetry && lmin > 0.0;
    return Outcome{ok, fmt("Pi11 %.10f vs 2pi/log4 %.10f (tol %.0e)", p11, exact, tol_annulus) +
                           fmt(", 3-cap asymmetry %.3g, reduced min eigenvalue %.4f", asym, lmin)};
  });

  report(12, "conformal_invariance", [&] {
    std::mt19937_64 rng(seed + 12);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    int tested = 0;
    for (const auto& m : maps) {
      CapComplex cx = build(m, 16);
      SchifferOperators a = assemble_operators(cx);
      for (int attempt = 0; attempt < 50; ++attempt) {
        // pole kept a unit away from every cap, or none at all
        cplx ma(nd(rng), nd(rng)), mb(nd(rng), nd(rng));
        Mobius mob{ma, mb, 0.0, 1.0};
        if (attempt % 2 == 0) {
          cplx p(4.0 * nd(rng), 4.0 * nd(rng));
          bool clear = true;
          for (const auto& poly : cx.polygons)
            clear = clear && !point_in_polygon(poly, p) && polygon_distance(poly, {p}) >= 1.0;
          if (!clear) continue;
          mob = Mobius{ma, mb, 1.0, -p};
        }
        if (std::abs(mob.a * mob.d - mob.b * mob.c) < 0.1) continue;
        CapComplex t;
        try {
          t = transform(cx, mob);
        } catch (const OverlapViolation&) {
          continue;  // image caps too close for the margin: draw again
        }
        SchifferOperators b = assemble_operators(t);
        worst = std::max(worst, (svals(a.t11.entries) - svals(b.t11.entries)).cwiseAbs().maxCoeff());
        worst = std::max(worst, (svals(a.t12.entries) - svals(b.t12.entries)).cwiseAbs().maxCoeff());
        ++tested;
        break;
      }
    }
    bool ok = worst < tol_invariance && tested == static_cast<int>(maps.size());
    return Outcome{ok, fmt("max singular value change %.3g < %.0e over %.0f maps", worst, tol_invariance, tested)};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
