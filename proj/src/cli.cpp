#include "schiffer/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "schiffer/grunsky.hpp"
#include "schiffer/hbvp.hpp"
#include "schiffer/io.hpp"

namespace schiffer {

using nlohmann::json;

namespace {

// Levels at or below this are rounding noise; a ladder may sit there.
constexpr double defect_floor = 1e-12;

struct Context {
  const RunConfig& rc;
  CapConfig caps;
  std::vector<int> Ns;
  std::vector<int> samples;
  std::mt19937_64 rng;
  std::vector<Gate> gates;
  PlotData plot;
  std::ostream& log;

  void gate(const std::string& name, double value, double threshold, bool pass) {
    gates.push_back({name, value, threshold, pass});
  }
  // value < threshold
  void below(const std::string& name, double value, double threshold) {
    gate(name, value, threshold, std::isfinite(value) && value < threshold);
  }

  CapComplex level(std::size_t i) const {
    BuildOptions o;
    o.truncation = Ns[i];
    o.samples = samples[i];
    return build_complex(caps.caps, o);
  }
  CapComplex final_level() const { return level(Ns.size() - 1); }
};

json gates_json(const std::vector<Gate>& gates) {
  json out = json::array();
  for (const Gate& g : gates)
    out.push_back({{"name", g.name}, {"value", g.value}, {"threshold", g.threshold}, {"pass", g.pass}});
  return out;
}

std::vector<double> singular_values(const MatrixXc& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<MatrixXc> svd(m);
  std::vector<double> s(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

json grunsky_section(Context& ctx, const CapComplex& cx) {
  GrunskyMatrix g = grunsky_matrix(cx);
  MatrixXc a = g.assembled();
  SpectralNormResult sr = spectral_norm_report(a);
  ctx.plot.singular_values = singular_values(a);
  ctx.below("grunsky_inequality", sr.value, 1.0 - ctx.rc.tolerances.grunsky_margin);
  if (ctx.rc.grunsky_dump)
    write_text((std::filesystem::path(ctx.rc.output_dir) / "grunsky.csv").string(), grunsky_csv(g));
  json sv = json::array();
  for (double s : ctx.plot.singular_values) sv.push_back(s);
  return {{"norm", sr.value},
          {"max_entry", a.size() ? a.cwiseAbs().maxCoeff() : 0.0},
          {"truncation", g.N},
          {"sign", "Gr(m,n) = -sqrt(mn) b_mn"},
          {"singular_values", sv},
          {"entries", grunsky_rows(g)}};
}

json operators_section(Context& ctx, const SchifferOperators& ops) {
  AdjointReport ad = adjoint_check(ops.t11_ext, ops.t12);
  ThetaResult th = theta_matrix(ops.t12);
  ctx.below("pythagoras", ad.max_defect, ctx.rc.tolerances.pythagoras);
  json out = {{"pythagoras_max_defect", ad.max_defect},
              {"theta_sigma_min", th.sigma_min},
              {"kernel_grid", ops.kernel_grid},
              {"J", ops.J},
              {"t11_singular_values", singular_values(ops.t11.entries)},
              {"t12_singular_values", singular_values(ops.t12.entries)}};
  if (ctx.rc.dump_operators) {
    out["t11"] = to_json(ops.t11);
    out["t12"] = to_json(ops.t12);
  }
  return out;
}

json ladder_section(Context& ctx) {
  std::vector<RefinementLevel> hist;
  ScatteringReport last;
  for (std::size_t i = 0; i < ctx.Ns.size(); ++i) {
    SchifferOperators ops = assemble_operators(ctx.level(i), ctx.rc.boundary_modes);
    last = scattering_report(assemble_scattering(ops));
    hist.push_back({ctx.Ns[i], ops.kernel_grid, ops.J, last.unitarity_defect});
    ctx.log << "  N=" << ctx.Ns[i] << " defect=" << last.unitarity_defect << '\n';
  }
  last.refinement_history = hist;
  ctx.plot.ladder = hist;
  bool monotone = true;
  double worst = 0.0;
  for (std::size_t i = 1; i < hist.size(); ++i) {
    double prev = hist[i - 1].defect, cur = hist[i].defect;
    if (!(cur < prev || (cur <= defect_floor && prev <= defect_floor))) {
      monotone = false;
      worst = std::max(worst, cur - prev);
    }
  }
  ctx.gate("unitarity_monotone", worst, 0.0, monotone);
  ctx.below("unitarity_final", last.unitarity_defect, ctx.rc.tolerances.unitarity);
  return to_json(last);
}

json overfare_section(Context& ctx, const SchifferOperators& ops) {
  double mismatch = 0.0, periods = 0.0;
  json trials = json::array();
  for (int t = 0; t < ctx.rc.trials; ++t) {
    std::uint64_t s = ctx.rng();
    OverfareCheck oc = overfare_check(ops, random_gamma_bar(ops, s));
    double p = 0.0;
    for (std::size_t c = 0; c < oc.periods_sigma1.size(); ++c)
      p = std::max(p, std::abs(oc.periods_sigma1[c] + oc.periods_sigma2[c]));
    mismatch = std::max(mismatch, oc.mismatch);
    periods = std::max(periods, p);
    trials.push_back({{"seed", s}, {"mismatch", oc.mismatch}, {"period_defect", p}});
  }
  ctx.below("overfare_mismatch", mismatch, ctx.rc.tolerances.overfare);
  ctx.below("period_antisymmetry", periods, ctx.rc.tolerances.periods);
  return {{"max_mismatch", mismatch}, {"max_period_defect", periods}, {"trials", trials}};
}

HarmonicPair load_delta(const SchifferOperators& ops, const std::string& path) {
  json j;
  std::string text = read_text(path);
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed HBVP datum: ") + e.what(), 0, static_cast<int>(e.byte));
  }
  if (!j.is_object() || !j.contains("holo") || !j.contains("antiholo"))
    throw ConfigError("HBVP datum needs \"holo\" and \"antiholo\"", 0, 0);
  VectorXc h = parse_complex_list(j["holo"], "holo");
  VectorXc a = parse_complex_list(j["antiholo"], "antiholo");
  int n = ops.complex.n();
  if (h.size() % n != 0 || a.size() != ops.t11.entries.cols())
    throw ConfigError("HBVP datum has the wrong number of coefficients", 0, 0);
  BasisId hb = BasisId::cap_pullback(static_cast<int>(h.size() / n), n);
  return {CoeffVector{hb, h, false}, CoeffVector{ops.t11.domain, a, true}};
}

json hbvp_section(Context& ctx, const SchifferOperators& ops) {
  HarmonicPair delta;
  std::uint64_t s = 0;
  if (!ctx.rc.delta.empty()) {
    delta = load_delta(ops, ctx.rc.delta);
  } else {
    s = ctx.rng();
    delta = manufactured_datum(ops, random_gamma_bar(ops, s));
  }
  for (int c = 0; c < ops.complex.n(); ++c) {
    BoundaryOneForm b = boundary_restriction(delta, ops.complex, c, ops.J);
    std::vector<double> spec;
    for (cplx v : b.fourier) spec.push_back(std::abs(v));
    ctx.plot.spectra.push_back(std::move(spec));
  }
  HbvpData data{delta, ctx.rc.tolerances.hbvp};
  json out = {{"seed", s}, {"manufactured", ctx.rc.delta.empty()}};
  try {
    HbvpSolution sol = solve(ops, data);
    out["residual"] = sol.residual;
    out["boundary_mismatch"] = sol.boundary_mismatch;
    out["gamma_bar"] = to_json(sol.gamma_bar);
    out["beta"] = to_json(sol.beta);
    ctx.gate("hbvp_solvable", sol.residual, data.tolerance, true);
    ctx.below("hbvp_boundary", sol.boundary_mismatch, ctx.rc.tolerances.overfare);
  } catch (const Unsolvable& e) {
    out["residual"] = e.residual;
    out["least_squares_gamma_bar"] = to_json(e.best_gamma_bar);
    ctx.gate("hbvp_solvable", e.residual, data.tolerance, false);
  }
  return out;
}

json hm_section(Context& ctx, const CapComplex& cx) {
  HarmonicMeasures hm = harmonic_measures(cx);
  const Eigen::MatrixXd& P = hm.period_matrix;
  double asym = (P - P.transpose()).cwiseAbs().maxCoeff();
  Eigen::MatrixXd R = hm.reduced();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (R + R.transpose()));
  double lmin = es.eigenvalues().minCoeff();
  ctx.below("period_matrix_symmetric", asym, ctx.rc.tolerances.symmetry);
  ctx.gate("period_matrix_positive", lmin, 0.0, lmin > 0.0);
  write_text((std::filesystem::path(ctx.rc.output_dir) / "period_matrix.csv").string(), matrix_csv(P));
  json rows = json::array();
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < P.cols(); ++k) r.push_back(P(i, k));
    rows.push_back(r);
  }
  return {{"period_matrix", rows}, {"asymmetry", asym}, {"reduced_min_eigenvalue", lmin}, {"condition", hm.condition}};
}

json execute(Context& ctx) {
  const std::string& cmd = ctx.rc.command;
  json results;
  if (cmd == "grunsky") {
    results["grunsky"] = grunsky_section(ctx, ctx.final_level());
  } else if (cmd == "operators") {
    results["operators"] = operators_section(ctx, assemble_operators(ctx.final_level(), ctx.rc.boundary_modes));
  } else if (cmd == "scatter") {
    results["scattering"] = ladder_section(ctx);
  } else if (cmd == "overfare") {
    results["overfare"] = overfare_section(ctx, assemble_operators(ctx.final_level(), ctx.rc.boundary_modes));
  } else if (cmd == "hbvp") {
    results["hbvp"] = hbvp_section(ctx, assemble_operators(ctx.final_level(), ctx.rc.boundary_modes));
  } else if (cmd == "hm") {
    results["harmonic_measures"] = hm_section(ctx, ctx.final_level());
  } else {
    results["scattering"] = ladder_section(ctx);
    CapComplex cx = ctx.final_level();
    SchifferOperators ops = assemble_operators(cx, ctx.rc.boundary_modes);
    results["grunsky"] = grunsky_section(ctx, cx);
    results["grunsky"].erase("entries");
    results["operators"] = operators_section(ctx, ops);
    results["overfare"] = overfare_section(ctx, ops);
    results["hbvp"] = hbvp_section(ctx, ops);
    if (cx.n() >= 2) results["harmonic_measures"] = hm_section(ctx, cx);
  }
  return results;
}

std::vector<int> or_default(const std::vector<int>& v, int fallback, std::size_t n) {
  if (v.empty()) return std::vector<int>(n, fallback);
  if (v.size() == 1 && n > 1) return std::vector<int>(n, v.front());
  return v;
}

}  // namespace

std::string golden_diff(const json& expected, const json& actual, double rel_tol, const std::string& path) {
  if (expected.is_number() && actual.is_number()) {
    double a = expected.get<double>(), b = actual.get<double>();
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= rel_tol * scale + 1e-12 ? "" : path;
  }
  if (expected.type() != actual.type()) return path.empty() ? "/" : path;
  if (expected.is_object()) {
    if (expected.size() != actual.size()) return path + "/";
    for (auto it = expected.begin(); it != expected.end(); ++it) {
      if (!actual.contains(it.key())) return path + "/" + it.key();
      std::string d = golden_diff(it.value(), actual[it.key()], rel_tol, path + "/" + it.key());
      if (!d.empty()) return d;
    }
    return "";
  }
  if (expected.is_array()) {
    if (expected.size() != actual.size()) return path + "/";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      std::string d = golden_diff(expected[i], actual[i], rel_tol, path + "/" + std::to_string(i));
      if (!d.empty()) return d;
    }
    return "";
  }
  return expected == actual ? "" : (path.empty() ? "/" : path);
}

void emit_plot_data(const PlotData& data, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ostringstream ladder, spectra, sv;
  for (auto* os : {&ladder, &spectra, &sv}) os->precision(17);
  ladder << "N,unitarity_defect\n";
  for (const auto& lv : data.ladder) ladder << lv.N << ',' << lv.defect << '\n';
  spectra << "curve,mode,abs\n";
  for (std::size_t c = 0; c < data.spectra.size(); ++c) {
    const auto& s = data.spectra[c];
    int J = static_cast<int>(s.size()) / 2;
    for (std::size_t i = 0; i < s.size(); ++i) spectra << c << ',' << static_cast<int>(i) - J << ',' << s[i] << '\n';
  }
  std::vector<double> v = data.singular_values;
  std::sort(v.begin(), v.end(), std::greater<>());
  sv << "index,singular_value\n";
  for (std::size_t i = 0; i < v.size(); ++i) sv << i << ',' << v[i] << '\n';
  write_text((fs::path(dir) / "defect_ladder.csv").string(), ladder.str());
  write_text((fs::path(dir) / "boundary_spectra.csv").string(), spectra.str());
  write_text((fs::path(dir) / "grunsky_singular_values.csv").string(), sv.str());
}

int run(const RunConfig& rc, std::ostream& log) {
  static const std::vector<std::string> commands = {"grunsky", "operators", "scatter", "overfare", "hbvp", "hm", "report"};
  if (std::find(commands.begin(), commands.end(), rc.command) == commands.end()) {
    log << "error: unknown command " << rc.command << '\n';
    return ExitParse;
  }
  CapConfig caps;
  try {
    caps = load_cap_config(rc.cap_spec);
  } catch (const ConfigError& e) {
    log << "error: " << rc.cap_spec;
    if (e.line > 0) log << ':' << e.line << ':' << e.column;
    log << ": " << e.what() << '\n';
    return ExitParse;
  }
  std::vector<int> Ns = rc.truncations.empty() ? std::vector<int>{caps.truncation} : rc.truncations;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 1 || (i > 0 && Ns[i] <= Ns[i - 1])) {
      log << "error: truncations must be positive and increasing\n";
      return ExitParse;
    }
  }
  std::vector<int> samples = or_default(rc.quad_orders, caps.samples, Ns.size());
  if (samples.size() != Ns.size()) {
    log << "error: quad_orders must have one entry per truncation\n";
    return ExitParse;
  }

  std::filesystem::create_directories(rc.output_dir);
  Context ctx{rc, caps, Ns, samples, std::mt19937_64(rc.seed), {}, {}, log};
  json results;
  try {
    ctx.final_level();
  } catch (const Error& e) {
    log << "validation failed: " << e.what() << '\n';
    return ExitValidation;
  }
  try {
    results = execute(ctx);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return ExitParse;
  } catch (const PreconditionError& e) {
    log << "validation failed: " << e.what() << '\n';
    return ExitValidation;
  } catch (const Error& e) {
    ctx.gate(rc.command + "_computation", 0.0, 0.0, false);
    log << "check " << rc.command << "_computation failed: " << e.what() << '\n';
    results["error"] = e.what();
  }

  json out = {{"command", rc.command},
              {"seed", rc.seed},
              {"config", to_json(caps)},
              {"truncations", Ns},
              {"samples", samples},
              {"results", results},
              {"gates", gates_json(ctx.gates)}};

  if (!rc.golden.empty() && rc.command == "report") {
    if (rc.regen_golden) {
      write_text(rc.golden, dump_json(out));
      log << "golden regenerated: " << rc.golden << '\n';
    } else {
      json expected;
      try {
        expected = json::parse(read_text(rc.golden));
      } catch (const std::exception& e) {
        log << "error: golden file " << rc.golden << ": " << e.what() << '\n';
        return ExitParse;
      }
      std::string d = golden_diff(expected, out, rc.tolerances.golden);
      ctx.gate("golden_match", d.empty() ? 0.0 : 1.0, 0.0, d.empty());
      if (!d.empty()) log << "golden mismatch at " << d << '\n';
      out["gates"] = gates_json(ctx.gates);
    }
  }

  namespace fs = std::filesystem;
  write_text((fs::path(rc.output_dir) / (rc.command + ".json")).string(), dump_json(out));
  if (rc.command == "report" || rc.command == "scatter" || rc.command == "grunsky")
    emit_plot_data(ctx.plot, rc.output_dir);

  int code = ExitOk;
  for (const Gate& g : ctx.gates) {
    log << (g.pass ? "PASS " : "FAIL ") << g.name << " value=" << g.value << " threshold=" << g.threshold << '\n';
    if (!g.pass) code = ExitGate;
  }
  return code;
}

int run_main(int argc, char** argv) {
  CLI::App app{"Schiffer operators, Grunsky matrices and scattering for genus-zero cap complexes"};
  RunConfig rc;
  app.add_option("--config", rc.cap_spec, "cap specification (JSON)")->required();
  app.add_option("--command", rc.command, "grunsky|operators|scatter|overfare|hbvp|hm|report");
  app.add_option("--out", rc.output_dir, "output directory");
  app.add_option("--seed", rc.seed, "seed for all randomized inputs");
  app.add_option("--truncations", rc.truncations, "refinement ladder, e.g. 8,16,24")->delimiter(',');
  app.add_option("--quad-orders", rc.quad_orders, "boundary samples per level")->delimiter(',');
  app.add_option("--boundary-modes", rc.boundary_modes, "boundary cutoff J (default 4N)");
  app.add_option("--trials", rc.trials, "random inputs per property check");
  app.add_option("--delta", rc.delta, "HBVP datum (JSON with holo/antiholo)");
  app.add_option("--golden", rc.golden, "golden report to compare against");
  app.add_flag("--regen-golden", rc.regen_golden, "overwrite the golden report");
  app.add_flag("--grunsky-dump", rc.grunsky_dump, "write grunsky.csv");
  app.add_flag("--dump-operators", rc.dump_operators, "include operator matrices in the output");
  app.add_option("--tol-unitarity", rc.tolerances.unitarity);
  app.add_option("--tol-pythagoras", rc.tolerances.pythagoras);
  app.add_option("--tol-overfare", rc.tolerances.overfare);
  app.add_option("--tol-hbvp", rc.tolerances.hbvp);
  app.add_option("--tol-golden", rc.tolerances.golden);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? ExitOk : ExitParse;
  }
  return run(rc, std::cerr);
}

}  // namespace schiffer
