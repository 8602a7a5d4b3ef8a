#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "schiffer/scattering.hpp"

namespace schiffer {

enum ExitCode { ExitOk = 0, ExitGate = 1, ExitParse = 2, ExitValidation = 3 };

struct Tolerances {
  double grunsky_margin = 1e-6;
  double pythagoras = 1e-4;
  double unitarity = 1e-4;
  double overfare = 1e-6;
  double periods = 1e-9;
  double hbvp = 1e-6;
  double symmetry = 1e-8;
  double golden = 1e-9;  // relative, per number
};

struct RunConfig {
  std::string cap_spec;
  std::string command = "report";
  std::vector<int> truncations;  // empty: the cap spec's truncation
  std::vector<int> quad_orders;  // boundary samples per level; empty: the cap spec's
  int boundary_modes = 0;        // J, 0 = 4N
  Tolerances tolerances;
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  int trials = 10;
  std::string delta;   // optional HBVP datum (JSON)
  std::string golden;  // optional golden report to compare or regenerate
  bool regen_golden = false;
  bool grunsky_dump = false;
  bool dump_operators = false;
};

struct Gate {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct PlotData {
  std::vector<RefinementLevel> ladder;
  std::vector<std::vector<double>> spectra;  // per curve, |c_j| for j = -J..J
  std::vector<double> singular_values;
};

// Runs one command, writes its artifacts under output_dir, returns the exit code.
int run(const RunConfig& config, std::ostream& log);
int run_main(int argc, char** argv);

void emit_plot_data(const PlotData& data, const std::string& dir);

// Recursive numeric comparison; returns the first differing path or "".
std::string golden_diff(const nlohmann::json& expected, const nlohmann::json& actual, double rel_tol,
                        const std::string& path = "");

}  // namespace schiffer
