#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "schiffer/capmap.hpp"
#include "schiffer/grunsky.hpp"
#include "schiffer/scattering.hpp"

namespace schiffer {

struct ConfigError : Error {
  int line = 0;
  int column = 0;
  ConfigError(const std::string& what, int l, int c) : Error(what), line(l), column(c) {}
};

struct CapConfig {
  std::vector<CapSpec> caps;
  int truncation = 8;
  int samples = 1024;
};

CapConfig parse_cap_config(const std::string& text);
CapConfig load_cap_config(const std::string& path);
nlohmann::json to_json(const CapConfig& cfg);

// Sorted keys, doubles as %.17g.
std::string dump_json(const nlohmann::json& j);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

nlohmann::json complex_json(cplx z);
nlohmann::json to_json(const CoeffVector& v);
nlohmann::json to_json(const OperatorMatrix& m);
nlohmann::json to_json(const ScatteringReport& r);
nlohmann::json grunsky_rows(const GrunskyMatrix& g);
std::string grunsky_csv(const GrunskyMatrix& g);
std::string matrix_csv(const Eigen::MatrixXd& m);

// [[re, im], ...]
VectorXc parse_complex_list(const nlohmann::json& j, const std::string& what);

}  // namespace schiffer
