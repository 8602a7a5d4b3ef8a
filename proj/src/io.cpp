#include "schiffer/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace schiffer {

using nlohmann::json;

namespace {

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

cplx parse_complex(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(what + ": expected [re, im]", 0, 0);
  return {j[0].get<double>(), j[1].get<double>()};
}

void dump(const json& j, std::string& out, int indent, int depth) {
  auto pad = [&](int d) { out.append(static_cast<std::size_t>(d * indent), ' '); };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        pad(depth + 1);
        out += json(it.key()).dump();
        out += ": ";
        dump(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      pad(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& v : j)
        if (v.is_structured()) flat = false;
      if (flat) {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], out, indent, depth);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        pad(depth + 1);
        dump(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      pad(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

CapConfig parse_cap_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte);
    throw ConfigError(std::string("malformed JSON: ") + e.what(), line, col);
  }
  CapConfig cfg;
  if (!j.is_object() || !j.contains("caps") || !j["caps"].is_array())
    throw ConfigError("cap specification needs a \"caps\" array", 0, 0);
  for (std::size_t k = 0; k < j["caps"].size(); ++k) {
    const json& c = j["caps"][k];
    std::string tag = "caps[" + std::to_string(k) + "]";
    if (!c.is_object()) throw ConfigError(tag + ": expected an object", 0, 0);
    CapSpec s;
    if (c.contains("center")) s.center = parse_complex(c["center"], tag + ".center");
    if (!c.contains("coeffs") || !c["coeffs"].is_array() || c["coeffs"].empty())
      throw ConfigError(tag + ": \"coeffs\" must be a non-empty array", 0, 0);
    for (std::size_t i = 0; i < c["coeffs"].size(); ++i)
      s.coeffs.push_back(parse_complex(c["coeffs"][i], tag + ".coeffs[" + std::to_string(i) + "]"));
    if (c.contains("at_infinity")) {
      if (!c["at_infinity"].is_boolean()) throw ConfigError(tag + ".at_infinity: expected a boolean", 0, 0);
      s.at_infinity = c["at_infinity"].get<bool>();
    }
    cfg.caps.push_back(std::move(s));
  }
  if (j.contains("truncation")) {
    if (!j["truncation"].is_number_integer()) throw ConfigError("truncation: expected an integer", 0, 0);
    cfg.truncation = j["truncation"].get<int>();
  }
  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer()) throw ConfigError("samples: expected an integer", 0, 0);
    cfg.samples = j["samples"].get<int>();
  }
  return cfg;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path, 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

CapConfig load_cap_config(const std::string& path) { return parse_cap_config(read_text(path)); }

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CapConfig& cfg) {
  json caps = json::array();
  for (const auto& s : cfg.caps) {
    json coeffs = json::array();
    for (cplx a : s.coeffs) coeffs.push_back(complex_json(a));
    caps.push_back({{"center", complex_json(s.center)}, {"coeffs", coeffs}, {"at_infinity", s.at_infinity}});
  }
  return {{"caps", caps}, {"truncation", cfg.truncation}, {"samples", cfg.samples}};
}

std::string dump_json(const json& j) {
  std::string out;
  dump(j, out, 2, 0);
  out += '\n';
  return out;
}

namespace {

json basis_json(const BasisId& b, bool conjugated) {
  std::string kind;
  switch (b.kind) {
    case BasisKind::DiskInterior: kind = "DiskInterior"; break;
    case BasisKind::DiskExterior: kind = "DiskExterior"; break;
    case BasisKind::CapPullback: kind = "CapPullback"; break;
    case BasisKind::ComplementLaurent: kind = "ComplementLaurent"; break;
  }
  return {{"kind", kind}, {"truncation", b.truncation}, {"caps", b.caps}, {"cap", b.cap}, {"conjugated", conjugated}};
}

}  // namespace

json to_json(const CoeffVector& v) {
  json c = json::array();
  for (Eigen::Index i = 0; i < v.coeffs.size(); ++i) c.push_back(complex_json(v.coeffs(i)));
  return {{"basis", basis_json(v.basis, v.conjugated)}, {"coeffs", c}};
}

json to_json(const OperatorMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < m.entries.cols(); ++k) r.push_back(complex_json(m.entries(i, k)));
    rows.push_back(r);
  }
  return {{"domain", basis_json(m.domain, m.domain_conjugated)},
          {"codomain", basis_json(m.codomain, m.codomain_conjugated)},
          {"shape", json::array({m.entries.rows(), m.entries.cols()})},
          {"entries", rows}};
}

json to_json(const ScatteringReport& r) {
  json hist = json::array();
  for (const auto& lv : r.refinement_history)
    hist.push_back({{"N", lv.N}, {"quad", lv.quad}, {"J", lv.J}, {"defect", lv.defect}});
  return {{"truncation", r.truncation},
          {"defect", r.unitarity_defect},
          {"block_norms", json::array({r.block_norms[0], r.block_norms[1], r.block_norms[2], r.block_norms[3]})},
          {"refinement_history", hist}};
}

json grunsky_rows(const GrunskyMatrix& g) {
  json rows = json::array();
  for (int j = 0; j < g.caps; ++j)
    for (int k = 0; k < g.caps; ++k)
      for (int m = 1; m <= g.rows; ++m)
        for (int n = 1; n <= g.N; ++n) {
          cplx v = g.block(j, k)(m - 1, n - 1);
          rows.push_back(json::array({j, k, m, n, v.real(), v.imag()}));
        }
  return rows;
}

std::string grunsky_csv(const GrunskyMatrix& g) {
  std::ostringstream os;
  os.precision(17);
  os << "j,k,m,n,re,im\n";
  for (int j = 0; j < g.caps; ++j)
    for (int k = 0; k < g.caps; ++k)
      for (int m = 1; m <= g.rows; ++m)
        for (int n = 1; n <= g.N; ++n) {
          cplx v = g.block(j, k)(m - 1, n - 1);
          os << j << ',' << k << ',' << m << ',' << n << ',' << v.real() << ',' << v.imag() << '\n';
        }
  return os.str();
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) os << (k ? "," : "") << m(i, k);
    os << '\n';
  }
  return os.str();
}

VectorXc parse_complex_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array", 0, 0);
  VectorXc v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], what);
  return v;
}

}  // namespace schiffer
