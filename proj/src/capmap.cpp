#include "schiffer/capmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace schiffer {

Mobius Mobius::after(const Mobius& in) const {
  return {a * in.a + b * in.c, a * in.b + b * in.d, c * in.a + d * in.c, c * in.b + d * in.d};
}

std::optional<cplx> Mobius::pole() const {
  if (c == cplx{}) return std::nullopt;
  return -d / c;
}

bool Mobius::is_identity() const {
  return b == cplx{} && c == cplx{} && a == d && a != cplx{};
}

namespace {

cplx horner(const std::vector<cplx>& q, cplx w) {
  cplx acc{};
  for (auto it = q.rbegin(); it != q.rend(); ++it) acc = acc * w + *it;
  return acc;
}

cplx horner_derivative(const std::vector<cplx>& q, cplx w) {
  cplx acc{};
  for (std::size_t k = q.size(); k-- > 1;) acc = acc * w + double(k) * q[k];
  return acc;
}

int default_series_order(int N) { return std::max(64, 6 * N + 16); }

}  // namespace

CapMap::CapMap(CapSpec spec, Mobius chart, int series_order)
    : spec_(std::move(spec)), chart_(chart) {
  if (spec_.coeffs.empty() || spec_.coeffs.front() == cplx{})
    throw UnivalenceViolation("cap map has vanishing linear coefficient a1");
  q_.reserve(spec_.coeffs.size() + 1);
  q_.push_back(spec_.at_infinity ? cplx{} : spec_.center);
  q_.insert(q_.end(), spec_.coeffs.begin(), spec_.coeffs.end());
  effective_ = spec_.at_infinity ? chart_.after(Mobius{spec_.center, 1.0, 1.0, 0.0}) : chart_;

  cplx den0 = effective_.c * q_[0] + effective_.d;
  if (den0 == cplx{}) {
    center_ = cplx{std::numeric_limits<double>::infinity(), 0.0};
    return;
  }
  center_ = effective_(q_[0]);
  int L = std::max(series_order, 2);
  TruncatedSeries q = TruncatedSeries::power(q_, L);
  TruncatedSeries num = effective_.a * q + TruncatedSeries::constant(effective_.b, L);
  if (effective_.c == cplx{}) {
    series_ = (1.0 / effective_.d) * num;
  } else {
    TruncatedSeries den = effective_.c * q + TruncatedSeries::constant(effective_.d, L);
    series_ = divide(num, den);
  }
  dseries_ = schiffer::derivative(series_);
}

cplx CapMap::operator()(cplx w) const { return effective_(horner(q_, w)); }

cplx CapMap::derivative(cplx w) const {
  cplx qw = horner(q_, w);
  cplx den = effective_.c * qw + effective_.d;
  return effective_.determinant() * horner_derivative(q_, w) / (den * den);
}

cplx CapMap::a1() const { return derivative(0.0); }

CapMap CapMap::post_composed(const Mobius& m) const {
  return CapMap(spec_, m.after(chart_), series_.trunc());
}

CapMap CapMap::with_series_order(int order) const { return CapMap(spec_, chart_, order); }

std::vector<cplx> boundary_polygon(const CapMap& cap, int samples) {
  if (samples < 1) throw PreconditionError("boundary_polygon: samples must be positive");
  std::vector<cplx> p(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) p[static_cast<std::size_t>(j)] = cap(std::polar(1.0, 2.0 * pi * j / samples));
  return p;
}

int winding_number(const std::vector<cplx>& polygon, cplx point) {
  double total = 0.0;
  std::size_t M = polygon.size();
  for (std::size_t j = 0; j < M; ++j) {
    cplx u = polygon[j] - point;
    cplx v = polygon[(j + 1) % M] - point;
    total += std::arg(v / u);
  }
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

bool point_in_polygon(const std::vector<cplx>& polygon, cplx point) {
  return winding_number(polygon, point) != 0;
}

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
  double d1 = cross(q2 - q1, p1 - q1);
  double d2 = cross(q2 - q1, p2 - q1);
  double d3 = cross(p2 - p1, q1 - p1);
  double d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_segment = [](cplx a, cplx b, cplx p) {
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
  };
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  cplx ab = b - a;
  double len2 = std::norm(ab);
  double t = len2 > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0) : 0.0;
  return std::abs(p - (a + t * ab));
}

double point_polygon_distance(cplx p, const std::vector<cplx>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < poly.size(); ++j)
    best = std::min(best, point_segment_distance(p, poly[j], poly[(j + 1) % poly.size()]));
  return best;
}

}  // namespace

bool polygon_is_simple(const std::vector<cplx>& polygon) {
  std::size_t M = polygon.size();
  if (M < 3) return false;
  // bounding boxes prune most pairs
  std::vector<double> xmin(M), xmax(M), ymin(M), ymax(M);
  for (std::size_t i = 0; i < M; ++i) {
    cplx a = polygon[i], b = polygon[(i + 1) % M];
    xmin[i] = std::min(a.real(), b.real());
    xmax[i] = std::max(a.real(), b.real());
    ymin[i] = std::min(a.imag(), b.imag());
    ymax[i] = std::max(a.imag(), b.imag());
  }
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = i + 2; j < M; ++j) {
      if (i == 0 && j == M - 1) continue;
      if (xmax[i] < xmin[j] || xmax[j] < xmin[i] || ymax[i] < ymin[j] || ymax[j] < ymin[i]) continue;
      if (segments_cross(polygon[i], polygon[(i + 1) % M], polygon[j], polygon[(j + 1) % M]))
        return false;
    }
  }
  return true;
}

double polygon_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (cplx p : a) best = std::min(best, point_polygon_distance(p, b));
  for (cplx p : b) best = std::min(best, point_polygon_distance(p, a));
  return best;
}

namespace {

double max_derivative(const CapMap& cap, int M) {
  double m = 0.0;
  for (int j = 0; j < M; ++j) m = std::max(m, std::abs(cap.derivative(std::polar(1.0, 2.0 * pi * j / M))));
  return m;
}

void validate(CapComplex& cx) {
  int M = cx.samples;
  if (M < 16) throw PreconditionError("at least 16 boundary samples are required");
  cx.polygons.clear();
  std::vector<double> dmax;
  for (int k = 0; k < cx.n(); ++k) {
    const CapMap& cap = cx.caps[static_cast<std::size_t>(k)];
    std::string tag = "cap " + std::to_string(k) + ": ";
    std::vector<cplx> dvals(static_cast<std::size_t>(M));
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int j = 0; j < M; ++j) {
      cplx d = cap.derivative(std::polar(1.0, 2.0 * pi * j / M));
      dvals[static_cast<std::size_t>(j)] = d;
      lo = std::min(lo, std::abs(d));
      hi = std::max(hi, std::abs(d));
    }
    if (!(lo > 1e-10 * hi)) throw UnivalenceViolation(tag + "derivative vanishes on the boundary");
    if (winding_number(dvals, 0.0) != 0)
      throw UnivalenceViolation(tag + "derivative has zeros inside the disk");
    std::vector<cplx> poly = boundary_polygon(cap, M);
    if (!polygon_is_simple(poly)) throw UnivalenceViolation(tag + "boundary curve self-intersects");
    if (winding_number(poly, cap.center()) != 1)
      throw UnivalenceViolation(tag + "boundary curve does not wind once around the center");
    cx.polygons.push_back(std::move(poly));
    dmax.push_back(hi);
  }
  for (int j = 0; j < cx.n(); ++j) {
    for (int k = j + 1; k < cx.n(); ++k) {
      const auto& pj = cx.polygons[static_cast<std::size_t>(j)];
      const auto& pk = cx.polygons[static_cast<std::size_t>(k)];
      std::string tag = "caps " + std::to_string(j) + " and " + std::to_string(k) + ": ";
      if (point_in_polygon(pk, cx.caps[static_cast<std::size_t>(j)].center()) ||
          point_in_polygon(pj, cx.caps[static_cast<std::size_t>(k)].center()))
        throw OverlapViolation(tag + "one cap contains the other");
      double margin = 10.0 * (2.0 * pi / M) * std::max(dmax[static_cast<std::size_t>(j)], dmax[static_cast<std::size_t>(k)]);
      double dist = polygon_distance(pj, pk);
      if (!(dist > margin))
        throw OverlapViolation(tag + "closures too close (distance " + std::to_string(dist) +
                               ", margin " + std::to_string(margin) + ")");
    }
  }
}

// Point of the complement farthest from every boundary curve, searched on a grid
// in the raw chart where one cap surrounds infinity.
std::pair<cplx, double> deepest_point(const std::vector<CapMap>& raw, int inf_index) {
  constexpr int coarse = 256;
  std::vector<std::vector<cplx>> polys;
  for (const auto& cap : raw) {
    std::vector<cplx> p(coarse);
    for (int j = 0; j < coarse; ++j) {
      cplx w = std::polar(1.0, 2.0 * pi * j / coarse);
      if (cap.spec().at_infinity) {
        cplx g{};
        for (auto it = cap.spec().coeffs.rbegin(); it != cap.spec().coeffs.rend(); ++it) g = (g + *it) * w;
        if (g == cplx{}) throw UnivalenceViolation("cap at infinity passes through its pole");
        p[static_cast<std::size_t>(j)] = cap.spec().center + 1.0 / g;
      } else {
        p[static_cast<std::size_t>(j)] = cap(w);
      }
    }
    polys.push_back(std::move(p));
  }
  const auto& outer = polys[static_cast<std::size_t>(inf_index)];
  double x0 = outer[0].real(), x1 = x0, y0 = outer[0].imag(), y1 = y0;
  for (cplx z : outer) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  constexpr int grid = 97;
  cplx best{};
  double best_d = -1.0;
  for (int a = 1; a < grid; ++a) {
    for (int b = 1; b < grid; ++b) {
      cplx z{x0 + (x1 - x0) * a / grid, y0 + (y1 - y0) * b / grid};
      if (!point_in_polygon(outer, z)) continue;
      bool inside_cap = false;
      for (std::size_t k = 0; k < polys.size(); ++k)
        if (static_cast<int>(k) != inf_index && point_in_polygon(polys[k], z)) inside_cap = true;
      if (inside_cap) continue;
      double d = std::numeric_limits<double>::infinity();
      for (const auto& p : polys) d = std::min(d, point_polygon_distance(z, p));
      if (d > best_d) {
        best_d = d;
        best = z;
      }
    }
  }
  if (best_d <= 0.0) throw OverlapViolation("complement of the caps is empty");
  return {best, best_d};
}

}  // namespace

CapComplex build_complex(const std::vector<CapSpec>& specs, const BuildOptions& opts) {
  if (specs.empty()) throw PreconditionError("at least one cap is required");
  if (opts.truncation < 1) throw PreconditionError("truncation must be at least 1");
  int L = opts.series_order > 0 ? opts.series_order : default_series_order(opts.truncation);
  int inf_index = -1;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    if (specs[k].coeffs.empty() || specs[k].coeffs.front() == cplx{})
      throw UnivalenceViolation("cap " + std::to_string(k) + ": vanishing linear coefficient a1");
    if (specs[k].at_infinity) {
      if (inf_index >= 0) throw PreconditionError("at most one cap may be the chart at infinity");
      inf_index = static_cast<int>(k);
    }
  }
  CapComplex cx;
  cx.truncation = opts.truncation;
  cx.samples = opts.samples;
  if (inf_index >= 0) {
    std::vector<CapMap> raw;
    for (const auto& s : specs) raw.emplace_back(s, Mobius{}, 2);
    auto [q, s] = deepest_point(raw, inf_index);
    cx.normalization = Mobius{0.0, s, 1.0, -q};
  }
  for (const auto& s : specs) cx.caps.emplace_back(s, cx.normalization, L);
  validate(cx);
  return cx;
}

CapComplex build_complex(const std::vector<CapSpec>& specs, int truncation, int samples) {
  return build_complex(specs, BuildOptions{truncation, samples, 0});
}

CapComplex transform(const CapComplex& cx, const Mobius& m) {
  if (m.determinant() == cplx{}) throw PreconditionError("degenerate Möbius map");
  if (auto p = m.pole()) {
    for (std::size_t k = 0; k < cx.caps.size(); ++k)
      if (point_in_polygon(cx.polygons[k], *p)) throw PreconditionError("Möbius pole lies inside a cap");
  }
  CapComplex out;
  out.truncation = cx.truncation;
  out.samples = cx.samples;
  out.normalization = m.after(cx.normalization);
  for (const auto& cap : cx.caps) out.caps.push_back(cap.post_composed(m));
  validate(out);
  return out;
}

CapComplex with_truncation(const CapComplex& cx, int truncation) {
  CapComplex out = cx;
  out.truncation = truncation;
  int L = default_series_order(truncation);
  for (auto& cap : out.caps)
    if (cap.series_order() < L) cap = cap.with_series_order(L);
  return out;
}

void gauss_radial(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw PreconditionError("quadrature order must be at least 1");
  // Golub-Welsch for Jacobi(0,1) on [-1,1], mapped to r in [0,1]
  Eigen::VectorXd diag(order), sub(std::max(order - 1, 0));
  for (int n = 0; n < order; ++n) diag(n) = 1.0 / ((2.0 * n + 1.0) * (2.0 * n + 3.0));
  for (int n = 1; n < order; ++n) sub(n - 1) = std::sqrt(n * (n + 1.0)) / (2.0 * n + 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  nodes.resize(static_cast<std::size_t>(order));
  weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double v0 = es.eigenvectors()(0, i);
    nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 + es.eigenvalues()(i));
    weights[static_cast<std::size_t>(i)] = 0.5 * v0 * v0;
  }
}

QuadratureRule gauss_area_rule(int radial_order, int angular_order) {
  if (radial_order < 1 || angular_order < 1) throw PreconditionError("quadrature orders must be at least 1");
  QuadratureRule rule;
  rule.radial_order = radial_order;
  rule.angular_order = angular_order;
  std::vector<double> r, w;
  gauss_radial(radial_order, r, w);
  double dtheta = 2.0 * pi / angular_order;
  for (int j = 0; j < angular_order; ++j) {
    double theta = dtheta * j;
    rule.contour_nodes.push_back({theta, dtheta});
    for (int i = 0; i < radial_order; ++i)
      rule.area_nodes.push_back({std::polar(r[static_cast<std::size_t>(i)], theta), w[static_cast<std::size_t>(i)] * dtheta});
  }
  return rule;
}

}  // namespace schiffer
