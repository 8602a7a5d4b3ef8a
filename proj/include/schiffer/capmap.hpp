#pragma once

#include <optional>
#include <vector>

#include "schiffer/common.hpp"
#include "schiffer/series.hpp"

namespace schiffer {

// z -> (a z + b) / (c z + d)
struct Mobius {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
  cplx determinant() const { return a * d - b * c; }
  // this ∘ inner
  Mobius after(const Mobius& inner) const;
  std::optional<cplx> pole() const;
  bool is_identity() const;
};

// User-facing description of one cap. For a bounded cap the map is
// center + sum coeffs[k-1] z^k. For the chart at infinity the coefficients
// describe 1 / (zeta - center) = sum coeffs[k-1] z^k, so the cap is a
// neighbourhood of infinity.
struct CapSpec {
  cplx center{};
  std::vector<cplx> coeffs;
  bool at_infinity = false;
};

// A univalent map of the unit disk, stored as a polynomial q followed by a
// Möbius map so that evaluation stays exact after renormalization.
class CapMap {
 public:
  CapMap(CapSpec spec, Mobius chart = {}, int series_order = 64);

  cplx operator()(cplx w) const;
  cplx derivative(cplx w) const;
  // image of the puncture w = 0
  cplx center() const { return center_; }
  cplx a1() const;

  const CapSpec& spec() const { return spec_; }
  const Mobius& chart() const { return chart_; }
  const Mobius& effective() const { return effective_; }
  int series_order() const { return series_.trunc(); }
  // Taylor series of the map at 0, exponents 0 .. series_order-1
  const TruncatedSeries& series() const { return series_; }
  const TruncatedSeries& derivative_series() const { return dseries_; }

  CapMap post_composed(const Mobius& m) const;
  CapMap with_series_order(int order) const;

 private:
  CapSpec spec_;
  Mobius chart_;
  Mobius effective_;
  std::vector<cplx> q_;  // polynomial coefficients, q_[k] of w^k
  cplx center_;
  TruncatedSeries series_;
  TruncatedSeries dseries_;
};

std::vector<cplx> boundary_polygon(const CapMap& cap, int samples);

struct CapComplex {
  std::vector<CapMap> caps;
  int truncation = 8;
  int samples = 1024;
  // map from the user's coordinate to the working chart
  Mobius normalization;
  std::vector<std::vector<cplx>> polygons;

  int n() const { return static_cast<int>(caps.size()); }
};

struct BuildOptions {
  int truncation = 8;
  int samples = 1024;
  int series_order = 0;  // 0 selects a default from the truncation
};

CapComplex build_complex(const std::vector<CapSpec>& specs, const BuildOptions& opts);
CapComplex build_complex(const std::vector<CapSpec>& specs, int truncation, int samples = 1024);
// Post-compose every cap with m (pole must lie in the complement) and revalidate.
CapComplex transform(const CapComplex& cx, const Mobius& m);
// Same caps, different truncation.
CapComplex with_truncation(const CapComplex& cx, int truncation);

struct AreaNode {
  cplx point;
  double weight;
};

struct ContourNode {
  double angle;
  double weight;
};

struct QuadratureRule {
  int radial_order = 0;
  int angular_order = 0;
  std::vector<AreaNode> area_nodes;       // on the unit disk, shared by all caps
  std::vector<ContourNode> contour_nodes;  // on the unit circle
};

QuadratureRule gauss_area_rule(int radial_order, int angular_order);

// Gauss-Jacobi nodes/weights on [0,1] for the weight r.
void gauss_radial(int order, std::vector<double>& nodes, std::vector<double>& weights);

// Polygon helpers used for validation.
int winding_number(const std::vector<cplx>& polygon, cplx point);
bool point_in_polygon(const std::vector<cplx>& polygon, cplx point);
bool polygon_is_simple(const std::vector<cplx>& polygon);
double polygon_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace schiffer
