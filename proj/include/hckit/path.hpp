#pragma once

// Polyline paths in the Heisenberg group and line integrals of 1-forms given
// through their values on the coframe (dz, dzbar, omega).

#include <vector>

#include "hckit/heisenberg.hpp"
#include "hckit/quadrature.hpp"

namespace hckit {

/// Vertices of a polyline, first = start, last = end.
using Path = std::vector<HPoint>;

inline Path straight_path(const HPoint& a, const HPoint& b) { return {a, b}; }

/// Moves x, then y, then t.
inline Path axis_path(const HPoint& a, const HPoint& b) {
  return {a, {{b.x(), a.y()}, a.t}, {b.z, a.t}, b};
}

/// Coframe values on the velocity of the straight segment through p.
struct Coframe {
  cplx dz;
  cplx dzbar;
  double omega;
};

/// omega = dt + 2 (x dy - y dx).
inline Coframe coframe_at(const HPoint& p, const HPoint& velocity) {
  const cplx v = velocity.z;
  return {v, std::conj(v), velocity.t + 2.0 * (p.x() * v.imag() - p.y() * v.real())};
}

inline HPoint segment_point(const HPoint& a, const HPoint& b, double s) {
  return {a.z + s * (b.z - a.z), a.t + s * (b.t - a.t)};
}

/// Integral of form(p, coframe) along the polyline with `panels` Gauss
/// panels per segment.
template <class Form>
cplx line_integral(const Path& path, const Form& form, int panels = 4) {
  cplx total = 0.0;
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    const HPoint a = path[seg], b = path[seg + 1];
    const HPoint vel{b.z - a.z, b.t - a.t};
    const Rule1D rule = composite_rule(Axis{0.0, 1.0}, panels);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const HPoint p = segment_point(a, b, rule.x[i]);
      total += rule.w[i] * form(p, coframe_at(p, vel));
    }
  }
  return total;
}

/// Quadrature nodes used by line_integral (for pre-checks along the path).
inline std::vector<HPoint> path_nodes(const Path& path, int panels = 4) {
  std::vector<HPoint> out;
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    const Rule1D rule = composite_rule(Axis{0.0, 1.0}, panels);
    for (double s : rule.x) out.push_back(segment_point(path[seg], path[seg + 1], s));
  }
  return out;
}

}  // namespace hckit
