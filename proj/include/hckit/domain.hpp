#pragma once

// Domains of the Heisenberg group with an adapted coordinate box, the
// corresponding volume element, and deterministic samplers.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hckit/heisenberg.hpp"
#include "hckit/quadrature.hpp"

namespace hckit {

enum class ChartKind {
  kSheared,      ///< (x, y, tau) -> (x + iy, tau - 2xy); Jacobian 1
  kCylindrical,  ///< (r, theta, t); Jacobian r
  kLogarithmic,  ///< (xi, psi, eta); Jacobian (3/4) e^(2 xi)
};

constexpr std::string_view to_string(ChartKind k) {
  switch (k) {
    case ChartKind::kSheared: return "sheared";
    case ChartKind::kCylindrical: return "cylindrical";
    case ChartKind::kLogarithmic: return "logarithmic";
  }
  return "?";
}

using ChartPoint = std::array<double, 3>;

inline HPoint chart_to_point(ChartKind kind, const ChartPoint& u) {
  switch (kind) {
    case ChartKind::kSheared: return {{u[0], u[1]}, u[2] - 2.0 * u[0] * u[1]};
    case ChartKind::kCylindrical: return from_cylindrical({u[0], u[1], u[2]});
    case ChartKind::kLogarithmic: return from_log_coords({u[0], u[1], u[2]});
  }
  return {};
}

inline double chart_jacobian(ChartKind kind, const ChartPoint& u) {
  switch (kind) {
    case ChartKind::kSheared: return 1.0;
    case ChartKind::kCylindrical: return u[0];
    case ChartKind::kLogarithmic: return 0.75 * std::exp(2.0 * u[0]);
  }
  return 0.0;
}

/// Points with |z| below this are excluded from pointwise sampling.
inline constexpr double kAxisTube = 1e-6;

struct NamedDomain {
  std::string id;
  std::function<bool(const HPoint&)> contains;
  ChartKind chart = ChartKind::kSheared;
  std::array<Axis, 3> box;  ///< coordinate ranges; grading marks axis singularities
  std::vector<std::string> boundary;

  HPoint point(const ChartPoint& u) const { return chart_to_point(chart, u); }
  double jacobian(const ChartPoint& u) const { return chart_jacobian(chart, u); }

  /// Integral of g over the domain in the adapted coordinates.
  template <class G>
  double integrate(const G& g, QuadOptions opt = {}) const {
    return integrate_3d([&](const ChartPoint& u) { return g(point(u)) * jacobian(u); }, box, opt);
  }

  double volume() const {
    return integrate_3d([&](const ChartPoint& u) { return jacobian(u); }, box);
  }

  /// n^3 cell-centred points of the coordinate box, off the axis tube.
  std::vector<HPoint> grid(int n) const {
    std::vector<HPoint> out;
    out.reserve(std::size_t(n) * n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const ChartPoint u{lerp(0, (i + 0.5) / n), lerp(1, (j + 0.5) / n), lerp(2, (k + 0.5) / n)};
          const HPoint p = point(u);
          if (std::abs(p.z) >= kAxisTube && contains(p)) out.push_back(p);
        }
    return out;
  }

  /// n points uniform in the coordinate box, off the axis tube.
  std::vector<HPoint> random(std::size_t n, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<HPoint> out;
    out.reserve(n);
    std::size_t attempts = 0;
    while (out.size() < n && attempts < 100 * n + 100) {
      ++attempts;
      const ChartPoint u{lerp(0, unit(rng)), lerp(1, unit(rng)), lerp(2, unit(rng))};
      const HPoint p = point(u);
      if (std::abs(p.z) >= kAxisTube && contains(p)) out.push_back(p);
    }
    return out;
  }

 private:
  double lerp(int axis, double s) const { return box[axis].lo + s * (box[axis].hi - box[axis].lo); }
};

// -- factories ---------------------------------------------------------------------

/// {(z, tau - Im z^2) : 0 < Re z < a, 0 < Im z < b, 0 < tau < c}.
inline NamedDomain sheared_box_domain(double a, double b, double c, std::string id = "ex1_domain") {
  NamedDomain d;
  d.id = std::move(id);
  d.chart = ChartKind::kSheared;
  d.box = {Axis{0, a}, Axis{0, b}, Axis{0, c}};
  d.contains = [a, b, c](const HPoint& p) {
    const double x = p.x(), y = p.y(), tau = p.t + 2 * x * y;
    return x > 0 && x < a && y > 0 && y < b && tau > 0 && tau < c;
  };
  d.boundary = {"Im z = 0", "Im z = b", "Re z = 0", "Re z = a", "tau = 0", "tau = c"};
  return d;
}

/// {0 < t < a, 0 < |z|^2 < b, 0 < arg z < c}.
inline NamedDomain sector_domain(double a, double b, double c, std::string id = "ex2_domain") {
  NamedDomain d;
  d.id = std::move(id);
  d.chart = ChartKind::kCylindrical;
  d.box = {Axis{0, std::sqrt(b), 3, 1}, Axis{0, c}, Axis{0, a}};
  d.contains = [a, b, c](const HPoint& p) {
    const double r2 = std::norm(p.z);
    double arg = std::arg(p.z);
    if (arg < 0) arg += 2 * kPi;
    return p.t > 0 && p.t < a && r2 > 0 && r2 < b && arg > 0 && arg < c;
  };
  d.boundary = {"|z|^2 = 0", "|z|^2 = b", "arg z = 0", "arg z = c", "t = 0", "t = a"};
  return d;
}

/// {0 < t < a, r_in^2 < |z|^2 < r_out^2}, full turn.
inline NamedDomain cylinder_domain(double a, double r2_in, double r2_out, std::string id) {
  NamedDomain d;
  d.id = std::move(id);
  d.chart = ChartKind::kCylindrical;
  d.box = {Axis{std::sqrt(r2_in), std::sqrt(r2_out), r2_in == 0.0 ? 3 : 1, 1}, Axis{0, 2 * kPi}, Axis{0, a}};
  d.contains = [a, r2_in, r2_out](const HPoint& p) {
    const double r2 = std::norm(p.z);
    return p.t > 0 && p.t < a && r2 < r2_out && (r2_in == 0.0 || r2 > r2_in);
  };
  d.boundary = {"t = 0", "t = a", "|z|^2 = " + std::to_string(r2_out)};
  if (r2_in > 0) d.boundary.push_back("|z|^2 = " + std::to_string(r2_in));
  return d;
}

/// C_{a,b} = {|z|^2 < b, 0 < t < a}.
inline NamedDomain cyl_domain(double a, double b) { return cylinder_domain(a, 0.0, b, "cyl_domain"); }

/// D_{a,b} = {0 < t < a, 1 < |z|^2 < b + 1}.
inline NamedDomain d_domain(double a, double b) { return cylinder_domain(a, 1.0, b + 1.0, "d_domain"); }

/// A_r = {1 < ||p|| < r}.
inline NamedDomain annulus_domain(double r) {
  NamedDomain d;
  d.id = "annulus";
  d.chart = ChartKind::kLogarithmic;
  d.box = {Axis{0, 2 * std::log(r)}, Axis{-kPi / 2, kPi / 2}, Axis{0, kEtaPeriod}};
  d.contains = [r](const HPoint& p) {
    const double n = heis_norm(p);
    return n > 1 && n < r;
  };
  d.boundary = {"||p|| = 1", "||p|| = r"};
  return d;
}

}  // namespace hckit
