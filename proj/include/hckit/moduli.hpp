#pragma once

// Curve families, admissible densities, energies and the distortion
// inequalities between the moduli of a family and of its image.
//
// Families are sampled on a cell-centred tensor grid of their parameters; the
// minimum over the grid stands in for the infimum over the family. Energies
// of admissible densities are upper bounds for the modulus; for the extremal
// densities of the catalog they are the modulus itself.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "hckit/domain.hpp"
#include "hckit/errors.hpp"
#include "hckit/parallel.hpp"
#include "hckit/qc.hpp"
#include "hckit/quadrature.hpp"
#include "hckit/trajectories.hpp"

namespace hckit {

struct CurveFamily {
  std::string name;
  std::vector<Axis> params;  ///< parameter ranges (open)
  std::function<ParamCurve(const std::vector<double>&)> generator;
  NamedDomain domain;

  /// One curve per cell centre of an n^d grid.
  std::vector<ParamCurve> curves(int per_param = 64) const {
    const std::size_t d = params.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= std::size_t(per_param);
    std::vector<ParamCurve> out;
    out.reserve(total);
    std::vector<double> v(d);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (std::size_t i = 0; i < d; ++i) {
        const double u = (double(rest % per_param) + 0.5) / per_param;
        rest /= per_param;
        v[i] = params[i].lo + u * (params[i].hi - params[i].lo);
      }
      out.push_back(generator(v));
    }
    return out;
  }

  /// The family of images f(gamma), living in `target`.
  CurveFamily image(const ContactMap& f, NamedDomain target) const {
    auto gen = generator;
    return {f.name + "(" + name + ")", params, [gen, f](const std::vector<double>& v) { return map_curve(f, gen(v)); },
            std::move(target)};
  }
};

struct FamilyCheck {
  double max_legendrian_defect = 0.0;
  std::size_t points_outside = 0;
};

/// Legendrian defect and domain membership at interior points of the sampled curves.
inline FamilyCheck check_family(const CurveFamily& fam, int per_param = 8, int per_curve = 16) {
  FamilyCheck r;
  for (const ParamCurve& c : fam.curves(per_param)) {
    r.max_legendrian_defect = std::max(r.max_legendrian_defect, c.max_legendrian_defect(per_curve));
    for (int i = 1; i < per_curve; ++i)
      if (!fam.domain.contains(c.point(c.s0 + (c.s1 - c.s0) * i / per_curve))) ++r.points_outside;
  }
  return r;
}

/// int rho(gamma(s)) |gamma_1'(s)| ds
inline double line_integral(const Density& rho, const ParamCurve& c, QuadOptions opt = {1e-10, 1e-15, 1, 8}) {
  return integrate_1d([&](double s) { return rho(c.point(s)) * std::abs(c.zdot(s)); }, c.axis(), opt);
}

/// Minimum of the rho-length over the sampled family.
inline double admissibility_margin(const Density& rho, const CurveFamily& fam, int per_param = 64,
                                   QuadOptions opt = {1e-10, 1e-15, 1, 8}) {
  const std::vector<ParamCurve> cs = fam.curves(per_param);
  const auto L = parallel_map<double>(cs.size(), [&](std::size_t i) { return line_integral(rho, cs[i], opt); });
  double m = std::numeric_limits<double>::infinity();
  for (double v : L) m = std::min(m, v);
  return m;
}

/// int rho^4 dL^3
inline double energy(const Density& rho, const NamedDomain& domain, QuadOptions opt = {}) {
  return domain.integrate(
      [&](const HPoint& p) {
        const double r = rho(p);
        return r * r * r * r;
      },
      opt);
}

inline constexpr double kAdmissibilityTol = 1e-9;

/// energy(rho) after checking rho is admissible for the family; an upper
/// bound for M(fam).
inline double modulus_upper_bound(const CurveFamily& fam, const Density& rho, const NamedDomain& domain,
                                  double tol = kAdmissibilityTol, int per_param = 64) {
  const double m = admissibility_margin(rho, fam, per_param);
  if (m < 1.0 - tol)
    fail(ErrorKind::kNotAdmissible, rho.name + " has margin " + std::to_string(m) + " on " + fam.name);
  return energy(rho, domain);
}

// -- distortion inequalities --------------------------------------------------------------

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

inline InequalityCheck make_check(std::string name, double lhs, double rhs, double slack) {
  return {std::move(name), lhs, rhs, lhs <= rhs + slack * std::max(1.0, std::abs(rhs))};
}

struct InequalityOptions {
  double slack = 1e-6;
  double admissibility_tol = kAdmissibilityTol;
  int per_param = 64;
  int K_grid = 64;  ///< K_f is the max over this grid plus K_random points
  std::size_t K_random = 10000;
  std::uint64_t seed = 1;
  QuadOptions quad = {};
};

struct InequalityReport {
  std::string map, family;
  double K = 1.0;
  double margin_src = 0.0, margin_dst = 0.0;
  double M_src = 0.0, M_dst = 0.0;  ///< energies of the two densities
  std::vector<InequalityCheck> checks;

  bool all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.holds; });
  }
};

/// Both moduli are represented by the energies of the supplied densities,
/// which must be admissible for fam and f(fam):
///   M(fam)   <= int_dst K(f^-1(x), f)^2 rho_dst^4
///   M(f fam) <= int_src K(p, f)^2 rho_src^4
///   M(fam) / K^2 <= M(f fam) <= K^2 M(fam)
inline InequalityReport check_distortion_inequalities(const ContactMap& f, const CurveFamily& fam,
                                                      const Density& rho_src, const Density& rho_dst,
                                                      const NamedDomain& domain_src, const NamedDomain& domain_dst,
                                                      const InequalityOptions& opt = {}) {
  if (!f.inverse) fail(ErrorKind::kDomainError, f.name + " has no inverse");
  InequalityReport r;
  r.map = f.name;
  r.family = fam.name;
  r.margin_src = admissibility_margin(rho_src, fam, opt.per_param);
  r.margin_dst = admissibility_margin(rho_dst, fam.image(f, domain_dst), opt.per_param);
  if (r.margin_src < 1.0 - opt.admissibility_tol)
    fail(ErrorKind::kNotAdmissible, rho_src.name + " is not admissible for " + fam.name);
  if (r.margin_dst < 1.0 - opt.admissibility_tol)
    fail(ErrorKind::kNotAdmissible, rho_dst.name + " is not admissible for the image of " + fam.name);

  r.M_src = energy(rho_src, domain_src, opt.quad);
  r.M_dst = energy(rho_dst, domain_dst, opt.quad);
  std::mt19937_64 rng(opt.seed);
  r.K = max_distortion(f, distortion_samples(domain_src, rng, opt.K_grid, opt.K_random)).K;

  const ContactMap& inv = *f.inverse;
  const double pulled = domain_dst.integrate(
      [&](const HPoint& x) {
        const double p = rho_dst(x);
        if (p == 0.0) return 0.0;
        const double K = distortion(f, inv(x));
        return K * K * p * p * p * p;
      },
      opt.quad);
  const double mean = mean_distortion(f, rho_src, domain_src, opt.quad);
  const double K2 = r.K * r.K;

  r.checks.push_back(make_check("M(G) <= int K(f^-1(x),f)^2 rho'^4", r.M_src, pulled, opt.slack));
  r.checks.push_back(make_check("M(fG) <= int K(p,f)^2 rho^4", r.M_dst, mean, opt.slack));
  r.checks.push_back(make_check("M(G)/K^2 <= M(fG)", r.M_src / K2, r.M_dst, opt.slack));
  r.checks.push_back(make_check("M(fG) <= K^2 M(G)", r.M_dst, K2 * r.M_src, opt.slack));
  return r;
}

inline void to_json(nlohmann::json& j, const InequalityCheck& c) {
  j = {{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}};
}

inline void to_json(nlohmann::json& j, const InequalityReport& r) {
  j = {{"map", r.map},       {"family", r.family},         {"K_max", r.K},
       {"margin", r.margin_src}, {"image_margin", r.margin_dst}, {"modulus_upper_bound", r.M_src},
       {"image_modulus_upper_bound", r.M_dst}, {"inequalities", r.checks}, {"holds", r.all_hold()}};
}

}  // namespace hckit
