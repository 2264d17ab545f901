#pragma once

// Named domains, maps, differentials, families and densities of the worked
// examples, and per-example verification reports.
//
// Examples: ex1 (sheared boxes, dz^2), ex2 (sectors, -4 conj(z)^2), cyl
// (cylinders C_{a,b}), d (cylinders with the core removed), ex3 (spherical
// annuli, -4 conj(z)^2 / Pi^2) and quad (the operators on the catalog
// differentials).

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hckit/domain.hpp"
#include "hckit/errors.hpp"
#include "hckit/families.hpp"
#include "hckit/maps.hpp"
#include "hckit/moduli.hpp"
#include "hckit/parallel.hpp"
#include "hckit/qc.hpp"
#include "hckit/quad_diff.hpp"
#include "hckit/trajectories.hpp"

namespace hckit {

using json = nlohmann::json;

// -- parameters -------------------------------------------------------------------------

struct Params {
  std::optional<double> a = {}, b = {}, c = {}, a_p = {}, b_p = {}, c_p = {}, k = {}, D = {};
};

/// Accepts {"example": ..., "params": {...}} or a bare params object.
inline Params params_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::kInvalidParameters, "parameter file must hold a JSON object");
  const json& p = j.contains("params") ? j.at("params") : j;
  if (!p.is_object()) fail(ErrorKind::kInvalidParameters, "\"params\" must be an object");
  Params out;
  for (const auto& [key, v] : p.items()) {
    if (!v.is_number()) fail(ErrorKind::kInvalidParameters, "parameter " + key + " is not a number");
    const double x = v.get<double>();
    if (key == "a") out.a = x;
    else if (key == "b") out.b = x;
    else if (key == "c") out.c = x;
    else if (key == "a_p") out.a_p = x;
    else if (key == "b_p") out.b_p = x;
    else if (key == "c_p") out.c_p = x;
    else if (key == "k") out.k = x;
    else if (key == "D") out.D = x;
    else fail(ErrorKind::kInvalidParameters, "unknown parameter " + key);
  }
  return out;
}

/// Fully resolved parameters of one example.
struct ExampleParams {
  std::string example;
  double a = 0, b = 0, c = 0, a_p = 0, b_p = 0, c_p = 0, k = 0, D = 0;
};

inline void to_json(json& j, const ExampleParams& p) {
  if (p.example == "ex3") {
    j = {{"a", p.a}, {"k", p.k}, {"D", p.D}};
  } else if (p.example == "quad") {
    j = json::object();
  } else {
    j = {{"a", p.a}, {"b", p.b}, {"a_p", p.a_p}, {"b_p", p.b_p}};
    if (p.example == "ex1" || p.example == "ex2") {
      j["c"] = p.c;
      j["c_p"] = p.c_p;
    }
  }
}

namespace detail {

inline bool same(double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(std::abs(x), std::abs(y)); }

inline void require_positive(std::initializer_list<std::pair<const char*, double>> vals) {
  for (const auto& [name, v] : vals)
    if (!(v > 0.0) || !std::isfinite(v))
      fail(ErrorKind::kParameterConstraintViolated, std::string(name) + " must be positive");
}

}  // namespace detail

/// Defaults per example; the constrained parameter (c' for ex1 and ex2) is
/// derived unless given, and checked when given.
inline ExampleParams resolve(const std::string& example, const Params& p = {}) {
  ExampleParams r;
  r.example = example;
  if (example == "ex1") {
    r.a = p.a.value_or(1.0), r.b = p.b.value_or(2.0), r.c = p.c.value_or(1.5);
    r.a_p = p.a_p.value_or(2.0), r.b_p = p.b_p.value_or(1.5);
    const double cp = r.c * r.a_p * r.b_p / (r.a * r.b);
    r.c_p = p.c_p.value_or(cp);
    detail::require_positive({{"a", r.a}, {"b", r.b}, {"c", r.c}, {"a_p", r.a_p}, {"b_p", r.b_p}, {"c_p", r.c_p}});
    if (!detail::same(r.c_p, cp)) fail(ErrorKind::kParameterConstraintViolated, "c'/c must equal a'b'/(ab)");
  } else if (example == "ex2") {
    r.a = p.a.value_or(2.0), r.b = p.b.value_or(1.0), r.c = p.c.value_or(kPi / 2);
    r.a_p = p.a_p.value_or(3.0), r.b_p = p.b_p.value_or(2.0);
    const double cp = r.b * r.c * r.a_p / (r.a * r.b_p);
    r.c_p = p.c_p.value_or(cp);
    detail::require_positive({{"a", r.a}, {"b", r.b}, {"c", r.c}, {"a_p", r.a_p}, {"b_p", r.b_p}, {"c_p", r.c_p}});
    if (!detail::same(r.c_p, cp)) fail(ErrorKind::kParameterConstraintViolated, "bc/a must equal b'c'/a'");
    if (r.c >= 2 * kPi || r.c_p >= 2 * kPi) fail(ErrorKind::kParameterConstraintViolated, "c and c' must be below 2 pi");
  } else if (example == "cyl") {
    r.a = p.a.value_or(1.0), r.b = p.b.value_or(1.0), r.a_p = p.a_p.value_or(1.5), r.b_p = p.b_p.value_or(2.0);
    detail::require_positive({{"a", r.a}, {"b", r.b}, {"a_p", r.a_p}, {"b_p", r.b_p}});
    if (!(r.a * r.b_p / (r.a_p * r.b) > 1.0)) fail(ErrorKind::kParameterConstraintViolated, "ab'/(a'b) must exceed 1");
  } else if (example == "d") {
    r.a = p.a.value_or(1.0), r.b = p.b.value_or(1.0), r.a_p = p.a_p.value_or(2.0 / 3.0), r.b_p = p.b_p.value_or(3.0);
    detail::require_positive({{"a", r.a}, {"b", r.b}, {"a_p", r.a_p}, {"b_p", r.b_p}});
    if (!(r.a * (r.b_p + 1) / (r.a_p * (r.b + 1)) > 1.0))
      fail(ErrorKind::kParameterConstraintViolated, "a(b'+1)/(a'(b+1)) must exceed 1");
  } else if (example == "ex3") {
    r.a = p.a.value_or(2.0), r.k = p.k.value_or(0.5), r.D = p.D.value_or(0.3);
    detail::require_positive({{"k", r.k}});
    if (!(r.a > 1.0)) fail(ErrorKind::kParameterConstraintViolated, "a must exceed 1");
    if (!std::isfinite(r.D)) fail(ErrorKind::kParameterConstraintViolated, "D must be finite");
  } else if (example == "quad") {
  } else {
    fail(ErrorKind::kUnknownIdentifier, "unknown example " + example);
  }
  return r;
}

/// ab/(b+1) = a'b'/(b'+1): equal hyperbolic areas of the two rectangles.
inline bool d_map_exists(const ExampleParams& p) {
  return detail::same(p.a * p.b / (p.b + 1), p.a_p * p.b_p / (p.b_p + 1));
}

// -- catalog objects --------------------------------------------------------------------------

struct NamedMap {
  std::string id;
  ContactMap map;
  NamedDomain source, target;
  Density density;         ///< extremal density of the source family
  Density target_density;  ///< and of its image
  std::optional<double> horizontal_factor, vertical_factor;
  ExampleParams params;
};

using CatalogObject = std::variant<NamedDomain, NamedMap, QuadDiff, CurveFamily, Density>;

/// Example whose parameters an identifier uses.
inline std::string example_of(const std::string& id) {
  if (id.rfind("ex1_", 0) == 0) return "ex1";
  if (id.rfind("ex2_", 0) == 0 || id == "rho0") return "ex2";
  if (id.rfind("cyl_", 0) == 0) return "cyl";
  if (id.rfind("d_", 0) == 0) return "d";
  if (id == "annulus" || id == "radial_stretch" || id == "gD" || id.rfind("ex3_", 0) == 0) return "ex3";
  if (id == "dz2" || id == "pi_dw2" || id == "pi_dw2_over_w2") return "quad";
  fail(ErrorKind::kUnknownIdentifier, "unknown identifier " + id);
}

inline QuadDiff load_qd(const std::string& id) {
  if (id == "dz2") return qd_dz2();
  if (id == "pi_dw2") return qd_pi_dw2();
  if (id == "pi_dw2_over_w2") return qd_pi_dw2_over_w2();
  fail(ErrorKind::kUnknownIdentifier, "unknown quadratic differential " + id);
}

inline CatalogObject load(const std::string& id, const Params& params = {}) {
  const ExampleParams p = resolve(example_of(id), params);
  if (id == "ex1_domain") return sheared_box_domain(p.a, p.b, p.c);
  if (id == "ex1_f0")
    return NamedMap{id, affine_stretch(p.a_p / p.a, p.b_p / p.b), sheared_box_domain(p.a, p.b, p.c),
                    sheared_box_domain(p.a_p, p.b_p, p.c_p, "ex1_target"), constant_density(1.0),
                    constant_density(1.0), p.a_p / p.a, p.b_p / p.b, p};
  if (id == "ex2_domain") return sector_domain(p.a, p.b, p.c);
  if (id == "ex2_f0")
    return NamedMap{id,
                    sector_map(p.b_p / p.b, p.a_p * p.b / (p.a * p.b_p), p.a_p / p.a),
                    sector_domain(p.a, p.b, p.c),
                    sector_domain(p.a_p, p.b_p, p.c_p, "ex2_target"),
                    ex2_rho0(p.b),
                    ex2_rho0(p.b_p),
                    p.a_p / p.a,
                    std::sqrt(p.b_p / p.b),
                    p};
  if (id == "ex2_radii") return ex2_radii_family(p.a, p.b, p.c);
  if (id == "rho0") return ex2_rho0(p.b);
  if (id == "cyl_domain") return cyl_domain(p.a, p.b);
  if (id == "cyl_f0")
    return NamedMap{id,           cylinder_map(p.a, p.b, p.a_p, p.b_p), cyl_domain(p.a, p.b),
                    cyl_domain(p.a_p, p.b_p), cyl_density(p.a), cyl_density(p.a_p), p.a_p / p.a, std::nullopt, p};
  if (id == "cyl_horizontal") return cyl_horizontal_family(p.a, p.b);
  if (id == "cyl_rho") return cyl_density(p.a);
  if (id == "d_domain") return d_domain(p.a, p.b);
  if (id == "d_f0") {
    if (!d_map_exists(p))
      fail(ErrorKind::kParameterConstraintViolated, "no dilating map: ab/(b+1) != a'b'/(b'+1)");
    return NamedMap{id,           cylinder_map(p.a, p.b + 1, p.a_p, p.b_p + 1, "d_f0"), d_domain(p.a, p.b),
                    d_domain(p.a_p, p.b_p), cyl_density(p.a), cyl_density(p.a_p), p.a_p / p.a, std::nullopt, p};
  }
  if (id == "annulus") return annulus_domain(p.a);
  if (id == "radial_stretch" || id == "gD") {
    const ContactMap m = id == "gD" ? g_D(p.k, p.D) : radial_stretch(p.k);
    const double ak = std::pow(p.a, p.k);
    return NamedMap{id, m, annulus_domain(p.a), annulus_domain(ak), ex3_density(p.a), ex3_density(ak), p.k,
                    std::nullopt, p};
  }
  if (id == "ex3_horizontal") return ex3_horizontal_family(p.a);
  if (id == "ex3_rho") return ex3_density(p.a);
  if (id == "dz2" || id == "pi_dw2" || id == "pi_dw2_over_w2") return load_qd(id);
  fail(ErrorKind::kUnknownIdentifier, "unknown identifier " + id);
}

template <class T>
T load_as(const std::string& id, const Params& params = {}) {
  CatalogObject o = load(id, params);
  if (T* v = std::get_if<T>(&o)) return std::move(*v);
  fail(ErrorKind::kUnknownIdentifier, id + " does not name an object of the requested kind");
}

// -- verification reports -----------------------------------------------------------------------

struct CheckResult {
  std::string name;
  double value = 0.0;
  std::optional<double> expected;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

inline void to_json(json& j, const CheckResult& c) {
  j = {{"name", c.name}, {"value", c.value}, {"tol", c.tol}, {"pass", c.pass}};
  if (c.expected) j["expected"] = *c.expected;
  if (!c.note.empty()) j["note"] = c.note;
}

class Report {
 public:
  /// value <= tol
  void at_most(std::string name, double value, double tol, std::string note = {}) {
    checks_.push_back({std::move(name), value, std::nullopt, tol, value <= tol, std::move(note)});
  }
  /// |value - expected| <= tol (times |expected| when relative)
  void close(std::string name, double value, double expected, double tol, bool relative = false) {
    const double err = std::abs(value - expected), scale = relative ? std::abs(expected) : 1.0;
    checks_.push_back({std::move(name), value, expected, tol, err <= tol * scale, {}});
  }
  void flag(std::string name, bool ok, std::string note = {}) {
    checks_.push_back({std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, ok, std::move(note)});
  }
  void info(std::string name, double value, std::string note = {}) {
    checks_.push_back({std::move(name), value, std::nullopt, 0.0, true, std::move(note)});
  }
  /// Runs a group of checks; an exception becomes a failed check.
  template <class Fn>
  void run(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      checks_.push_back({name, 0.0, std::nullopt, 0.0, false, e.what()});
    }
  }

  bool pass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.pass; });
  }
  const std::vector<CheckResult>& checks() const { return checks_; }
  const CheckResult* find(const std::string& name) const {
    for (const CheckResult& c : checks_)
      if (c.name == name) return &c;
    return nullptr;
  }

 private:
  std::vector<CheckResult> checks_;
};

struct VerifyOptions {
  double tol = 1e-6;        ///< closed-form values: dilation factors, moduli, q-lengths
  double trace_tol = 1e-5;  ///< traced vs closed-form trajectories
  int grid = 32;            ///< pointwise checks on grid^3 domain points
  int trajectories = 24;
  std::uint64_t seed = 1;
};

struct VerifyResult {
  std::string example;
  ExampleParams params;
  Report report;
  bool pass() const { return report.pass(); }
};

inline json to_json(const VerifyResult& r) {
  return {{"example", r.example}, {"params", r.params}, {"checks", r.report.checks()}, {"pass", r.pass()}};
}

namespace detail {

struct MapStats {
  double contact = 0, lambda_imag = 0, beltrami2 = 0, mu = 0;
  double lambda_min = 1e300, lambda_max = -1e300, K_min = 1e300, K_max = 0;
  std::size_t outside = 0, samples = 0;
};

/// Pointwise contact, Beltrami and distortion statistics over the sample.
inline MapStats map_stats(const ContactMap& f, const std::vector<HPoint>& pts, const NamedDomain& target) {
  struct One {
    double contact, lambda_re, lambda_im, b2, mu, K;
    bool inside;
  };
  const auto v = parallel_map<One>(pts.size(), [&](std::size_t i) {
    const HPoint& p = pts[i];
    const ContactDefect d = contact_defect(f, p);
    const Beltrami b = beltrami(f, p);
    const double K = distortion(f, p);
    return One{d.norm(), d.lambda.real(), std::abs(d.lambda.imag()), b.second_equation_defect, std::abs(b.mu), K,
               target.contains(f(p))};
  });
  MapStats s;
  s.samples = v.size();
  for (const One& o : v) {
    s.contact = std::max(s.contact, o.contact);
    s.lambda_imag = std::max(s.lambda_imag, o.lambda_im);
    s.lambda_min = std::min(s.lambda_min, o.lambda_re);
    s.lambda_max = std::max(s.lambda_max, o.lambda_re);
    s.beltrami2 = std::max(s.beltrami2, o.b2);
    s.mu = std::max(s.mu, o.mu);
    s.K_min = std::min(s.K_min, o.K);
    s.K_max = std::max(s.K_max, o.K);
    if (!o.inside) ++s.outside;
  }
  return s;
}

inline MapStats common_map_checks(Report& rep, const std::string& tag, const ContactMap& f, const NamedDomain& src,
                                  const NamedDomain& dst, const VerifyOptions& opt) {
  MapStats s;
  rep.run(tag + ".pointwise", [&] {
    s = map_stats(f, src.grid(opt.grid), dst);
    rep.at_most(tag + ".contact_defect_max", s.contact, 1e-8);
    rep.at_most(tag + ".lambda_imag_max", s.lambda_imag, 1e-10);
    rep.at_most(tag + ".beltrami_second_equation_max", s.beltrami2, 1e-8);
    rep.at_most(tag + ".mu_max", s.mu, 1.0 - 1e-12, "|mu| < 1 on the sample");
    rep.at_most(tag + ".images_outside_target", double(s.outside), 0.0);
    rep.info(tag + ".samples", double(s.samples));
  });
  return s;
}

/// Max over the curves of |ratio - expected|, requiring the image kind.
inline void dilation_checks(Report& rep, const std::string& name, const ContactMap& f, const QuadDiff& q,
                            const std::vector<ParamCurve>& curves, double expected, TrajectoryKind kind,
                            const VerifyOptions& opt) {
  rep.run(name, [&] {
    const auto d = parallel_map<Dilation>(curves.size(), [&](std::size_t i) { return dilation_factor(f, q, q, curves[i]); });
    double worst = 0.0, at = expected;
    std::size_t wrong_kind = 0;
    for (const Dilation& x : d) {
      if (std::abs(x.ratio - expected) >= worst) worst = std::abs(x.ratio - expected), at = x.ratio;
      if (x.source_kind != kind || x.image_kind != kind) ++wrong_kind;
    }
    rep.close(name, at, expected, opt.tol, true);
    rep.at_most(name + ".wrong_kind", double(wrong_kind), 0.0, to_string(kind) + " trajectories to " + to_string(kind));
    rep.info(name + ".trajectories", double(curves.size()));
  });
}

/// sup over curves and samples of |f(c(s)) - image(c)(phi(s))|.
template <class Image>
void parametric_check(Report& rep, const std::string& name, const ContactMap& f, const std::vector<ParamCurve>& curves,
                      Image image, double tol) {
  rep.run(name, [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const ParamCurve& c = curves[i];
      for (int j = 1; j < 64; ++j) {
        const double s = c.s0 + (c.s1 - c.s0) * j / 64;
        worst = std::max(worst, euclid_dist(f(c.point(s)), image(i, s)));
      }
    }
    rep.at_most(name, worst, tol);
  });
}

inline TraceOptions trace_along(TrajectoryKind mode, cplx dir) {
  TraceOptions o;
  o.mode = mode;
  o.initial_direction = dir;
  return o;
}

/// Traces from the start of `ref` (RK4, step 1e-3, 1000 steps) and compares.
inline void trace_check(Report& rep, const std::string& name, const QuadDiff& q, const ParamCurve& ref,
                        TrajectoryKind mode, const VerifyOptions& opt) {
  rep.run(name, [&] {
    const TraceResult r = trace(q, ref.point(ref.s0), trace_along(mode, ref.zdot(ref.s0)));
    rep.flag(name + ".complete", r.complete(), r.message);
    rep.at_most(name + ".sup_distance", align_and_compare(r.curve, ref), opt.trace_tol);
  });
}

inline double log_dist(const HPoint& p, const LogCoords& want) { return euclid_dist(p, from_log_coords(want)); }

}  // namespace detail

// -- per example -----------------------------------------------------------------------------

inline void verify_ex1(const ExampleParams& p, Report& rep, const VerifyOptions& opt) {
  const NamedMap m = load_as<NamedMap>("ex1_f0", {.a = p.a, .b = p.b, .c = p.c, .a_p = p.a_p, .b_p = p.b_p, .c_p = p.c_p});
  const double A = p.a_p / p.a, B = p.b_p / p.b;
  const detail::MapStats s = detail::common_map_checks(rep, "f0", m.map, m.source, m.target, opt);
  rep.close("f0.lambda_min", s.lambda_min, A * B, 1e-10);
  rep.close("f0.lambda_max", s.lambda_max, A * B, 1e-10);
  rep.close("f0.K_min", s.K_min, std::max(A, B) / std::min(A, B), 1e-10);
  rep.close("f0.K_max", s.K_max, std::max(A, B) / std::min(A, B), 1e-10);

  const QuadDiff q = qd_dz2();
  const int n = opt.trajectories;
  std::vector<ParamCurve> hor, ver;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    const double y = p.b * u, t = 0.1 * p.c;
    // t + 4ys stays in (0, c)
    hor.push_back(closed_form::ex1_horizontal(y, t, 0.0, std::min(p.a, 0.9 * (p.c - t) / (4 * y))));
    ver.push_back(closed_form::ex1_vertical(p.a * u, p.c * (0.2 + 0.6 * u), 0.0, p.b));
  }
  detail::dilation_checks(rep, "f0.horizontal_dilation", m.map, q, hor, A, TrajectoryKind::kHorizontal, opt);
  detail::dilation_checks(rep, "f0.vertical_dilation", m.map, q, ver, B, TrajectoryKind::kVertical, opt);
  rep.run("f0.q_length", [&] { rep.close("f0.vertical_q_length", q_length(q, ver[0]), p.b, opt.tol, true); });

  detail::trace_check(rep, "trace.horizontal", q, closed_form::ex1_horizontal(0.6, -0.2, 0.0, 2.0),
                      TrajectoryKind::kHorizontal, opt);
  detail::trace_check(rep, "trace.vertical", q, closed_form::ex1_vertical(0.3, -0.2, 0.0, 2.0),
                      TrajectoryKind::kVertical, opt);
}

inline void verify_ex2(const ExampleParams& p, Report& rep, const VerifyOptions& opt) {
  const NamedMap m = load_as<NamedMap>("ex2_f0", {.a = p.a, .b = p.b, .c = p.c, .a_p = p.a_p, .b_p = p.b_p, .c_p = p.c_p});
  const double beta = p.a_p * p.b / (p.a * p.b_p), alpha = p.a_p / p.a, rho = std::sqrt(p.b_p / p.b);
  const detail::MapStats s = detail::common_map_checks(rep, "f0", m.map, m.source, m.target, opt);
  rep.close("f0.lambda_min", s.lambda_min, alpha, 1e-10);
  rep.close("f0.lambda_max", s.lambda_max, alpha, 1e-10);
  const double K2 = std::max(beta * beta, 1.0 / (beta * beta));
  rep.close("f0.K2_min", s.K_min * s.K_min, K2, 1e-8);
  rep.close("f0.K2_max", s.K_max * s.K_max, K2, 1e-8);

  const QuadDiff q = qd_pi_dw2();
  const int n = opt.trajectories;
  std::vector<ParamCurve> hor, ver;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    const double r = std::sqrt(p.b) * (0.1 + 0.85 * u), th = 0.9 * p.c;
    // arg z - s/(2|z|^2) stays in (0, c)
    hor.push_back(closed_form::ex2_horizontal(std::polar(r, th), 0.0, std::min(p.a, 2 * r * r * 0.8 * th)));
    ver.push_back(closed_form::ex2_radius(std::polar(1.0, p.c * u), p.a * (0.1 + 0.8 * u), 0.0, std::sqrt(p.b)));
  }
  detail::dilation_checks(rep, "f0.horizontal_dilation", m.map, q, hor, alpha, TrajectoryKind::kHorizontal, opt);
  // q-lengths of radii scale by b'/b; points along them move by sqrt(b'/b)
  detail::dilation_checks(rep, "f0.vertical_q_length_ratio", m.map, q, ver, p.b_p / p.b, TrajectoryKind::kVertical,
                          opt);
  detail::parametric_check(
      rep, "f0.vertical_parametric_factor", m.map, ver,
      [&](std::size_t i, double s) {
        const double th = p.c * (i + 0.5) / n, t = p.a * (0.1 + 0.8 * (i + 0.5) / n);
        return closed_form::ex2_radius(std::polar(1.0, beta * th), alpha * t, 0, 1).point(rho * s);
      },
      1e-10);
  rep.info("f0.vertical_parametric_factor_value", rho, "f0(delta(s)) = delta'(sqrt(b'/b) s)");
  detail::parametric_check(
      rep, "f0.horizontal_parametric", m.map, hor,
      [&](std::size_t i, double s) {
        const cplx z = hor[i].point(0.0).z;
        const cplx zp = rho * std::abs(z) * std::polar(1.0, beta * std::arg(z));
        return closed_form::ex2_horizontal(zp, 0, 1).point(alpha * s);
      },
      1e-10);

  rep.run("modulus", [&] {
    const CurveFamily fam = ex2_radii_family(p.a, p.b, p.c);
    rep.close("modulus.margin", admissibility_margin(ex2_rho0(p.b), fam), 1.0, 1e-9);
    rep.close("modulus.energy", energy(ex2_rho0(p.b), m.source), ex2_modulus(p.a, p.b, p.c), opt.tol, true);
    rep.close("modulus.image_energy", energy(ex2_rho0(p.b_p), m.target), ex2_modulus(p.a_p, p.b_p, p.c_p), opt.tol,
              true);
  });
  rep.run("inequalities", [&] {
    InequalityOptions io;
    io.per_param = 32;
    io.K_grid = 16;
    io.K_random = 2000;
    io.seed = opt.seed;
    const InequalityReport r = check_distortion_inequalities(m.map, ex2_radii_family(p.a, p.b, p.c), ex2_rho0(p.b),
                                                             ex2_rho0(p.b_p), m.source, m.target, io);
    for (const InequalityCheck& c : r.checks) rep.flag("inequality: " + c.name, c.holds);
    const InequalityCheck& tight = beta >= 1 ? r.checks[3] : r.checks[2];
    rep.close("inequality.equality_case", tight.lhs, tight.rhs, opt.tol, true);
  });

  const cplx u = std::polar(1.0, 0.9);
  detail::trace_check(rep, "trace.vertical", q, closed_form::ex2_radius(u, 0.5, 0.2, 5.0), TrajectoryKind::kVertical,
                      opt);
  detail::trace_check(rep, "trace.horizontal", q, closed_form::ex2_horizontal({0.7, 0.5}, 0.0, 10.0),
                      TrajectoryKind::kHorizontal, opt);
}

inline std::vector<ParamCurve> cyl_horizontal_curves(double a, double r2_lo, double r2_hi, int n) {
  std::vector<ParamCurve> out;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    const double r = std::sqrt(r2_lo + (r2_hi - r2_lo) * (0.05 + 0.9 * u));
    out.push_back(closed_form::ex2_horizontal(std::polar(r, 2 * kPi * u), 0.0, a));
  }
  return out;
}

inline void verify_cyl(const ExampleParams& p, Report& rep, const VerifyOptions& opt) {
  const NamedMap m = load_as<NamedMap>("cyl_f0", {.a = p.a, .b = p.b, .a_p = p.a_p, .b_p = p.b_p});
  const double kappa = p.a * p.b_p / (p.a_p * p.b), alpha = p.a_p / p.a;
  detail::common_map_checks(rep, "f0", m.map, m.source, m.target, opt);
  rep.run("f0.radicand", [&] {
    double lo = 1e300;
    for (const HPoint& x : m.source.grid(opt.grid)) lo = std::min(lo, (1 - kappa) * std::norm(x.z) + p.a * p.b_p / p.a_p);
    lo = std::min(lo, (1 - kappa) * p.b + p.a * p.b_p / p.a_p);  // the closure
    rep.info("f0.radicand_min", lo, "(1 - ab'/(a'b))|z|^2 + ab'/a' on the closed domain");
    rep.flag("f0.radicand_positive", lo > 0);
  });

  const QuadDiff q = qd_pi_dw2();
  const int n = opt.trajectories;
  const std::vector<ParamCurve> hor = cyl_horizontal_curves(p.a, 0.0, p.b, n);
  std::vector<ParamCurve> ver;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    ver.push_back(closed_form::ex2_radius(std::polar(1.0, 2 * kPi * u), p.a * (0.05 + 0.9 * u), 0.0, std::sqrt(p.b)));
  }
  rep.run("q_length", [&] {
    double worst = 0.0, at = p.a;
    for (const ParamCurve& c : hor) {
      const double L = q_length(q, c);
      if (std::abs(L - p.a) >= worst) worst = std::abs(L - p.a), at = L;
    }
    rep.close("q_length.horizontal", at, p.a, opt.tol);
  });
  detail::dilation_checks(rep, "f0.horizontal_dilation", m.map, q, hor, alpha, TrajectoryKind::kHorizontal, opt);
  const auto zprime = [&](cplx z) { return std::sqrt(p.b_p) * z / std::sqrt((1 - kappa) * std::norm(z) + p.a * p.b_p / p.a_p); };
  detail::parametric_check(
      rep, "f0.horizontal_parametric", m.map, hor,
      [&](std::size_t i, double s) { return closed_form::ex2_horizontal(zprime(hor[i].point(0).z), 0, 1).point(alpha * s); },
      1e-10);
  detail::parametric_check(
      rep, "f0.vertical_parametric", m.map, ver,
      [&](std::size_t i, double s) {
        const HPoint o = ver[i].point(1.0);
        const double t = o.t;
        const cplx zp = o.z * std::polar(1.0, t * (1 - 1 / kappa) / (2 * p.b));
        const double sp = std::abs(zprime(s));
        return closed_form::ex2_radius(zp, alpha * t, 0, 1).point(sp);
      },
      1e-10);
  rep.run("f0.vertical_kind", [&] {
    std::size_t wrong = 0;
    for (const ParamCurve& c : ver)
      if (classify(q, map_curve(m.map, c)) != TrajectoryKind::kVertical) ++wrong;
    rep.at_most("f0.vertical_images_not_vertical", double(wrong), 0.0);
  });
  rep.run("modulus", [&] {
    const CurveFamily fam = cyl_horizontal_family(p.a, p.b);
    rep.close("modulus.margin", admissibility_margin(cyl_density(p.a), fam), 1.0, 1e-9);
    rep.close("modulus.energy", energy(cyl_density(p.a), m.source), cyl_density_energy(p.a, p.b), opt.tol, true);
  });
}

inline void verify_d(const ExampleParams& p, Report& rep, const VerifyOptions& opt) {
  const bool exists = d_map_exists(p);
  rep.info("existence.lhs", p.a * p.b / (p.b + 1), "ab/(b+1)");
  rep.info("existence.rhs", p.a_p * p.b_p / (p.b_p + 1), "a'b'/(b'+1)");
  if (!exists) {
    rep.info("exists", 0.0, "no dilating map exists per paper");
    return;
  }
  rep.info("exists", 1.0);
  const NamedMap m = load_as<NamedMap>("d_f0", {.a = p.a, .b = p.b, .a_p = p.a_p, .b_p = p.b_p});
  detail::common_map_checks(rep, "f0", m.map, m.source, m.target, opt);
  rep.run("f0.boundary", [&] {
    double inner = 0.0, outer = 0.0;
    for (int i = 0; i < 32; ++i)
      for (int j = 1; j < 8; ++j) {
        const double th = 2 * kPi * i / 32, t = p.a * j / 8;
        inner = std::max(inner, std::abs(std::norm(m.map(HPoint{std::polar(1.0, th), t}).z) - 1.0));
        outer = std::max(outer, std::abs(std::norm(m.map(HPoint{std::polar(std::sqrt(p.b + 1), th), t}).z) - (p.b_p + 1)));
      }
    rep.at_most("f0.inner_boundary", inner, 1e-10, "|z|^2 = 1 to |z'|^2 = 1");
    rep.at_most("f0.outer_boundary", outer, 1e-10, "|z|^2 = b+1 to |z'|^2 = b'+1");
  });
  const std::vector<ParamCurve> hor = cyl_horizontal_curves(p.a, 1.0, p.b + 1, opt.trajectories);
  detail::dilation_checks(rep, "f0.horizontal_dilation", m.map, qd_pi_dw2(), hor, p.a_p / p.a,
                          TrajectoryKind::kHorizontal, opt);
}

inline void verify_ex3(const ExampleParams& p, Report& rep, const VerifyOptions& opt) {
  const NamedMap fk = load_as<NamedMap>("radial_stretch", {.a = p.a, .k = p.k, .D = p.D});
  const NamedMap gd = load_as<NamedMap>("gD", {.a = p.a, .k = p.k, .D = p.D});
  detail::common_map_checks(rep, "fk", fk.map, fk.source, fk.target, opt);
  detail::common_map_checks(rep, "gD", gd.map, gd.source, gd.target, opt);

  const QuadDiff q = qd_pi_dw2_over_w2();
  const int n = opt.trajectories;
  const double L = 2 * std::log(p.a);
  std::vector<ParamCurve> hor, ver;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    hor.push_back(closed_form::ex3_horizontal(kPi * u, std::polar(1.0, 2 * kPi * u), 0.0, L));
    ver.push_back(closed_form::ex3_vertical(L * u, std::polar(1.0, 2 * kPi * u), 0.05, kPi - 0.05));
  }
  detail::dilation_checks(rep, "fk.horizontal_dilation", fk.map, q, hor, p.k, TrajectoryKind::kHorizontal, opt);
  detail::dilation_checks(rep, "gD.horizontal_dilation", gd.map, q, hor, p.k, TrajectoryKind::kHorizontal, opt);
  rep.run("fk.vertical_kind", [&] {
    std::size_t wrong = 0;
    for (const ParamCurve& c : ver)
      if (classify(q, map_curve(fk.map, c)) != TrajectoryKind::kVertical) ++wrong;
    rep.at_most("fk.vertical_images_not_vertical", double(wrong), 0.0);
  });

  // log-coordinate forms: gamma~(s) = (s, psi, eta - tan(psi) s / 3), delta~(s) = (xi, s, eta)
  rep.run("log_forms", [&] {
    double h = 0.0, v = 0.0;
    for (std::size_t i = 0; i < hor.size(); ++i) {
      const LogCoords c0 = to_log_coords(hor[i].point(0.0));
      for (int j = 1; j < 32; ++j) {
        const double s = L * j / 32;
        h = std::max(h, detail::log_dist(hor[i].point(s), {s, c0.psi, c0.eta - std::tan(c0.psi) * s / 3}));
      }
      const LogCoords d0 = to_log_coords(ver[i].point(kPi / 2));
      for (int j = 1; j < 32; ++j) {
        const double s = 0.05 + (kPi - 0.1) * j / 32;
        const HPoint x = ver[i].point(s);
        v = std::max(v, detail::log_dist(x, {d0.xi, to_log_coords(x).psi, d0.eta}));
      }
    }
    rep.at_most("log_form.horizontal", h, 1e-6);
    rep.at_most("log_form.vertical", v, 1e-6);
  });
  rep.run("log_parametric", [&] {
    double fh = 0.0, gh = 0.0, fv = 0.0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const double psi = -kPi / 2 + kPi * (i + 0.5) / 8, eta = kEtaPeriod * (j + 0.5) / 8;
        for (int m = 1; m < 16; ++m) {
          const double s = L * m / 16;
          const HPoint x = from_log_coords({s, psi, eta - std::tan(psi) * s / 3});
          const double pk = std::atan(std::tan(psi) / p.k), pd = std::atan(std::tan(psi) / p.k + p.D);
          fh = std::max(fh, detail::log_dist(fk.map(x), {p.k * s, pk, eta - std::tan(pk) * p.k * s / 3}));
          gh = std::max(gh, detail::log_dist(gd.map(x), {p.k * s, pd, eta - std::tan(pd) * p.k * s / 3}));
          const double xi = L * (i + 0.5) / 8, sv = -kPi / 2 + kPi * m / 16;
          fv = std::max(fv, detail::log_dist(fk.map(from_log_coords({xi, sv, eta})),
                                             {p.k * xi, std::atan(std::tan(sv) / p.k), eta}));
        }
      }
    rep.at_most("fk.horizontal_parametric", fh, 1e-8);
    rep.at_most("gD.horizontal_parametric", gh, 1e-8);
    rep.at_most("fk.vertical_parametric", fv, 1e-8);
  });

  rep.run("rotation", [&] {
    const ContactMap R = rotation(0.7);
    const ContactMap fr = compose(fk.map, R), gr = compose(gd.map, R);
    const double m0 = mean_distortion(fk.map, fk.density, fk.source), m1 = mean_distortion(fr, fk.density, fk.source);
    rep.close("fk.mean_distortion_rotation", m1, m0, 1e-8, true);
    double dc = 0.0;
    std::mt19937_64 rng(opt.seed);
    for (const HPoint& x : gd.source.random(200, rng))
      dc = std::max(dc, std::abs(contact_defect(gr, x).norm() - contact_defect(gd.map, x).norm()));
    rep.at_most("gD.rotation_contact_change", dc, 1e-8);
    double dd = 0.0;
    for (std::size_t i = 0; i < hor.size(); i += 4)
      dd = std::max(dd, std::abs(dilation_factor(gr, q, q, hor[i]).ratio - dilation_factor(gd.map, q, q, hor[i]).ratio));
    rep.at_most("gD.rotation_dilation_change", dd, 1e-8);
  });

  rep.run("modulus", [&] {
    const CurveFamily fam = ex3_horizontal_family(p.a);
    rep.close("modulus.margin", admissibility_margin(ex3_density(p.a), fam), 1.0, 1e-9);
    rep.close("modulus.energy", energy(ex3_density(p.a), fk.source), ex3_modulus(p.a), opt.tol, true);
  });
  rep.run("inequalities", [&] {
    InequalityOptions io;
    io.per_param = 32;
    io.K_grid = 16;
    io.K_random = 2000;
    io.seed = opt.seed;
    const double ak = std::pow(p.a, p.k);
    const InequalityReport r = check_distortion_inequalities(fk.map, ex3_horizontal_family(p.a), ex3_density(p.a),
                                                             ex3_density(ak), fk.source, fk.target, io);
    for (const InequalityCheck& c : r.checks) rep.flag("inequality: " + c.name, c.holds);
    rep.info("fk.mean_distortion", r.checks[1].rhs);
  });

  const ParamCurve href = closed_form::ex3_horizontal(1.2, std::polar(1.0, 2.0), 0.0, 5.0);
  detail::trace_check(rep, "trace.horizontal", q, href, TrajectoryKind::kHorizontal, opt);
  detail::trace_check(rep, "trace.vertical", q, closed_form::ex3_vertical(0.5, kI, kPi / 2, kPi - 1e-3),
                      TrajectoryKind::kVertical, opt);
}

// -- operators ------------------------------------------------------------------------------

/// Random points of [-1.5, 1.5]^3 with |Pi| > 0.1.
inline std::vector<HPoint> operator_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<HPoint> out;
  while (out.size() < n) {
    const HPoint p{{u(rng), u(rng)}, u(rng)};
    if (std::abs(cr_projection(p)) > 0.1) out.push_back(p);
  }
  return out;
}

struct OperatorStats {
  double D2prime_max = 0, D2second_max = 0, B2_max = 0, B2_min = 1e300;
};

inline OperatorStats operator_stats(const QuadDiff& q, const std::vector<HPoint>& pts) {
  const ScalarField a = D2prime(q), b = D2second(q), c = B2(q);
  struct One {
    double a, b, c;
  };
  const auto v = parallel_map<One>(pts.size(), [&](std::size_t i) {
    return One{std::abs(a(pts[i])), std::abs(b(pts[i])), std::abs(c(pts[i]))};
  });
  OperatorStats s;
  for (const One& o : v) {
    s.D2prime_max = std::max(s.D2prime_max, o.a);
    s.D2second_max = std::max(s.D2second_max, o.b);
    s.B2_max = std::max(s.B2_max, o.c);
    s.B2_min = std::min(s.B2_min, o.c);
  }
  return s;
}

inline void verify_quad(Report& rep, const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  const std::vector<HPoint> pts = operator_points(rng, 1000);
  for (const char* id : {"dz2", "pi_dw2", "pi_dw2_over_w2"}) {
    const QuadDiff q = load_qd(id);
    rep.run(std::string(id) + ".operators", [&] {
      const OperatorStats s = operator_stats(q, pts);
      rep.at_most(std::string(id) + ".D2prime_max", s.D2prime_max, 1e-9);
      rep.at_most(std::string(id) + ".D2second_max", s.D2second_max, 1e-9);
      rep.info(std::string(id) + ".B2_max", s.B2_max);
    });
  }
  rep.run("pi_dw2.B2_closed_form", [&] {
    const ScalarField b = B2(qd_pi_dw2());
    double worst = 0.0;
    for (const HPoint& p : pts) worst = std::max(worst, std::abs(b(p) - 64.0 * p.z * p.z * std::conj(p.z)));
    rep.at_most("pi_dw2.B2_minus_64z2zbar", worst, 1e-10);
  });
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<std::pair<std::string, ContactMap>> maps = {
      {"translation", left_translation({{u(rng), u(rng)}, u(rng)})},
      {"rotation", rotation(0.7)},
      {"dilation", dilation(1.6)}};
  for (const char* id : {"dz2", "pi_dw2", "pi_dw2_over_w2"}) {
    const QuadDiff q = load_qd(id);
    for (const auto& [name, g] : maps)
      rep.run(std::string(id) + ".naturality." + name, [&] {
        std::vector<HPoint> ok;
        for (const HPoint& p : pts)
          if (std::abs(cr_projection(g(p))) > 0.1) ok.push_back(p);
        rep.at_most(std::string(id) + ".naturality." + name, naturality_defect(q, g, ok), 1e-8);
      });
  }
}

inline VerifyResult verify(const std::string& example, const Params& params = {}, const VerifyOptions& opt = {}) {
  VerifyResult r;
  r.example = example;
  r.params = resolve(example, params);
  if (example == "ex1") verify_ex1(r.params, r.report, opt);
  else if (example == "ex2") verify_ex2(r.params, r.report, opt);
  else if (example == "cyl") verify_cyl(r.params, r.report, opt);
  else if (example == "d") verify_d(r.params, r.report, opt);
  else if (example == "ex3") verify_ex3(r.params, r.report, opt);
  else if (example == "quad") verify_quad(r.report, opt);
  return r;
}

}  // namespace hckit
