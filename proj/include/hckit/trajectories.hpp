#pragma once

// Legendrian curves, horizontal and vertical trajectories of a quadratic
// differential, and q-lengths.
//
// A curve is either analytic (ParamCurve: point and horizontal velocity as
// functions of the parameter) or sampled (LegendrianCurve). Between samples a
// sampled curve is interpolated by a cubic Hermite polynomial in z, with t
// recovered from the Legendrian constraint t' = -2 Im(conj(z) z').

#include <charconv>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hckit/errors.hpp"
#include "hckit/heisenberg.hpp"
#include "hckit/qc.hpp"
#include "hckit/quad_diff.hpp"
#include "hckit/quadrature.hpp"

namespace hckit {

/// t' of a Legendrian curve through z with horizontal velocity zdot.
inline double legendrian_tdot(cplx z, cplx zdot) { return -2.0 * std::imag(std::conj(z) * zdot); }

struct CurveSample {
  double s = 0.0;
  HPoint p;
  cplx zdot;
};

namespace detail {

/// Cubic Hermite interpolation of z on one segment, u in [0,1].
struct HermiteSegment {
  cplx z0, z1, d0, d1;
  double t0 = 0.0;
  double h = 0.0;

  HermiteSegment(const CurveSample& a, const CurveSample& b)
      : z0(a.p.z), z1(b.p.z), d0(a.zdot), d1(b.zdot), t0(a.p.t), h(b.s - a.s) {}

  cplx z(double u) const {
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * z0 + (u3 - 2 * u2 + u) * h * d0 + (-2 * u3 + 3 * u2) * z1 + (u3 - u2) * h * d1;
  }
  /// dz/ds
  cplx dz(double u) const {
    const double u2 = u * u;
    return ((6 * u2 - 6 * u) * z0 + (3 * u2 - 4 * u + 1) * h * d0 + (-6 * u2 + 6 * u) * z1 + (3 * u2 - 2 * u) * h * d1) / h;
  }
  /// t(u) from the Legendrian constraint; 3-point Gauss is exact for the
  /// degree-5 integrand.
  double t(double u) const {
    static const double x[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)}, w[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double v = 0.5 * u * (x[k] + 1.0);
      acc += w[k] * legendrian_tdot(z(v), dz(v));
    }
    return t0 + 0.5 * u * h * acc;
  }
  HPoint point(double u) const { return {z(u), t(u)}; }
};

template <class F>
double gauss_on_unit(const F& f) {
  const Rule1D& r = reference_rule();
  double s = 0.0;
  for (std::size_t k = 0; k < r.x.size(); ++k) s += 0.5 * r.w[k] * f(0.5 * (r.x[k] + 1.0));
  return s;
}

}  // namespace detail

/// Ordered samples of a Legendrian curve.
struct LegendrianCurve {
  std::vector<CurveSample> samples;

  bool empty() const { return samples.empty(); }
  double s0() const { return samples.empty() ? 0.0 : samples.front().s; }
  double s1() const { return samples.empty() ? 0.0 : samples.back().s; }

  /// Per-sample defect |t(s_i+1) - t(s_i) + int 2 Im(conj(z) z')| / h of the
  /// adjacent segments (worst of the two).
  std::vector<double> legendrian_defects() const {
    std::vector<double> out(samples.size(), 0.0);
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const detail::HermiteSegment seg(samples[i], samples[i + 1]);
      if (seg.h == 0.0) continue;
      const double d = std::abs(seg.t(1.0) - samples[i + 1].p.t) / std::abs(seg.h);
      out[i] = std::max(out[i], d);
      out[i + 1] = std::max(out[i + 1], d);
    }
    return out;
  }

  double max_legendrian_defect() const {
    double m = 0.0;
    for (double d : legendrian_defects()) m = std::max(m, d);
    return m;
  }
};

/// A curve given in closed form.
struct ParamCurve {
  std::string name;
  std::function<HPoint(double)> point;
  std::function<cplx(double)> zdot;
  double s0 = 0.0;
  double s1 = 1.0;
  int grade_lo = 1;  ///< quadrature grading towards s0, for densities singular there
  int grade_hi = 1;

  Axis axis() const { return {s0, s1, grade_lo, grade_hi}; }

  /// n + 1 equally spaced samples.
  LegendrianCurve sample(int n) const {
    LegendrianCurve c;
    for (int i = 0; i <= n; ++i) {
      const double s = n == 0 ? s0 : s0 + (s1 - s0) * i / n;
      c.samples.push_back({s, point(s), zdot(s)});
    }
    return c;
  }

  double max_legendrian_defect(int n = 64) const {
    double m = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double s = s0 + (s1 - s0) * i / n;
      const HPoint p = point(s);
      const double h = 1e-5 * std::max(1.0, std::abs(s1 - s0));
      const double tdot = (point(s + h).t - point(s - h).t) / (2 * h);
      m = std::max(m, std::abs(tdot - legendrian_tdot(p.z, zdot(s))));
    }
    return m;
  }
};

/// Lift of a planar curve: t(s) = t0 - int_{s0}^{s} 2 Im(conj(z) z').
inline ParamCurve legendrian_lift(std::function<cplx(double)> z, std::function<cplx(double)> zdot, double t0,
                                  double s0, double s1, std::string name = "lift") {
  auto t_of = [z, zdot, t0, s0](double s) {
    if (s == s0) return t0;
    return t0 + integrate_1d([&](double u) { return legendrian_tdot(z(u), zdot(u)); }, Axis{s0, s},
                             QuadOptions{1e-13, 1e-15, 1, 8});
  };
  return {std::move(name), [z, t_of](double s) { return HPoint{z(s), t_of(s)}; }, zdot, s0, s1};
}

/// Legendrian lift through Pi(z,t) = t + i|z|^2 of a curve w(s) in the upper
/// half plane starting above alpha (|alpha| = 1):
///   z(s) = sqrt(Im w) alpha e^(i phi(s)),  phi' = -Re w' / (2 Im w).
inline ParamCurve pi_lift(std::function<cplx(double)> w, std::function<cplx(double)> wdot, cplx alpha, double s0,
                          double s1, std::string name = "pi_lift") {
  auto phi = [w, wdot, s0](double s) {
    if (s == s0) return 0.0;
    return integrate_1d([&](double u) { return -wdot(u).real() / (2.0 * w(u).imag()); }, Axis{s0, s},
                        QuadOptions{1e-13, 1e-15, 1, 8});
  };
  auto z = [w, alpha, phi](double s) { return std::sqrt(w(s).imag()) * alpha * std::polar(1.0, phi(s)); };
  return {std::move(name), [w, z](double s) { return HPoint{z(s), w(s).real()}; },
          [w, wdot, z](double s) {
            const double v = w(s).imag();
            const cplx dw = wdot(s);
            return z(s) * cplx(dw.imag() / (2.0 * v), -dw.real() / (2.0 * v));
          },
          s0, s1};
}

// -- classification -----------------------------------------------------------------

enum class TrajectoryKind { kHorizontal, kVertical, kNeither };

inline std::string to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::kHorizontal: return "horizontal";
    case TrajectoryKind::kVertical: return "vertical";
    case TrajectoryKind::kNeither: return "neither";
  }
  return "?";
}

inline constexpr double kClassifyTol = 1e-6;

/// q(gamma') = q(gamma) zdot^2.
inline cplx q_on_tangent(const QuadDiff& q, const HPoint& p, cplx zdot) { return q(p) * zdot * zdot; }

inline TrajectoryKind classify_value(cplx v, double tol = kClassifyTol) {
  if (std::abs(v.imag()) > tol * std::max(1.0, std::abs(v.real()))) return TrajectoryKind::kNeither;
  if (v.real() > 0) return TrajectoryKind::kHorizontal;
  if (v.real() < 0) return TrajectoryKind::kVertical;
  return TrajectoryKind::kNeither;
}

inline TrajectoryKind classify(const QuadDiff& q, const std::vector<CurveSample>& samples, double tol = kClassifyTol) {
  std::optional<TrajectoryKind> kind;
  for (const CurveSample& c : samples) {
    const TrajectoryKind k = classify_value(q_on_tangent(q, c.p, c.zdot), tol);
    if (k == TrajectoryKind::kNeither || (kind && *kind != k)) return TrajectoryKind::kNeither;
    kind = k;
  }
  return kind.value_or(TrajectoryKind::kNeither);
}

inline TrajectoryKind classify(const QuadDiff& q, const LegendrianCurve& c, double tol = kClassifyTol) {
  return classify(q, c.samples, tol);
}

/// Checks interior points only, so curves may end on zeros of q.
inline TrajectoryKind classify(const QuadDiff& q, const ParamCurve& c, int n = 64, double tol = kClassifyTol) {
  std::vector<CurveSample> samples;
  for (int i = 0; i < n; ++i) {
    const double s = c.s0 + (c.s1 - c.s0) * (i + 0.5) / n;
    samples.push_back({s, c.point(s), c.zdot(s)});
  }
  return classify(q, samples, tol);
}

// -- tracing ------------------------------------------------------------------------

enum class TraceStatus { kComplete, kHitZero, kLeftDomain };

inline std::string to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::kComplete: return "complete";
    case TraceStatus::kHitZero: return "HitZero";
    case TraceStatus::kLeftDomain: return "LeftDomain";
  }
  return "?";
}

struct TraceOptions {
  TrajectoryKind mode = TrajectoryKind::kHorizontal;
  int orientation = 1;  ///< +1 or -1: which of the two unit directions to start along
  double step = 1e-3;
  int n_steps = 1000;
  double zero_floor = 1e-9;
  std::optional<cplx> initial_direction;  ///< overrides the default start direction
  DomainPredicate domain;                 ///< extra domain restriction
};

struct TraceResult {
  LegendrianCurve curve;
  TraceStatus status = TraceStatus::kComplete;
  std::string message;

  bool complete() const { return status == TraceStatus::kComplete; }
};

/// Fixed-step RK4 along the unit-speed direction field
///   zdot = e^(i theta), 2 theta = -arg q (horizontal) or pi - arg q (vertical),
/// choosing at each evaluation the root closest to the previous direction.
inline TraceResult trace(const QuadDiff& q, const HPoint& start, const TraceOptions& opt = {}) {
  if (opt.mode == TrajectoryKind::kNeither) fail(ErrorKind::kDomainError, "trace mode must be horizontal or vertical");
  const double shift = opt.mode == TrajectoryKind::kHorizontal ? 0.0 : kPi;

  struct Stop {
    TraceStatus status;
    std::string why;
  };
  auto inside = [&](const HPoint& p) { return q.coeff.in_domain(p) && (!opt.domain || opt.domain(p)); };
  // returns zdot with direction nearest theta_ref, or a stop reason
  auto direction = [&](const HPoint& p, double theta_ref, double& theta) -> std::optional<Stop> {
    if (!inside(p)) return Stop{TraceStatus::kLeftDomain, "left the domain"};
    const cplx qv = q(p);
    if (!(std::abs(qv) >= opt.zero_floor)) return Stop{TraceStatus::kHitZero, "|q| below floor"};
    const double phi = 0.5 * (shift - std::arg(qv));
    theta = phi + kPi * std::round((theta_ref - phi) / kPi);
    return std::nullopt;
  };

  TraceResult r;
  double theta = 0.0;
  {
    double ref = 0.0;
    if (opt.initial_direction) {
      ref = std::arg(*opt.initial_direction);
    } else if (inside(start) && std::abs(q(start)) >= opt.zero_floor) {
      ref = 0.5 * (shift - std::arg(q(start)));
    }
    if (opt.orientation < 0) ref += kPi;
    if (auto stop = direction(start, ref, theta)) {
      r.status = stop->status;
      r.message = stop->why + " at the start point";
      return r;
    }
  }

  HPoint p = start;
  double s = 0.0;
  r.curve.samples.push_back({s, p, std::polar(1.0, theta)});
  const double h = opt.step;
  for (int n = 0; n < opt.n_steps; ++n) {
    double th[4];
    HPoint stage = p;
    std::optional<Stop> stop;
    cplx kz[4];
    double kt[4];
    double ref = theta;
    for (int k = 0; k < 4 && !stop; ++k) {
      if (k > 0) {
        const double c = k == 3 ? h : 0.5 * h;
        stage = {p.z + c * kz[k - 1], p.t + c * kt[k - 1]};
      }
      stop = direction(stage, ref, th[k]);
      if (stop) break;
      ref = th[k];
      kz[k] = std::polar(1.0, th[k]);
      kt[k] = legendrian_tdot(stage.z, kz[k]);
    }
    if (!stop) {
      const HPoint next{p.z + h / 6 * (kz[0] + 2.0 * kz[1] + 2.0 * kz[2] + kz[3]),
                        p.t + h / 6 * (kt[0] + 2 * kt[1] + 2 * kt[2] + kt[3])};
      double th_next = 0.0;
      stop = direction(next, th[3], th_next);
      if (!stop) {
        p = next;
        s += h;
        theta = th_next;
        r.curve.samples.push_back({s, p, std::polar(1.0, theta)});
        continue;
      }
    }
    r.status = stop->status;
    r.message = stop->why + " after " + std::to_string(n) + " steps";
    break;
  }
  return r;
}

// -- lengths ------------------------------------------------------------------------

/// int sqrt|q(gamma)| |zdot| ds for a closed-form curve.
inline double q_length(const QuadDiff& q, const ParamCurve& c, QuadOptions opt = {1e-12, 1e-15, 1, 8}) {
  if (c.s1 == c.s0) return 0.0;
  return integrate_1d([&](double s) { return std::sqrt(std::abs(q(c.point(s)))) * std::abs(c.zdot(s)); }, c.axis(),
                      opt);
}

/// Same for a sampled curve, integrating the Hermite interpolant per segment.
inline double q_length(const QuadDiff& q, const LegendrianCurve& c) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < c.samples.size(); ++i) {
    const detail::HermiteSegment seg(c.samples[i], c.samples[i + 1]);
    total += std::abs(seg.h) * detail::gauss_on_unit([&](double u) {
      return std::sqrt(std::abs(q(seg.point(u)))) * std::abs(seg.dz(u));
    });
  }
  return total;
}

/// int |zdot| ds
inline double horizontal_length(const LegendrianCurve& c) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < c.samples.size(); ++i) {
    const detail::HermiteSegment seg(c.samples[i], c.samples[i + 1]);
    total += std::abs(seg.h) * detail::gauss_on_unit([&](double u) { return std::abs(seg.dz(u)); });
  }
  return total;
}

/// s -> f(c(s)). The image velocity is Z f1 zdot + Zbar f1 conj(zdot), exact for
/// Legendrian c.
inline ParamCurve map_curve(const ContactMap& f, const ParamCurve& c) {
  return {f.name + "(" + c.name + ")", [f, c](double s) { return f(c.point(s)); },
          [f, c](double s) {
            const MapDerivatives d = derivatives(f, c.point(s));
            const cplx v = c.zdot(s);
            return d.Zf1 * v + d.Zbarf1 * std::conj(v);
          },
          c.s0, c.s1, c.grade_lo, c.grade_hi};
}

struct Dilation {
  double ratio = 0.0;         ///< l_q'(f(c)) / l_q(c)
  double source_length = 0.0;
  double image_length = 0.0;
  TrajectoryKind source_kind = TrajectoryKind::kNeither;
  TrajectoryKind image_kind = TrajectoryKind::kNeither;
};

/// Ratio of q-lengths of f(c) and c. c should be a trajectory of q_src; the
/// image must classify as a trajectory of q_dst.
inline Dilation dilation_factor(const ContactMap& f, const QuadDiff& q_src, const QuadDiff& q_dst, const ParamCurve& c) {
  Dilation d;
  d.source_kind = classify(q_src, c);
  const ParamCurve image = map_curve(f, c);
  d.image_kind = classify(q_dst, image);
  if (d.image_kind == TrajectoryKind::kNeither)
    fail(ErrorKind::kImageNotTrajectory, f.name + " maps " + c.name + " to a curve that is not a trajectory of " + q_dst.name);
  d.source_length = q_length(q_src, c);
  d.image_length = q_length(q_dst, image);
  d.ratio = d.image_length / d.source_length;
  return d;
}

// -- comparison -------------------------------------------------------------------

/// Cumulative horizontal arclength at each sample.
inline std::vector<double> cumulative_arclength(const LegendrianCurve& c) {
  std::vector<double> out(c.samples.size(), 0.0);
  for (std::size_t i = 0; i + 1 < c.samples.size(); ++i) {
    const detail::HermiteSegment seg(c.samples[i], c.samples[i + 1]);
    out[i + 1] = out[i] + std::abs(seg.h) * detail::gauss_on_unit([&](double u) { return std::abs(seg.dz(u)); });
  }
  return out;
}

/// Sup over samples of the Euclidean distance between the traced point at
/// horizontal arclength L and the point of `ref` at the same arclength from
/// ref.s0. Samples beyond the end of `ref` are ignored.
inline double align_and_compare(const LegendrianCurve& traced, const ParamCurve& ref) {
  const std::vector<double> L = cumulative_arclength(traced);
  const Rule1D& rule = detail::reference_rule();
  auto arc = [&](double a, double b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.x.size(); ++k)
      sum += rule.w[k] * std::abs(ref.zdot(0.5 * (a + b) + 0.5 * (b - a) * rule.x[k]));
    return 0.5 * (b - a) * sum;
  };
  double s = ref.s0, done = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < traced.samples.size(); ++i) {
    // advance s so that done + arc(s_prev, s) = L[i]
    const double s_prev = s;
    double next = s;
    for (int it = 0; it < 50; ++it) {
      const double err = done + arc(s_prev, next) - L[i];
      const double step = err / std::abs(ref.zdot(next));
      next -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(next))) break;
    }
    if ((ref.s1 - ref.s0) * (next - ref.s1) > 0) break;
    done += arc(s_prev, next);
    s = next;
    worst = std::max(worst, euclid_dist(traced.samples[i].p, ref.point(s)));
  }
  return worst;
}

// -- export -------------------------------------------------------------------------

namespace detail {
inline void put_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}
}  // namespace detail

inline constexpr const char* kCurveCsvHeader = "s,re_z,im_z,t,re_zdot,im_zdot,legendrian_defect";

/// CSV with the curve-export columns; '.' decimals regardless of locale.
inline void write_csv(std::ostream& os, const LegendrianCurve& c) {
  std::string out = kCurveCsvHeader;
  out += '\n';
  const auto defects = c.legendrian_defects();
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const CurveSample& x = c.samples[i];
    for (double v : {x.s, x.p.x(), x.p.y(), x.p.t, x.zdot.real(), x.zdot.imag(), defects[i]}) {
      detail::put_double(out, v);
      out += ',';
    }
    out.back() = '\n';
  }
  os << out;
}

}  // namespace hckit
