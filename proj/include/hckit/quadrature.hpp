#pragma once

// Composite Gauss-Legendre quadrature in one and three dimensions with
// power grading towards endpoints and a panel-doubling convergence test.
//
// Grading maps v in [0,1] to u = v^m (towards the lower end) or
// u = 1 - (1-v)^m (towards the upper end), which turns integrands behaving
// like |x - endpoint|^(-1/3) into smooth ones for m = 3.

#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "hckit/errors.hpp"
#include "hckit/parallel.hpp"

namespace hckit {

inline constexpr int kGaussPoints = 16;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int grade_lo = 1;  ///< power of the grading towards lo (1 = none)
  int grade_hi = 1;  ///< power of the grading towards hi
};

struct QuadOptions {
  double rel_tol = 1e-7;
  double abs_tol = 1e-14;
  int initial_panels = 1;
  int max_doublings = 6;
};

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

namespace detail {

/// The 16-point Gauss-Legendre rule on [-1, 1] (Boost stores half the rule).
inline const Rule1D& reference_rule() {
  static const Rule1D rule = [] {
    using G = boost::math::quadrature::gauss<double, kGaussPoints>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    Rule1D r;
    for (std::size_t i = a.size(); i-- > 0;) {
      if (a[i] == 0.0) continue;
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
    }
    return r;
  }();
  return rule;
}

/// u(v) and u'(v) on [0,1] for the grading of `axis`.
inline std::pair<double, double> grade(const Axis& axis, double v) {
  const int mlo = axis.grade_lo, mhi = axis.grade_hi;
  if (mlo > 1 && mhi > 1) {
    if (v < 0.5) return {0.5 * std::pow(2 * v, mlo), mlo * std::pow(2 * v, mlo - 1)};
    return {1.0 - 0.5 * std::pow(2 * (1 - v), mhi), mhi * std::pow(2 * (1 - v), mhi - 1)};
  }
  if (mlo > 1) return {std::pow(v, mlo), mlo * std::pow(v, mlo - 1)};
  if (mhi > 1) return {1.0 - std::pow(1 - v, mhi), mhi * std::pow(1 - v, mhi - 1)};
  return {v, 1.0};
}

}  // namespace detail

/// Nodes and weights of the composite rule with `panels` equal panels in the
/// graded variable, including the grading Jacobian.
inline Rule1D composite_rule(const Axis& axis, int panels) {
  const Rule1D& ref = detail::reference_rule();
  Rule1D r;
  r.x.reserve(ref.x.size() * panels);
  r.w.reserve(ref.x.size() * panels);
  const double len = axis.hi - axis.lo;
  for (int p = 0; p < panels; ++p) {
    const double v0 = double(p) / panels, hv = 0.5 / panels;
    for (std::size_t k = 0; k < ref.x.size(); ++k) {
      const double v = v0 + hv * (ref.x[k] + 1.0);
      const auto [u, du] = detail::grade(axis, v);
      r.x.push_back(axis.lo + len * u);
      r.w.push_back(ref.w[k] * hv * du * len);
    }
  }
  return r;
}

template <class F>
double apply_rule(const F& f, const Rule1D& rule) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(rule.x[i]);
  return s;
}

template <class F>
double apply_rule_3d(const F& f, const std::array<Rule1D, 3>& rules) {
  const auto& r0 = rules[0];
  const auto& r1 = rules[1];
  const auto& r2 = rules[2];
  std::vector<double> slabs = parallel_map<double>(r0.x.size(), [&](std::size_t i) {
    double s = 0.0;
    std::array<double, 3> u{r0.x[i], 0.0, 0.0};
    for (std::size_t j = 0; j < r1.x.size(); ++j) {
      u[1] = r1.x[j];
      double inner = 0.0;
      for (std::size_t k = 0; k < r2.x.size(); ++k) {
        u[2] = r2.x[k];
        inner += r2.w[k] * f(u);
      }
      s += r1.w[j] * inner;
    }
    return r0.w[i] * s;
  });
  double total = 0.0;
  for (double s : slabs) total += s;
  return total;
}

namespace detail {

template <class Eval>
double refine_until_converged(const Eval& eval, const QuadOptions& opt, const char* what) {
  int panels = std::max(1, opt.initial_panels);
  double prev = eval(panels);
  for (int level = 0; level < opt.max_doublings; ++level) {
    panels *= 2;
    const double cur = eval(panels);
    if (std::abs(cur - prev) <= std::max(opt.rel_tol * std::abs(cur), opt.abs_tol)) return cur;
    prev = cur;
  }
  std::ostringstream msg;
  msg << what << " did not converge after " << opt.max_doublings << " doublings (last value " << prev << ")";
  fail(ErrorKind::kQuadratureNotConverged, msg.str());
}

}  // namespace detail

/// Adaptive-by-doubling integral of f over the axis.
template <class F>
double integrate_1d(const F& f, const Axis& axis, QuadOptions opt = {}) {
  return detail::refine_until_converged(
      [&](int panels) { return apply_rule(f, composite_rule(axis, panels)); }, opt, "1D quadrature");
}

/// Integral of f(u) over a box of three axes; all axes are refined together.
template <class F>
double integrate_3d(const F& f, const std::array<Axis, 3>& box, QuadOptions opt = {}) {
  if (opt.max_doublings > 3) opt.max_doublings = 3;
  return detail::refine_until_converged(
      [&](int panels) {
        return apply_rule_3d(f, {composite_rule(box[0], panels), composite_rule(box[1], panels),
                                 composite_rule(box[2], panels)});
      },
      opt, "3D quadrature");
}

}  // namespace hckit
