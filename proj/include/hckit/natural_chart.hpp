#pragma once

// Natural chart of a quadratic differential: a contact chart (f, h) with
// f(base) = h(base) = 0 in which q = [dz^2]. With r a continued branch of
// sqrt(q) and Tf = (1/2i) Zbar r, the two components solve
//
//   df = r dz + Tf w
//   dh = i conj(f) r dz - i f conj(r) dzbar + (|q| + i conj(f) Tf - i f conj(Tf)) w
//
// and are integrated together along a polyline from the base with RK4. The
// right-hand sides are closed exactly when D2', D2'' and B2 vanish.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hckit/errors.hpp"
#include "hckit/path.hpp"
#include "hckit/qc.hpp"
#include "hckit/quad_diff.hpp"

namespace hckit {

struct NaturalChartOptions {
  double branch_floor = 1e-9;
  double operator_tol = 1e-8;
  int steps_per_segment = 256;  ///< fixed, so values depend smoothly on the target
  double check_radius = 0.1;    ///< operators are checked on a 3x3x3 grid of this half-width
  std::vector<HPoint> waypoints;
};

struct ChartValue {
  cplx f;
  double h = 0.0;
  cplx root;  ///< the continued sqrt(q) at the target
};

namespace detail {

/// Integrates the chart equations from `start` (with known value) to `end`.
inline ChartValue integrate_chart_segment(const QuadDiff& q, const HPoint& start, const HPoint& end, ChartValue v,
                                          const NaturalChartOptions& opt) {
  const cplx dz = end.z - start.z;
  const double dt = end.t - start.t;
  cplx root = v.root;

  struct Deriv {
    cplx f;
    double h;
  };
  auto rhs = [&](const HPoint& p, cplx F, cplx& r) -> Deriv {
    if (!q.coeff.in_domain(p)) fail(ErrorKind::kPathOutsideDomain, "natural chart path leaves the domain of " + q.name);
    const Jet<1> qj = q.coeff.jet<1>(p);
    if (std::abs(qj.value()) < opt.branch_floor)
      fail(ErrorKind::kBranchCutCrossed, "sqrt(q) cannot be continued: |q| below floor on the path");
    Jet<1> rj = sqrt(qj);
    // keep the branch closest to the previous root
    if (std::real(std::conj(root) * rj.value()) < 0) rj = -rj;
    r = rj.value();
    const cplx Tf = apply_Zbar(rj, p).value() / (2.0 * kI);
    const double w = dt + 2.0 * std::imag(std::conj(p.z) * dz);
    const cplx df = r * dz + Tf * w;
    const double dh = 2.0 * std::real(kI * std::conj(F) * r * dz) +
                      (std::norm(r) + 2.0 * std::real(kI * std::conj(F) * Tf)) * w;
    return {df, dh};
  };

  const int n = opt.steps_per_segment;
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    auto at = [&](double u) { return HPoint{start.z + u * dz, start.t + u * dt}; };
    const double u = i * h;
    cplx r1, r2, r3, r4;
    const Deriv k1 = rhs(at(u), v.f, r1);
    root = r1;
    const Deriv k2 = rhs(at(u + h / 2), v.f + h / 2 * k1.f, r2);
    root = r2;
    const Deriv k3 = rhs(at(u + h / 2), v.f + h / 2 * k2.f, r3);
    const Deriv k4 = rhs(at(u + h), v.f + h * k3.f, r4);
    root = r4;
    v.f += h / 6 * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f);
    v.h += h / 6 * (k1.h + 2 * k2.h + 2 * k3.h + k4.h);
  }
  v.root = root;
  return v;
}

/// Taylor jet of a function from its value and the jets of its three partials.
template <int K>
Jet<K> integrate_jet(cplx value, const Jet<K - 1>& gx, const Jet<K - 1>& gy, const Jet<K - 1>& gt) {
  Jet<K> r(value);
  const std::array<const Jet<K - 1>*, 3> g{&gx, &gy, &gt};
  for (int k = 1; k < Jet<K>::kSize; ++k) {
    auto e = Jet<K>::exponents(k);
    const int axis = e[0] > 0 ? 0 : (e[1] > 0 ? 1 : 2);
    const double n = e[axis];
    e[axis] -= 1;
    r[k] = g[axis]->coeff(e[0], e[1], e[2]) / n;
  }
  return r;
}

struct ChartJets {
  const QuadDiff* q;
  HPoint p;
  ChartValue v;

  template <int K>
  Jet<K> root() const {
    Jet<K> r = sqrt(q->coeff.jet<K>(p));
    if (std::real(std::conj(v.root) * r.value()) < 0) r = -r;
    return r;
  }

  template <int K>
  Jet<K> f() const {
    if constexpr (K == 0) {
      return Jet<0>(v.f);
    } else {
      const Jet<K> r = root<K>();
      const Jet<K - 1> Tf = apply_Zbar(r, p) * (1.0 / (2.0 * kI));
      const Coords<Jet<K - 1>> c = seed<K - 1>(p);
      const Jet<K - 1> fz = truncate<K - 1>(r) - kI * c.zbar() * Tf;
      const Jet<K - 1> fzb = kI * c.z() * Tf;
      return integrate_jet<K>(v.f, fz + fzb, kI * (fz - fzb), Tf);
    }
  }

  template <int K>
  Jet<K> h() const {
    if constexpr (K == 0) {
      return Jet<0>(v.h);
    } else {
      const Jet<K> r = root<K>();
      const Jet<K - 1> rr = truncate<K - 1>(r);
      const Jet<K - 1> Tf = apply_Zbar(r, p) * (1.0 / (2.0 * kI));
      const Jet<K - 1> F = f<K - 1>();
      const Coords<Jet<K - 1>> c = seed<K - 1>(p);
      const Jet<K - 1> A = kI * conj(F) * rr;
      const Jet<K - 1> C = norm(rr) + kI * conj(F) * Tf - kI * F * conj(Tf);
      const Jet<K - 1> hz = A - kI * c.zbar() * C;
      const Jet<K - 1> hzb = conj(A) + kI * c.z() * C;
      return integrate_jet<K>(v.h, hz + hzb, kI * (hz - hzb), C);
    }
  }
};

}  // namespace detail

class NaturalChart {
 public:
  NaturalChart(QuadDiff q, HPoint base, cplx root_at_base, NaturalChartOptions opt)
      : q_(std::move(q)), base_(base), root0_(root_at_base), opt_(std::move(opt)) {}

  const HPoint& base() const { return base_; }
  const QuadDiff& differential() const { return q_; }

  /// (f, h) at p, integrating along base -> waypoints -> p.
  ChartValue evaluate(const HPoint& p, const std::vector<HPoint>& waypoints) const {
    ChartValue v{0.0, 0.0, root0_};
    HPoint from = base_;
    for (const HPoint& w : waypoints) {
      v = detail::integrate_chart_segment(q_, from, w, v, opt_);
      from = w;
    }
    return detail::integrate_chart_segment(q_, from, p, v, opt_);
  }
  ChartValue evaluate(const HPoint& p) const { return evaluate(p, opt_.waypoints); }

  /// The chart as a contact map. Jets above order 0 come from the defining
  /// equations at the integrated value.
  ContactMap map() const {
    const NaturalChart self = *this;
    auto gen_f = [self](auto order, const HPoint& p) {
      constexpr int K = decltype(order)::value;
      return detail::ChartJets{&self.q_, p, self.evaluate(p)}.template f<K>();
    };
    auto gen_h = [self](auto order, const HPoint& p) {
      constexpr int K = decltype(order)::value;
      return detail::ChartJets{&self.q_, p, self.evaluate(p)}.template h<K>();
    };
    return {"chart(" + q_.name + ")", ScalarField::generated("chart.f", gen_f, q_.coeff.domain()),
            ScalarField::generated("chart.h", gen_h, q_.coeff.domain()), nullptr};
  }

 private:
  QuadDiff q_;
  HPoint base_;
  cplx root0_;
  NaturalChartOptions opt_;
};

/// Checks the hypotheses near the base and returns the chart normalised by
/// f(base) = h(base) = 0, with sqrt(q(base)) taken on the principal branch
/// (sign = -1 picks the other one).
inline NaturalChart natural_chart(const QuadDiff& q, const HPoint& base, NaturalChartOptions opt = {}, int sign = 1) {
  q.coeff.require_in_domain(base);
  const cplx q0 = q(base);
  if (std::abs(q0) < opt.branch_floor) fail(ErrorKind::kZeroAtBase, "q vanishes at the base point");
  const ScalarField ops[3] = {D2prime(q), D2second(q), B2(q)};
  const char* names[3] = {"D2'", "D2''", "B2"};
  const double r = opt.check_radius;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      for (int k = -1; k <= 1; ++k) {
        const HPoint p{base.z + cplx(i * r, j * r), base.t + k * r};
        if (!q.coeff.in_domain(p)) continue;
        const double scale = 1.0 + std::pow(std::abs(q(p)), 2);
        for (int n = 0; n < 3; ++n)
          if (std::abs(ops[n](p)) > opt.operator_tol * scale)
            fail(ErrorKind::kOperatorsNonzero, std::string(names[n]) + " q does not vanish near the base");
      }
  const cplx root = double(sign >= 0 ? 1 : -1) * std::sqrt(q0);
  return NaturalChart(q, base, root, std::move(opt));
}

}  // namespace hckit
