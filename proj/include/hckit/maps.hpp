#pragma once

// Explicit contact maps: similarities of the Heisenberg group and the
// extremal maps of the worked examples. All maps are stored in Heisenberg
// coordinates; maps defined in logarithmic coordinates are conjugated through
// the coordinate change with jets carried along.

#include <cmath>
#include <memory>
#include <string>

#include "hckit/errors.hpp"
#include "hckit/field.hpp"
#include "hckit/heisenberg.hpp"
#include "hckit/qc.hpp"

namespace hckit {

namespace detail {

template <class F1, class F2>
ContactMap make_map(std::string name, F1 f1, F2 f2, DomainPredicate domain = {}) {
  return {name, ScalarField::expression(name + ".1", f1, domain),
          ScalarField::expression(name + ".2", f2, domain), nullptr};
}

inline ContactMap with_inverse(ContactMap m, ContactMap inv) {
  m.inverse = std::make_shared<ContactMap>(std::move(inv));
  return m;
}

/// arg z in (0, 2 pi), cut along the positive real axis.
template <class J>
J arg_0_2pi(const J& x, const J& y) {
  using std::atan2;
  return atan2(-y, -x) + kPi;
}

}  // namespace detail

// -- similarities ---------------------------------------------------------------------

/// Left translation p -> g p.
inline ContactMap left_translation(const HPoint& g) {
  auto build = [](const HPoint& h, std::string name) {
    return detail::make_map(
        name, [h](const auto& c) { return c.z() + h.z; },
        [h](const auto& c) { return c.t + h.t + 2.0 * (h.y() * c.x - h.x() * c.y); });
  };
  return detail::with_inverse(build(g, "translation"), build(group_inv(g), "translation^-1"));
}

/// (z, t) -> (e^(i theta) z, t).
inline ContactMap rotation(double theta) {
  auto build = [](double th, std::string name) {
    const cplx e = std::polar(1.0, th);
    return detail::make_map(name, [e](const auto& c) { return c.z() * e; }, [](const auto& c) { return c.t * 1.0; });
  };
  return detail::with_inverse(build(theta, "rotation"), build(-theta, "rotation^-1"));
}

/// (z, t) -> (r z, r^2 t).
inline ContactMap dilation(double r) {
  auto build = [](double s, std::string name) {
    return detail::make_map(name, [s](const auto& c) { return c.z() * s; }, [s](const auto& c) { return c.t * (s * s); });
  };
  return detail::with_inverse(build(r, "dilation"), build(1.0 / r, "dilation^-1"));
}

// -- Example 1 ----------------------------------------------------------------------------

/// (x + iy, t) -> (A x + i B y, A B t).
inline ContactMap affine_stretch(double A, double B, std::string name = "ex1_f0") {
  auto build = [](double a, double b, std::string n) {
    return detail::make_map(
        n, [a, b](const auto& c) { return c.x * a + kI * (c.y * b); }, [a, b](const auto& c) { return c.t * (a * b); });
  };
  return detail::with_inverse(build(A, B, name), build(1.0 / A, 1.0 / B, name + "^-1"));
}

// -- Example 2 ----------------------------------------------------------------------------

/// (z, t) -> (sqrt(rho) |z| e^(i beta arg z), alpha t), arg z in (0, 2 pi).
inline ContactMap sector_map(double rho, double beta, double alpha, std::string name = "ex2_f0") {
  auto build = [](double r, double b, double a, std::string n) {
    auto off_cut = [](const HPoint& p) { return !(p.y() == 0.0 && p.x() >= 0.0); };
    return detail::make_map(
        n,
        [r, b](const auto& c) {
          const auto theta = detail::arg_0_2pi(c.x, c.y);
          return std::sqrt(r) * exp(0.5 * log(c.abs2()) + kI * (b * theta));
        },
        [a](const auto& c) { return c.t * a; }, off_cut);
  };
  return detail::with_inverse(build(rho, beta, alpha, name), build(1.0 / rho, 1.0 / beta, 1.0 / alpha, name + "^-1"));
}

// -- cylinders ---------------------------------------------------------------------------

/// The extremal map C_{a,b} -> C_{a',b'}:
///   z' = sqrt(b') z e^(i t (1 - a'b/(ab')) / (2b)) / sqrt((1 - ab'/(a'b)) |z|^2 + ab'/a'),
///   t' = (a'/a) t.
inline ContactMap cylinder_map_unchecked(double a, double b, double ap, double bp, std::string name) {
  const double kappa = a * bp / (ap * b);
  return detail::make_map(
      name,
      [=](const auto& c) {
        const auto phase = exp(kI * (c.t * ((1.0 - 1.0 / kappa) / (2.0 * b))));
        const auto radicand = c.abs2() * (1.0 - kappa) + a * bp / ap;
        return std::sqrt(bp) * c.z() * phase / sqrt(radicand);
      },
      [=](const auto& c) { return c.t * (ap / a); },
      [=](const HPoint& p) { return (1.0 - kappa) * std::norm(p.z) + a * bp / ap > 0.0; });
}

inline ContactMap cylinder_map(double a, double b, double ap, double bp, std::string name = "cyl_f0") {
  if (!(a * bp / (ap * b) > 1.0))
    fail(ErrorKind::kParameterConstraintViolated, "cylinder map needs ab'/(a'b) > 1");
  return detail::with_inverse(cylinder_map_unchecked(a, b, ap, bp, name),
                              cylinder_map_unchecked(ap, bp, a, b, name + "^-1"));
}

// -- spherical annuli ------------------------------------------------------------------

/// (xi, psi, eta) -> (k xi, atan(tan(psi)/k + D), eta - k D xi / 3) in
/// logarithmic coordinates; D = 0 is the radial stretch.
inline ContactMap log_stretch(double k, double D, std::string name) {
  auto off_origin = [](const HPoint& p) { return p.z != cplx{} || p.t != 0.0; };
  auto image = [k, D](const auto& c) {
    using std::atan;
    const auto lc = log_from_xyz(c.x, c.y, c.t);
    const auto tan_psi = -c.t / c.abs2();
    const auto psi = atan(tan_psi / k + D);
    return xyz_from_log(lc.xi * k, psi, lc.eta - lc.xi * (k * D / 3.0));
  };
  return detail::make_map(
      name, [image](const auto& c) { return image(c).z; }, [image](const auto& c) { return image(c).t; }, off_origin);
}

inline ContactMap log_stretch_inverse(double k, double D, std::string name) {
  // xi = xi'/k, tan psi = k (tan psi' - D), eta = eta' + D xi' / 3
  auto off_origin = [](const HPoint& p) { return p.z != cplx{} || p.t != 0.0; };
  auto image = [k, D](const auto& c) {
    using std::atan;
    const auto lc = log_from_xyz(c.x, c.y, c.t);
    const auto tan_psi = -c.t / c.abs2();
    const auto psi = atan((tan_psi - D) * k);
    return xyz_from_log(lc.xi / k, psi, lc.eta + lc.xi * (D / 3.0));
  };
  return detail::make_map(
      name, [image](const auto& c) { return image(c).z; }, [image](const auto& c) { return image(c).t; }, off_origin);
}

inline ContactMap radial_stretch(double k) {
  return detail::with_inverse(log_stretch(k, 0.0, "radial_stretch"), log_stretch_inverse(k, 0.0, "radial_stretch^-1"));
}

inline ContactMap g_D(double k, double D) {
  return detail::with_inverse(log_stretch(k, D, "gD"), log_stretch_inverse(k, D, "gD^-1"));
}

}  // namespace hckit
