#pragma once

// Closed-form trajectories of the catalog differentials, the curve families
// built from them, and their extremal densities.

#include <cmath>
#include <string>

#include "hckit/domain.hpp"
#include "hckit/moduli.hpp"
#include "hckit/qc.hpp"
#include "hckit/trajectories.hpp"

namespace hckit {

namespace closed_form {

/// (s + iy, t + 2sy): horizontal for dz^2
inline ParamCurve ex1_horizontal(double y, double t, double s0, double s1) {
  return {"ex1_h", [=](double s) { return HPoint{{s, y}, t + 2 * s * y}; }, [](double) { return cplx(1.0); }, s0, s1};
}

/// (x + is, t - 2xs): vertical for dz^2
inline ParamCurve ex1_vertical(double x, double t, double s0, double s1) {
  return {"ex1_v", [=](double s) { return HPoint{{x, s}, t - 2 * x * s}; }, [](double) { return kI; }, s0, s1};
}

/// (z e^(-is/2|z|^2), s): horizontal for -4 conj(z)^2
inline ParamCurve ex2_horizontal(cplx z, double s0, double s1) {
  const double r2 = std::norm(z);
  return {"ex2_h", [=](double s) { return HPoint{z * std::polar(1.0, -s / (2 * r2)), s}; },
          [=](double s) { return z * std::polar(1.0, -s / (2 * r2)) * (-kI / (2 * r2)); }, s0, s1};
}

/// (s u, t), |u| = 1: vertical for -4 conj(z)^2
inline ParamCurve ex2_radius(cplx u, double t, double s0, double s1) {
  return {"ex2_v", [=](double s) { return HPoint{s * u, t}; }, [=](double) { return u; }, s0, s1};
}

/// (sqrt(e^s sin y) alpha e^(-is cot(y)/2), e^s cos y): horizontal for -4 conj(z)^2 / Pi^2
inline ParamCurve ex3_horizontal(double y, cplx alpha, double s0, double s1) {
  auto z = [=](double s) {
    return std::sqrt(std::exp(s) * std::sin(y)) * alpha * std::polar(1.0, -s / (2 * std::tan(y)));
  };
  return {"ex3_h", [=](double s) { return HPoint{z(s), std::exp(s) * std::cos(y)}; },
          [=](double s) { return z(s) * cplx(0.5, -0.5 / std::tan(y)); }, s0, s1};
}

/// (sqrt(e^x sin s) alpha e^(is/2), e^x cos s), 0 < s < pi: vertical
inline ParamCurve ex3_vertical(double x, cplx alpha, double s0, double s1) {
  auto z = [=](double s) { return std::sqrt(std::exp(x) * std::sin(s)) * alpha * std::polar(1.0, s / 2); };
  return {"ex3_v", [=](double s) { return HPoint{z(s), std::exp(x) * std::cos(s)}; },
          [=](double s) { return z(s) * cplx(0.5 / std::tan(s), 0.5); }, s0, s1};
}

}  // namespace closed_form

// -- families -------------------------------------------------------------------------

/// Radii {(s e^(i theta), t) : 0 < s < sqrt(b)} of C(a,b,c).
inline CurveFamily ex2_radii_family(double a, double b, double c) {
  return {"ex2_radii",
          {Axis{0, c}, Axis{0, a}},
          [b](const std::vector<double>& v) {
            ParamCurve r = closed_form::ex2_radius(std::polar(1.0, v[0]), v[1], 0.0, std::sqrt(b));
            r.grade_lo = 3;
            return r;
          },
          sector_domain(a, b, c)};
}

/// 2 / (3 b^(1/3) |z|^(1/3)), extremal for the radii of C(a,b,c).
inline Density ex2_rho0(double b) {
  const double k = 2.0 / (3.0 * std::cbrt(b));
  return {"rho0", ScalarField::expression("rho0", [k](const auto& c) { return k * pow(c.abs2(), -1.0 / 6.0); })};
}

/// 8ac / (27b)
inline double ex2_modulus(double a, double b, double c) { return 8.0 * a * c / (27.0 * b); }

/// Horizontal trajectories of -4 conj(z)^2 / Pi^2 crossing A_a from ||p|| = 1
/// to ||p|| = a, parametrised by (y, arg alpha).
inline CurveFamily ex3_horizontal_family(double a) {
  return {"ex3_horizontal",
          {Axis{0, kPi}, Axis{0, 2 * kPi}},
          [a](const std::vector<double>& v) {
            return closed_form::ex3_horizontal(v[0], std::polar(1.0, v[1]), 0.0, 2 * std::log(a));
          },
          annulus_domain(a)};
}

/// |z| / (||p||^2 log a) = sqrt|q| / (2 log a)
inline Density ex3_density(double a) {
  const double L = std::log(a);
  return {"ex3_rho", ScalarField::expression("ex3_rho", [L](const auto& c) {
            return sqrt(c.abs2()) / (sqrt(c.abs2() * c.abs2() + c.t * c.t) * L);
          })};
}

/// pi^2 / log^3 a
inline double ex3_modulus(double a) { return kPi * kPi / std::pow(std::log(a), 3); }

/// Horizontal trajectories (z e^(-is/2|z|^2), s), 0 < s < a, of the lifted
/// rectangle differential -4 conj(z)^2 on C_{a,b}, parametrised by (|z|, arg z).
inline CurveFamily cyl_horizontal_family(double a, double b) {
  return {"cyl_horizontal",
          {Axis{0, std::sqrt(b)}, Axis{0, 2 * kPi}},
          [a](const std::vector<double>& v) { return closed_form::ex2_horizontal(std::polar(v[0], v[1]), 0.0, a); },
          cyl_domain(a, b)};
}

/// sqrt|q| / a = 2|z| / a
inline Density cyl_density(double a) {
  return {"cyl_rho", ScalarField::expression("cyl_rho", [a](const auto& c) { return 2.0 * sqrt(c.abs2()) / a; })};
}

/// int_{C_{a,b}} (2|z|/a)^4 = 16 pi b^3 / (3 a^3)
inline double cyl_density_energy(double a, double b) { return 16.0 * kPi * b * b * b / (3.0 * a * a * a); }

}  // namespace hckit
