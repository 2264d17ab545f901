#pragma once

// Heisenberg group arithmetic and the coordinate systems used throughout:
// Heisenberg coordinates (z, t), cylindrical coordinates (r, theta, t) and
// logarithmic coordinates (xi, psi, eta) adapted to Koranyi spheres.

#include <cmath>
#include <complex>
#include <type_traits>

#include "hckit/errors.hpp"
#include "hckit/jet.hpp"

namespace hckit {

struct HPoint {
  cplx z{};
  double t = 0.0;

  double x() const { return z.real(); }
  double y() const { return z.imag(); }

  friend bool operator==(const HPoint&, const HPoint&) = default;
};

struct LogCoords {
  double xi = 0.0;
  double psi = 0.0;
  double eta = 0.0;
};

struct CylCoords {
  double r = 0.0;
  double theta = 0.0;
  double t = 0.0;
};

/// (z,t)(z',t') = (z + z', t + t' + 2 Im(z conj(z'))).
inline HPoint group_mul(const HPoint& p, const HPoint& q) {
  return {p.z + q.z, p.t + q.t + 2.0 * std::imag(p.z * std::conj(q.z))};
}

inline HPoint group_inv(const HPoint& p) { return {-p.z, -p.t}; }

/// Koranyi norm (|z|^4 + t^2)^(1/4).
inline double heis_norm(const HPoint& p) {
  const double r2 = std::norm(p.z);
  return std::pow(r2 * r2 + p.t * p.t, 0.25);
}

/// Left-invariant distance ||p^-1 q||.
inline double heis_dist(const HPoint& p, const HPoint& q) {
  return heis_norm(group_mul(group_inv(p), q));
}

/// Euclidean distance in R^3, used for curve comparisons.
inline double euclid_dist(const HPoint& p, const HPoint& q) {
  const double dz = std::abs(p.z - q.z), dt = p.t - q.t;
  return std::sqrt(dz * dz + dt * dt);
}

// -- logarithmic coordinates --------------------------------------------------
//
// (z, t) = (i cos^(1/2)(psi) e^((xi + i(psi - 3 eta))/2), -sin(psi) e^xi).
// eta enters only through e^(-3i eta/2), so it is determined modulo 4 pi / 3.

inline constexpr double kEtaPeriod = 4.0 * kPi / 3.0;

/// Folds eta into the window psi - 3 pi <= 2 eta < psi + pi, choosing the
/// lowest representative modulo the period 4 pi / 3.
inline double normalize_eta(double psi, double eta) {
  const double lower = 0.5 * (psi - 3.0 * kPi);
  double offset = std::fmod(eta - lower, kEtaPeriod);
  if (offset < 0.0) offset += kEtaPeriod;
  return lower + offset;
}

/// Generic over double and jets; the caller chooses the arg(z) branch.
template <class S>
struct LogTriple {
  S xi, psi, eta;
};

template <class S>
LogTriple<S> log_from_xyz(const S& x, const S& y, const S& t) {
  using std::atan2;
  using std::log;
  const S r2 = x * x + y * y;
  const S xi = 0.5 * log(r2 * r2 + t * t);
  const S psi = atan2(-t, r2);
  const S phi = atan2(y, x);
  const S eta = (psi + kPi - 2.0 * phi) / 3.0;
  return {xi, psi, eta};
}

/// Returns (z, t) with z complex-valued and t real-valued.
template <class S>
auto xyz_from_log(const S& xi, const S& psi, const S& eta) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  const auto zv = kI * sqrt(cos(psi)) * exp(0.5 * (xi + kI * (psi - 3.0 * eta)));
  const S tv = -sin(psi) * exp(xi);
  struct Result {
    std::remove_cv_t<decltype(zv)> z;
    S t;
  };
  return Result{zv, tv};
}

inline LogCoords to_log_coords(const HPoint& p) {
  if (p.z == cplx{} && p.t == 0.0) fail(ErrorKind::kOriginNotRepresentable, "(0,0) has no logarithmic coordinates");
  const double r2 = std::norm(p.z);
  LogCoords c;
  c.xi = 0.5 * std::log(r2 * r2 + p.t * p.t);
  c.psi = std::atan2(-p.t, r2);
  const double phi = p.z == cplx{} ? 0.0 : std::arg(p.z);
  c.eta = normalize_eta(c.psi, (c.psi + kPi - 2.0 * phi) / 3.0);
  return c;
}

inline HPoint from_log_coords(const LogCoords& c) {
  const double ch = std::sqrt(std::max(0.0, std::cos(c.psi)));
  const cplx z = kI * ch * std::exp(cplx(0.5 * c.xi, 0.5 * (c.psi - 3.0 * c.eta)));
  return {z, -std::sin(c.psi) * std::exp(c.xi)};
}

// -- cylindrical coordinates ---------------------------------------------------

inline CylCoords to_cylindrical(const HPoint& p) {
  const double r = std::abs(p.z);
  double theta = r == 0.0 ? 0.0 : std::arg(p.z);
  if (theta < 0.0) theta += 2.0 * kPi;
  if (theta >= 2.0 * kPi) theta -= 2.0 * kPi;
  return {r, theta, p.t};
}

inline HPoint from_cylindrical(const CylCoords& c) { return {std::polar(c.r, c.theta), c.t}; }

/// Pi(z, t) = t + i |z|^2, the CR projection onto the upper half plane.
inline cplx cr_projection(const HPoint& p) { return {p.t, std::norm(p.z)}; }

}  // namespace hckit
