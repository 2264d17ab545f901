#pragma once

// Quadratic differentials [q dz^2]_w and forms [a dz^k]_w of higher degree,
// with the operators
//
//   D2'  = 2 q Z Zbar q - Zq Zbar q - 4i q Tq
//   D2'' = 2 q Zbar^2 q - (Zbar q)^2
//   B2   = Zbar(|q|^2) + conj(q) Zbar q
//
// and their degree-k analogues. Operator outputs are plain coefficient fields;
// the frames they refer to are not tracked.

#include <string>
#include <vector>

#include "hckit/errors.hpp"
#include "hckit/field.hpp"
#include "hckit/qc.hpp"

namespace hckit {

struct QuadDiff {
  std::string name;
  ScalarField coeff;

  cplx operator()(const HPoint& p) const { return coeff(p); }
};

struct KForm {
  int k = 2;
  ScalarField coeff;

  KForm(int degree, ScalarField c) : k(degree), coeff(std::move(c)) {
    if (k < 2) fail(ErrorKind::kDomainError, "forms of degree k >= 2 only");
  }
};

inline ScalarField D2prime(const QuadDiff& q) {
  const ScalarField& f = q.coeff;
  return (2.0 * f * Z(Zbar(f)) - Z(f) * Zbar(f) - (4.0 * kI) * f * T(f)).renamed("D2'(" + q.name + ")");
}

inline ScalarField D2second(const QuadDiff& q) {
  const ScalarField& f = q.coeff;
  return (2.0 * f * Zbar(Zbar(f)) - Zbar(f) * Zbar(f)).renamed("D2''(" + q.name + ")");
}

inline ScalarField B2(const QuadDiff& q) {
  const ScalarField& f = q.coeff;
  return (Zbar(f * conj(f)) + conj(f) * Zbar(f)).renamed("B2(" + q.name + ")");
}

inline ScalarField Dkprime(const KForm& a) {
  const ScalarField& f = a.coeff;
  const double k = a.k;
  return double(k) * f * Z(Zbar(f)) + cplx(1.0 - k) * Z(f) * Zbar(f) - (2.0 * k * kI) * f * T(f);
}

inline ScalarField Dksecond(const KForm& a) {
  const ScalarField& f = a.coeff;
  const double k = a.k;
  return cplx(k) * f * Zbar(Zbar(f)) + cplx(1.0 - k) * Zbar(f) * Zbar(f);
}

inline ScalarField Bk(const KForm& a) {
  const ScalarField& f = a.coeff;
  return Zbar(f * conj(f)) + conj(f) * Zbar(f);
}

// -- contact pull-backs -------------------------------------------------------------

inline constexpr double kContactTol = 1e-8;

inline void require_contact(const ContactMap& g, const std::vector<HPoint>& points, double tol = kContactTol) {
  for (const HPoint& p : points) {
    const ContactDefect d = contact_defect(g, p);
    if (d.norm() > tol * (1.0 + std::abs(d.lambda)))
      fail(ErrorKind::kNotContact, g.name + " is not contact (defect " + std::to_string(d.norm()) + ")");
  }
}

/// g*q = (q o g)(Z g1)^2. The contact property is checked at `check_points`.
inline QuadDiff pullback(const QuadDiff& q, const ContactMap& g, const std::vector<HPoint>& check_points = {}) {
  require_contact(g, check_points);
  const ScalarField zg = Z(g.f1);
  return {g.name + "*" + q.name, compose(q.coeff, g.f1, g.f2) * zg * zg};
}

enum class QuadOperator { kD2prime, kD2second, kB2 };

inline ScalarField apply(QuadOperator op, const QuadDiff& q) {
  switch (op) {
    case QuadOperator::kD2prime: return D2prime(q);
    case QuadOperator::kD2second: return D2second(q);
    case QuadOperator::kB2: return B2(q);
  }
  return {};
}

/// Frame factor carried by op under a CR map with u = Z g1 locally constant:
/// u^5 conj(u) for D2', u^4 conj(u)^2 for D2'', |u|^4 conj(u) for B2.
inline cplx transport_factor(QuadOperator op, cplx u) {
  const cplx ub = std::conj(u);
  switch (op) {
    case QuadOperator::kD2prime: return std::pow(u, 5) * ub;
    case QuadOperator::kD2second: return std::pow(u, 4) * ub * ub;
    case QuadOperator::kB2: return std::norm(u) * std::norm(u) * ub;
  }
  return 0.0;
}

/// max |op(g*q)(p) - factor(p) op(q)(g(p))| over the points.
inline double naturality_defect(const QuadDiff& q, const ContactMap& g, const std::vector<HPoint>& points,
                                QuadOperator op = QuadOperator::kD2second) {
  require_contact(g, points);
  const ScalarField lhs = apply(op, pullback(q, g));
  const ScalarField rhs = apply(op, q);
  double worst = 0.0;
  for (const HPoint& p : points) {
    const cplx u = eval_Z(g.f1, p);
    worst = std::max(worst, std::abs(lhs(p) - transport_factor(op, u) * rhs(g(p))));
  }
  return worst;
}

// -- catalog differentials ---------------------------------------------------------

/// q = 1
inline QuadDiff qd_dz2() { return {"dz2", ScalarField::constant(1.0, "1")}; }

/// q = (Z Pi)^2 = -4 zbar^2
inline QuadDiff qd_pi_dw2() {
  return {"pi_dw2", ScalarField::expression("-4zbar^2", [](const auto& c) { return -4.0 * c.zbar() * c.zbar(); })};
}

/// q = -4 zbar^2 / Pi^2, defined off the vertical axis' origin (Pi != 0).
inline QuadDiff qd_pi_dw2_over_w2() {
  return {"pi_dw2_over_w2",
          ScalarField::expression(
              "-4zbar^2/Pi^2",
              [](const auto& c) {
                const auto pi = c.t + kI * c.abs2();
                return -4.0 * c.zbar() * c.zbar() / (pi * pi);
              },
              [](const HPoint& p) { return p.t != 0.0 || p.z != cplx{}; })};
}

}  // namespace hckit
