#pragma once

// Split Rumin operators in Heisenberg coordinates. Every form is stored as a
// single coefficient field relative to the canonical coframe of its bidegree:
//
//   (0,0) 1       (1,0) [dz]      (0,1) [dzbar]
//   (2,0) dz^w    (1,1) dzbar^w   (2,1) dz^dzbar^w        (w = omega)
//
// Operators that naturally produce w^dz or w^dzbar are converted on output.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hckit/errors.hpp"
#include "hckit/field.hpp"
#include "hckit/path.hpp"

namespace hckit {

struct Bidegree {
  int p = 0;
  int q = 0;
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

inline std::string frame_name(Bidegree b) {
  if (b == Bidegree{0, 0}) return "1";
  if (b == Bidegree{1, 0}) return "[dz]";
  if (b == Bidegree{0, 1}) return "[dzbar]";
  if (b == Bidegree{2, 0}) return "dz^omega";
  if (b == Bidegree{1, 1}) return "dzbar^omega";
  if (b == Bidegree{2, 1}) return "dz^dzbar^omega";
  return "?";
}

struct FormPQ {
  Bidegree degree;
  ScalarField coeff;

  FormPQ(Bidegree d, ScalarField c) : degree(d), coeff(std::move(c)) {
    if (frame_name(d) == "?")
      fail(ErrorKind::kDomainError, "no canonical frame for bidegree (" + std::to_string(d.p) + "," +
                                        std::to_string(d.q) + ")");
  }
};

/// Two-form frames that appear in the operator formulas.
enum class TwoFrame { kDzOmega, kOmegaDz, kDzbarOmega, kOmegaDzbar };

/// Coefficient relative to `to` of the form whose coefficient relative to
/// `from` is c. Only frames spanning the same line are convertible.
inline cplx convert_frame(cplx c, TwoFrame from, TwoFrame to) {
  auto line = [](TwoFrame f) { return f == TwoFrame::kDzOmega || f == TwoFrame::kOmegaDz ? 0 : 1; };
  if (line(from) != line(to)) fail(ErrorKind::kDomainError, "frames span different lines");
  return from == to ? c : -c;
}

inline ScalarField convert_frame(const ScalarField& c, TwoFrame from, TwoFrame to) {
  return convert_frame(1.0, from, to) == 1.0 ? c : -c;
}

namespace detail {
inline void require(const FormPQ& a, Bidegree want, const char* op) {
  if (!(a.degree == want))
    fail(ErrorKind::kDomainError, std::string(op) + " expects a form of bidegree (" + std::to_string(want.p) +
                                      "," + std::to_string(want.q) + ")");
}
inline const cplx kHalfOverI = 1.0 / (2.0 * kI);  // 1/(2i)
}  // namespace detail

inline FormPQ dprime_scalar(const ScalarField& f) { return {{1, 0}, Z(f)}; }
inline FormPQ dsecond_scalar(const ScalarField& f) { return {{0, 1}, Zbar(f)}; }

/// (D' alpha, D'' alpha) for alpha = [f dz].
inline std::pair<FormPQ, FormPQ> rumin_D(const FormPQ& alpha) {
  detail::require(alpha, {1, 0}, "rumin_D");
  const ScalarField& f = alpha.coeff;
  ScalarField d1 = (detail::kHalfOverI * Z(Zbar(f)) - T(f)).renamed("D'(" + f.name() + ")");
  ScalarField d2 = (detail::kHalfOverI * Zbar(Zbar(f))).renamed("D''(" + f.name() + ")");
  return {FormPQ{{2, 0}, d1}, FormPQ{{1, 1}, d2}};
}

/// (D' alpha, D+ alpha) for alpha = [f dzbar]. The formulas give coefficients
/// relative to w^dzbar and w^dz; they are stored relative to the canonical
/// dzbar^w and dz^w.
inline std::pair<FormPQ, FormPQ> rumin_D_01(const FormPQ& alpha) {
  detail::require(alpha, {0, 1}, "rumin_D_01");
  const ScalarField& f = alpha.coeff;
  const ScalarField d1 = detail::kHalfOverI * Zbar(Z(f)) + T(f);
  const ScalarField dp = detail::kHalfOverI * Z(Z(f));
  return {FormPQ{{1, 1}, convert_frame(d1, TwoFrame::kOmegaDzbar, TwoFrame::kDzbarOmega).renamed("D'(" + f.name() + ")")},
          FormPQ{{2, 0}, convert_frame(dp, TwoFrame::kOmegaDz, TwoFrame::kDzOmega).renamed("D+(" + f.name() + ")")}};
}

/// d'(f dzbar^w) = Zf dz^dzbar^w.
inline FormPQ dprime_F11(const FormPQ& beta) {
  detail::require(beta, {1, 1}, "dprime_F11");
  return {{2, 1}, Z(beta.coeff)};
}

/// d''(f dz^w) = -Zbar f dz^dzbar^w.
inline FormPQ dsecond_F20(const FormPQ& beta) {
  detail::require(beta, {2, 0}, "dsecond_F20");
  return {{2, 1}, -Zbar(beta.coeff)};
}

// -- operator relations ---------------------------------------------------------------

using RelationReport = std::map<std::string, double>;

/// Max |defect| of every composable relation among d', d'', D', D'', D+ at the
/// given points. f serves both as a function and as the coefficient of [f dz]
/// and [f dzbar]. Relations that vanish by bidegree alone are reported as 0.
inline RelationReport identity_suite(const ScalarField& f, const std::vector<HPoint>& points) {
  const FormPQ a10{{1, 0}, f}, a01{{0, 1}, f};
  const auto [Dp_dp, Ds_dp] = rumin_D(dprime_scalar(f));
  const auto [Dp_ds, Dplus_ds] = rumin_D_01(dsecond_scalar(f));
  const auto [Dp_a10, Ds_a10] = rumin_D(a10);
  const auto [Dp_a01, Dplus_a01] = rumin_D_01(a01);

  const std::vector<std::pair<std::string, ScalarField>> relations = {
      {"F20: D'd' + D+d''", Dp_dp.coeff + Dplus_ds.coeff},
      {"F11: D''d' + D'd''", Ds_dp.coeff + Dp_ds.coeff},
      {"F21: d'D'' + d''D' on [f dz]", dprime_F11(Ds_a10).coeff + dsecond_F20(Dp_a10).coeff},
      {"F21: d'D' + d''D+ on [f dzbar]", dprime_F11(Dp_a01).coeff + dsecond_F20(Dplus_a01).coeff},
  };

  RelationReport report;
  for (const auto& [name, field] : relations) {
    double worst = 0.0;
    for (const HPoint& p : points) worst = std::max(worst, std::abs(field(p)));
    report[name] = worst;
  }
  // These composites land in bidegrees with no nonzero target (q <= 1).
  for (const char* name : {"d''D''", "D''d''", "d'D+", "D+d'"}) report[name] = 0.0;
  return report;
}

// -- primitives -----------------------------------------------------------------------

struct PrimitiveOptions {
  double closed_tol = 1e-8;
  int panels = 8;
};

/// F(target) - F(base) for the CR primitive F of a D-closed alpha = [f dz],
/// integrating the representative f dz + (1/2i)(Zbar f) w along the polyline
/// base -> waypoints -> target.
inline cplx primitive_of_closed_form10(const FormPQ& alpha, const HPoint& base, const HPoint& target,
                                       const Path& waypoints = {}, PrimitiveOptions opt = {}) {
  detail::require(alpha, {1, 0}, "primitive_of_closed_form10");
  Path path{base};
  path.insert(path.end(), waypoints.begin(), waypoints.end());
  path.push_back(target);

  const ScalarField& f = alpha.coeff;
  const auto [dprime, dsecond] = rumin_D(alpha);
  for (const HPoint& p : path_nodes(path, opt.panels)) {
    if (!f.in_domain(p)) fail(ErrorKind::kPathOutsideDomain, "integration path leaves the domain of " + f.name());
    const double scale = 1.0 + std::abs(f(p));
    if (std::abs(dprime.coeff(p)) > opt.closed_tol * scale || std::abs(dsecond.coeff(p)) > opt.closed_tol * scale)
      fail(ErrorKind::kNotClosed, "D'alpha or D''alpha does not vanish along the path");
  }
  return line_integral(
      path,
      [&](const HPoint& p, const Coframe& c) {
        const Jet<1> j = f.jet<1>(p);
        return j.value() * c.dz + detail::kHalfOverI * apply_Zbar(j, p).value() * c.omega;
      },
      opt.panels);
}

}  // namespace hckit
