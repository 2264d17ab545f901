#include <gtest/gtest.h>

#include <random>

#include "hckit/maps.hpp"
#include "hckit/quad_diff.hpp"
#include "oracles.hpp"

using namespace hckit;

namespace {

std::vector<HPoint> random_points(std::mt19937_64& rng, int n, double scale = 1.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<HPoint> out;
  for (int i = 0; i < n; ++i) out.push_back({{u(rng), u(rng)}, u(rng)});
  return out;
}

double max_abs(const ScalarField& f, const std::vector<HPoint>& pts) {
  double m = 0.0;
  for (const HPoint& p : pts) m = std::max(m, std::abs(f(p)));
  return m;
}

/// 2 q ZZbar q - Zq Zbar q - 4i q Tq by nested central differences.
cplx d2prime_oracle(const oracle::Fn& q, const HPoint& p) {
  const auto Zq = oracle::Z(q), Zbq = oracle::Zbar(q);
  const double x = p.x(), y = p.y(), t = p.t;
  return 2.0 * q(x, y, t) * oracle::Z(Zbq, x, y, t, 1e-4) - Zq(x, y, t) * Zbq(x, y, t) -
         4.0 * oracle::I * q(x, y, t) * oracle::dt(q, x, y, t);
}

cplx d2second_oracle(const oracle::Fn& q, const HPoint& p) {
  const auto Zbq = oracle::Zbar(q);
  const double x = p.x(), y = p.y(), t = p.t;
  return 2.0 * q(x, y, t) * oracle::Zbar(Zbq, x, y, t, 1e-4) - std::pow(Zbq(x, y, t), 2);
}

}  // namespace

TEST(QuadDiff, TrivialDifferential) {
  std::mt19937_64 rng(1);
  const auto pts = random_points(rng, 50);
  const QuadDiff q = qd_dz2();
  EXPECT_EQ(max_abs(D2prime(q), pts), 0.0);
  EXPECT_EQ(max_abs(D2second(q), pts), 0.0);
  EXPECT_EQ(max_abs(B2(q), pts), 0.0);
}

TEST(QuadDiff, PiDw2PassesD2ButNotB2) {
  std::mt19937_64 rng(2);
  const auto pts = random_points(rng, 1000);
  const QuadDiff q = qd_pi_dw2();
  EXPECT_LT(max_abs(D2prime(q), pts), 1e-9);
  EXPECT_LT(max_abs(D2second(q), pts), 1e-9);
  const ScalarField b = B2(q);
  for (const HPoint& p : pts) EXPECT_LT(std::abs(b(p) - 64.0 * p.z * p.z * std::conj(p.z)), 1e-10);
}

TEST(QuadDiff, OverW2IsAnnihilated) {
  std::mt19937_64 rng(3);
  std::vector<HPoint> pts;
  for (const HPoint& p : random_points(rng, 1000))
    if (heis_norm(p) > 0.3) pts.push_back(p);
  const QuadDiff q = qd_pi_dw2_over_w2();
  for (const HPoint& p : pts) {
    const double scale = std::pow(std::abs(q(p)), 2) / std::pow(heis_norm(p), 4);
    EXPECT_LT(std::abs(D2prime(q)(p)), 1e-9 * (1 + scale));
    EXPECT_LT(std::abs(D2second(q)(p)), 1e-9 * (1 + scale));
  }
}

TEST(QuadDiff, OperatorsMatchFiniteDifferences) {
  const oracle::Fn q = [](double x, double y, double t) {
    const cplx z{x, y};
    return z * z * std::conj(z) + oracle::I * t * z + std::exp(cplx(0.2 * t, x));
  };
  const QuadDiff qd{"mixed", ScalarField::expression("mixed", [](const auto& c) {
                      return c.z() * c.z() * c.zbar() + kI * c.t * c.z() + exp(0.2 * c.t + kI * c.x);
                    })};
  std::mt19937_64 rng(4);
  for (const HPoint& p : random_points(rng, 10, 0.8)) {
    EXPECT_LT(std::abs(D2prime(qd)(p) - d2prime_oracle(q, p)), 1e-5);
    EXPECT_LT(std::abs(D2second(qd)(p) - d2second_oracle(q, p)), 1e-5);
  }
}

TEST(KForms, DegreeTwoEqualsQuadraticOperators) {
  std::mt19937_64 rng(5);
  const auto pts = random_points(rng, 100);
  const ScalarField f = ScalarField::expression(
      "f", [](const auto& c) { return c.z() * c.zbar() * c.zbar() + c.t * c.z() + kI * c.t * c.t * c.zbar(); });
  const QuadDiff q{"f", f};
  const KForm a(2, f);
  for (const HPoint& p : pts) {
    EXPECT_LT(std::abs(Dkprime(a)(p) - D2prime(q)(p)), 1e-10);
    EXPECT_LT(std::abs(Dksecond(a)(p) - D2second(q)(p)), 1e-10);
    EXPECT_LT(std::abs(Bk(a)(p) - B2(q)(p)), 1e-10);
  }
}

TEST(KForms, PowersOfCrDerivativesAreAnnihilated) {
  std::mt19937_64 rng(6);
  const auto pts = random_points(rng, 200);
  const KForm one(4, ScalarField::constant(1.0));
  EXPECT_EQ(max_abs(Dkprime(one), pts), 0.0);
  EXPECT_EQ(max_abs(Dksecond(one), pts), 0.0);
  EXPECT_EQ(max_abs(Bk(one), pts), 0.0);
  // (Z(z^2))^3 = 8 z^3
  const KForm cube(3, ScalarField::expression("8z^3", [](const auto& c) { return 8.0 * c.z() * c.z() * c.z(); }));
  EXPECT_LT(max_abs(Dksecond(cube), pts), 1e-12);
  EXPECT_LT(max_abs(Dkprime(cube), pts), 1e-12);
  // (Z Pi)^3 = (2i zbar)^3
  const KForm pi3(3, ScalarField::expression("(2i zbar)^3", [](const auto& c) { return -8.0 * kI * pow(c.zbar(), 3); }));
  EXPECT_LT(max_abs(Dksecond(pi3), pts), 1e-10);
  EXPECT_LT(max_abs(Dkprime(pi3), pts), 1e-10);
  EXPECT_THROW(KForm(1, ScalarField::constant(1.0)), Error);
}

TEST(Pullback, Examples) {
  const HPoint p{{0.4, -0.3}, 0.8};
  EXPECT_NEAR(std::abs(pullback(qd_pi_dw2(), identity_map())(p) - qd_pi_dw2()(p)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pullback(qd_dz2(), dilation(1.7))(p) - 1.7 * 1.7), 0.0, 1e-14);
  // Pi as a CR function: (Z Pi)^2
  const ScalarField zpi = Z(field_pi());
  EXPECT_NEAR(std::abs((zpi * zpi)(p) + 4.0 * std::pow(std::conj(p.z), 2)), 0.0, 1e-14);
}

TEST(Pullback, RejectsNonContactMaps) {
  const ContactMap bad = detail::make_map(
      "bad", [](const auto& c) { return 2.0 * c.z(); }, [](const auto& c) { return c.t * 1.0; });
  try {
    pullback(qd_dz2(), bad, {{{0.1, 0.2}, 0.3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotContact);
  }
}

TEST(Pullback, Cocycle) {
  std::mt19937_64 rng(7);
  const auto pts = random_points(rng, 50);
  const ContactMap g = left_translation({{0.3, -0.5}, 0.2}), h = compose(rotation(0.4), dilation(1.3));
  const QuadDiff q = qd_pi_dw2();
  const QuadDiff lhs = pullback(q, compose(g, h), pts);
  const QuadDiff rhs = pullback(pullback(q, g), h);
  for (const HPoint& p : pts) EXPECT_LT(std::abs(lhs(p) - rhs(p)), 1e-11);
}

TEST(Naturality, Similarities) {
  std::mt19937_64 rng(8);
  const auto pts = random_points(rng, 100);
  const std::vector<ContactMap> maps = {identity_map(), left_translation({{0.3, -0.5}, 0.2}), rotation(0.7),
                                        dilation(1.6), compose(rotation(-1.2), left_translation({{1.0, 0.0}, -1.0}))};
  const QuadDiff mixed{"mixed", ScalarField::expression("mixed", [](const auto& c) {
                         return c.z() * c.zbar() * c.zbar() + kI * c.t * c.zbar() + c.t * c.t;
                       })};
  for (const ContactMap& g : maps) {
    for (const QuadDiff& q : {qd_pi_dw2(), mixed}) {
      for (QuadOperator op : {QuadOperator::kD2prime, QuadOperator::kD2second, QuadOperator::kB2}) {
        const double scale = 1.0 + max_abs(apply(op, q), pts);
        EXPECT_LT(naturality_defect(q, g, pts, op), 1e-8 * scale) << g.name << " " << q.name << " " << int(op);
      }
    }
  }
  EXPECT_EQ(naturality_defect(qd_pi_dw2(), identity_map(), pts), 0.0);
}
