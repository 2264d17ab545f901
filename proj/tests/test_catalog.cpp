#include <gtest/gtest.h>

#include "hckit/catalog.hpp"

using namespace hckit;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::kDomainError;
}

VerifyOptions quick() {
  VerifyOptions o;
  o.grid = 10;
  o.trajectories = 20;
  return o;
}

}  // namespace

TEST(Catalog, LoadsEveryIdentifier) {
  for (const char* id : {"ex1_domain", "ex2_domain", "cyl_domain", "d_domain", "annulus"})
    EXPECT_NO_THROW(load_as<NamedDomain>(id)) << id;
  for (const char* id : {"ex1_f0", "ex2_f0", "cyl_f0", "d_f0", "radial_stretch", "gD"})
    EXPECT_NO_THROW(load_as<NamedMap>(id)) << id;
  for (const char* id : {"dz2", "pi_dw2", "pi_dw2_over_w2"}) EXPECT_EQ(load_as<QuadDiff>(id).name, id);
  for (const char* id : {"ex2_radii", "ex3_horizontal", "cyl_horizontal"}) EXPECT_NO_THROW(load_as<CurveFamily>(id));
  for (const char* id : {"rho0", "ex3_rho", "cyl_rho"}) EXPECT_NO_THROW(load_as<Density>(id));

  EXPECT_EQ(kind_of([] { load("ex4_f0"); }), ErrorKind::kUnknownIdentifier);
  EXPECT_EQ(kind_of([] { load_as<QuadDiff>("ex1_f0"); }), ErrorKind::kUnknownIdentifier);
}

TEST(Catalog, Constraints) {
  // c'/c = a'b'/(ab)
  EXPECT_EQ(kind_of([] { load("ex1_f0", {.a = 1, .b = 2, .c = 1.5, .a_p = 2, .b_p = 1.5, .c_p = 2.0}); }),
            ErrorKind::kParameterConstraintViolated);
  EXPECT_NEAR(resolve("ex1", {.a = 1, .b = 1, .c = 2, .a_p = 3, .b_p = 0.5}).c_p, 3.0, 1e-15);
  // bc/a = b'c'/a'
  EXPECT_NEAR(resolve("ex2").c_p, 3 * kPi / 8, 1e-15);
  EXPECT_EQ(kind_of([] { resolve("ex2", {.c_p = 1.0}); }), ErrorKind::kParameterConstraintViolated);
  EXPECT_EQ(kind_of([] { resolve("cyl", {.a = 1, .b = 2, .a_p = 1.5, .b_p = 2}); }),
            ErrorKind::kParameterConstraintViolated);
  EXPECT_EQ(kind_of([] { resolve("ex3", {.a = 0.5}); }), ErrorKind::kParameterConstraintViolated);
  EXPECT_EQ(kind_of([] { resolve("ex1", {.a = -1}); }), ErrorKind::kParameterConstraintViolated);
  EXPECT_TRUE(d_map_exists(resolve("d")));
  EXPECT_FALSE(d_map_exists(resolve("d", {.a_p = 0.7})));
  EXPECT_EQ(kind_of([] { load("d_f0", {.a_p = 0.7}); }), ErrorKind::kParameterConstraintViolated);
}

TEST(Catalog, ParamsFromJson) {
  const Params p = params_from_json(json::parse(R"({"example": "ex3", "params": {"a": 3, "k": 0.25}})"));
  EXPECT_EQ(p.a, 3.0);
  EXPECT_EQ(p.k, 0.25);
  EXPECT_FALSE(p.D.has_value());
  EXPECT_EQ(params_from_json(json::parse(R"({"b_p": 2})")).b_p, 2.0);
  EXPECT_EQ(kind_of([] { params_from_json(json::parse(R"({"params": {"q": 1}})")); }), ErrorKind::kInvalidParameters);
  EXPECT_EQ(kind_of([] { params_from_json(json::parse(R"({"params": {"a": "x"}})")); }),
            ErrorKind::kInvalidParameters);
  EXPECT_EQ(kind_of([] { params_from_json(json::parse("[1]")); }), ErrorKind::kInvalidParameters);
}

TEST(Catalog, StretchSpecialCases) {
  const NamedMap one = load_as<NamedMap>("radial_stretch", {.k = 1.0});
  const NamedMap g0 = load_as<NamedMap>("gD", {.k = 0.6, .D = 0.0});
  const NamedMap f = load_as<NamedMap>("radial_stretch", {.k = 0.6});
  for (const HPoint& p : one.source.grid(8)) {
    EXPECT_LT(euclid_dist(one.map(p), p), 1e-10);
    EXPECT_LT(euclid_dist(g0.map(p), f.map(p)), 1e-10);
  }
}

TEST(Catalog, EveryMapIsContactOnItsDomain) {
  for (const char* id : {"ex1_f0", "ex2_f0", "cyl_f0", "d_f0", "radial_stretch", "gD"}) {
    const NamedMap m = load_as<NamedMap>(id);
    const detail::MapStats s = detail::map_stats(m.map, m.source.grid(32), m.target);
    EXPECT_LT(s.contact, 1e-8) << id;
    EXPECT_LT(s.beltrami2, 1e-8) << id;
    EXPECT_LT(s.lambda_imag, 1e-10) << id;
    EXPECT_LT(s.mu, 1.0) << id;
    EXPECT_EQ(s.outside, 0u) << id;
  }
}

TEST(Verify, Example1) {
  const VerifyResult r = verify("ex1", {}, quick());
  EXPECT_TRUE(r.pass());
  const CheckResult* h = r.report.find("f0.horizontal_dilation");
  ASSERT_NE(h, nullptr);
  EXPECT_NEAR(h->value, 2.0, 1e-6);
  EXPECT_NEAR(r.report.find("f0.K_max")->value, 2.0 / 0.75, 1e-10);
}

TEST(Verify, Example2) {
  const VerifyResult r = verify("ex2", {}, quick());
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.report.find("modulus.energy")->value, 8 * 2 * (kPi / 2) / 27, 1e-6);
  EXPECT_NEAR(r.report.find("f0.K2_max")->value, 16.0 / 9.0, 1e-8);
  EXPECT_NEAR(r.report.find("f0.vertical_parametric_factor_value")->value, std::sqrt(2.0), 1e-15);
}

TEST(Verify, CylinderAndCoreRemoved) {
  EXPECT_TRUE(verify("cyl", {}, quick()).pass());
  const VerifyResult d = verify("d", {}, quick());
  EXPECT_TRUE(d.pass());
  EXPECT_EQ(d.report.find("exists")->value, 1.0);
  const VerifyResult none = verify("d", {.a_p = 0.7}, quick());
  EXPECT_TRUE(none.pass());
  EXPECT_EQ(none.report.find("exists")->value, 0.0);
  EXPECT_EQ(none.report.find("exists")->note, "no dilating map exists per paper");
  EXPECT_EQ(none.report.find("f0.contact_defect_max"), nullptr);
}

TEST(Verify, Example3) {
  const VerifyResult r = verify("ex3", {}, quick());
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.report.find("fk.horizontal_dilation")->value, 0.5, 1e-6);
  EXPECT_NEAR(r.report.find("gD.horizontal_dilation")->value, 0.5, 1e-6);
}

TEST(Verify, Operators) {
  const VerifyResult r = verify("quad", {}, quick());
  EXPECT_TRUE(r.pass());
  EXPECT_GT(r.report.find("pi_dw2.B2_max")->value, 1.0);
}

TEST(Verify, FailuresAreReportedNotThrown) {
  Report rep;
  rep.run("boom", [] { fail(ErrorKind::kDegenerateDerivative, "x"); });
  rep.at_most("small", 1e-3, 1e-6);
  EXPECT_FALSE(rep.pass());
  EXPECT_EQ(rep.checks().size(), 2u);
  EXPECT_FALSE(rep.checks()[0].pass);
  EXPECT_NE(rep.checks()[0].note.find("DegenerateDerivative"), std::string::npos);
}

TEST(Verify, ReportIsDeterministic) {
  EXPECT_EQ(to_json(verify("ex2", {}, quick())).dump(), to_json(verify("ex2", {}, quick())).dump());
}
