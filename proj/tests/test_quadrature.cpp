#include <gtest/gtest.h>

#include <random>

#include "hckit/domain.hpp"
#include "hckit/parallel.hpp"
#include "oracles.hpp"

using namespace hckit;

TEST(Quadrature, PolynomialsAreExact) {
  EXPECT_NEAR(integrate_1d([](double x) { return x * x * x; }, {0, 2}), 4.0, 1e-14);
  EXPECT_NEAR(integrate_1d([](double x) { return std::exp(x); }, {0, 1}), std::exp(1.0) - 1, 1e-14);
}

TEST(Quadrature, GradingRemovesCubeRootSingularity) {
  const double exact = 1.5;  // int_0^1 x^(-1/3) dx
  EXPECT_NEAR(integrate_1d([](double x) { return std::cbrt(1.0 / x); }, {0, 1, 3, 1}), exact, 1e-12);
  EXPECT_NEAR(integrate_1d([](double x) { return std::cbrt(1.0 / (1 - x)); }, {0, 1, 1, 3}), exact, 1e-12);
  EXPECT_NEAR(integrate_1d([](double x) { return std::cbrt(1.0 / (x * (1 - x))); }, {0, 1, 3, 3}),
              std::pow(std::tgamma(2.0 / 3), 2) / std::tgamma(4.0 / 3), 1e-10);  // B(2/3, 2/3)
}

TEST(Quadrature, NonConvergenceIsReported) {
  QuadOptions opt;
  opt.max_doublings = 2;
  try {
    integrate_1d([](double x) { return std::sin(1.0 / (x + 1e-4)); }, {0, 1}, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kQuadratureNotConverged);
  }
}

TEST(Quadrature, ThreeDimensional) {
  const double v = integrate_3d([](const ChartPoint& u) { return u[0] * u[1] * u[1] * std::cos(u[2]); },
                                {Axis{0, 1}, Axis{0, 2}, Axis{0, kPi / 2}});
  EXPECT_NEAR(v, 0.5 * 8.0 / 3.0, 1e-13);
}

TEST(Domains, VolumesMatchClosedFormsAndMonteCarlo) {
  EXPECT_NEAR(sheared_box_domain(1, 2, 1.5).volume(), 3.0, 1e-12);
  EXPECT_NEAR(sector_domain(2, 1, kPi / 2).volume(), 2 * 0.5 * kPi / 2, 1e-12);
  EXPECT_NEAR(cyl_domain(1, 1).volume(), kPi, 1e-12);
  EXPECT_NEAR(d_domain(1, 1).volume(), kPi, 1e-12);
  const double a = 2.0;
  EXPECT_NEAR(annulus_domain(a).volume(), kPi * kPi * (std::pow(a, 4) - 1) / 2, 1e-10);

  // Monte Carlo oracles for the two non-trivial volume elements
  const NamedDomain ann = annulus_domain(1.3);
  const double lo[3] = {-1.3, -1.3, -1.3 * 1.3}, hi[3] = {1.3, 1.3, 1.3 * 1.3};
  const double mc = oracle::mc_volume([&](double x, double y, double t) { return ann.contains({{x, y}, t}); }, lo,
                                      hi, 400000);
  EXPECT_NEAR(mc / ann.volume(), 1.0, 0.02);

  const NamedDomain ex1 = sheared_box_domain(1, 0.5, 1);
  const double lo1[3] = {0, 0, -1}, hi1[3] = {1, 0.5, 1};
  const double mc1 = oracle::mc_volume([&](double x, double y, double t) { return ex1.contains({{x, y}, t}); }, lo1,
                                       hi1, 200000);
  EXPECT_NEAR(mc1 / ex1.volume(), 1.0, 0.02);
}

TEST(Domains, SamplesLieInsideAndOffAxis) {
  std::mt19937_64 rng(1);
  for (const NamedDomain& d : {sheared_box_domain(1, 2, 1.5), sector_domain(2, 1, kPi / 2), cyl_domain(1, 1),
                               d_domain(1, 2), annulus_domain(2)}) {
    const auto grid = d.grid(8);
    EXPECT_GT(grid.size(), 400u) << d.id;
    for (const HPoint& p : grid) EXPECT_TRUE(d.contains(p)) << d.id;
    const auto rnd = d.random(500, rng);
    EXPECT_EQ(rnd.size(), 500u);
    for (const HPoint& p : rnd) EXPECT_GE(std::abs(p.z), kAxisTube);
  }
}

TEST(Parallel, DeterministicReductionAcrossThreadCounts) {
  auto run = [](const char* threads) {
    setenv("HCKIT_THREADS", threads, 1);
    return integrate_3d([](const ChartPoint& u) { return std::sin(u[0] + 2 * u[1]) * std::exp(u[2]); },
                        {Axis{0, 1}, Axis{0, 1}, Axis{0, 1}});
  };
  const double one = run("1"), many = run("7");
  unsetenv("HCKIT_THREADS");
  EXPECT_EQ(one, many);
  EXPECT_EQ(thread_count() >= 1, true);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, [](std::size_t i) {
                 if (i == 57) throw std::runtime_error("x");
               }),
               std::runtime_error);
}
