// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "hckit/catalog.hpp"
#include "hckit/natural_chart.hpp"
#include "hckit/rumin.hpp"

#ifndef HCKIT_CLI_PATH
#error "HCKIT_CLI_PATH must name the hckit executable"
#endif

using namespace hckit;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<HPoint> random_points(std::mt19937_64& rng, std::size_t n, double scale = 1.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<HPoint> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({{u(rng), u(rng)}, u(rng)});
  return out;
}

// 1
Outcome modulus_value() {
  double worst = 0.0, slowest = 0.0;
  for (const auto [a, b, c] : {std::array{2.0, 1.0, kPi / 2}, std::array{1.0, 4.0, 1.0}, std::array{3.0, 2.0, kPi}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const double E = energy(ex2_rho0(b), sector_domain(a, b, c));
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    worst = std::max(worst, std::abs(E - 8 * a * c / (27 * b)) / (8 * a * c / (27 * b)));
  }
  return {worst < 1e-6 && slowest < 5.0, "max rel err " + fmt(worst) + ", slowest " + fmt(slowest) + " s"};
}

// 2
Outcome admissibility_equality() {
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto [a, b, c] : {std::array{2.0, 1.0, kPi / 2}, std::array{1.0, 4.0, 1.0}, std::array{3.0, 2.0, kPi}}) {
    const Density rho = ex2_rho0(b);
    for (const ParamCurve& r : ex2_radii_family(a, b, c).curves(32)) {
      worst = std::max(worst, std::abs(line_integral(rho, r) - 1.0));
      ++n;
    }
  }
  return {worst < 1e-9, std::to_string(n) + " radii, max |L - 1| = " + fmt(worst)};
}

// 3
Outcome operator_annihilation() {
  std::mt19937_64 rng(3);
  const std::vector<HPoint> pts = operator_points(rng, 1000);
  double d2 = 0.0;
  for (const char* id : {"dz2", "pi_dw2", "pi_dw2_over_w2"}) {
    const OperatorStats s = operator_stats(load_qd(id), pts);
    d2 = std::max({d2, s.D2prime_max, s.D2second_max});
  }
  const ScalarField b = B2(qd_pi_dw2());
  double b2 = 0.0;
  for (const HPoint& p : pts) b2 = std::max(b2, std::abs(b(p) - 64.0 * p.z * p.z * std::conj(p.z)));
  return {d2 < 1e-9 && b2 < 1e-10, "D2 defect " + fmt(d2) + ", |B2 - 64 z^2 zbar| " + fmt(b2)};
}

// 4
Outcome naturality() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<ContactMap> maps;
  for (int i = 0; i < 3; ++i) maps.push_back(left_translation({{u(rng), u(rng)}, u(rng)}));
  for (double th : {0.7, 2.1, -1.3}) maps.push_back(rotation(th));
  for (double r : {0.6, 1.6, 2.5}) maps.push_back(dilation(r));
  double worst = 0.0;
  for (const char* id : {"dz2", "pi_dw2", "pi_dw2_over_w2"}) {
    const QuadDiff q = load_qd(id);
    for (const ContactMap& g : maps) {
      // 1000 points with both p and g(p) off the axis where pi_dw2_over_w2 is singular
      std::vector<HPoint> pts;
      for (const HPoint& p : operator_points(rng, 4000)) {
        if (std::abs(cr_projection(g(p))) > 0.1) pts.push_back(p);
        if (pts.size() == 1000) break;
      }
      if (pts.size() < 1000) return {false, "could not sample 1000 points for " + g.name};
      worst = std::max(worst, naturality_defect(q, g, pts));
    }
  }
  return {worst < 1e-8, "9 similarities x 3 differentials x 1000 points, max defect " + fmt(worst)};
}

// 5
Outcome commutator_and_relations() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-1, 1);
  std::uniform_int_distribution<int> d(0, 3);
  double comm = 0.0, rel = 0.0;
  for (int n = 0; n < 10; ++n) {
    Polynomial poly;
    for (int i = 0; i < 6; ++i) poly.push_back({{c(rng), c(rng)}, d(rng), d(rng), d(rng)});
    const ScalarField f = polynomial_field(poly);
    const std::vector<HPoint> pts = random_points(rng, 100);
    for (const HPoint& p : pts)
      comm = std::max(comm, std::abs(eval_ZbarZ(f, p) - eval_ZZbar(f, p) - 2.0 * kI * eval_T(f, p)));
    for (const auto& [name, defect] : identity_suite(f, pts)) rel = std::max(rel, defect);
  }
  return {comm < 1e-12 && rel < 1e-8, "commutator " + fmt(comm) + ", relations " + fmt(rel)};
}

// 6
Outcome trajectory_closed_forms() {
  using namespace closed_form;
  struct Case {
    const char* qd;
    ParamCurve ref;
    TrajectoryKind mode;
  };
  std::vector<Case> cases;
  for (double y : {-0.4, 0.6}) cases.push_back({"dz2", ex1_horizontal(y, -0.2, 0.0, 2.0), TrajectoryKind::kHorizontal});
  for (double x : {0.3, -1.1}) cases.push_back({"dz2", ex1_vertical(x, 0.5, 0.0, 2.0), TrajectoryKind::kVertical});
  for (cplx z : {cplx(0.7, 0.5), cplx(-0.3, 1.2)})
    cases.push_back({"pi_dw2", ex2_horizontal(z, 0.0, 10.0), TrajectoryKind::kHorizontal});
  for (double th : {0.9, 4.0})
    cases.push_back({"pi_dw2", ex2_radius(std::polar(1.0, th), 0.5, 0.2, 5.0), TrajectoryKind::kVertical});
  for (double y : {0.5, 1.2, 2.4})
    cases.push_back({"pi_dw2_over_w2", ex3_horizontal(y, std::polar(1.0, 2.0), 0.0, 5.0), TrajectoryKind::kHorizontal});
  for (double x : {0.5, -0.3})
    cases.push_back({"pi_dw2_over_w2", ex3_vertical(x, kI, kPi / 2, kPi - 1e-3), TrajectoryKind::kVertical});

  double worst = 0.0;
  for (const Case& k : cases) {
    const TraceResult r =
        trace(load_qd(k.qd), k.ref.point(k.ref.s0), detail::trace_along(k.mode, k.ref.zdot(k.ref.s0)));
    if (!r.complete()) return {false, std::string(k.qd) + ": " + r.message};
    worst = std::max(worst, align_and_compare(r.curve, k.ref));
  }
  return {worst < 1e-5, std::to_string(cases.size()) + " traces, max sup distance " + fmt(worst)};
}

// 7
Outcome q_lengths() {
  const QuadDiff q = qd_pi_dw2();
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto& [a, b] : {std::pair{1.0, 1.0}, std::pair{2.5, 0.5}, std::pair{0.4, 3.0}})
    for (const ParamCurve& c : cyl_horizontal_family(a, b).curves(8)) {
      worst = std::max(worst, std::abs(q_length(q, c) - a));
      ++n;
    }
  return {worst < 1e-6, std::to_string(n) + " trajectories, max |L - a| = " + fmt(worst)};
}

// 8
Outcome dilation_factors() {
  const int n = 24;
  VerifyOptions opt;
  opt.trajectories = n;
  std::string detail;
  bool ok = true;
  auto factor = [&](const VerifyResult& r, const std::string& name, double expected) {
    const CheckResult* c = r.report.find(name);
    const CheckResult* count = r.report.find(name + ".trajectories");
    const bool pass = c && count && c->pass && count->value >= 20 && std::abs(c->value - expected) <= 1e-6 * expected;
    ok = ok && pass;
    detail += name + " " + (c ? fmt(c->value) : "missing") + "; ";
  };
  const VerifyResult e1 = verify("ex1", {}, opt);
  factor(e1, "f0.horizontal_dilation", e1.params.a_p / e1.params.a);
  const VerifyResult e2 = verify("ex2", {}, opt);
  factor(e2, "f0.horizontal_dilation", e2.params.a_p / e2.params.a);
  const VerifyResult e3 = verify("ex3", {}, opt);
  factor(e3, "fk.horizontal_dilation", e3.params.k);

  // Example-2 vertical: f0 sends the radius s -> (s u, t) to s -> (sqrt(b'/b) s u', t'),
  // i.e. the trajectory reparametrized by sqrt(b'/b).
  const ExampleParams p = e2.params;
  const NamedMap m = load_as<NamedMap>("ex2_f0");
  const double want = std::sqrt(p.b_p / p.b);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    const ParamCurve r = closed_form::ex2_radius(std::polar(1.0, p.c * u), p.a * (0.1 + 0.8 * u), 0.0, std::sqrt(p.b));
    const HPoint o = m.map(r.point(0.0));
    for (int j = 1; j < 16; ++j) {
      const double s = r.s1 * j / 16;
      const HPoint img = m.map(r.point(s));
      const cplx dir = std::polar(1.0, std::arg(img.z));
      const HPoint expect{want * s * dir, o.t};
      worst = std::max({worst, euclid_dist(img, expect), std::abs(std::arg(img.z / m.map(r.point(r.s1)).z))});
    }
  }
  ok = ok && worst <= 1e-6 * want;
  detail += "ex2 vertical reparametrization sqrt(b'/b) = " + fmt(want) + " (max defect " + fmt(worst) + ")";
  return {ok, detail};
}

// 9
Outcome distortion_constants() {
  double worst2 = 0.0;
  for (const Params& pr : {Params{}, Params{.a_p = 3.0, .b_p = 1.0}, Params{.a = 1.0, .b = 4.0, .c = 1.0, .a_p = 2.0, .b_p = 3.0}}) {
    const NamedMap m = load_as<NamedMap>("ex2_f0", pr);
    const ExampleParams& p = m.params;
    const double r = p.a_p * p.b / (p.a * p.b_p);
    const double K2 = std::max(r * r, 1 / (r * r));
    for (const HPoint& x : m.source.grid(32)) worst2 = std::max(worst2, std::abs(std::pow(distortion(m.map, x), 2) - K2));
  }
  const NamedMap e1 = load_as<NamedMap>("ex1_f0");
  const detail::MapStats s = detail::map_stats(e1.map, e1.source.grid(32), e1.target);
  const double spread = s.K_max - s.K_min;
  return {worst2 < 1e-8 && spread < 1e-10, "ex2 |K^2 - max(r^2, r^-2)| " + fmt(worst2) + ", ex1 K spread " + fmt(spread)};
}

// 10
Outcome contact_and_beltrami() {
  double contact = 0, b2 = 0, mu = 0;
  int maps = 0;
  const std::vector<std::pair<const char*, Params>> ids = {
      {"ex1_f0", {}}, {"ex2_f0", {}}, {"cyl_f0", {}}, {"d_f0", {}}, {"radial_stretch", {}},
      {"radial_stretch", {.k = 2.0}}, {"gD", {}}, {"gD", {.k = 2.0, .D = -1.0}}};
  for (const auto& [id, pr] : ids) {
    const NamedMap m = load_as<NamedMap>(id, pr);
    const detail::MapStats s = detail::map_stats(m.map, m.source.grid(32), m.target);
    contact = std::max(contact, s.contact);
    b2 = std::max(b2, s.beltrami2);
    mu = std::max(mu, s.mu);
    ++maps;
  }
  return {contact < 1e-8 && b2 < 1e-8 && mu < 1.0, std::to_string(maps) + " maps on 32^3 grids: contact " + fmt(contact) +
                                                        ", Beltrami " + fmt(b2) + ", sup |mu| " + fmt(mu)};
}

// 11
Outcome natural_chart_trivial() {
  const QuadDiff q = qd_dz2();
  const NaturalChart plus = natural_chart(q, {}), minus = natural_chart(q, {}, {}, -1);
  const ContactMap m = plus.map();
  const std::vector<HPoint> detour = {{{0.9, -0.4}, 0.7}, {{-0.6, 0.8}, -0.5}};
  double frame = 0, contact = 0, chart = 0, paths = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const HPoint p{{-0.5 + 0.25 * i, -0.5 + 0.25 * j}, -0.5 + 0.25 * k};
        frame = std::max({frame, std::abs(std::pow(eval_Z(m.f1, p), 2) - 1.0), std::abs(eval_Zbar(m.f1, p))});
        contact = std::max(contact, contact_defect(m, p).norm());
        const ChartValue v = plus.evaluate(p), w = plus.evaluate(p, detour), o = minus.evaluate(p);
        chart = std::max({chart, std::abs(v.f - p.z), std::abs(v.h - p.t), std::abs(o.f + p.z), std::abs(o.h - p.t)});
        paths = std::max({paths, std::abs(v.f - w.f), std::abs(v.h - w.h)});
      }
  return {frame < 1e-6 && contact < 1e-6 && chart < 1e-9 && paths < 1e-9,
          "(Zf)^2-1, Zbar f " + fmt(frame) + "; contact " + fmt(contact) + "; |chart - (+-z, t)| " + fmt(chart) +
              "; path change " + fmt(paths)};
}

// 12
Outcome distortion_inequalities() {
  std::string detail;
  bool ok = true;
  auto one = [&](const std::string& map_id, const std::string& fam_id, const Params& pr) {
    const NamedMap m = load_as<NamedMap>(map_id, pr);
    const CurveFamily fam = load_as<CurveFamily>(fam_id, pr);
    const InequalityReport r =
        check_distortion_inequalities(m.map, fam, m.density, m.target_density, m.source, m.target);
    ok = ok && r.all_hold();
    detail += map_id + (pr.k ? " k=" + fmt(*pr.k) : "") + (r.all_hold() ? " holds" : " FAILS") + "; ";
  };
  one("ex2_f0", "ex2_radii", {});
  one("ex2_f0", "ex2_radii", {.a_p = 3.0, .b_p = 1.0});
  one("radial_stretch", "ex3_horizontal", {.k = 0.5});
  one("radial_stretch", "ex3_horizontal", {.k = 2.0});
  return {ok, detail};
}

// 13
Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "hckit_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::string> commands = {
      "verify ex2 --seed 11", "verify ex3 --seed 11 --grid 12", "distortion ex2_f0 --seed 11",
      "operators pi_dw2_over_w2 --seed 11", "modulus ex2_radii rho0 --map ex2_f0 --grid 16 --seed 11",
      "trace pi_dw2 --start 1,0.5"};
  int idx = 0;
  for (const std::string& cmd : commands) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto path = dir / ("run" + std::to_string(idx) + "_" + std::to_string(rep));
      // the second run uses a single worker: reports must not depend on the thread count
      const std::string env = rep == 0 ? "" : "HCKIT_THREADS=1 ";
      const std::string line = env + "\"" HCKIT_CLI_PATH "\" " + cmd + " > \"" + path.string() + "\"";
      if (std::system(line.c_str()) != 0) return {false, "non-zero exit: " + cmd};
      std::ifstream in(path, std::ios::binary);
      outputs[rep].assign(std::istreambuf_iterator<char>(in), {});
    }
    if (outputs[0].empty() || outputs[0] != outputs[1]) return {false, "reports differ: " + cmd};
    ++idx;
  }
  return {true, std::to_string(commands.size()) + " commands, byte-identical across runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Modulus value", modulus_value},
      {"Admissibility with equality", admissibility_equality},
      {"Operator annihilation", operator_annihilation},
      {"Naturality", naturality},
      {"Commutator and Rumin relations", commutator_and_relations},
      {"Trajectory closed forms", trajectory_closed_forms},
      {"q-lengths", q_lengths},
      {"Dilation factors", dilation_factors},
      {"Distortion constants", distortion_constants},
      {"Contact and Beltrami", contact_and_beltrami},
      {"Natural chart", natural_chart_trivial},
      {"Distortion inequalities", distortion_inequalities},
      {"Determinism", determinism},
  };
  int failed = 0, i = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << ++i << ". " << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria pass") << std::endl;
  return failed ? 1 : 0;
}
