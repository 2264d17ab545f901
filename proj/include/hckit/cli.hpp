#pragma once

// Command-line driver. Every command writes a JSON report (or a CSV for
// `trace`) and returns 0 when all checks pass, 1 on a check failure and 2 on
// a usage or configuration error.

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hckit/catalog.hpp"

namespace hckit {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string command;
  std::string id, density_id, map_id;
  std::string params_file;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  std::string out;
  int steps = 1000;
  double step_size = 1e-3;
  std::optional<int> grid;
  std::string start = "0,0,0";
  std::string mode = "horizontal";
};

namespace cli {

/// Thrown for anything the user can fix by changing the command line or inputs.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_config_error(ErrorKind k) {
  return k == ErrorKind::kUnknownIdentifier || k == ErrorKind::kParameterConstraintViolated ||
         k == ErrorKind::kInvalidParameters;
}

inline Params read_params(const std::string& path, const std::string& example) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (j.is_object() && j.contains("example") && j["example"] != example)
    throw ConfigError(path + " is for example " + j["example"].dump() + ", not " + example);
  return params_from_json(j);
}

inline HPoint parse_point(const std::string& s) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    double x = 0.0;
    const char* b = s.data() + pos;
    const char* e = s.data() + comma;
    while (b < e && *b == ' ') ++b;
    const auto r = std::from_chars(b, e, x);
    if (r.ec != std::errc() || r.ptr != e) throw ConfigError("bad coordinate list '" + s + "'");
    v.push_back(x);
    pos = comma + 1;
  }
  if (v.size() == 2) v.push_back(0.0);
  if (v.size() != 3) throw ConfigError("--start wants x,y[,t]");
  return {{v[0], v[1]}, v[2]};
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw ConfigError("cannot write " + path);
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

inline void write_json(const RunConfig& cfg, std::ostream& fallback, json body) {
  json j = {{"schema", kSchemaVersion}, {"command", cfg.command}, {"seed", cfg.seed}};
  j.update(body);
  Output o(cfg.out, fallback);
  o.stream() << j.dump(2) << '\n';
}

// -- commands --------------------------------------------------------------------------------

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  VerifyOptions opt;
  if (cfg.tol) opt.tol = *cfg.tol;
  if (cfg.grid) opt.grid = *cfg.grid;
  opt.seed = cfg.seed;
  const VerifyResult r = verify(cfg.id, read_params(cfg.params_file, cfg.id), opt);
  json body = to_json(r);
  body["tol"] = opt.tol;
  write_json(cfg, out, std::move(body));
  return r.pass() ? kExitPass : kExitCheckFailed;
}

inline int cmd_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const QuadDiff q = load_qd(cfg.id);
  TraceOptions opt;
  if (cfg.mode == "horizontal") opt.mode = TrajectoryKind::kHorizontal;
  else if (cfg.mode == "vertical") opt.mode = TrajectoryKind::kVertical;
  else throw ConfigError("--mode must be horizontal or vertical");
  opt.step = cfg.step_size;
  opt.n_steps = cfg.steps;
  const HPoint start = parse_point(cfg.start);
  if (!q.coeff.in_domain(start)) throw ConfigError("start point is outside the domain of " + cfg.id);

  Output o(cfg.out, out);
  if (cfg.steps == 0) {
    o.stream() << kCurveCsvHeader << '\n';
    return kExitPass;
  }
  const TraceResult r = trace(q, start, opt);
  write_csv(o.stream(), r.curve);
  if (r.complete()) return kExitPass;
  o.stream() << "# status=" << to_string(r.status) << " partial\n";
  err << "hckit: trace stopped early: " << to_string(r.status) << " (" << r.message << ")\n";
  return kExitCheckFailed;
}

/// Known closed-form moduli for catalog family/density pairs.
inline std::optional<double> closed_form_modulus(const std::string& fam, const std::string& rho, const ExampleParams& p) {
  if (fam == "ex2_radii" && rho == "rho0") return ex2_modulus(p.a, p.b, p.c);
  if (fam == "ex3_horizontal" && rho == "ex3_rho") return ex3_modulus(p.a);
  if (fam == "cyl_horizontal" && rho == "cyl_rho") return cyl_density_energy(p.a, p.b);
  return std::nullopt;
}

inline int cmd_modulus(const RunConfig& cfg, std::ostream& out) {
  const std::string example = example_of(cfg.id);
  if (example_of(cfg.density_id) != example)
    throw ConfigError(cfg.id + " and " + cfg.density_id + " belong to different examples");
  const Params params = read_params(cfg.params_file, example);
  const ExampleParams p = resolve(example, params);
  const CurveFamily fam = load_as<CurveFamily>(cfg.id, params);
  const Density rho = load_as<Density>(cfg.density_id, params);
  const int per_param = cfg.grid.value_or(64);
  const double tol = cfg.tol.value_or(1e-6);

  const double margin = admissibility_margin(rho, fam, per_param);
  const bool admissible = margin >= 1.0 - kAdmissibilityTol;
  const double E = energy(rho, fam.domain);
  bool pass = admissible;
  json body = {{"family", cfg.id},
               {"density", cfg.density_id},
               {"params", p},
               {"curves", std::pow(per_param, double(fam.params.size()))},
               {"margin", margin},
               {"admissible", admissible},
               {"energy", E}};
  if (admissible) body["modulus_upper_bound"] = E;
  if (const auto want = closed_form_modulus(cfg.id, cfg.density_id, p)) {
    const double rel = std::abs(E - *want) / *want;
    body["closed_form"] = *want;
    body["relative_error"] = rel;
    pass = pass && rel <= tol;
  }
  if (!cfg.map_id.empty()) {
    if (example_of(cfg.map_id) != example) throw ConfigError(cfg.map_id + " belongs to a different example");
    const NamedMap m = load_as<NamedMap>(cfg.map_id, params);
    InequalityOptions opt;
    opt.per_param = per_param;
    opt.seed = cfg.seed;
    const InequalityReport r =
        check_distortion_inequalities(m.map, fam, rho, m.target_density, m.source, m.target, opt);
    body["inequalities"] = r;
    pass = pass && r.all_hold();
  }
  body["pass"] = pass;
  write_json(cfg, out, std::move(body));
  return pass ? kExitPass : kExitCheckFailed;
}

inline int cmd_distortion(const RunConfig& cfg, std::ostream& out) {
  const Params params = read_params(cfg.params_file, example_of(cfg.id));
  const NamedMap m = load_as<NamedMap>(cfg.id, params);
  std::mt19937_64 rng(cfg.seed);
  const std::vector<HPoint> pts = distortion_samples(m.source, rng, cfg.grid.value_or(32), 10000);
  const detail::MapStats s = detail::map_stats(m.map, pts, m.target);
  double sum = 0.0;
  for (double K : parallel_map<double>(pts.size(), [&](std::size_t i) { return distortion(m.map, pts[i]); })) sum += K;
  const double tol = cfg.tol.value_or(1e-8);
  const bool pass = s.contact <= tol && s.beltrami2 <= tol && s.mu < 1.0 && s.outside == 0;
  write_json(cfg, out,
             {{"map", cfg.id},
              {"params", m.params},
              {"samples", s.samples},
              {"K_max", s.K_max},
              {"K_min", s.K_min},
              {"K_spread", s.K_max - s.K_min},
              {"K_mean", sum / double(pts.size())},
              {"lambda_min", s.lambda_min},
              {"lambda_max", s.lambda_max},
              {"contact_defect_max", s.contact},
              {"beltrami_second_equation_max", s.beltrami2},
              {"mu_sup", s.mu},
              {"images_outside_target", s.outside},
              {"tol", tol},
              {"pass", pass}});
  return pass ? kExitPass : kExitCheckFailed;
}

inline int cmd_operators(const RunConfig& cfg, std::ostream& out) {
  const QuadDiff q = load_qd(cfg.id);
  std::mt19937_64 rng(cfg.seed);
  const OperatorStats s = operator_stats(q, operator_points(rng, 1000));
  const double tol = cfg.tol.value_or(1e-9);
  const bool pass = s.D2prime_max <= tol && s.D2second_max <= tol;
  write_json(cfg, out,
             {{"qd", cfg.id},
              {"points", 1000},
              {"D2prime_max", s.D2prime_max},
              {"D2second_max", s.D2second_max},
              {"B2_max", s.B2_max},
              {"B2_min", s.B2_min},
              {"B2_nonzero", s.B2_max > tol},
              {"tol", tol},
              {"pass", pass}});
  return pass ? kExitPass : kExitCheckFailed;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Contact-geometry toolkit on the Heisenberg group", "hckit"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* c) {
    c->add_option("--params", cfg.params_file, "JSON {example, params:{...}}");
    c->add_option("--tol", cfg.tol, "check tolerance")->check(CLI::PositiveNumber);
    c->add_option("--seed", cfg.seed, "random seed");
    c->add_option("--out", cfg.out, "output path (default stdout)");
    c->add_option("--grid", cfg.grid, "sampling grid size")->check(CLI::PositiveNumber);
  };

  CLI::App* verify_cmd = app.add_subcommand("verify", "run every check of a catalog example");
  verify_cmd->add_option("example", cfg.id, "ex1, ex2, cyl, d, ex3 or quad")->required();
  common(verify_cmd);

  CLI::App* trace_cmd = app.add_subcommand("trace", "trace a trajectory and write it as CSV");
  trace_cmd->add_option("qd", cfg.id, "quadratic differential")->required();
  trace_cmd->add_option("--start", cfg.start, "x,y[,t]");
  trace_cmd->add_option("--mode", cfg.mode, "horizontal or vertical");
  trace_cmd->add_option("--steps", cfg.steps)->check(CLI::NonNegativeNumber);
  trace_cmd->add_option("--step-size", cfg.step_size)->check(CLI::PositiveNumber);
  trace_cmd->add_option("--out", cfg.out, "CSV path (default stdout)");

  CLI::App* modulus_cmd = app.add_subcommand("modulus", "admissibility and energy of a density for a family");
  modulus_cmd->add_option("family", cfg.id)->required();
  modulus_cmd->add_option("density", cfg.density_id)->required();
  modulus_cmd->add_option("--map", cfg.map_id, "also check the distortion inequalities for this map");
  common(modulus_cmd);

  CLI::App* distortion_cmd = app.add_subcommand("distortion", "contact, Beltrami and distortion statistics of a map");
  distortion_cmd->add_option("map", cfg.id)->required();
  common(distortion_cmd);

  CLI::App* operators_cmd = app.add_subcommand("operators", "D2', D2'' and B2 of a quadratic differential");
  operators_cmd->add_option("qd", cfg.id)->required();
  common(operators_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*verify_cmd) return cfg.command = "verify", cli::cmd_verify(cfg, out);
    if (*trace_cmd) return cfg.command = "trace", cli::cmd_trace(cfg, out, err);
    if (*modulus_cmd) return cfg.command = "modulus", cli::cmd_modulus(cfg, out);
    if (*distortion_cmd) return cfg.command = "distortion", cli::cmd_distortion(cfg, out);
    if (*operators_cmd) return cfg.command = "operators", cli::cmd_operators(cfg, out);
  } catch (const cli::ConfigError& e) {
    err << "hckit: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "hckit: " << e.what() << '\n';
    return cli::is_config_error(e.kind()) ? kExitConfig : kExitCheckFailed;
  }
  return kExitConfig;
}

}  // namespace hckit
