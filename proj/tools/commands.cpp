#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "feller/conditions.hpp"
#include "feller/errors.hpp"
#include "feller/validation.hpp"

namespace feller::cli {

namespace fs = std::filesystem;

namespace {

std::string fixed3(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 3);
  return std::string(buf, r.ptr);
}

std::string vec_text(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

fs::path output_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
  const fs::path dir = opts.out.empty() ? fs::path(cfg.output_dir) : opts.out;
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f << content;
  if (!f) throw Error("cannot write " + p.string());
}

std::uint64_t resolve_seed(ExperimentConfig& cfg, const RunOptions& opts) {
  if (opts.seed) cfg.simulation.seed = opts.seed;
  if (!cfg.simulation.seed) throw ConfigError(cfg.source + ": seed is mandatory: set [simulation] seed or pass --seed");
  return *cfg.simulation.seed;
}

nlohmann::json to_json(const TestResult& t) {
  nlohmann::json j = {{"name", t.name},     {"description", t.description},
                      {"statistic", t.statistic}, {"threshold", t.threshold},
                      {"pass", t.pass},     {"n", t.n},
                      {"seed", t.seed}};
  j["p_value"] = t.p_value ? nlohmann::json(*t.p_value) : nlohmann::json(nullptr);
  return j;
}

std::string report_json(const ValidationReport& rep, const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  j["title"] = rep.title;
  j["pass"] = rep.pass();
  j["metadata"] = rep.metadata;
  j["tests"] = nlohmann::json::array();
  for (const auto& t : rep.tests) j["tests"].push_back(to_json(t));
  return j.dump(2) + "\n";
}

std::string condition_text(const std::vector<ConditionReport>& reports,
                           const std::map<std::string, std::string>& meta) {
  std::ostringstream o;
  o << "title = check-symbol\n";
  for (const auto& [k, v] : meta) o << k << " = " << v << "\n";
  bool all = true;
  for (const auto& r : reports) {
    all = all && r.pass;
    o << "\n[condition " << to_string(r.tag) << "]\n";
    o << "pass = " << (r.pass ? "true" : "false") << "\n";
    o << "grid = " << r.grid << "\n";
    if (r.estimated_constant) o << "estimated_constant = " << format_double(*r.estimated_constant) << "\n";
    if (r.witness.x.size()) {
      o << "witness_x = " << vec_text(r.witness.x) << "\n";
      o << "witness_xi = " << vec_text(r.witness.xi) << "\n";
      o << "witness_q = " << format_double(r.witness.value.real()) << ", "
        << format_double(r.witness.value.imag()) << "\n";
    }
    if (!r.note.empty()) o << "note = " << r.note << "\n";
  }
  o << "\nverdict = " << (all ? "pass" : "fail") << "\n";
  return o.str();
}

std::string condition_json(const std::vector<ConditionReport>& reports,
                           const std::map<std::string, std::string>& meta) {
  nlohmann::json j;
  j["command"] = "check-symbol";
  j["metadata"] = meta;
  j["conditions"] = nlohmann::json::array();
  bool all = true;
  for (const auto& r : reports) {
    all = all && r.pass;
    nlohmann::json c = {{"tag", to_string(r.tag)}, {"pass", r.pass}, {"grid", r.grid}, {"note", r.note}};
    c["estimated_constant"] = r.estimated_constant ? nlohmann::json(*r.estimated_constant) : nlohmann::json(nullptr);
    if (r.witness.x.size()) {
      c["witness"] = {{"x", std::vector<double>(r.witness.x.data(), r.witness.x.data() + r.witness.x.size())},
                      {"xi", std::vector<double>(r.witness.xi.data(), r.witness.xi.data() + r.witness.xi.size())},
                      {"q", {r.witness.value.real(), r.witness.value.imag()}}};
    }
    j["conditions"].push_back(c);
  }
  j["pass"] = all;
  return j.dump(2) + "\n";
}

std::vector<Vector> frozen_states(const ExperimentConfig& cfg, int dim) {
  std::vector<Vector> out;
  for (const auto& s : cfg.validate.states) out.push_back(Eigen::Map<const Vector>(s.data(), dim));
  if (out.empty()) out.push_back(initial_state(cfg, dim));
  return out;
}

// Stream ids for the frozen-state tests; disjoint from the ensemble and experiment streams.
constexpr std::uint64_t kCfStreams = 1'000'000;
constexpr std::uint64_t kJumpStreams = 2'000'000;

}  // namespace

std::string format17(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string path_csv(const Path& p) {
  std::string s = "t";
  const Eigen::Index d = p.states.cols();
  for (Eigen::Index j = 0; j < d; ++j) s += ",x" + std::to_string(j + 1);
  s += '\n';
  for (std::size_t i = 0; i < p.times.size(); ++i) {
    s += format17(p.times[i]);
    for (Eigen::Index j = 0; j < d; ++j) s += "," + format17(p.states(static_cast<Eigen::Index>(i), j));
    s += '\n';
  }
  return s;
}

std::string path_svg(const Path& p) {
  constexpr double W = 800, H = 400, L = 60, R = 20, T = 20, B = 40;
  const double t_end = p.times.empty() ? 1.0 : std::max(p.times.back(), 1e-300);
  double lo = p.states.col(0).minCoeff();
  double hi = p.states.col(0).maxCoeff();
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const auto sx = [&](double t) { return L + (W - L - R) * t / t_end; };
  const auto sy = [&](double x) { return T + (H - T - B) * (hi - x) / (hi - lo); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" viewBox=\"0 0 800 400\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"400\" fill=\"white\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << L << "\" y=\"" << H - 10 << "\" font-size=\"12\">0</text>\n";
  o << "<text x=\"" << W - R << "\" y=\"" << H - 10 << "\" font-size=\"12\" text-anchor=\"end\">t = "
    << format_double(t_end) << "</text>\n";
  o << "<text x=\"" << L - 5 << "\" y=\"" << T + 10 << "\" font-size=\"12\" text-anchor=\"end\">"
    << fixed3(hi) << "</text>\n";
  o << "<text x=\"" << L - 5 << "\" y=\"" << H - B << "\" font-size=\"12\" text-anchor=\"end\">"
    << fixed3(lo) << "</text>\n";
  o << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < p.times.size(); ++i) {
    o << (i ? " " : "") << fixed3(sx(p.times[i])) << ","
      << fixed3(sy(p.states(static_cast<Eigen::Index>(i), 0)));
  }
  o << "\"/>\n</svg>\n";
  return o.str();
}

int cmd_simulate(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log) {
  const std::uint64_t seed = resolve_seed(cfg, opts);
  const double h = cfg.simulation.step_size();
  const long m = cfg.simulation.steps();
  const auto sym = build_symbol(cfg.symbol);
  const EulerEngine engine(sym, engine_options(cfg));
  const Vector x0 = initial_state(cfg, sym.dim());
  const Ensemble e = engine.simulate_ensemble(x0, h, m, cfg.simulation.n_paths, seed);

  const fs::path dir = output_dir(cfg, opts);
  for (const auto& p : e.paths) {
    write_file(dir / ("path_" + std::to_string(p.stream_id) + ".csv"), path_csv(p));
  }
  std::string term = "path";
  for (int j = 0; j < sym.dim(); ++j) term += ",x" + std::to_string(j + 1);
  term += '\n';
  for (Eigen::Index i = 0; i < e.terminal.rows(); ++i) {
    term += std::to_string(e.stream_ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < e.terminal.cols(); ++j) term += "," + format17(e.terminal(i, j));
    term += '\n';
  }
  write_file(dir / "terminal.csv", term);
  write_file(dir / "manifest.ini", to_manifest(cfg, "simulate"));
  if (!opts.quiet) {
    log << "simulated " << cfg.simulation.n_paths << " path(s) of " << m << " steps, h = "
        << format_double(h) << "; wrote " << e.paths.size() << " path file(s)"
        << (e.all_paths_recorded ? "" : " (first paths only)") << " to " << dir.string() << "\n";
  }
  return kPass;
}

int cmd_check_symbol(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log) {
  const auto sym = build_symbol(cfg.symbol);
  const auto& c = cfg.check;
  const auto xg = uniform_state_grid(c.x_min, c.x_max, sym.dim(), c.x_points);
  const auto xig = log_frequency_grid(sym.dim(), c.xi_points, c.xi_min, c.xi_max);

  std::vector<ConditionReport> reports;
  reports.push_back(check_condition_A3(sym, xg));
  reports.push_back(check_condition_A2(sym, xg, xig));
  for (auto& r : check_structural(sym, xg, xig)) reports.push_back(std::move(r));
  if (c.closed_form && sym.has_closed_form()) reports.push_back(check_closed_form(sym, xg, xig));

  std::map<std::string, std::string> meta{{"family", cfg.symbol.family},
                                          {"symbol", sym.name()},
                                          {"dim", std::to_string(sym.dim())}};
  const fs::path dir = output_dir(cfg, opts);
  write_file(dir / "report.txt", condition_text(reports, meta));
  write_file(dir / "summary.json", condition_json(reports, meta));
  write_file(dir / "manifest.ini", to_manifest(cfg, "check-symbol"));

  bool all = true;
  for (const auto& r : reports) {
    all = all && r.pass;
    if (opts.quiet) continue;
    log << (r.pass ? "PASS " : "FAIL ") << to_string(r.tag);
    if (!r.pass && r.witness.x.size()) {
      log << "  witness x = (" << vec_text(r.witness.x) << "), xi = (" << vec_text(r.witness.xi)
          << "), q = " << format_double(r.witness.value.real()) << " + "
          << format_double(r.witness.value.imag()) << "i";
    }
    log << "\n";
  }
  return all ? kPass : kFail;
}

int cmd_validate(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log) {
  const std::uint64_t seed = resolve_seed(cfg, opts);
  const auto sym = build_symbol(cfg.symbol);
  const EulerEngine engine(sym, engine_options(cfg));
  const auto& v = cfg.validate;
  const auto has = [&](const char* t) { return std::find(v.tests.begin(), v.tests.end(), t) != v.tests.end(); };
  const bool needs_h = has("cf") || has("jump_count");
  const double h = needs_h ? cfg.simulation.step_size() : 0.0;

  ValidationReport rep;
  rep.title = "validate";
  rep.metadata = {{"family", cfg.symbol.family}, {"seed", std::to_string(seed)}};
  if (needs_h) rep.metadata["h"] = format_double(h);

  const auto states = frozen_states(cfg, sym.dim());
  if (has("cf")) {
    for (std::size_t k = 0; k < states.size(); ++k) {
      const Vector& x = states[k];
      RngStream rng(seed, kCfStreams + k);
      Matrix y(v.n, sym.dim());
      for (long i = 0; i < v.n; ++i) y.row(i) = (engine.step(x, h, rng) - x).transpose();
      const double bias = v.bias ? *v.bias
                          : engine.sampler_at(x, h)->strategy() == SamplerStrategy::TruncatedJump ? 1e-3
                                                                                                   : 0.0;
      const auto grid = make_cf_grid(sym, x, h, v.n, v.points);
      auto t = cf_match_test(y, grid, bias, seed, "cf_match x=" + vec_text(x));
      rep.tests.push_back(std::move(t));
    }
  }
  if (has("jump_count")) {
    for (std::size_t k = 0; k < states.size(); ++k) {
      const Vector& x = states[k];
      RngStream rng(seed, kJumpStreams + k);
      std::vector<long> counts(static_cast<std::size_t>(v.n));
      for (auto& c : counts) engine.step(x, h, rng, &c);
      const double mean = h * engine.sampler_at(x, h)->total_jump_rate();
      rep.tests.push_back(jump_count_test(counts, mean, v.level, seed, "jump_count x=" + vec_text(x)));
    }
  }
  if (has("convergence")) {
    const auto& s = cfg.simulation;
    const double T = s.T ? *s.T : *s.h * static_cast<double>(*s.n_steps);
    const auto c = convergence_study(engine, initial_state(cfg, sym.dim()), T, v.convergence_h,
                                     v.convergence_paths, seed);
    for (std::size_t k = 0; k < c.distance.size(); ++k) {
      rep.metadata["convergence_distance_" + std::to_string(k)] = format_double(c.distance[k]);
    }
    rep.metadata["convergence_noise_floor"] = format_double(c.noise_floor);
    rep.tests.push_back(c.trend);
  }
  if (has("state_dependence")) {
    const auto sd = state_dependence_experiment(engine, v.state_dependence_n, seed,
                                                v.state_dependence_h, v.level);
    rep.metadata["tail_mass_x2"] = format_double(sd.tail_high);
    rep.metadata["tail_mass_xm1"] = format_double(sd.tail_low);
    for (const auto& t : sd.tests) rep.tests.push_back(t);
  }

  const fs::path dir = output_dir(cfg, opts);
  write_file(dir / "report.txt", rep.to_text());
  write_file(dir / "summary.json", report_json(rep, "validate"));
  write_file(dir / "manifest.ini", to_manifest(cfg, "validate"));
  if (!opts.quiet) {
    for (const auto& t : rep.tests) {
      log << (t.pass ? "PASS " : "FAIL ") << t.name << "  statistic = " << format_double(t.statistic)
          << ", threshold = " << format_double(t.threshold) << "\n";
    }
  }
  return rep.pass() ? kPass : kFail;
}

int cmd_demo_figure1(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log) {
  auto& s = cfg.simulation;
  s.h.reset();
  s.T = 5.0;
  s.n_steps = 1000;
  s.n_paths = 1;
  const std::uint64_t seed = resolve_seed(cfg, opts);
  const auto sym = build_symbol(cfg.symbol);
  const EulerEngine engine(sym, engine_options(cfg));
  RngStream rng(seed, 0);
  const Path p = engine.simulate_path(initial_state(cfg, sym.dim()), s.step_size(), *s.n_steps, rng);

  const fs::path dir = output_dir(cfg, opts);
  write_file(dir / "figure1.csv", path_csv(p));
  write_file(dir / "figure1.svg", path_svg(p));
  write_file(dir / "manifest.ini", to_manifest(cfg, "demo-figure1"));
  if (!opts.quiet) {
    log << "wrote figure1.csv and figure1.svg (" << p.times.size() << " points, seed " << seed
        << ") to " << dir.string() << "\n";
  }
  return kPass;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Euler scheme for Feller processes given by their symbol"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "Experiment config file");
  auto* seed_opt = app.add_option("--seed", seed, "Seed; overrides [simulation] seed");
  app.add_option("--out", out_dir, "Output directory; overrides [output] dir");
  app.add_flag("--quiet", quiet, "Suppress progress output");

  auto* simulate = app.add_subcommand("simulate", "Simulate paths and write CSV files");
  auto* check = app.add_subcommand("check-symbol", "Check the symbol conditions on grids");
  auto* validate = app.add_subcommand("validate", "Run the statistical validation tests");
  auto* demo = app.add_subcommand("demo-figure1", "Stable-like demo path as CSV and SVG");
  for (auto* sub : {simulate, check, validate, demo}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kPass : kUsage;
  }

  RunOptions opts;
  opts.out = out_dir;
  opts.quiet = quiet;
  if (*seed_opt) opts.seed = seed;
  try {
    if (config_path.empty() && !demo->parsed()) {
      throw ConfigError("--config is required for this command");
    }
    // Without a config the demo runs the built-in stable-like preset.
    ExperimentConfig cfg = config_path.empty() ? parse_config("", "<preset>") : load_config(config_path);
    if (simulate->parsed()) return cmd_simulate(cfg, opts, out);
    if (check->parsed()) return cmd_check_symbol(cfg, opts, out);
    if (validate->parsed()) return cmd_validate(cfg, opts, out);
    return cmd_demo_figure1(cfg, opts, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const SimulationError& e) {
    err << "simulation failed: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFail;
  }
}

}  // namespace feller::cli
