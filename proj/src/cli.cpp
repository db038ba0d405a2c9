#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include "lb/io.hpp"

namespace lb {

namespace {

// Everything a run can be configured with; flags override config-file values
// which override these defaults.
struct CliValues {
  double xi = 1.0;
  double tau = -0.5;
  double gamma = 0.0;

  int harmonics = 16;
  int grid = 128;
  double grad_tol = 1e-8;
  int max_iters = 500;
  int starts = 8;
  std::uint64_t seed = 0;
  double omega_min = 0.2;
  double omega_max = 3.0;

  double mean = 0.0;
  double lambda = 0.0;

  double a_min = -1.5;
  double a_max = 1.5;
  int a_steps = 31;
  double lambda_min = -0.5;
  double lambda_max = 0.5;
  int lambda_steps = 21;
  double tau_min = -2.0;
  double tau_max = 1.0;
  int tau_steps = 13;
  double gamma_min = -1.0;
  double gamma_max = 1.0;
  int gamma_steps = 9;

  std::string output;
  std::string config_path;
  bool cache = false;
};

enum class Kind { real, integer, unsigned64, boolean, text };

struct Binding {
  std::string key;
  Kind kind;
  void* ptr;
  CLI::Option* opt = nullptr;
};

class CommandSpec {
 public:
  CommandSpec(CLI::App* app, CliValues* v) : app_(app), values_(v) {}

  CLI::App* app() const { return app_; }

  void bind(const std::string& key, double* p, const std::string& help) {
    add(key, Kind::real, p, app_->add_option("--" + key, *p, help));
  }
  void bind(const std::string& key, int* p, const std::string& help) {
    add(key, Kind::integer, p, app_->add_option("--" + key, *p, help));
  }
  void bind(const std::string& key, std::uint64_t* p, const std::string& help) {
    add(key, Kind::unsigned64, p, app_->add_option("--" + key, *p, help));
  }
  void bind(const std::string& key, std::string* p, const std::string& help) {
    add(key, Kind::text, p, app_->add_option("--" + key, *p, help));
  }
  void bind_flag(const std::string& key, bool* p, const std::string& help) {
    add(key, Kind::boolean, p, app_->add_flag("--" + key + ",!--no-" + key, *p, help));
  }

  bool given(const std::string& key) const {
    for (const Binding& b : bindings_)
      if (b.key == key) return b.opt->count() > 0;
    return false;
  }

  // Overlay config-file values onto the bound struct wherever the
  // corresponding flag was not passed. Unknown keys and type mismatches are
  // collected as one-line diagnostics.
  void apply_config(const json& cfg, std::vector<std::string>& problems) {
    if (!cfg.is_object()) {
      problems.push_back("config: top level must be a JSON object");
      return;
    }
    for (const auto& [key, value] : cfg.items()) {
      const Binding* binding = nullptr;
      for (const Binding& b : bindings_)
        if (b.key == key) binding = &b;
      if (!binding) {
        problems.push_back("config: unknown key '" + key + "'");
        continue;
      }
      if (binding->opt->count() > 0) continue;  // flag wins
      switch (binding->kind) {
        case Kind::real:
          if (!value.is_number()) { problems.push_back("config: '" + key + "' must be a number"); break; }
          *static_cast<double*>(binding->ptr) = value.get<double>();
          break;
        case Kind::integer:
          if (!value.is_number_integer()) { problems.push_back("config: '" + key + "' must be an integer"); break; }
          *static_cast<int*>(binding->ptr) = value.get<int>();
          break;
        case Kind::unsigned64:
          if (!value.is_number_unsigned() && !value.is_number_integer()) {
            problems.push_back("config: '" + key + "' must be a nonnegative integer");
            break;
          }
          *static_cast<std::uint64_t*>(binding->ptr) = value.get<std::uint64_t>();
          break;
        case Kind::boolean:
          if (!value.is_boolean()) { problems.push_back("config: '" + key + "' must be a boolean"); break; }
          *static_cast<bool*>(binding->ptr) = value.get<bool>();
          break;
        case Kind::text:
          if (!value.is_string()) { problems.push_back("config: '" + key + "' must be a string"); break; }
          *static_cast<std::string*>(binding->ptr) = value.get<std::string>();
          break;
      }
    }
  }

  // Effective configuration (reproducibility block and cache key).
  json effective(const std::string& command) const {
    json cfg;
    cfg["command"] = command;
    for (const Binding& b : bindings_) {
      switch (b.kind) {
        case Kind::real: cfg[b.key] = *static_cast<const double*>(b.ptr); break;
        case Kind::integer: cfg[b.key] = *static_cast<const int*>(b.ptr); break;
        case Kind::unsigned64: cfg[b.key] = *static_cast<const std::uint64_t*>(b.ptr); break;
        case Kind::boolean: cfg[b.key] = *static_cast<const bool*>(b.ptr); break;
        case Kind::text: cfg[b.key] = *static_cast<const std::string*>(b.ptr); break;
      }
    }
    return cfg;
  }

  void drop_key(json& cfg, const std::string& key) const { cfg.erase(key); }

 private:
  void add(const std::string& key, Kind kind, void* ptr, CLI::Option* opt) {
    bindings_.push_back(Binding{key, kind, ptr, opt});
  }

  CLI::App* app_;
  CliValues* values_;
  std::vector<Binding> bindings_;
};

void bind_common(CommandSpec& spec, CliValues& v) {
  spec.bind("xi", &v.xi, "gradient-penalty scale (positive)");
  spec.bind("tau", &v.tau, "quadratic coefficient");
  spec.bind("gamma", &v.gamma, "cubic coefficient");
  spec.bind("harmonics", &v.harmonics, "number of trigonometric harmonics K");
  spec.bind("grid", &v.grid, "quadrature points per period (>= 4K+2)");
  spec.bind("grad-tol", &v.grad_tol, "gradient sup-norm convergence tolerance");
  spec.bind("max-iters", &v.max_iters, "iteration cap per start");
  spec.bind("starts", &v.starts, "multi-start count");
  spec.bind("seed", &v.seed, "seed for the randomized starts");
  spec.bind("omega-min", &v.omega_min, "lower frequency bound");
  spec.bind("omega-max", &v.omega_max, "upper frequency bound");
  spec.bind("output", &v.output, "write the primary result document here");
  spec.bind_flag("cache", &v.cache, "reuse results for identical configurations");
  spec.app()
      ->add_option("--config", v.config_path, "JSON configuration file (flags override it)")
      ->check(CLI::ExistingFile);
}

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> grid(steps);
  if (steps == 1) {
    grid[0] = lo;
    return grid;
  }
  for (int i = 0; i < steps; ++i)
    grid[i] = (lo * (steps - 1 - i) + hi * i) / (steps - 1);
  return grid;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("config: cannot read " + path);
  json cfg = json::parse(in, nullptr, false);
  if (cfg.is_discarded()) throw UsageError("config: " + path + " is not valid JSON");
  return cfg;
}

void validate_common(const CliValues& v, std::vector<std::string>& problems) {
  if (!(v.xi > 0.0) || !std::isfinite(v.xi)) problems.push_back("xi must be positive and finite");
  if (!std::isfinite(v.tau)) problems.push_back("tau must be finite");
  if (!std::isfinite(v.gamma)) problems.push_back("gamma must be finite");
  if (v.harmonics < 1) problems.push_back("harmonics must be >= 1");
  if (v.grid < min_points(std::max(v.harmonics, 1)))
    problems.push_back("grid must be >= 4*harmonics + 2");
  if (!(v.grad_tol > 0.0)) problems.push_back("grad-tol must be positive");
  if (v.max_iters < 1) problems.push_back("max-iters must be >= 1");
  if (v.starts < 1) problems.push_back("starts must be >= 1");
  if (!(v.omega_min > 0.0) || !(v.omega_min < v.omega_max))
    problems.push_back("need 0 < omega-min < omega-max");
}

MinimizeOptions solver_options(const CliValues& v) {
  MinimizeOptions opts;
  opts.harmonics = v.harmonics;
  opts.grid = v.grid;
  opts.grad_tol = v.grad_tol;
  opts.max_iters = v.max_iters;
  opts.starts = v.starts;
  opts.seed = v.seed;
  opts.omega_min = v.omega_min;
  opts.omega_max = v.omega_max;
  return opts;
}

void emit(const std::string& payload, const std::string& output_path, const json& config) {
  if (output_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + output_path);
  out << payload;
  if (!out) throw IoError("write failed: " + output_path);
  // CSV documents cannot embed their configuration; keep it alongside.
  if (payload.rfind("{", 0) != 0) {
    std::ofstream meta(output_path + ".meta.json", std::ios::binary);
    if (meta) meta << json{{"config", config}}.dump(2) << '\n';
  }
}

struct CommandResult {
  std::string payload;
  int exit_code = 0;
};

CommandResult run_minimize(const CliValues& v, const json& config, bool mean_given,
                           bool lambda_given) {
  const ModelParams params(v.xi, v.tau, v.gamma);
  const MinimizeOptions opts = solver_options(v);
  const MinimizeResult result = mean_given ? minimize_constrained(params, v.mean, opts)
                                           : minimize_lagrangian(params, v.lambda, opts);
  (void)lambda_given;
  json doc{{"config", config}, {"result", to_json(result)}};
  return {doc.dump(2) + "\n", 0};
}

CommandResult run_sweep_mean(const CliValues& v, const json& config) {
  const ModelParams params(v.xi, v.tau, v.gamma);
  const MinimizeOptions opts = solver_options(v);
  LandscapeTable table = sweep_mean(params, linspace(v.a_min, v.a_max, v.a_steps), opts);
  resolve_convexity(params, table, opts);
  (void)config;
  return {landscape_csv(table), 0};
}

CommandResult run_sweep_lambda(const CliValues& v, const json& config) {
  const ModelParams params(v.xi, v.tau, v.gamma);
  const MinimizeOptions opts = solver_options(v);
  const DualTable table =
      sweep_lambda(params, linspace(v.lambda_min, v.lambda_max, v.lambda_steps), opts);
  (void)config;
  return {dual_csv(table), 0};
}

CommandResult run_condition(const CliValues& v, const json& config) {
  const ModelParams params(v.xi, v.tau, v.gamma);
  const MinimizeOptions opts = solver_options(v);
  LandscapeTable table = sweep_mean(params, linspace(v.a_min, v.a_max, v.a_steps), opts);
  resolve_convexity(params, table, opts);
  const ConditionReport report = existence_condition(params, table, opts);
  json doc{{"config", config}, {"report", to_json(report)}};
  return {doc.dump(2) + "\n", 0};
}

CommandResult run_conjecture(const CliValues& v, const json& config) {
  const ModelParams params(v.xi, v.tau, v.gamma);
  const MinimizeOptions opts = solver_options(v);
  LandscapeTable table = sweep_mean(params, linspace(v.a_min, v.a_max, v.a_steps), opts);
  resolve_convexity(params, table, opts);
  const GapReport gap = conjecture_gap(table);
  json doc{{"config", config},
           {"report",
            json{{"max_gap", gap.max_gap},
                 {"at_a", gap.at_a},
                 {"at_index", gap.at_index},
                 {"significant", gap.significant},
                 {"a_grid", table.a_grid},
                 {"psi", table.psi},
                 {"hstar", table.hstar},
                 {"envelope", table.envelope},
                 {"gaps", gap.gaps}}}};
  return {doc.dump(2) + "\n", 0};
}

CommandResult run_phase_diagram(const CliValues& v, const json& config) {
  const MinimizeOptions opts = solver_options(v);
  std::vector<PhaseCell> cells;
  for (double tau : linspace(v.tau_min, v.tau_max, v.tau_steps)) {
    for (double gamma : linspace(v.gamma_min, v.gamma_max, v.gamma_steps)) {
      const ModelParams params(v.xi, tau, gamma);
      const LandscapeTable table = sweep_mean(params, {-0.25, 0.0, 0.25}, opts);
      const ConditionReport report = existence_condition(params, table, opts);
      PhaseCell cell;
      cell.tau = tau;
      cell.gamma = gamma;
      cell.psi0 = report.psi_at_zero;
      cell.m_f = report.m_f;
      cell.condition_holds = report.condition_holds;
      cell.is_trivial = table.results[1].is_trivial;
      cell.omega = table.results[1].profile.omega;
      cells.push_back(cell);
    }
  }
  (void)config;
  return {phase_diagram_csv(cells), 0};
}

CommandResult run_check(const CliValues& v, const json& config) {
  const ModelParams params(v.xi, v.tau, v.gamma);
  const DiagnosticsReport report = run_suite(params, solver_options(v));
  std::cout << summary_text(report);
  json doc{{"config", config}, {"report", to_json(report)}};
  return {doc.dump(2) + "\n", report.overall_pass() ? 0 : 1};
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CliValues v;
  CLI::App app{"Constrained Landau-Brazovskii energy minimization toolkit"};
  app.require_subcommand(1);

  struct Cmd {
    std::string name;
    CommandSpec spec;
  };
  std::vector<Cmd> commands;
  commands.reserve(7);

  auto make = [&](const std::string& name, const std::string& help) -> CommandSpec& {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.push_back(Cmd{name, CommandSpec(sub, &v)});
    CommandSpec& spec = commands.back().spec;
    bind_common(spec, v);
    return spec;
  };

  CommandSpec& c_min = make("minimize", "one constrained (--mean) or tilted (--lambda) solve");
  c_min.bind("mean", &v.mean, "mean constraint level a");
  c_min.bind("lambda", &v.lambda, "tilt multiplier for the free-mean problem");

  CommandSpec& c_sweep = make("sweep-mean", "reconstruct the value function over a mean grid");
  c_sweep.bind("a-min", &v.a_min, "lowest mean");
  c_sweep.bind("a-max", &v.a_max, "highest mean");
  c_sweep.bind("a-steps", &v.a_steps, "grid points (>= 3)");

  CommandSpec& c_dual = make("sweep-lambda", "tilted values over a multiplier grid");
  c_dual.bind("lambda-min", &v.lambda_min, "lowest multiplier");
  c_dual.bind("lambda-max", &v.lambda_max, "highest multiplier");
  c_dual.bind("lambda-steps", &v.lambda_steps, "grid points (>= 2)");

  CommandSpec& c_cond = make("condition", "existence-condition report at mean zero");
  c_cond.bind("a-min", &v.a_min, "lowest mean (grid must contain 0)");
  c_cond.bind("a-max", &v.a_max, "highest mean");
  c_cond.bind("a-steps", &v.a_steps, "grid points (>= 3)");

  CommandSpec& c_conj = make("conjecture", "value function vs convex envelope gap report");
  c_conj.bind("a-min", &v.a_min, "lowest mean");
  c_conj.bind("a-max", &v.a_max, "highest mean");
  c_conj.bind("a-steps", &v.a_steps, "grid points (>= 3)");

  CommandSpec& c_phase = make("phase-diagram", "trivial/nontrivial classification over (tau, gamma)");
  c_phase.bind("tau-min", &v.tau_min, "lowest tau");
  c_phase.bind("tau-max", &v.tau_max, "highest tau");
  c_phase.bind("tau-steps", &v.tau_steps, "tau grid points");
  c_phase.bind("gamma-min", &v.gamma_min, "lowest gamma");
  c_phase.bind("gamma-max", &v.gamma_max, "highest gamma");
  c_phase.bind("gamma-steps", &v.gamma_steps, "gamma grid points");

  make("check", "run the full diagnostic battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion") {
      app.exit(e);
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Cmd* active = nullptr;
    for (Cmd& c : commands)
      if (c.spec.app()->parsed()) active = &c;
    if (!active) {
      std::cerr << "error: no subcommand\n";
      return 2;
    }
    CommandSpec& spec = active->spec;

    std::vector<std::string> problems;
    if (!v.config_path.empty()) spec.apply_config(load_config_file(v.config_path), problems);
    validate_common(v, problems);

    bool mean_given = false, lambda_given = false;
    if (active->name == "minimize") {
      mean_given = spec.given("mean");
      lambda_given = spec.given("lambda");
      if (!v.config_path.empty() && !mean_given && !lambda_given) {
        const json cfg = load_config_file(v.config_path);
        mean_given = cfg.contains("mean");
        lambda_given = cfg.contains("lambda");
      }
      if (mean_given == lambda_given)
        problems.push_back("minimize: pass exactly one of --mean or --lambda");
    } else if (active->name == "sweep-mean" || active->name == "condition" ||
               active->name == "conjecture") {
      if (v.a_steps < 3) problems.push_back("a-steps must be >= 3");
      if (!(v.a_min < v.a_max)) problems.push_back("need a-min < a-max");
    } else if (active->name == "sweep-lambda") {
      if (v.lambda_steps < 2) problems.push_back("lambda-steps must be >= 2");
      if (!(v.lambda_min < v.lambda_max)) problems.push_back("need lambda-min < lambda-max");
    } else if (active->name == "phase-diagram") {
      if (v.tau_steps < 1 || v.gamma_steps < 1) problems.push_back("grid steps must be >= 1");
      if (v.tau_steps > 1 && !(v.tau_min < v.tau_max)) problems.push_back("need tau-min < tau-max");
      if (v.gamma_steps > 1 && !(v.gamma_min < v.gamma_max))
        problems.push_back("need gamma-min < gamma-max");
    }
    if (!problems.empty()) {
      for (const std::string& p : problems) std::cerr << "error: " << p << "\n";
      return 2;
    }

    json config = spec.effective(active->name);
    if (active->name == "minimize") spec.drop_key(config, lambda_given ? "mean" : "lambda");

    const RunCache cache(RunCache::default_dir(), v.cache);
    if (active->name != "check") {
      if (std::optional<std::string> hit = cache.lookup(config)) {
        emit(*hit, v.output, config);
        return 0;
      }
    }

    CommandResult result;
    if (active->name == "minimize")
      result = run_minimize(v, config, mean_given, lambda_given);
    else if (active->name == "sweep-mean")
      result = run_sweep_mean(v, config);
    else if (active->name == "sweep-lambda")
      result = run_sweep_lambda(v, config);
    else if (active->name == "condition")
      result = run_condition(v, config);
    else if (active->name == "conjecture")
      result = run_conjecture(v, config);
    else if (active->name == "phase-diagram")
      result = run_phase_diagram(v, config);
    else
      result = run_check(v, config);

    if (active->name != "check") cache.store(config, result.payload);
    if (active->name == "check" && v.output.empty()) {
      // Human summary already went to stdout; only write JSON when asked.
    } else {
      emit(result.payload, v.output, config);
    }
    return result.exit_code;
  } catch (const UsageError& e) {
    std::istringstream lines(e.what());
    std::string line;
    while (std::getline(lines, line)) std::cerr << "error: " << line << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lb
