// Command-line front end: run, landscape, scaling-study, simulate, summarize, validate.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "w2bayes/errors.hpp"
#include "w2bayes/experiments.hpp"
#include "w2bayes/scenario.hpp"
#include "w2bayes/signal_io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitHealth = 4;

struct ScenarioArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> overrides;
  unsigned threads = 1;
};

void add_scenario_flags(CLI::App* cmd, ScenarioArgs& a, bool required = true) {
  auto* opt = cmd->add_option("--scenario", a.scenario, "Built-in name or path to a JSON scenario");
  if (required) opt->required();
  cmd->add_option("--seed", a.seed, "Master seed (overrides the scenario)");
  cmd->add_option("--out", a.out, "Output directory (overrides the scenario)");
  cmd->add_option("--override", a.overrides, "Dotted-path override key=value (repeatable)");
  cmd->add_option("--threads", a.threads, "Worker threads for forward solves and scans")
      ->check(CLI::PositiveNumber);
}

w2b::Scenario load(const ScenarioArgs& a) {
  auto config = w2b::load_config(a.scenario);
  for (const auto& o : a.overrides) w2b::apply_override(config, o);
  if (a.seed) config["seed"] = *a.seed;
  if (a.out) config["output"] = *a.out;
  return w2b::parse_scenario(config);
}

int cmd_run(const ScenarioArgs& a) {
  const auto sc = load(a);
  w2b::RunOptions opts;
  opts.threads = a.threads;
  const auto res = w2b::run_inversion(sc, opts);
  std::cout << "scenario " << sc.name << " fingerprint " << res.manifest["fingerprint"].get<std::string>()
            << "\n";
  for (std::size_t i = 0; i <= res.chain.dim; ++i) {
    const std::string name = i < res.chain.dim ? sc.parameter_names[i] : "s";
    std::cout << "  " << name << ": mean " << res.summaries[i].mean << " std " << res.summaries[i].std
              << "\n";
  }
  std::cout << "acceptance rate " << res.chain.acceptance_rate() << ", " << res.chain.size()
            << " retained samples, " << res.wall_seconds << " s, artifacts in " << sc.output.string() << "\n";
  if (!res.healthy) {
    std::cerr << "health check failed: acceptance rate " << res.chain.acceptance_rate()
              << " outside (0.05, 0.95)\n";
    return kExitHealth;
  }
  return 0;
}

struct LandscapeArgs {
  std::optional<std::size_t> param;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<double> step;
  std::optional<double> s_ref;
};

int cmd_landscape(const ScenarioArgs& a, const LandscapeArgs& l) {
  const auto sc = load(a);
  w2b::LandscapeSpec spec = sc.landscape;
  if (l.param) spec.param_index = *l.param;
  if (l.from) spec.start = *l.from;
  if (l.to) spec.stop = *l.to;
  if (l.step) spec.step = *l.step;
  if (l.s_ref) spec.s_ref = *l.s_ref;
  const auto res = w2b::run_landscape(sc, spec, a.threads);
  fs::create_directories(sc.output);
  w2b::write_csv(sc.output / "landscape.csv", w2b::landscape_to_csv(res.scan));
  w2b::write_json(sc.output / "landscape.json", res.metadata);
  std::cout << res.scan.values.size() << " points written to " << (sc.output / "landscape.csv").string()
            << "\n";
  return 0;
}

struct ScalingArgs {
  double width = 0.7;
  std::string out = "runs/scaling";
  double exponential_c = 1.0;
  double linexp_c = 1.0;
  unsigned threads = 1;
};

int cmd_scaling(const ScalingArgs& s) {
  w2b::ScalingStudyConfig cfg;
  cfg.width = s.width;
  cfg.shifts = w2b::default_shifts();
  cfg.exponential_c = s.exponential_c;
  cfg.linexp_c = s.linexp_c;
  cfg.threads = s.threads;
  const auto table = w2b::run_scaling_study(cfg);
  fs::create_directories(s.out);
  w2b::write_csv(fs::path(s.out) / "scaling.csv", table);
  std::cout << "scaling study (width " << s.width << ") written to " << (fs::path(s.out) / "scaling.csv").string()
            << "\n";
  return 0;
}

int cmd_simulate(const ScenarioArgs& a, const std::vector<double>& theta) {
  auto sc = load(a);
  if (!theta.empty()) {
    if (theta.size() != sc.dim()) throw w2b::ValidationError("--theta: wrong number of entries");
    sc.theta_true = theta;
  }
  const auto forward = w2b::make_forward_model(sc.forward, a.threads);
  const auto data = w2b::synthesize_data(sc, *forward);
  fs::create_directories(sc.output);
  w2b::write_csv(sc.output / "clean.csv", w2b::gather_to_csv(data.clean));
  w2b::write_csv(sc.output / "observed.csv", w2b::gather_to_csv(data.observed));
  w2b::write_json(sc.output / "observed.json", w2b::gather_to_json(data.observed));
  std::cout << data.clean.size() << " traces of " << data.clean.grid().size() << " samples written to "
            << sc.output.string() << "\n";
  return 0;
}

int cmd_summarize(const ScenarioArgs& a, const std::string& chain_path, std::size_t bins) {
  const auto chain = w2b::chain_from_csv(w2b::read_csv(fs::path(chain_path)));
  const auto table = w2b::read_csv(fs::path(chain_path));
  std::vector<std::string> names(table.header.begin() + 1, table.header.end() - 2);
  std::optional<w2b::BlockLayout> layout;
  if (!a.scenario.empty()) layout = w2b::block_layout(load(a));
  const fs::path dir = a.out ? fs::path(*a.out) : fs::path(chain_path).parent_path();
  w2b::write_chain_summaries(chain, names, bins, layout, dir);
  for (std::size_t i = 0; i <= chain.dim; ++i) {
    const auto ps = w2b::posterior_summary(chain, i, bins);
    std::cout << (i < chain.dim ? names[i] : std::string("s")) << ": mean " << ps.mean << " std " << ps.std
              << "\n";
  }
  return 0;
}

int cmd_validate(const ScenarioArgs& a) {
  const auto sc = load(a);
  std::cout << "scenario " << sc.name << " is valid; fingerprint " << w2b::config_fingerprint(sc.config)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein-driven Bayesian inversion"};
  app.require_subcommand(1);

  ScenarioArgs run_args, land_args, sim_args, sum_args, val_args;
  LandscapeArgs land;
  ScalingArgs scaling;
  std::vector<double> sim_theta;
  std::string chain_path;
  std::size_t bins = 40;

  auto* run = app.add_subcommand("run", "Generate synthetic data and sample the posterior");
  add_scenario_flags(run, run_args);

  auto* landscape = app.add_subcommand("landscape", "Scan both log-likelihoods along one parameter");
  add_scenario_flags(landscape, land_args);
  landscape->add_option("--param", land.param, "Parameter index (0-based)");
  landscape->add_option("--from", land.from, "First grid value");
  landscape->add_option("--to", land.to, "Last grid value");
  landscape->add_option("--step", land.step, "Grid step");
  landscape->add_option("--s-ref", land.s_ref, "Reference s");

  auto* sstudy = app.add_subcommand("scaling-study", "Distance versus shift for every scaling");
  sstudy->add_option("--width", scaling.width, "Gaussian width of the triple pulse");
  sstudy->add_option("--out", scaling.out, "Output directory");
  sstudy->add_option("--exp-c", scaling.exponential_c, "Exponential scaling constant");
  sstudy->add_option("--linexp-c", scaling.linexp_c, "Linear-exponential scaling constant");
  sstudy->add_option("--threads", scaling.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Forward model only: clean and noisy gathers");
  add_scenario_flags(simulate, sim_args);
  simulate->add_option("--theta", sim_theta, "Parameter vector (defaults to the scenario's true one)");

  auto* summarize = app.add_subcommand("summarize", "Histograms, traces and block maps of an existing chain");
  add_scenario_flags(summarize, sum_args, false);
  summarize->add_option("--chain", chain_path, "chain.csv to summarize")->required();
  summarize->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check a scenario and print its fingerprint");
  add_scenario_flags(validate, val_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_args);
    if (*landscape) return cmd_landscape(land_args, land);
    if (*sstudy) return cmd_scaling(scaling);
    if (*simulate) return cmd_simulate(sim_args, sim_theta);
    if (*summarize) return cmd_summarize(sum_args, chain_path, bins);
    if (*validate) return cmd_validate(val_args);
  } catch (const w2b::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const w2b::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
