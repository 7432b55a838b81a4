#include "w2bayes/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "w2bayes/errors.hpp"
#include "w2bayes/parallel.hpp"

namespace w2b {

namespace fs = std::filesystem;
using nlohmann::json;

SyntheticData synthesize_data(const Scenario& scenario, const ForwardModel& forward) {
  Gather clean = forward.simulate(scenario.theta_true);
  Rng rng(seed_plan(scenario.seed).data_noise);
  Gather observed = scenario.noise.empty() ? clean : pollute(clean, scenario.noise, rng);
  return {std::move(clean), std::move(observed)};
}

InverseProblem make_problem(const Scenario& scenario, std::shared_ptr<const ForwardModel> forward,
                            Gather observed) {
  return {std::move(forward), std::move(observed), scenario.likelihood, scenario.prior,
          scenario.s_prior};
}

CsvTable chain_to_csv(const Chain& chain, const std::vector<std::string>& names) {
  if (names.size() != chain.dim) throw ValidationError("chain csv: one name per parameter required");
  CsvTable t;
  t.header.push_back("iteration");
  t.header.insert(t.header.end(), names.begin(), names.end());
  t.header.push_back("s");
  t.header.push_back("accepted");
  t.rows.reserve(chain.size());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    std::vector<double> row;
    row.reserve(chain.dim + 3);
    row.push_back(static_cast<double>(chain.iterations[k]));
    for (std::size_t i = 0; i < chain.dim; ++i) row.push_back(chain.theta_at(k, i));
    row.push_back(chain.s[k]);
    row.push_back(chain.retained_accepted[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Chain chain_from_csv(const CsvTable& table) {
  const std::size_t cols = table.header.size();
  if (cols < 4 || table.header.front() != "iteration" || table.header[cols - 2] != "s" ||
      table.header.back() != "accepted") {
    throw ValidationError("chain csv: expected columns iteration, <parameters>, s, accepted");
  }
  Chain c;
  c.dim = cols - 3;
  for (const auto& row : table.rows) {
    if (row.size() != cols) throw ValidationError("chain csv: ragged row");
    c.iterations.push_back(static_cast<std::size_t>(row[0]));
    c.theta.insert(c.theta.end(), row.begin() + 1, row.begin() + 1 + static_cast<std::ptrdiff_t>(c.dim));
    c.s.push_back(row[cols - 2]);
    c.retained_accepted.push_back(row[cols - 1] != 0.0 ? 1 : 0);
  }
  if (c.size() == 0) throw ValidationError("chain csv: no samples");
  return c;
}

CsvTable histogram_to_csv(const Histogram& h) {
  CsvTable t{{"bin_lo", "bin_hi", "count"}, {}};
  const double width = (h.hi - h.lo) / static_cast<double>(h.counts.size());
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double lo = h.lo + static_cast<double>(b) * width;
    const double hi = b + 1 == h.counts.size() ? h.hi : lo + width;
    t.rows.push_back({lo, hi, static_cast<double>(h.counts[b])});
  }
  return t;
}

CsvTable trace_to_csv(const Chain& chain, std::size_t param_index) {
  CsvTable t{{"iteration", "value"}, {}};
  const auto v = chain.column(param_index);
  for (std::size_t k = 0; k < v.size(); ++k) {
    t.rows.push_back({static_cast<double>(chain.iterations[k]), v[k]});
  }
  return t;
}

BlockMaps summarize_blocks(const Chain& chain, const BlockLayout& layout) {
  if (chain.dim != layout.count()) {
    throw ValidationError("block summary: chain has " + std::to_string(chain.dim) +
                          " parameters but the layout has " + std::to_string(layout.count()) + " blocks");
  }
  BlockMaps maps{layout, {}, {}};
  for (std::size_t i = 0; i < chain.dim; ++i) {
    const auto ps = posterior_summary(chain, i, 1);
    maps.mean.push_back(ps.mean);
    maps.std.push_back(ps.std);
  }
  return maps;
}

CsvTable block_map_to_csv(const BlockLayout& layout, const std::vector<double>& values) {
  if (values.size() != layout.count()) throw ValidationError("block map: size mismatch");
  CsvTable t;
  t.header.push_back("row");
  for (int c = 0; c < layout.cols; ++c) t.header.push_back("col_" + std::to_string(c + 1));
  for (int r = 0; r < layout.rows; ++r) {
    std::vector<double> row{static_cast<double>(r + 1)};
    for (int c = 0; c < layout.cols; ++c) row.push_back(values[static_cast<std::size_t>(r * layout.cols + c)]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<std::string> write_chain_summaries(const Chain& chain, const std::vector<std::string>& names,
                                               std::size_t bins, const std::optional<BlockLayout>& layout,
                                               const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::string> files;
  for (std::size_t i = 0; i <= chain.dim; ++i) {
    const std::string& name = i < chain.dim ? names[i] : std::string("s");
    const auto ps = posterior_summary(chain, i, bins);
    write_csv(dir / ("hist_" + name + ".csv"), histogram_to_csv(ps.histogram));
    write_csv(dir / ("trace_" + name + ".csv"), trace_to_csv(chain, i));
    files.push_back("hist_" + name + ".csv");
    files.push_back("trace_" + name + ".csv");
  }
  if (layout) {
    const auto maps = summarize_blocks(chain, *layout);
    write_csv(dir / "blocks_mean.csv", block_map_to_csv(*layout, maps.mean));
    write_csv(dir / "blocks_std.csv", block_map_to_csv(*layout, maps.std));
    files.push_back("blocks_mean.csv");
    files.push_back("blocks_std.csv");
  }
  return files;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

RunResult run_inversion(const Scenario& scenario, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto forward = make_forward_model(scenario.forward, options.threads);
  RunResult res{Chain{}, synthesize_data(scenario, *forward), {}, 0.0, true, json::object()};
  const InverseProblem problem = make_problem(scenario, forward, res.data.observed);

  const ChainConfig cfg{scenario.schedule, scenario.proposal, scenario.theta0, scenario.s0};
  res.chain = run_chain(problem, cfg);
  const std::string fingerprint = config_fingerprint(scenario.config);
  res.chain.fingerprint = fingerprint;
  for (std::size_t i = 0; i <= res.chain.dim; ++i) {
    res.summaries.push_back(posterior_summary(res.chain, i, scenario.histogram_bins));
  }
  res.healthy = acceptance_healthy(res.chain);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const SeedPlan seeds = seed_plan(scenario.seed);
  json posterior = json::object();
  for (std::size_t i = 0; i <= res.chain.dim; ++i) {
    const std::string& name = i < res.chain.dim ? scenario.parameter_names[i] : std::string("s");
    posterior[name] = {{"mean", res.summaries[i].mean}, {"std", res.summaries[i].std}};
  }
  res.manifest = {
      {"scenario", scenario.name},
      {"fingerprint", fingerprint},
      {"seeds", {{"master", seeds.master}, {"data_noise", seeds.data_noise}, {"chain", seeds.chain}}},
      {"schedule",
       {{"iterations", scenario.schedule.iterations},
        {"burn_in", scenario.schedule.burn_in},
        {"thin", scenario.schedule.thin}}},
      {"likelihood", misfit_kind_name(scenario.likelihood.kind)},
      {"retained", res.chain.size()},
      {"acceptance_rate", res.chain.acceptance_rate()},
      {"accepted", res.chain.accepted},
      {"attempted", res.chain.attempted},
      {"forward_failures", res.chain.forward_failures},
      {"adapted_covariance", res.chain.adapted},
      {"healthy", res.healthy},
      {"theta_true", scenario.theta_true},
      {"posterior", posterior},
      {"tool_version", kToolVersion},
  };

  if (options.write_artifacts) {
    const fs::path dir = options.out.value_or(scenario.output);
    fs::create_directories(dir);
    std::vector<std::string> files{"chain.csv", "observed.csv", "clean.csv", "scenario.json"};
    write_csv(dir / "chain.csv", chain_to_csv(res.chain, scenario.parameter_names));
    write_csv(dir / "observed.csv", gather_to_csv(res.data.observed));
    write_csv(dir / "clean.csv", gather_to_csv(res.data.clean));
    write_json(dir / "scenario.json", scenario.config);
    const auto more = write_chain_summaries(res.chain, scenario.parameter_names, scenario.histogram_bins,
                                            block_layout(scenario), dir);
    files.insert(files.end(), more.begin(), more.end());
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.manifest["wall_time_seconds"] = res.wall_seconds;
    res.manifest["artifacts"] = files;
    write_json(dir / "manifest.json", res.manifest);
  } else {
    res.manifest["wall_time_seconds"] = res.wall_seconds;
    res.manifest["artifacts"] = json::array();
  }
  return res;
}

std::vector<double> default_shifts() {
  std::vector<double> s;
  for (int k = -60; k <= 60; ++k) s.push_back(static_cast<double>(k) / 20.0);
  return s;
}

Trace triple_gaussian(const TimeGrid& grid, double width, double shift) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double t = grid.time(k) - shift;
    auto bump = [&](double c) { return std::exp(-((t - c) / width) * ((t - c) / width)); };
    v[k] = bump(4.0) - bump(5.0) + bump(6.0);
  }
  return Trace(grid, std::move(v));
}

CsvTable run_scaling_study(const ScalingStudyConfig& config) {
  if (!(config.width > 0.0)) throw ValidationError("scaling study: width must be positive");
  if (config.shifts.empty()) throw ValidationError("scaling study: no shifts");
  std::size_t ref = config.shifts.size();
  for (std::size_t i = 0; i < config.shifts.size(); ++i) {
    const double s = config.shifts[i];
    if (s < -3.0 - 1e-12 || s > 3.0 + 1e-12) throw ValidationError("scaling study: shifts must lie in [-3, 3]");
    if (std::abs(s + 3.0) < 1e-12) ref = i;
  }
  if (ref == config.shifts.size()) throw ValidationError("scaling study: the shift grid must contain -3");

  const std::vector<ScalingStrategy> scalings{LinearScaling{}, SquareScaling{},
                                              ExponentialScaling{config.exponential_c}, AbsoluteScaling{},
                                              LinearExponentialScaling{config.linexp_c}};
  const std::size_t cols = scalings.size() + 1;
  const Trace f = triple_gaussian(config.grid, config.width, 0.0);
  std::vector<std::vector<double>> raw(config.shifts.size(), std::vector<double>(cols));
  parallel_for(config.shifts.size(), config.threads, [&](std::size_t i) {
    const Trace g = triple_gaussian(config.grid, config.width, config.shifts[i]);
    for (std::size_t c = 0; c < scalings.size(); ++c) {
      try {
        raw[i][c] = w2_distance(f, g, scalings[c]);
      } catch (const NumericalError&) {
        raw[i][c] = std::numeric_limits<double>::quiet_NaN();
      }
    }
    raw[i][scalings.size()] = l2_distance(f, g);
  });

  CsvTable t{{"shift", "linear", "square", "exponential", "absolute", "linexp", "l2"}, {}};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::vector<double> row{config.shifts[i]};
    for (std::size_t c = 0; c < cols; ++c) {
      const double r = raw[ref][c];
      row.push_back(std::isfinite(r) && r > 0.0 ? raw[i][c] / r : std::numeric_limits<double>::quiet_NaN());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

LandscapeResult run_landscape(const Scenario& scenario, const LandscapeSpec& spec, unsigned threads) {
  if (spec.param_index >= scenario.dim()) throw ValidationError("landscape: parameter index out of range");
  if (spec.fixed.size() != scenario.dim()) throw ValidationError("landscape: fixed point dimension mismatch");
  const auto grid = spec.grid();
  const Interval b = scenario.prior.bounds()[spec.param_index];
  for (double v : grid) {
    if (v < b.lo - 1e-9 || v > b.hi + 1e-9) throw ValidationError("landscape: grid leaves the prior box");
  }
  const auto forward = make_forward_model(scenario.forward, 1);
  const auto data = synthesize_data(scenario, *forward);
  const ScalingStrategy scaling =
      scenario.likelihood.kind == MisfitKind::ExponentialW2 ? scenario.likelihood.scaling : ScalingStrategy{LinearScaling{}};

  LandscapeResult res;
  res.scan = landscape_scan_1d(*forward, data.observed, scaling, spec.param_index, grid, spec.fixed,
                               spec.s_ref, threads);
  const SeedPlan seeds = seed_plan(scenario.seed);
  res.metadata = {
      {"scenario", scenario.name},
      {"fingerprint", config_fingerprint(scenario.config)},
      {"parameter", scenario.parameter_names[spec.param_index]},
      {"param_index", spec.param_index},
      {"fixed", spec.fixed},
      {"s_ref", spec.s_ref},
      {"scaling", scaling_name(scaling)},
      {"seed", seeds.master},
      {"data_noise_seed", seeds.data_noise},
      {"points", grid.size()},
      {"tool_version", kToolVersion},
  };
  return res;
}

CsvTable landscape_to_csv(const LandscapeScan& scan) {
  CsvTable t{{"param_value", "log_exp", "log_norm"}, {}};
  for (std::size_t i = 0; i < scan.values.size(); ++i) {
    t.rows.push_back({scan.values[i], scan.log_exp[i], scan.log_norm[i]});
  }
  return t;
}

}  // namespace w2b
