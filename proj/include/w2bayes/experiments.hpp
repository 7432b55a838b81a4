#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "w2bayes/sampler.hpp"
#include "w2bayes/scenario.hpp"
#include "w2bayes/signal_io.hpp"

namespace w2b {

inline constexpr const char* kToolVersion = "0.1.0";

struct SyntheticData {
  Gather clean;
  Gather observed;
};

/// forward(theta*) polluted with the scenario noise, drawn from the data-noise sub-seed.
SyntheticData synthesize_data(const Scenario& scenario, const ForwardModel& forward);

InverseProblem make_problem(const Scenario& scenario, std::shared_ptr<const ForwardModel> forward,
                            Gather observed);

struct RunOptions {
  unsigned threads = 1;
  std::optional<std::filesystem::path> out;  // defaults to scenario.output
  bool write_artifacts = true;
};

struct RunResult {
  Chain chain;
  SyntheticData data;
  std::vector<PosteriorSummary> summaries;  // theta coordinates, then s
  double wall_seconds = 0.0;
  bool healthy = true;
  nlohmann::json manifest;
};

/// Data, chain, and (optionally) chain.csv, hist_*.csv, trace_*.csv,
/// observed.csv, clean.csv, block maps, manifest.json.
RunResult run_inversion(const Scenario& scenario, const RunOptions& options = {});

/// iteration, one column per parameter, s, accepted.
CsvTable chain_to_csv(const Chain& chain, const std::vector<std::string>& names);
Chain chain_from_csv(const CsvTable& table);

/// bin_lo, bin_hi, count.
CsvTable histogram_to_csv(const Histogram& h);
/// iteration, value.
CsvTable trace_to_csv(const Chain& chain, std::size_t param_index);

struct BlockMaps {
  BlockLayout layout;
  std::vector<double> mean;  // row-major, row 0 at the surface
  std::vector<double> std;
};

BlockMaps summarize_blocks(const Chain& chain, const BlockLayout& layout);

/// Header row, col_1, ..., then one line per block row.
CsvTable block_map_to_csv(const BlockLayout& layout, const std::vector<double>& values);

/// Posterior summaries, histograms and trace files (and block maps when a
/// layout is given) for an existing chain. Returns the written file names.
std::vector<std::string> write_chain_summaries(const Chain& chain, const std::vector<std::string>& names,
                                               std::size_t bins, const std::optional<BlockLayout>& layout,
                                               const std::filesystem::path& dir);

struct ScalingStudyConfig {
  double width = 0.7;
  std::vector<double> shifts;
  TimeGrid grid = make_grid(0.0, 10.0, 1001);
  double exponential_c = 1.0;
  double linexp_c = 1.0;
  unsigned threads = 1;
};

/// Shifts -3, -2.95, ..., 3.
std::vector<double> default_shifts();

/// Signal e^{-((t-4)/w)^2} - e^{-((t-5)/w)^2} + e^{-((t-6)/w)^2} shifted by `shift`.
Trace triple_gaussian(const TimeGrid& grid, double width, double shift);

/// Columns shift, linear, square, exponential, absolute, linexp, l2. Each
/// distance column is divided by its value at shift -3; failures are NaN.
CsvTable run_scaling_study(const ScalingStudyConfig& config);

struct LandscapeResult {
  LandscapeScan scan;
  nlohmann::json metadata;
};

/// Both log-likelihood curves along the scenario's landscape settings against
/// the scenario's synthetic data.
LandscapeResult run_landscape(const Scenario& scenario, const LandscapeSpec& spec, unsigned threads = 1);

/// param_value, log_exp, log_norm.
CsvTable landscape_to_csv(const LandscapeScan& scan);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace w2b
