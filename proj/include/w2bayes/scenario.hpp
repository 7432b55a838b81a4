#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "w2bayes/acoustic.hpp"
#include "w2bayes/dalembert.hpp"
#include "w2bayes/forward_model.hpp"
#include "w2bayes/likelihood.hpp"
#include "w2bayes/noise.hpp"
#include "w2bayes/priors.hpp"
#include "w2bayes/sampler.hpp"

namespace w2b {

struct DalembertSpec {
  std::vector<double> receivers;
  TimeGrid grid = make_grid(0.0, 5.0, 101);
  DalembertModel::Parameterization parameterization = DalembertModel::Parameterization::AmplitudeOnly;
  double x0 = 0.0;
};

struct LinearSpec {
  TimeGrid grid = make_grid(0.0, 1.0, 2);
  std::vector<std::vector<double>> basis;
};

using ForwardSpec = std::variant<DalembertSpec, AcousticConfig, SourceModelConfig, LinearSpec>;

/// 1D likelihood scan settings; grid = start, start + step, ... up to stop.
struct LandscapeSpec {
  std::size_t param_index = 0;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  std::vector<double> fixed;
  double s_ref = 1.0;

  std::vector<double> grid() const;
};

/// A fully validated experiment. `config` is the resolved key-value tree the
/// scenario was parsed from.
struct Scenario {
  std::string name;
  ForwardSpec forward;
  std::vector<std::string> parameter_names;
  std::vector<double> theta_true;
  NoiseSpec noise;
  LikelihoodModel likelihood;
  UniformBoxPrior prior;
  GammaPrior s_prior{1.0, 0.1};
  ProposalSpec proposal;
  std::vector<double> theta0;
  double s0 = 1.0;
  ChainSchedule schedule;  // schedule.seed holds the chain sub-seed
  std::uint64_t seed = 0;  // master seed
  std::filesystem::path output;
  std::size_t histogram_bins = 40;
  LandscapeSpec landscape;
  nlohmann::json config;

  std::size_t dim() const { return theta_true.size(); }
};

/// Names accepted by load_config in place of a path.
std::vector<std::string> builtin_names();
/// Config tree of a built-in scenario; throws ValidationError for unknown names.
nlohmann::json builtin_config(std::string_view name);

/// Built-in name or path to a JSON file. Parse errors name the line and column.
nlohmann::json load_config(const std::string& name_or_path);

/// Applies "dotted.path=value"; the value is read as JSON, falling back to a
/// plain string. Numeric segments index arrays.
void apply_override(nlohmann::json& config, std::string_view assignment);

/// Validates the tree and builds the scenario. Errors name the offending field.
Scenario parse_scenario(const nlohmann::json& config);

Scenario load_scenario(const std::string& name_or_path,
                       const std::vector<std::string>& overrides = {});

/// Integral numbers written as 5 or 5.0 collapse to one form; keys are sorted.
nlohmann::json canonical_config(const nlohmann::json& config);

/// SHA-256 of the canonical config without the output directory.
std::string config_fingerprint(const nlohmann::json& config);

std::string sha256_hex(std::string_view bytes);

struct SeedPlan {
  std::uint64_t master = 0;
  std::uint64_t data_noise = 0;
  std::uint64_t chain = 0;
};

/// data_noise = derive_seed(master, DataNoise), chain = derive_seed(master, Chain).
SeedPlan seed_plan(std::uint64_t master);

std::shared_ptr<const ForwardModel> make_forward_model(const ForwardSpec& spec,
                                                       unsigned threads = 1);

/// Block layout of an acoustic speed model, if the scenario has one.
std::optional<BlockLayout> block_layout(const Scenario& scenario);

}  // namespace w2b
