#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "w2bayes/forward_model.hpp"
#include "w2bayes/likelihood.hpp"
#include "w2bayes/priors.hpp"
#include "w2bayes/random.hpp"

namespace w2b {

/// M0 total iterations, the first M_b discarded, then every M_t-th kept.
struct ChainSchedule {
  std::size_t iterations = 0;
  std::size_t burn_in = 0;
  std::size_t thin = 1;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t retained_count() const { return (iterations - burn_in) / thin; }
  /// Whether 1-based iteration i is kept.
  bool retains(std::size_t i) const { return i > burn_in && (i - burn_in) % thin == 0; }
};

/// Everything the sampler needs to evaluate the posterior.
struct InverseProblem {
  std::shared_ptr<const ForwardModel> forward;
  Gather observed;
  LikelihoodModel likelihood;
  UniformBoxPrior prior;
  GammaPrior s_prior;
};

struct ChainState {
  std::vector<double> theta;
  double s = 1.0;
  MisfitCache misfit;
  double log_prior = 0.0;
  double log_likelihood = 0.0;  // at the current s
};

/// Runs the forward model at theta and fills the caches.
ChainState evaluate_state(const InverseProblem& problem, std::span<const double> theta, double s);

struct GibbsDraw {
  GammaPrior posterior;
  double s;
};

/// s ~ Gamma(a + N, b + d_W).
GibbsDraw gibbs_update_s(const GammaPrior& prior, double n_obs, double total_misfit, Rng& rng);
/// Conjugate draw for either likelihood kind, see conjugate_posterior.
GibbsDraw gibbs_update_s(const LikelihoodModel& model, const GammaPrior& prior,
                         double total_misfit, Rng& rng);

struct MhOutcome {
  ChainState state;
  bool accepted = false;
  bool forward_failed = false;
  double log_alpha = 0.0;
};

/// Accept/reject a given candidate at the state's s. Consumes exactly one
/// uniform draw. Candidates outside the prior box or where the forward model
/// fails numerically are rejected.
MhOutcome mh_step_with_candidate(const InverseProblem& problem, const ChainState& state,
                                 std::span<const double> candidate, Rng& rng);

/// Proposal draws, then the accept draw.
MhOutcome mh_step(const InverseProblem& problem, const ChainState& state,
                  const RandomWalkProposal& proposal, Rng& rng);

struct ChainConfig {
  ChainSchedule schedule;
  ProposalSpec proposal;
  std::vector<double> theta0;
  double s0 = 1.0;
};

struct Chain {
  std::size_t dim = 0;
  ChainSchedule schedule;
  std::vector<std::size_t> iterations;  // 1-based iteration of each retained sample
  std::vector<double> theta;            // retained samples, row-major (M x dim)
  std::vector<double> s;
  std::vector<std::uint8_t> retained_accepted;
  std::vector<std::uint8_t> accepted_flags;  // every iteration
  std::size_t accepted = 0;
  std::size_t attempted = 0;
  std::size_t forward_failures = 0;
  bool adapted = false;
  Eigen::MatrixXd final_covariance;
  std::string fingerprint;

  std::size_t size() const { return s.size(); }
  double theta_at(std::size_t sample, std::size_t param) const { return theta[sample * dim + param]; }
  /// Column of a parameter; index dim selects s.
  std::vector<double> column(std::size_t param_index) const;
  double acceptance_rate() const {
    return attempted == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempted);
  }
};

/// Gibbs draw of s then a Metropolis step for theta, every iteration, from
/// (theta0, s0). Deterministic given the schedule seed.
Chain run_chain(const InverseProblem& problem, const ChainConfig& config);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

struct PosteriorSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
  Histogram histogram;
};

PosteriorSummary posterior_summary(const Chain& chain, std::size_t param_index,
                                   std::size_t bins = 40);

Histogram make_histogram(std::span<const double> values, std::size_t bins);

/// Acceptance rate strictly inside (0.05, 0.95).
bool acceptance_healthy(const Chain& chain);

}  // namespace w2b
