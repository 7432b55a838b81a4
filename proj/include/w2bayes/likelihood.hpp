#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "w2bayes/forward_model.hpp"
#include "w2bayes/priors.hpp"
#include "w2bayes/signal.hpp"
#include "w2bayes/transport.hpp"

namespace w2b {

enum class MisfitKind { ExponentialW2, GaussianL2 };

/// ExponentialW2: s^N exp(-s sum_r d_W,r).
/// GaussianL2:    s^{N/2} (2 pi)^{-N/2} exp(-s/2 sum_r d_2,r), s the precision.
/// N is the per-trace sample count, not N times the number of traces.
struct LikelihoodModel {
  MisfitKind kind = MisfitKind::ExponentialW2;
  ScalingStrategy scaling = LinearScaling{};
  std::size_t n_obs = 0;

  static LikelihoodModel exponential_w2(ScalingStrategy scaling, std::size_t n_obs) {
    return {MisfitKind::ExponentialW2, scaling, n_obs};
  }
  static LikelihoodModel gaussian_l2(std::size_t n_obs) {
    return {MisfitKind::GaussianL2, LinearScaling{}, n_obs};
  }
};

const char* misfit_kind_name(MisfitKind kind);

struct MisfitCache {
  double total = 0.0;
  std::vector<double> per_trace;  // sorted label order
};

struct LikelihoodEvaluation {
  double log_density = 0.0;
  MisfitCache misfit;
};

MisfitCache compute_misfit(const LikelihoodModel& model, const Gather& sim, const Gather& obs);

double log_likelihood_from_misfit(const LikelihoodModel& model, double total_misfit, double s);

LikelihoodEvaluation log_likelihood(const LikelihoodModel& model, const Gather& sim,
                                    const Gather& obs, double s);

/// Conjugate update of the Gamma prior on s given a misfit total:
/// (a + N, b + d_W) for the exponential model, (a + N/2, b + d_2/2) for the Gaussian one.
GammaPrior conjugate_posterior(const LikelihoodModel& model, const GammaPrior& prior,
                               double total_misfit);

struct LandscapeScan {
  std::vector<double> values;
  std::vector<double> log_exp;   // NaN where the forward model failed
  std::vector<double> log_norm;
};

/// Both log-likelihood curves along one coordinate, other coordinates held
/// at `fixed`, at a fixed reference s.
LandscapeScan landscape_scan_1d(const ForwardModel& forward, const Gather& obs,
                                const ScalingStrategy& scaling, std::size_t param_index,
                                std::span<const double> grid, std::span<const double> fixed,
                                double s_ref, unsigned threads = 1);

}  // namespace w2b
