#include "w2bayes/likelihood.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "w2bayes/errors.hpp"
#include "w2bayes/parallel.hpp"

namespace w2b {

const char* misfit_kind_name(MisfitKind kind) {
  return kind == MisfitKind::ExponentialW2 ? "w2" : "l2";
}

MisfitCache compute_misfit(const LikelihoodModel& model, const Gather& sim, const Gather& obs) {
  if (model.n_obs != obs.grid().size()) {
    throw ValidationError("likelihood: n_obs does not match the data grid length");
  }
  MisfitCache cache;
  cache.per_trace = model.kind == MisfitKind::ExponentialW2 ? per_trace_w2(sim, obs, model.scaling)
                                                            : per_trace_l2(sim, obs);
  cache.total = std::accumulate(cache.per_trace.begin(), cache.per_trace.end(), 0.0);
  return cache;
}

double log_likelihood_from_misfit(const LikelihoodModel& model, double total_misfit, double s) {
  if (!(s > 0.0)) throw ValidationError("likelihood: s must be positive");
  const double n = static_cast<double>(model.n_obs);
  if (model.kind == MisfitKind::ExponentialW2) {
    return n * std::log(s) - s * total_misfit;
  }
  return 0.5 * n * std::log(s) - 0.5 * n * std::log(2.0 * std::numbers::pi) -
         0.5 * s * total_misfit;
}

LikelihoodEvaluation log_likelihood(const LikelihoodModel& model, const Gather& sim,
                                    const Gather& obs, double s) {
  if (!(s > 0.0)) throw ValidationError("likelihood: s must be positive");
  LikelihoodEvaluation ev;
  ev.misfit = compute_misfit(model, sim, obs);
  ev.log_density = log_likelihood_from_misfit(model, ev.misfit.total, s);
  return ev;
}

GammaPrior conjugate_posterior(const LikelihoodModel& model, const GammaPrior& prior,
                               double total_misfit) {
  prior.validate();
  if (!(total_misfit >= 0.0)) throw ValidationError("conjugate update: negative misfit");
  const double n = static_cast<double>(model.n_obs);
  if (model.kind == MisfitKind::ExponentialW2) {
    return {prior.shape + n, prior.rate + total_misfit};
  }
  return {prior.shape + 0.5 * n, prior.rate + 0.5 * total_misfit};
}

LandscapeScan landscape_scan_1d(const ForwardModel& forward, const Gather& obs,
                                const ScalingStrategy& scaling, std::size_t param_index,
                                std::span<const double> grid, std::span<const double> fixed,
                                double s_ref, unsigned threads) {
  if (fixed.size() != forward.dim()) throw ValidationError("landscape: fixed theta dimension mismatch");
  if (param_index >= forward.dim()) throw ValidationError("landscape: parameter index out of range");
  if (!(s_ref > 0.0)) throw ValidationError("landscape: reference s must be positive");

  const auto exp_model = LikelihoodModel::exponential_w2(scaling, obs.grid().size());
  const auto norm_model = LikelihoodModel::gaussian_l2(obs.grid().size());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  LandscapeScan scan;
  scan.values.assign(grid.begin(), grid.end());
  scan.log_exp.assign(grid.size(), nan);
  scan.log_norm.assign(grid.size(), nan);
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    std::vector<double> theta(fixed.begin(), fixed.end());
    theta[param_index] = grid[i];
    try {
      const Gather sim = forward.simulate(theta);
      scan.log_exp[i] = log_likelihood(exp_model, sim, obs, s_ref).log_density;
      scan.log_norm[i] = log_likelihood(norm_model, sim, obs, s_ref).log_density;
    } catch (const NumericalError&) {
      // recorded as missing
    }
  });
  return scan;
}

}  // namespace w2b
