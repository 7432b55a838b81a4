#include "w2bayes/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "w2bayes/errors.hpp"

namespace w2b {

void ChainSchedule::validate() const {
  if (thin < 1) throw ValidationError("schedule: thinning must be at least 1");
  if (burn_in >= iterations) throw ValidationError("schedule: burn-in must be below the iteration count");
  if (retained_count() == 0) throw ValidationError("schedule: no samples would be retained");
}

ChainState evaluate_state(const InverseProblem& problem, std::span<const double> theta, double s) {
  ChainState st;
  st.theta.assign(theta.begin(), theta.end());
  st.s = s;
  st.log_prior = problem.prior.log_density(theta);
  st.misfit = compute_misfit(problem.likelihood, problem.forward->simulate(theta), problem.observed);
  st.log_likelihood = log_likelihood_from_misfit(problem.likelihood, st.misfit.total, s);
  return st;
}

GibbsDraw gibbs_update_s(const GammaPrior& prior, double n_obs, double total_misfit, Rng& rng) {
  prior.validate();
  if (!(total_misfit >= 0.0)) throw ValidationError("gibbs update: negative misfit");
  GibbsDraw d{{prior.shape + n_obs, prior.rate + total_misfit}, 0.0};
  d.s = sample_gamma(d.posterior.shape, d.posterior.rate, rng);
  return d;
}

GibbsDraw gibbs_update_s(const LikelihoodModel& model, const GammaPrior& prior,
                         double total_misfit, Rng& rng) {
  GibbsDraw d{conjugate_posterior(model, prior, total_misfit), 0.0};
  d.s = sample_gamma(d.posterior.shape, d.posterior.rate, rng);
  return d;
}

MhOutcome mh_step_with_candidate(const InverseProblem& problem, const ChainState& state,
                                 std::span<const double> candidate, Rng& rng) {
  const double u = rng.uniform_open();
  MhOutcome out;
  out.state = state;
  const double lp = problem.prior.log_density(candidate);
  if (lp == -std::numeric_limits<double>::infinity()) {
    out.log_alpha = lp;
    return out;
  }
  ChainState cand;
  try {
    cand = evaluate_state(problem, candidate, state.s);
  } catch (const NumericalError& e) {
    std::cerr << "warning: forward model failed at candidate, rejecting (" << e.what() << ")\n";
    out.forward_failed = true;
    out.log_alpha = -std::numeric_limits<double>::infinity();
    return out;
  }
  out.log_alpha = (cand.log_likelihood + cand.log_prior) - (state.log_likelihood + state.log_prior);
  if (std::log(u) <= out.log_alpha) {
    out.state = std::move(cand);
    out.accepted = true;
  }
  return out;
}

MhOutcome mh_step(const InverseProblem& problem, const ChainState& state,
                  const RandomWalkProposal& proposal, Rng& rng) {
  const auto candidate = proposal.propose(state.theta, rng);
  return mh_step_with_candidate(problem, state, candidate, rng);
}

std::vector<double> Chain::column(std::size_t param_index) const {
  if (param_index > dim) throw ValidationError("chain: parameter index out of range");
  if (param_index == dim) return s;
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = theta_at(i, param_index);
  return out;
}

Chain run_chain(const InverseProblem& problem, const ChainConfig& config) {
  const auto& sched = config.schedule;
  sched.validate();
  const std::size_t m = problem.prior.dim();
  if (problem.forward->dim() != m) throw ValidationError("chain: forward model and prior dimensions differ");
  if (config.theta0.size() != m) throw ValidationError("chain: initial point dimension mismatch");
  if (!problem.prior.contains(config.theta0)) throw ValidationError("chain: initial point outside the prior box");
  if (!(config.s0 > 0.0)) throw ValidationError("chain: initial s must be positive");
  problem.s_prior.validate();
  const auto& spec = config.proposal;
  if (static_cast<std::size_t>(spec.covariance.rows()) != m) {
    throw ValidationError("chain: proposal covariance dimension mismatch");
  }
  if (spec.adapt_after > sched.burn_in) {
    throw ValidationError("chain: adaptation window must end within burn-in");
  }
  if (spec.adapt_after > 0 && spec.adapt_after < m + 2) {
    throw ValidationError("chain: adaptation window shorter than m + 2 states");
  }

  RandomWalkProposal proposal(spec.covariance);
  Rng rng(sched.seed);
  ChainState state = evaluate_state(problem, config.theta0, config.s0);

  Chain chain;
  chain.dim = m;
  chain.schedule = sched;
  const std::size_t keep = sched.retained_count();
  chain.iterations.reserve(keep);
  chain.theta.reserve(keep * m);
  chain.s.reserve(keep);
  chain.retained_accepted.reserve(keep);
  chain.accepted_flags.reserve(sched.iterations);

  std::vector<std::vector<double>> history;
  history.reserve(spec.adapt_after);

  for (std::size_t i = 1; i <= sched.iterations; ++i) {
    const auto draw = gibbs_update_s(problem.likelihood, problem.s_prior, state.misfit.total, rng);
    state.s = draw.s;
    state.log_likelihood = log_likelihood_from_misfit(problem.likelihood, state.misfit.total, state.s);

    auto step = mh_step(problem, state, proposal, rng);
    state = std::move(step.state);
    ++chain.attempted;
    chain.accepted += step.accepted ? 1 : 0;
    chain.forward_failures += step.forward_failed ? 1 : 0;
    chain.accepted_flags.push_back(step.accepted ? 1 : 0);

    if (spec.adapt_after > 0 && i <= spec.adapt_after) {
      history.push_back(state.theta);
      if (i == spec.adapt_after) {
        const double scale = spec.adapt_scale.value_or(2.38 * 2.38 / static_cast<double>(m));
        const Eigen::MatrixXd cov = sample_covariance(history);
        const double jitter = spec.jitter.value_or(1e-10 * cov.trace() / static_cast<double>(m));
        try {
          proposal = RandomWalkProposal(adapt_covariance(history, scale, jitter));
          chain.adapted = true;
        } catch (const NumericalError&) {
          std::cerr << "warning: adapted proposal covariance is not positive definite; "
                       "keeping the initial covariance\n";
        }
      }
    }

    if (sched.retains(i)) {
      chain.iterations.push_back(i);
      chain.theta.insert(chain.theta.end(), state.theta.begin(), state.theta.end());
      chain.s.push_back(state.s);
      chain.retained_accepted.push_back(step.accepted ? 1 : 0);
    }
  }
  chain.final_covariance = proposal.covariance();
  return chain;
}

Histogram make_histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw ValidationError("histogram: no values");
  if (bins == 0) throw ValidationError("histogram: bin count must be positive");
  Histogram h;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  h.lo = *lo;
  h.hi = *hi;
  h.counts.assign(bins, 0);
  const double width = (h.hi - h.lo) / static_cast<double>(bins);
  for (double v : values) {
    std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - h.lo) / width) : 0;
    h.counts[std::min(b, bins - 1)] += 1;
  }
  return h;
}

PosteriorSummary posterior_summary(const Chain& chain, std::size_t param_index, std::size_t bins) {
  if (chain.size() == 0) throw ValidationError("posterior summary: empty chain");
  auto v = chain.column(param_index);
  std::sort(v.begin(), v.end());  // summation order independent of sample order
  PosteriorSummary ps;
  ps.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - ps.mean) * (x - ps.mean);
  ps.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  ps.histogram = make_histogram(v, bins);
  return ps;
}

bool acceptance_healthy(const Chain& chain) {
  const double r = chain.acceptance_rate();
  return r > 0.05 && r < 0.95;
}

}  // namespace w2b
