#include "w2bayes/noise.hpp"

#include <algorithm>
#include <cmath>

#include "w2bayes/errors.hpp"

namespace w2b {

void NoiseSpec::validate() const {
  if (multiplicative && !(multiplicative->k > 0.0)) {
    throw ValidationError("noise: Gamma(k, k) needs k > 0");
  }
  if (additive) {
    if (const auto* u = std::get_if<UniformAdditive>(&*additive); u && !(u->half_width > 0.0)) {
      throw ValidationError("noise: uniform half-width must be positive");
    }
    if (const auto* g = std::get_if<GaussianAdditive>(&*additive); g && !(g->sigma > 0.0)) {
      throw ValidationError("noise: Gaussian sigma must be positive");
    }
  }
}

Gather pollute(const Gather& gather, const NoiseSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<Trace> traces;
  traces.reserve(gather.size());
  for (const auto& tr : gather.traces()) {
    std::vector<double> v(tr.values().begin(), tr.values().end());
    for (double& x : v) {
      const double e1 = spec.multiplicative ? rng.gamma(spec.multiplicative->k, spec.multiplicative->k) : 1.0;
      double e2 = 0.0;
      if (spec.additive) {
        if (const auto* u = std::get_if<UniformAdditive>(&*spec.additive)) {
          e2 = u->half_width * (2.0 * rng.uniform() - 1.0);
        } else {
          e2 = rng.normal(0.0, std::get<GaussianAdditive>(*spec.additive).sigma);
        }
      }
      x = e1 * x + e2;
    }
    traces.emplace_back(tr.grid(), std::move(v));
  }
  return Gather(std::move(traces), std::vector<TraceLabel>(gather.labels().begin(), gather.labels().end()));
}

namespace {

struct Running {
  double mean_ = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  void add(double x) {
    ++n;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n);
    m2 += d * (x - mean_);
  }
  double mean() const { return mean_; }
  double variance() const { return n < 2 ? 0.0 : m2 / static_cast<double>(n - 1); }
};

}  // namespace

NoiseMoments empirical_noise_moments(const Gather& clean, const Gather& noisy,
                                     std::optional<double> threshold) {
  if (clean.size() != noisy.size() || !clean.grid().same_as(noisy.grid())) {
    throw ValidationError("noise moments: gathers are not aligned");
  }
  double peak = 0.0;
  for (const auto& tr : clean.traces()) {
    for (double v : tr.values()) peak = std::max(peak, std::abs(v));
  }
  const double cut = threshold.value_or(0.01 * peak);
  Running mult, add;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const std::size_t j = noisy.find(clean.label(i));
    if (j == noisy.size()) throw ValidationError("noise moments: label sets differ");
    const auto c = clean.trace(i).values();
    const auto n = noisy.trace(j).values();
    for (std::size_t k = 0; k < c.size(); ++k) {
      add.add(n[k] - c[k]);
      if (std::abs(c[k]) > cut) mult.add(n[k] / c[k]);
    }
  }
  NoiseMoments m;
  m.multiplicative_count = mult.n;
  if (mult.n) {
    m.multiplicative_mean = mult.mean();
    m.multiplicative_variance = mult.variance();
  }
  m.additive_count = add.n;
  m.additive_mean = add.mean();
  m.additive_variance = add.variance();
  return m;
}

}  // namespace w2b
