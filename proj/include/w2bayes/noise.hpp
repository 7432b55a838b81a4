#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "w2bayes/random.hpp"
#include "w2bayes/signal.hpp"

namespace w2b {

/// g = e1 * f + e2 per sample with i.i.d. draws.
struct GammaMultiplicative {
  double k;  // Gamma(k, k): mean 1, variance 1/k
};
struct UniformAdditive {
  double half_width;  // Unif(-w, w)
};
struct GaussianAdditive {
  double sigma;
};

struct NoiseSpec {
  std::optional<GammaMultiplicative> multiplicative;
  std::optional<std::variant<UniformAdditive, GaussianAdditive>> additive;

  void validate() const;
  bool empty() const { return !multiplicative && !additive; }
};

/// Draw order: traces in gather order, samples in time order, the
/// multiplicative draw before the additive one.
Gather pollute(const Gather& gather, const NoiseSpec& spec, Rng& rng);

struct NoiseMoments {
  double multiplicative_mean = 1.0;
  double multiplicative_variance = 0.0;
  std::size_t multiplicative_count = 0;
  double additive_mean = 0.0;
  double additive_variance = 0.0;
  std::size_t additive_count = 0;
};

/// noisy/clean over samples with |clean| above threshold (default 1% of the
/// clean gather's peak amplitude) and noisy - clean over all samples.
NoiseMoments empirical_noise_moments(const Gather& clean, const Gather& noisy,
                                     std::optional<double> threshold = std::nullopt);

}  // namespace w2b
