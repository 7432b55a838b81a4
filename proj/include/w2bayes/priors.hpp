#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "w2bayes/random.hpp"

namespace w2b {

struct Interval {
  double lo;
  double hi;
};

/// Independent Unif(lo_i, hi_i) on each coordinate.
class UniformBoxPrior {
 public:
  UniformBoxPrior() = default;
  explicit UniformBoxPrior(std::vector<Interval> bounds);

  std::size_t dim() const { return bounds_.size(); }
  const std::vector<Interval>& bounds() const { return bounds_; }
  bool contains(std::span<const double> theta) const;
  /// -sum log(hi - lo) inside the box, -infinity outside.
  double log_density(std::span<const double> theta) const;

 private:
  std::vector<Interval> bounds_;
};

double log_prior_theta(const UniformBoxPrior& prior, std::span<const double> theta);

/// Gamma(shape, rate), mean shape/rate.
struct GammaPrior {
  double shape;
  double rate;

  void validate() const;
};

double sample_gamma(double shape, double rate, Rng& rng);

/// Gaussian random-walk settings. adapt_after = 0 disables the one-time
/// covariance update; unset adapt_scale/jitter resolve to 2.38^2/m and
/// 1e-10 trace(C)/m.
struct ProposalSpec {
  Eigen::MatrixXd covariance;
  std::size_t adapt_after = 0;
  std::optional<double> adapt_scale;
  std::optional<double> jitter;

  static ProposalSpec diagonal(std::span<const double> variances);
};

/// Symmetric proposal theta + L z with L the lower Cholesky factor of the covariance.
class RandomWalkProposal {
 public:
  explicit RandomWalkProposal(const Eigen::MatrixXd& covariance);

  std::size_t dim() const { return static_cast<std::size_t>(chol_.rows()); }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  const Eigen::MatrixXd& cholesky() const { return chol_; }

  std::vector<double> propose(std::span<const double> theta, Rng& rng) const;
  /// log N(delta; 0, covariance).
  double log_increment_density(std::span<const double> delta) const;

 private:
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
};

std::vector<double> propose(std::span<const double> theta, const RandomWalkProposal& proposal,
                            Rng& rng);

/// scale * SampleCov(history) + jitter * I; history rows are states.
/// Requires at least m + 2 rows.
Eigen::MatrixXd adapt_covariance(const std::vector<std::vector<double>>& history, double scale,
                                 double jitter);

/// Sample covariance (n - 1 denominator) of the rows of history.
Eigen::MatrixXd sample_covariance(const std::vector<std::vector<double>>& history);

}  // namespace w2b
