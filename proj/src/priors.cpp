#include "w2bayes/priors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "w2bayes/errors.hpp"

namespace w2b {

UniformBoxPrior::UniformBoxPrior(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) throw ValidationError("uniform prior: no coordinates");
  for (std::size_t i = 0; i < bounds_.size(); ++i) {
    if (!(bounds_[i].lo < bounds_[i].hi)) {
      throw ValidationError("uniform prior: bound " + std::to_string(i + 1) + " has lo >= hi");
    }
  }
}

bool UniformBoxPrior::contains(std::span<const double> theta) const {
  if (theta.size() != bounds_.size()) throw ValidationError("uniform prior: dimension mismatch");
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] >= bounds_[i].lo && theta[i] <= bounds_[i].hi)) return false;
  }
  return true;
}

double UniformBoxPrior::log_density(std::span<const double> theta) const {
  if (!contains(theta)) return -std::numeric_limits<double>::infinity();
  double lp = 0.0;
  for (const auto& b : bounds_) lp -= std::log(b.hi - b.lo);
  return lp;
}

double log_prior_theta(const UniformBoxPrior& prior, std::span<const double> theta) {
  return prior.log_density(theta);
}

void GammaPrior::validate() const {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw ValidationError("gamma prior: shape and rate must be positive");
  }
}

double sample_gamma(double shape, double rate, Rng& rng) { return rng.gamma(shape, rate); }

ProposalSpec ProposalSpec::diagonal(std::span<const double> variances) {
  ProposalSpec spec;
  spec.covariance = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(variances.size()),
                                          static_cast<Eigen::Index>(variances.size()));
  for (std::size_t i = 0; i < variances.size(); ++i) {
    spec.covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = variances[i];
  }
  return spec;
}

RandomWalkProposal::RandomWalkProposal(const Eigen::MatrixXd& covariance) : cov_(covariance) {
  if (cov_.rows() == 0 || cov_.rows() != cov_.cols()) {
    throw ValidationError("proposal covariance must be a non-empty square matrix");
  }
  if (!cov_.isApprox(cov_.transpose(), 1e-12)) {
    throw NumericalError("proposal covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("proposal covariance is not positive definite");
  }
  chol_ = llt.matrixL();
}

std::vector<double> RandomWalkProposal::propose(std::span<const double> theta, Rng& rng) const {
  const auto m = chol_.rows();
  if (static_cast<Eigen::Index>(theta.size()) != m) {
    throw ValidationError("proposal: dimension mismatch");
  }
  Eigen::VectorXd z(m);
  for (Eigen::Index i = 0; i < m; ++i) z(i) = rng.normal();
  const Eigen::VectorXd step = chol_ * z;
  std::vector<double> out(theta.begin(), theta.end());
  for (Eigen::Index i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] += step(i);
  return out;
}

double RandomWalkProposal::log_increment_density(std::span<const double> delta) const {
  const auto m = chol_.rows();
  Eigen::Map<const Eigen::VectorXd> d(delta.data(), static_cast<Eigen::Index>(delta.size()));
  const Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>().solve(d);
  const double log_det = 2.0 * chol_.diagonal().array().log().sum();
  return -0.5 * y.squaredNorm() - 0.5 * log_det -
         0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi);
}

std::vector<double> propose(std::span<const double> theta, const RandomWalkProposal& proposal,
                            Rng& rng) {
  return proposal.propose(theta, rng);
}

Eigen::MatrixXd sample_covariance(const std::vector<std::vector<double>>& history) {
  if (history.size() < 2) throw ValidationError("sample covariance: need at least two rows");
  const auto m = static_cast<Eigen::Index>(history.front().size());
  const auto k = static_cast<Eigen::Index>(history.size());
  Eigen::MatrixXd x(k, m);
  for (Eigen::Index r = 0; r < k; ++r) {
    if (static_cast<Eigen::Index>(history[static_cast<std::size_t>(r)].size()) != m) {
      throw ValidationError("sample covariance: ragged history");
    }
    for (Eigen::Index c = 0; c < m; ++c) x(r, c) = history[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  return (centered.transpose() * centered) / static_cast<double>(k - 1);
}

Eigen::MatrixXd adapt_covariance(const std::vector<std::vector<double>>& history, double scale,
                                 double jitter) {
  if (history.empty()) throw ValidationError("adapt_covariance: empty history");
  const std::size_t m = history.front().size();
  if (history.size() < m + 2) {
    throw ValidationError("adapt_covariance: history of " + std::to_string(history.size()) +
                          " states is shorter than m + 2 = " + std::to_string(m + 2));
  }
  if (!(scale > 0.0) || jitter < 0.0) {
    throw ValidationError("adapt_covariance: scale must be positive and jitter nonnegative");
  }
  const auto dim = static_cast<Eigen::Index>(m);
  return scale * sample_covariance(history) + jitter * Eigen::MatrixXd::Identity(dim, dim);
}

}  // namespace w2b
