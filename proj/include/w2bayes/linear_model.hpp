#pragma once

#include <vector>

#include "w2bayes/forward_model.hpp"

namespace w2b {

/// Single trace f = sum_i theta_i basis_i. Linear in theta; used to check the
/// sampler against closed-form posteriors.
class LinearModel final : public ForwardModel {
 public:
  LinearModel(TimeGrid grid, std::vector<std::vector<double>> basis);

  std::size_t dim() const override { return basis_.size(); }
  const TimeGrid& grid() const override { return grid_; }
  Gather simulate(std::span<const double> theta) const override;
  const std::vector<std::vector<double>>& basis() const { return basis_; }

 private:
  TimeGrid grid_;
  std::vector<std::vector<double>> basis_;
};

}  // namespace w2b
