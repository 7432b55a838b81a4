#include "w2bayes/linear_model.hpp"

#include "w2bayes/errors.hpp"

namespace w2b {

LinearModel::LinearModel(TimeGrid grid, std::vector<std::vector<double>> basis)
    : grid_(grid), basis_(std::move(basis)) {
  if (basis_.empty()) throw ValidationError("linear model: empty basis");
  for (const auto& b : basis_) {
    if (b.size() != grid_.size()) throw ValidationError("linear model: basis length mismatch");
  }
}

Gather LinearModel::simulate(std::span<const double> theta) const {
  if (theta.size() != basis_.size()) throw ValidationError("linear model: theta dimension mismatch");
  std::vector<double> v(grid_.size(), 0.0);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += theta[i] * basis_[i][k];
  }
  return Gather({Trace(grid_, std::move(v))}, {TraceLabel{}});
}

}  // namespace w2b
