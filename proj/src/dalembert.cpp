#include "w2bayes/dalembert.hpp"

#include <cmath>

#include "w2bayes/errors.hpp"

namespace w2b {

double pulse_profile(double x, double x0, double a) {
  const double d = x - x0;
  return a * (std::exp(-100.0 * (d - 0.5) * (d - 0.5)) + std::exp(-100.0 * d * d) +
              std::exp(-100.0 * (d + 0.5) * (d + 0.5)));
}

DalembertModel::DalembertModel(std::vector<double> receivers, TimeGrid grid, Parameterization param,
                               double fixed_x0)
    : receivers_(std::move(receivers)), grid_(grid), param_(param), fixed_x0_(fixed_x0) {
  if (receivers_.empty()) throw ValidationError("d'Alembert model: no receivers");
  for (std::size_t r = 1; r < receivers_.size(); ++r) {
    if (!(receivers_[r] > receivers_[r - 1])) {
      throw ValidationError("d'Alembert model: receivers must be strictly increasing");
    }
  }
}

Gather DalembertModel::simulate(std::span<const double> theta) const {
  if (theta.size() != dim()) throw ValidationError("d'Alembert model: theta dimension mismatch");
  const double x0 = param_ == Parameterization::AmplitudeOnly ? fixed_x0_ : theta[0];
  const double a = theta.back();
  std::vector<Trace> traces;
  std::vector<TraceLabel> labels;
  traces.reserve(receivers_.size());
  for (std::size_t r = 0; r < receivers_.size(); ++r) {
    const double x = receivers_[r];
    std::vector<double> v(grid_.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double t = grid_.time(k);
      v[k] = 0.5 * pulse_profile(x - t, x0, a) + 0.5 * pulse_profile(x + t, x0, a);
    }
    traces.emplace_back(grid_, std::move(v));
    labels.push_back({0, static_cast<int>(r), 0});
  }
  return Gather(std::move(traces), std::move(labels));
}

Gather dalembert_simulate(const DalembertModel& model, std::span<const double> theta) {
  return model.simulate(theta);
}

}  // namespace w2b
