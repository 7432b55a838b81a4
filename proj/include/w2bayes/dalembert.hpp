#pragma once

#include <span>
#include <vector>

#include "w2bayes/forward_model.hpp"

namespace w2b {

/// Triple-Gaussian initial pulse
/// a (e^{-100 (x-x0-0.5)^2} + e^{-100 (x-x0)^2} + e^{-100 (x-x0+0.5)^2}).
double pulse_profile(double x, double x0, double a);

/// Exact 1D wave solution u = (h(x - t) + h(x + t)) / 2 for the pulse above,
/// recorded at fixed receivers. theta = (a) with x0 fixed, or (x0, a).
class DalembertModel final : public ForwardModel {
 public:
  enum class Parameterization { AmplitudeOnly, LocationAmplitude };

  DalembertModel(std::vector<double> receivers, TimeGrid grid, Parameterization param,
                 double fixed_x0 = 0.0);

  std::size_t dim() const override { return param_ == Parameterization::AmplitudeOnly ? 1 : 2; }
  const TimeGrid& grid() const override { return grid_; }
  Gather simulate(std::span<const double> theta) const override;

  const std::vector<double>& receivers() const { return receivers_; }
  Parameterization parameterization() const { return param_; }
  double fixed_x0() const { return fixed_x0_; }

 private:
  std::vector<double> receivers_;
  TimeGrid grid_;
  Parameterization param_;
  double fixed_x0_;
};

Gather dalembert_simulate(const DalembertModel& model, std::span<const double> theta);

}  // namespace w2b
