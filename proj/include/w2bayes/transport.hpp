#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "w2bayes/signal.hpp"

namespace w2b {

// Pointwise transforms that make an oscillatory signal positive before it is
// normalized to unit mass.

/// f + c. Without an explicit shift, c is chosen per compared pair by
/// auto_shift_constant with margin = margin_rel * max(|f|_inf, |g|_inf, 1).
struct LinearScaling {
  std::optional<double> shift;
  double margin_rel = 1e-2;
};
struct SquareScaling {};
/// exp(c f)
struct ExponentialScaling {
  double c = 1.0;
};
struct AbsoluteScaling {};
/// exp(c f) for f < 0, f + 1/c otherwise.
struct LinearExponentialScaling {
  double c = 1.0;
};

using ScalingStrategy = std::variant<LinearScaling, SquareScaling, ExponentialScaling,
                                     AbsoluteScaling, LinearExponentialScaling>;

const char* scaling_name(const ScalingStrategy& s);

/// Applies a scaling with a resolved constant. LinearScaling without a shift
/// is rejected here; resolve it first with auto_shift_constant.
Trace apply_scaling(const Trace& tr, const ScalingStrategy& s);

/// margin - min(min f, min g) when that minimum is <= 0, otherwise margin.
double auto_shift_constant(const Trace& f, const Trace& g, double margin);

class NormalizedDensity {
 public:
  NormalizedDensity(TimeGrid grid, std::vector<double> weights, std::vector<double> cdf);

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> cdf() const { return cdf_; }

 private:
  TimeGrid grid_;
  std::vector<double> weights_;
  std::vector<double> cdf_;
};

/// Unit-mass weights and their running sum.
NormalizedDensity normalize(const Trace& tr);

/// Quantile G^{-1}(p): piecewise-linear interpolation of the points
/// (0, t_1), (cdf_1, t_1), ..., (cdf_n, t_n). On flat CDF stretches the
/// smallest attaining time is returned.
double inverse_cdf(const NormalizedDensity& dens, double p);

struct TransportEvaluation {
  std::vector<double> map_values;
  double distance = 0.0;
};

/// T = G^{-1} o F evaluated at every node of f, and sum |t_i - T_i|^2 f_i.
TransportEvaluation transport(const NormalizedDensity& f, const NormalizedDensity& g);

/// Discrete quadratic Wasserstein distance: f carries the weights, g is inverted.
double w2_distance(const Trace& f, const Trace& g, const ScalingStrategy& scaling);

/// Sum of squared sample differences (no dt weighting).
double l2_distance(const Trace& f, const Trace& g);

/// Per-label distances in sorted label order; the gathers must hold the same label set.
std::vector<double> per_trace_w2(const Gather& f, const Gather& g, const ScalingStrategy& scaling);
std::vector<double> per_trace_l2(const Gather& f, const Gather& g);

/// Trace-by-trace W2: sum of per-trace distances paired by label.
double multi_trace_w2(const Gather& f, const Gather& g, const ScalingStrategy& scaling);

}  // namespace w2b
