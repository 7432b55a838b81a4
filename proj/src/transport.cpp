#include "w2bayes/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "w2bayes/errors.hpp"

namespace w2b {

namespace {

constexpr double kMaxExpArgument = 700.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sup_norm(const Trace& tr) {
  double m = 0.0;
  for (double v : tr.values()) m = std::max(m, std::abs(v));
  return m;
}

void require_same_grid(const Trace& f, const Trace& g, const char* what) {
  if (!f.grid().same_as(g.grid())) {
    throw ValidationError(std::string(what) + ": traces do not share a time grid");
  }
}

// Sorted labels of f, after checking g carries exactly the same set.
std::vector<std::pair<std::size_t, std::size_t>> pair_by_label(const Gather& f, const Gather& g) {
  if (f.size() != g.size()) throw ValidationError("gather label sets differ in size");
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return f.label(a) < f.label(b); });
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(order.size());
  for (std::size_t i : order) {
    const std::size_t j = g.find(f.label(i));
    if (j == g.size()) {
      throw ValidationError("gather label mismatch: " + std::to_string(f.label(i).source) + "/" +
                            std::to_string(f.label(i).receiver) + "/" +
                            std::to_string(f.label(i).component) + " missing");
    }
    pairs.emplace_back(i, j);
  }
  return pairs;
}

}  // namespace

const char* scaling_name(const ScalingStrategy& s) {
  return std::visit(overloaded{[](const LinearScaling&) { return "linear"; },
                               [](const SquareScaling&) { return "square"; },
                               [](const ExponentialScaling&) { return "exponential"; },
                               [](const AbsoluteScaling&) { return "absolute"; },
                               [](const LinearExponentialScaling&) { return "linexp"; }},
                    s);
}

Trace apply_scaling(const Trace& tr, const ScalingStrategy& s) {
  const auto in = tr.values();
  std::vector<double> out(in.size());
  std::visit(
      overloaded{
          [&](const LinearScaling& lin) {
            if (!lin.shift) throw ValidationError("linear scaling: shift constant not resolved");
            const double c = *lin.shift;
            for (std::size_t i = 0; i < in.size(); ++i) {
              out[i] = in[i] + c;
              if (!(out[i] > 0.0)) {
                throw ValidationError("linear scaling: min(f) + c must be positive");
              }
            }
          },
          [&](const SquareScaling&) {
            for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * in[i];
          },
          [&](const ExponentialScaling& e) {
            if (!(e.c > 0.0)) throw ValidationError("exponential scaling: c must be positive");
            for (std::size_t i = 0; i < in.size(); ++i) {
              const double arg = e.c * in[i];
              if (arg > kMaxExpArgument) throw NumericalError("exponential scaling: overflow");
              out[i] = std::exp(arg);
            }
          },
          [&](const AbsoluteScaling&) {
            for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::abs(in[i]);
          },
          [&](const LinearExponentialScaling& e) {
            if (!(e.c > 0.0)) throw ValidationError("linear/exponential scaling: c must be positive");
            for (std::size_t i = 0; i < in.size(); ++i) {
              out[i] = in[i] < 0.0 ? std::exp(e.c * in[i]) : in[i] + 1.0 / e.c;
            }
          }},
      s);
  return Trace(tr.grid(), std::move(out));
}

double auto_shift_constant(const Trace& f, const Trace& g, double margin) {
  if (!(margin > 0.0)) throw ValidationError("auto_shift_constant: margin must be positive");
  const double lo = std::min(trace_stats(f).min, trace_stats(g).min);
  return lo <= 0.0 ? margin - lo : margin;
}

NormalizedDensity::NormalizedDensity(TimeGrid grid, std::vector<double> weights,
                                     std::vector<double> cdf)
    : grid_(grid), weights_(std::move(weights)), cdf_(std::move(cdf)) {
  if (weights_.size() != grid_.size() || cdf_.size() != grid_.size()) {
    throw ValidationError("normalized density: size mismatch");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] < 0.0) throw ValidationError("normalized density: negative weight");
    if (i > 0 && cdf_[i] < cdf_[i - 1]) throw ValidationError("normalized density: cdf decreases");
  }
  if (std::abs(cdf_.back() - 1.0) > 1e-12) {
    throw ValidationError("normalized density: total mass differs from one");
  }
}

NormalizedDensity normalize(const Trace& tr) {
  const auto v = tr.values();
  double total = 0.0;
  for (double x : v) {
    if (x < 0.0) throw ValidationError("normalize: negative sample");
    total += x;
  }
  if (!(total > 0.0)) throw NumericalError("normalize: zero total mass");
  std::vector<double> w(v.size()), cdf(v.size());
  double run = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = v[i] / total;
    run += w[i];
    cdf[i] = run;
  }
  return NormalizedDensity(tr.grid(), std::move(w), std::move(cdf));
}

namespace {

// Quantile at p given the index of the first cdf entry >= p.
double quantile_at(const NormalizedDensity& dens, std::size_t j, double p) {
  const auto cdf = dens.cdf();
  const auto& grid = dens.grid();
  if (j == 0) return grid.time(0);
  if (j >= cdf.size()) return grid.final_time();
  const double lo = cdf[j - 1];
  const double hi = cdf[j];
  const double frac = (p - lo) / (hi - lo);
  return std::clamp(grid.time(j - 1) + frac * grid.dt(), grid.time(0), grid.final_time());
}

}  // namespace

double inverse_cdf(const NormalizedDensity& dens, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("inverse_cdf: p outside [0, 1]");
  if (p == 0.0) return dens.grid().time(0);
  const auto cdf = dens.cdf();
  const auto j = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), p) - cdf.begin());
  return quantile_at(dens, j, p);
}

TransportEvaluation transport(const NormalizedDensity& f, const NormalizedDensity& g) {
  if (!f.grid().same_as(g.grid())) throw ValidationError("transport: densities on different grids");
  const auto fw = f.weights();
  const auto fc = f.cdf();
  const auto gc = g.cdf();
  const auto& grid = f.grid();
  TransportEvaluation out;
  out.map_values.resize(fw.size());
  auto it = gc.begin();
  for (std::size_t i = 0; i < fw.size(); ++i) {
    const double p = std::min(fc[i], 1.0);
    // F is nondecreasing, so the search window only moves right.
    it = std::lower_bound(it, gc.end(), p);
    const double T = p <= 0.0 ? grid.time(0)
                              : quantile_at(g, static_cast<std::size_t>(it - gc.begin()), p);
    out.map_values[i] = T;
    const double gap = grid.time(i) - T;
    out.distance += gap * gap * fw[i];
  }
  return out;
}

double w2_distance(const Trace& f, const Trace& g, const ScalingStrategy& scaling) {
  require_same_grid(f, g, "w2_distance");
  ScalingStrategy resolved = scaling;
  if (auto* lin = std::get_if<LinearScaling>(&resolved); lin && !lin->shift) {
    const double margin = lin->margin_rel * std::max({sup_norm(f), sup_norm(g), 1.0});
    lin->shift = auto_shift_constant(f, g, margin);
  }
  const auto fd = normalize(apply_scaling(f, resolved));
  const auto gd = normalize(apply_scaling(g, resolved));
  return transport(fd, gd).distance;
}

double l2_distance(const Trace& f, const Trace& g) {
  require_same_grid(f, g, "l2_distance");
  double sum = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double d = g[k] - f[k];
    sum += d * d;
  }
  return sum;
}

std::vector<double> per_trace_w2(const Gather& f, const Gather& g, const ScalingStrategy& scaling) {
  std::vector<double> out;
  for (auto [i, j] : pair_by_label(f, g)) out.push_back(w2_distance(f.trace(i), g.trace(j), scaling));
  return out;
}

std::vector<double> per_trace_l2(const Gather& f, const Gather& g) {
  std::vector<double> out;
  for (auto [i, j] : pair_by_label(f, g)) out.push_back(l2_distance(f.trace(i), g.trace(j)));
  return out;
}

double multi_trace_w2(const Gather& f, const Gather& g, const ScalingStrategy& scaling) {
  const auto d = per_trace_w2(f, g, scaling);
  return std::accumulate(d.begin(), d.end(), 0.0);
}

}  // namespace w2b
