#include "w2bayes/signal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "w2bayes/errors.hpp"

namespace w2b {

TimeGrid::TimeGrid(double t0, double dt, std::size_t n) : t0_(t0), dt_(dt), n_(n) {
  if (!std::isfinite(t0) || !std::isfinite(dt) || dt <= 0.0) {
    throw ValidationError("time grid: dt must be finite and positive");
  }
  if (n < 2) {
    throw ValidationError("time grid: at least two samples required");
  }
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> t(n_);
  for (std::size_t k = 0; k < n_; ++k) t[k] = time(k);
  return t;
}

bool TimeGrid::same_as(const TimeGrid& other) const {
  if (n_ != other.n_) return false;
  const double scale = std::max({std::abs(t0_), std::abs(other.t0_), dt_});
  return std::abs(t0_ - other.t0_) <= 1e-12 * scale &&
         std::abs(dt_ - other.dt_) <= 1e-12 * dt_;
}

TimeGrid make_grid(double t0, double T, std::size_t n) {
  if (!(T > t0)) throw ValidationError("make_grid: final time must exceed t0");
  if (n < 2) throw ValidationError("make_grid: n must be at least 2");
  return TimeGrid(t0, (T - t0) / static_cast<double>(n - 1), n);
}

Trace::Trace(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ValidationError("trace: value count " + std::to_string(values_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw NumericalError("trace: non-finite sample");
  }
}

TraceStats trace_stats(const Trace& tr) {
  const auto v = tr.values();
  TraceStats st{v[0], v[0], 0.0};
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericalError("trace_stats: non-finite sample");
    st.min = std::min(st.min, x);
    st.max = std::max(st.max, x);
    st.total_mass += x;
  }
  return st;
}

Gather::Gather(std::vector<Trace> traces, std::vector<TraceLabel> labels)
    : traces_(std::move(traces)), labels_(std::move(labels)) {
  if (traces_.empty()) throw ValidationError("gather: no traces");
  if (traces_.size() != labels_.size()) throw ValidationError("gather: label count mismatch");
  for (const auto& tr : traces_) {
    if (!tr.grid().same_as(traces_.front().grid())) {
      throw ValidationError("gather: traces do not share a time grid");
    }
  }
  std::vector<TraceLabel> sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("gather: duplicate trace label");
  }
}

std::size_t Gather::find(const TraceLabel& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return static_cast<std::size_t>(it - labels_.begin());
}

Gather Gather::concat(std::span<const Gather> parts) {
  if (parts.empty()) throw ValidationError("gather concat: nothing to concatenate");
  std::vector<Trace> traces;
  std::vector<TraceLabel> labels;
  for (const auto& g : parts) {
    traces.insert(traces.end(), g.traces_.begin(), g.traces_.end());
    labels.insert(labels.end(), g.labels_.begin(), g.labels_.end());
  }
  return Gather(std::move(traces), std::move(labels));
}

}  // namespace w2b
