#pragma once

#include <cstddef>
#include <compare>
#include <span>
#include <vector>

namespace w2b {

/// Uniform time grid t_k = t0 + k*dt, k = 0..n-1 (0-based storage of the
/// 1-based t_k = t0 + (k-1) dt convention).
class TimeGrid {
 public:
  TimeGrid(double t0, double dt, std::size_t n);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t size() const { return n_; }
  double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }
  double final_time() const { return time(n_ - 1); }
  std::vector<double> times() const;

  // Grids built independently from the same (t0, T, n) compare equal; the
  // tolerance absorbs the last-ulp difference of dt = (T - t0)/(n - 1).
  bool same_as(const TimeGrid& other) const;

 private:
  double t0_;
  double dt_;
  std::size_t n_;
};

/// Grid with dt = (T - t0)/(n - 1).
TimeGrid make_grid(double t0, double T, std::size_t n);

class Trace {
 public:
  Trace(TimeGrid grid, std::vector<double> values);

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

struct TraceStats {
  double min;
  double max;
  double total_mass;
};

TraceStats trace_stats(const Trace& tr);

/// (source, receiver, component) identifying one trace of a gather.
struct TraceLabel {
  int source = 0;
  int receiver = 0;
  int component = 0;

  auto operator<=>(const TraceLabel&) const = default;
};

/// Traces sharing one grid, each with a unique label. Iteration order is
/// insertion order.
class Gather {
 public:
  Gather(std::vector<Trace> traces, std::vector<TraceLabel> labels);

  const TimeGrid& grid() const { return traces_.front().grid(); }
  std::size_t size() const { return traces_.size(); }
  const Trace& trace(std::size_t i) const { return traces_[i]; }
  const TraceLabel& label(std::size_t i) const { return labels_[i]; }
  std::span<const Trace> traces() const { return traces_; }
  std::span<const TraceLabel> labels() const { return labels_; }

  /// Index of the trace with the given label, or size() if absent.
  std::size_t find(const TraceLabel& label) const;

  /// Concatenation of gathers on a common grid (labels must stay unique).
  static Gather concat(std::span<const Gather> parts);

 private:
  std::vector<Trace> traces_;
  std::vector<TraceLabel> labels_;
};

}  // namespace w2b
