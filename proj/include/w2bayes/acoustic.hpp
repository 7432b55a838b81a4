#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "w2bayes/forward_model.hpp"

namespace w2b {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

// All acoustic geometry lives on the box [-1, 1] x [-2, 0] (x2 = 0 is the surface).
inline constexpr double kDomainX1Min = -1.0;
inline constexpr double kDomainX1Max = 1.0;
inline constexpr double kDomainX2Min = -2.0;
inline constexpr double kDomainX2Max = 0.0;

/// rows x cols piecewise-constant speed blocks tiling the domain. Parameter
/// index = row * cols + col, row 0 at the surface, col 0 at x1 = -1.
struct BlockLayout {
  int rows = 2;
  int cols = 5;

  std::size_t count() const { return static_cast<std::size_t>(rows * cols); }
  std::size_t index_of(Point2 p) const;
};

/// amplitude (1 - 2 k (t - t_c)^2) exp(-k (t - t_c)^2); the defaults give
/// 10^3 (1 - 20 (t - 0.1)^2) exp(-10 (t - 0.1)^2).
struct RickerWavelet {
  double amplitude = 1e3;
  double center_time = 0.1;
  double sharpness = 10.0;

  double operator()(double t) const;
};

/// Default wavelet on the closed 0.08 x 0.08 square around center, 0 elsewhere.
double ricker_source(double t, Point2 x, Point2 center);

/// Uniform node grid with spacing dx; node (i, j) sits at
/// (-1 + i dx, -j dx), so row j = 0 is the surface.
class AcousticGrid {
 public:
  explicit AcousticGrid(double dx);

  double dx() const { return dx_; }
  std::size_t nx() const { return nx_; }
  std::size_t nz() const { return nz_; }
  std::size_t nodes() const { return nx_ * nz_; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx_ + i; }
  Point2 node(std::size_t i, std::size_t j) const;
  bool on_boundary(std::size_t i, std::size_t j) const {
    return i == 0 || j == 0 || i + 1 == nx_ || j + 1 == nz_;
  }
  /// Node indices of an exact grid point; throws if p is off-grid or outside.
  std::pair<std::size_t, std::size_t> locate(Point2 p) const;

 private:
  double dx_;
  std::size_t nx_;
  std::size_t nz_;
};

/// Explicit leapfrog for u_tt = div(a^2 grad u) + F with homogeneous
/// Dirichlet data. a^2 is piecewise constant per cell and averaged
/// arithmetically onto cell faces.
class AcousticSolver {
 public:
  using Forcing = std::function<void(double t, std::span<double> rhs)>;
  using Observer = std::function<void(std::size_t step, std::span<const double> u)>;

  /// cell_speed holds a per cell, (nx - 1) * (nz - 1) entries, row-major from the surface.
  AcousticSolver(AcousticGrid grid, std::span<const double> cell_speed);

  const AcousticGrid& grid() const { return grid_; }
  double max_speed() const { return max_speed_; }
  /// max(a) dt sqrt(2) / dx.
  double cfl_number(double dt) const;

  /// Steps from u(0) = u0, u_t(0) = v0 for `steps` steps of size dt. The
  /// observer sees step 0 and every later step.
  void run(double dt, std::size_t steps, std::span<const double> u0, std::span<const double> v0,
           const Forcing& forcing, const Observer& observer) const;

  /// out = div(a^2 grad u) on interior nodes, 0 on the boundary.
  void apply_operator(std::span<const double> u, std::span<double> out) const;

  /// Leapfrog-invariant energy between consecutive levels:
  /// 1/2 |(u1 - u0)/dt|^2 + 1/2 sum_faces k (D u1)(D u0) / dx^2, scaled by dx^2.
  double energy(std::span<const double> u0, std::span<const double> u1, double dt) const;

 private:
  AcousticGrid grid_;
  std::vector<double> kx_;  // face between (i, j) and (i + 1, j)
  std::vector<double> kz_;  // face between (i, j) and (i, j + 1)
  double max_speed_ = 0.0;
};

struct AcousticConfig {
  double dx = 0.02;
  TimeGrid grid = make_grid(0.0, 4.0, 801);  // trace sampling
  std::size_t substeps = 1;                  // solver steps per trace sample
  BlockLayout blocks;
  std::vector<Point2> sources;
  std::vector<Point2> receivers;
  RickerWavelet wavelet;
  double source_half_width = 0.04;
  unsigned threads = 1;
};

/// Blockwise-speed acoustic model: theta_i is the speed in block i; one
/// solve per source, traces labelled (source, receiver, 0). Receivers on the
/// Dirichlet boundary are recorded at the adjacent interior node.
class AcousticModel final : public ForwardModel {
 public:
  explicit AcousticModel(AcousticConfig config);

  std::size_t dim() const override { return config_.blocks.count(); }
  const TimeGrid& grid() const override { return config_.grid; }
  Gather simulate(std::span<const double> theta) const override;

  Gather simulate_source(std::span<const double> theta, std::size_t source_index) const;
  const AcousticConfig& config() const { return config_; }
  const AcousticGrid& node_grid() const { return node_grid_; }
  double solver_dt() const { return config_.grid.dt() / static_cast<double>(config_.substeps); }
  /// Node index each receiver is recorded at.
  const std::vector<std::size_t>& receiver_nodes() const { return receiver_nodes_; }
  std::vector<double> cell_speeds(std::span<const double> theta) const;

 private:
  AcousticConfig config_;
  AcousticGrid node_grid_;
  std::vector<std::size_t> receiver_nodes_;
  std::vector<std::vector<std::size_t>> source_nodes_;
};

Gather acoustic_simulate(const AcousticModel& model, std::span<const double> theta,
                         std::size_t source_index);
std::vector<Gather> acoustic_simulate_all(const AcousticModel& model, std::span<const double> theta);

/// 101 surface receivers at spacing 0.02 plus both lateral boundaries at
/// spacing 0.04, the two top corners shared: 201 points.
std::vector<Point2> build_receiver_layout_53();

/// Receivers on the surface line from x1_min to x1_max at the given spacing.
std::vector<Point2> surface_receivers(double x1_min, double x1_max, double spacing);

/// n sources evenly spaced on [x1_min, x1_max] at depth x2 (a single source sits at the midpoint).
std::vector<Point2> source_line(std::size_t n, double x1_min, double x1_max, double x2);

struct SourceModelConfig {
  double dx = 0.04;
  TimeGrid grid = make_grid(0.0, 2.0, 201);
  std::size_t substeps = 3;
  double source_x1 = 0.0;
  double interface_depth = -1.0;  // x2 of the layer interface
  double top_speed = 2.0;
  double bottom_speed = 3.0;
  std::vector<Point2> receivers;
};

/// Known two-layer medium with an unknown point source:
/// theta = (source depth x2, center time, sharpness, amplitude). The point
/// source is spread bilinearly onto the four surrounding nodes (weight / dx^2).
class AcousticSourceModel final : public ForwardModel {
 public:
  explicit AcousticSourceModel(SourceModelConfig config);

  std::size_t dim() const override { return 4; }
  const TimeGrid& grid() const override { return config_.grid; }
  Gather simulate(std::span<const double> theta) const override;
  const SourceModelConfig& config() const { return config_; }

 private:
  SourceModelConfig config_;
  AcousticGrid node_grid_;
  AcousticSolver solver_;
  std::vector<std::size_t> receiver_nodes_;
};

}  // namespace w2b
