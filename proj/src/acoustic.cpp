#include "w2bayes/acoustic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "w2bayes/errors.hpp"
#include "w2bayes/parallel.hpp"

namespace w2b {

namespace {

constexpr double kGridTol = 1e-9;

std::size_t to_index(double steps, const char* what) {
  const double r = std::round(steps);
  if (std::abs(steps - r) > kGridTol * std::max(1.0, std::abs(steps))) {
    throw ValidationError(std::string(what) + " is not a multiple of the grid spacing");
  }
  return static_cast<std::size_t>(r);
}

// Interior node at or next to a (possibly boundary) node.
std::size_t recording_node(const AcousticGrid& g, std::size_t i, std::size_t j) {
  i = std::clamp<std::size_t>(i, 1, g.nx() - 2);
  j = std::clamp<std::size_t>(j, 1, g.nz() - 2);
  return g.index(i, j);
}

}  // namespace

std::size_t BlockLayout::index_of(Point2 p) const {
  const double w = (kDomainX1Max - kDomainX1Min) / cols;
  const double h = (kDomainX2Max - kDomainX2Min) / rows;
  const int c = std::clamp(static_cast<int>(std::floor((p.x1 - kDomainX1Min) / w)), 0, cols - 1);
  const int r = std::clamp(static_cast<int>(std::floor((kDomainX2Max - p.x2) / h)), 0, rows - 1);
  return static_cast<std::size_t>(r * cols + c);
}

double RickerWavelet::operator()(double t) const {
  const double d2 = (t - center_time) * (t - center_time);
  return amplitude * (1.0 - 2.0 * sharpness * d2) * std::exp(-sharpness * d2);
}

double ricker_source(double t, Point2 x, Point2 center) {
  constexpr double half = 0.04;
  if (std::abs(x.x1 - center.x1) > half + 1e-12 || std::abs(x.x2 - center.x2) > half + 1e-12) {
    return 0.0;
  }
  return RickerWavelet{}(t);
}

AcousticGrid::AcousticGrid(double dx) : dx_(dx) {
  if (!(dx > 0.0)) throw ValidationError("acoustic grid: dx must be positive");
  nx_ = to_index((kDomainX1Max - kDomainX1Min) / dx, "domain width") + 1;
  nz_ = to_index((kDomainX2Max - kDomainX2Min) / dx, "domain depth") + 1;
  if (nx_ < 3 || nz_ < 3) throw ValidationError("acoustic grid: too coarse");
}

Point2 AcousticGrid::node(std::size_t i, std::size_t j) const {
  return {kDomainX1Min + static_cast<double>(i) * dx_, kDomainX2Max - static_cast<double>(j) * dx_};
}

std::pair<std::size_t, std::size_t> AcousticGrid::locate(Point2 p) const {
  if (p.x1 < kDomainX1Min - kGridTol || p.x1 > kDomainX1Max + kGridTol ||
      p.x2 < kDomainX2Min - kGridTol || p.x2 > kDomainX2Max + kGridTol) {
    throw ValidationError("acoustic grid: point outside the domain");
  }
  return {to_index((p.x1 - kDomainX1Min) / dx_, "receiver x1"),
          to_index((kDomainX2Max - p.x2) / dx_, "receiver x2")};
}

AcousticSolver::AcousticSolver(AcousticGrid grid, std::span<const double> cell_speed)
    : grid_(grid) {
  const std::size_t nx = grid_.nx();
  const std::size_t nz = grid_.nz();
  if (cell_speed.size() != (nx - 1) * (nz - 1)) {
    throw ValidationError("acoustic solver: cell speed count mismatch");
  }
  std::vector<double> a2(cell_speed.size());
  for (std::size_t c = 0; c < a2.size(); ++c) {
    if (!(cell_speed[c] > 0.0)) throw ValidationError("acoustic solver: speeds must be positive");
    a2[c] = cell_speed[c] * cell_speed[c];
    max_speed_ = std::max(max_speed_, cell_speed[c]);
  }
  auto cell = [&](std::size_t i, std::size_t j) { return a2[j * (nx - 1) + i]; };
  kx_.assign(grid_.nodes(), 0.0);
  kz_.assign(grid_.nodes(), 0.0);
  for (std::size_t j = 1; j + 1 < nz; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) kx_[grid_.index(i, j)] = 0.5 * (cell(i, j - 1) + cell(i, j));
  }
  for (std::size_t j = 0; j + 1 < nz; ++j) {
    for (std::size_t i = 1; i + 1 < nx; ++i) kz_[grid_.index(i, j)] = 0.5 * (cell(i - 1, j) + cell(i, j));
  }
}

double AcousticSolver::cfl_number(double dt) const {
  return max_speed_ * dt * std::numbers::sqrt2 / grid_.dx();
}

void AcousticSolver::apply_operator(std::span<const double> u, std::span<double> out) const {
  const std::size_t nx = grid_.nx();
  const std::size_t nz = grid_.nz();
  const double inv_dx2 = 1.0 / (grid_.dx() * grid_.dx());
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 1; j + 1 < nz; ++j) {
    const std::size_t row = j * nx;
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const std::size_t n = row + i;
      const double c = u[n];
      out[n] = (kx_[n] * (u[n + 1] - c) - kx_[n - 1] * (c - u[n - 1]) + kz_[n] * (u[n + nx] - c) -
                kz_[n - nx] * (c - u[n - nx])) *
               inv_dx2;
    }
  }
}

void AcousticSolver::run(double dt, std::size_t steps, std::span<const double> u0,
                         std::span<const double> v0, const Forcing& forcing,
                         const Observer& observer) const {
  const std::size_t nn = grid_.nodes();
  if (u0.size() != nn || v0.size() != nn) throw ValidationError("acoustic solver: initial data size mismatch");
  if (!(cfl_number(dt) < 1.0)) {
    throw NumericalError("acoustic solver: CFL condition violated (max a dt sqrt(2)/dx = " +
                         std::to_string(cfl_number(dt)) + ")");
  }
  const std::size_t nx = grid_.nx();
  const std::size_t nz = grid_.nz();
  std::vector<double> prev(nn, 0.0), curr(nn, 0.0), next(nn, 0.0), lap(nn), rhs(nn);
  auto interior = [&](auto&& fn) {
    for (std::size_t j = 1; j + 1 < nz; ++j) {
      for (std::size_t i = 1; i + 1 < nx; ++i) fn(j * nx + i);
    }
  };
  interior([&](std::size_t n) { curr[n] = u0[n]; });
  if (observer) observer(0, curr);
  if (steps == 0) return;

  const double dt2 = dt * dt;
  auto eval_rhs = [&](double t) {
    std::fill(rhs.begin(), rhs.end(), 0.0);
    if (forcing) forcing(t, rhs);
  };

  apply_operator(curr, lap);
  eval_rhs(0.0);
  interior([&](std::size_t n) { next[n] = curr[n] + dt * v0[n] + 0.5 * dt2 * (lap[n] + rhs[n]); });
  std::swap(prev, curr);
  std::swap(curr, next);
  if (observer) observer(1, curr);

  for (std::size_t step = 1; step < steps; ++step) {
    apply_operator(curr, lap);
    eval_rhs(static_cast<double>(step) * dt);
    interior([&](std::size_t n) { next[n] = 2.0 * curr[n] - prev[n] + dt2 * (lap[n] + rhs[n]); });
    std::swap(prev, curr);
    std::swap(curr, next);
    if (observer) observer(step + 1, curr);
  }
}

double AcousticSolver::energy(std::span<const double> u0, std::span<const double> u1, double dt) const {
  const std::size_t nx = grid_.nx();
  const std::size_t nz = grid_.nz();
  double kinetic = 0.0;
  for (std::size_t n = 0; n < u0.size(); ++n) {
    const double v = (u1[n] - u0[n]) / dt;
    kinetic += v * v;
  }
  double potential = 0.0;
  for (std::size_t j = 1; j + 1 < nz; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const std::size_t n = grid_.index(i, j);
      potential += kx_[n] * (u1[n + 1] - u1[n]) * (u0[n + 1] - u0[n]);
    }
  }
  for (std::size_t j = 0; j + 1 < nz; ++j) {
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const std::size_t n = grid_.index(i, j);
      potential += kz_[n] * (u1[n + nx] - u1[n]) * (u0[n + nx] - u0[n]);
    }
  }
  const double dx2 = grid_.dx() * grid_.dx();
  return 0.5 * kinetic * dx2 + 0.5 * potential;
}

AcousticModel::AcousticModel(AcousticConfig config)
    : config_(std::move(config)), node_grid_(config_.dx) {
  if (config_.substeps < 1) throw ValidationError("acoustic model: substeps must be at least 1");
  if (config_.blocks.rows < 1 || config_.blocks.cols < 1) {
    throw ValidationError("acoustic model: block layout needs at least one row and column");
  }
  // Block edges must fall on grid lines so every cell lies in exactly one block.
  to_index((kDomainX1Max - kDomainX1Min) / config_.blocks.cols / config_.dx, "block width");
  to_index((kDomainX2Max - kDomainX2Min) / config_.blocks.rows / config_.dx, "block height");
  if (config_.sources.empty()) throw ValidationError("acoustic model: no sources");
  if (config_.receivers.empty()) throw ValidationError("acoustic model: no receivers");
  for (const auto& r : config_.receivers) {
    auto [i, j] = node_grid_.locate(r);
    receiver_nodes_.push_back(recording_node(node_grid_, i, j));
  }
  const double hw = config_.source_half_width + kGridTol * config_.dx;
  for (const auto& s : config_.sources) {
    std::vector<std::size_t> nodes;
    for (std::size_t j = 1; j + 1 < node_grid_.nz(); ++j) {
      for (std::size_t i = 1; i + 1 < node_grid_.nx(); ++i) {
        const Point2 p = node_grid_.node(i, j);
        if (std::abs(p.x1 - s.x1) <= hw && std::abs(p.x2 - s.x2) <= hw) {
          nodes.push_back(node_grid_.index(i, j));
        }
      }
    }
    if (nodes.empty()) throw ValidationError("acoustic model: source square contains no interior node");
    source_nodes_.push_back(std::move(nodes));
  }
}

std::vector<double> AcousticModel::cell_speeds(std::span<const double> theta) const {
  if (theta.size() != dim()) throw ValidationError("acoustic model: theta dimension mismatch");
  for (double v : theta) {
    if (!(v > 0.0)) throw NumericalError("acoustic model: nonpositive speed");
  }
  const std::size_t nx = node_grid_.nx();
  const std::size_t nz = node_grid_.nz();
  const double h = 0.5 * node_grid_.dx();
  std::vector<double> speed((nx - 1) * (nz - 1));
  for (std::size_t j = 0; j + 1 < nz; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const Point2 p = node_grid_.node(i, j);
      speed[j * (nx - 1) + i] = theta[config_.blocks.index_of({p.x1 + h, p.x2 - h})];
    }
  }
  return speed;
}

Gather AcousticModel::simulate_source(std::span<const double> theta, std::size_t source_index) const {
  if (source_index >= config_.sources.size()) throw ValidationError("acoustic model: source index out of range");
  const auto speeds = cell_speeds(theta);
  AcousticSolver solver(node_grid_, speeds);
  const std::size_t nt = config_.grid.size();
  const std::size_t sub = config_.substeps;
  const double dt = solver_dt();

  std::vector<std::vector<double>> rec(receiver_nodes_.size(), std::vector<double>(nt, 0.0));
  const auto& src = source_nodes_[source_index];
  const auto& wavelet = config_.wavelet;
  const std::vector<double> zeros(node_grid_.nodes(), 0.0);
  solver.run(
      dt, (nt - 1) * sub, zeros, zeros,
      [&](double t, std::span<double> rhs) {
        const double f = wavelet(t);
        for (std::size_t n : src) rhs[n] += f;
      },
      [&](std::size_t step, std::span<const double> u) {
        if (step % sub != 0) return;
        const std::size_t k = step / sub;
        for (std::size_t r = 0; r < receiver_nodes_.size(); ++r) rec[r][k] = u[receiver_nodes_[r]];
      });

  std::vector<Trace> traces;
  std::vector<TraceLabel> labels;
  traces.reserve(rec.size());
  for (std::size_t r = 0; r < rec.size(); ++r) {
    traces.emplace_back(config_.grid, std::move(rec[r]));
    labels.push_back({static_cast<int>(source_index), static_cast<int>(r), 0});
  }
  return Gather(std::move(traces), std::move(labels));
}

Gather AcousticModel::simulate(std::span<const double> theta) const {
  const auto parts = acoustic_simulate_all(*this, theta);
  return Gather::concat(parts);
}

Gather acoustic_simulate(const AcousticModel& model, std::span<const double> theta,
                         std::size_t source_index) {
  return model.simulate_source(theta, source_index);
}

std::vector<Gather> acoustic_simulate_all(const AcousticModel& model, std::span<const double> theta) {
  const std::size_t ns = model.config().sources.size();
  std::vector<std::optional<Gather>> slots(ns);
  parallel_for(ns, model.config().threads,
               [&](std::size_t s) { slots[s].emplace(model.simulate_source(theta, s)); });
  std::vector<Gather> out;
  out.reserve(ns);
  for (auto& g : slots) out.push_back(std::move(*g));
  return out;
}

std::vector<Point2> surface_receivers(double x1_min, double x1_max, double spacing) {
  if (!(spacing > 0.0) || x1_max < x1_min) throw ValidationError("surface receivers: bad line");
  const std::size_t n = to_index((x1_max - x1_min) / spacing, "receiver line length") + 1;
  std::vector<Point2> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({x1_min + static_cast<double>(i) * spacing, 0.0});
  return out;
}

std::vector<Point2> source_line(std::size_t n, double x1_min, double x1_max, double x2) {
  if (n == 0) throw ValidationError("source line: need at least one source");
  if (n == 1) return {{0.5 * (x1_min + x1_max), x2}};
  std::vector<Point2> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({x1_min + (x1_max - x1_min) * static_cast<double>(i) / static_cast<double>(n - 1), x2});
  }
  return out;
}

std::vector<Point2> build_receiver_layout_53() {
  auto out = surface_receivers(kDomainX1Min, kDomainX1Max, 0.02);  // 101, corners included
  constexpr std::size_t side = 51;                                   // x2 = 0, -0.04, ..., -2
  for (double x1 : {kDomainX1Min, kDomainX1Max}) {
    for (std::size_t j = 1; j < side; ++j) out.push_back({x1, -0.04 * static_cast<double>(j)});
  }
  if (out.size() != 201) throw std::logic_error("receiver layout must hold 201 points");
  return out;
}

AcousticSourceModel::AcousticSourceModel(SourceModelConfig config)
    : config_(std::move(config)),
      node_grid_(config_.dx),
      solver_(node_grid_, [&] {
        const std::size_t nx = node_grid_.nx();
        const std::size_t nz = node_grid_.nz();
        std::vector<double> speed((nx - 1) * (nz - 1));
        for (std::size_t j = 0; j + 1 < nz; ++j) {
          for (std::size_t i = 0; i + 1 < nx; ++i) {
            const double x2 = node_grid_.node(i, j).x2 - 0.5 * config_.dx;
            speed[j * (nx - 1) + i] = x2 > config_.interface_depth ? config_.top_speed : config_.bottom_speed;
          }
        }
        return speed;
      }()) {
  if (config_.substeps < 1) throw ValidationError("source model: substeps must be at least 1");
  if (config_.receivers.empty()) throw ValidationError("source model: no receivers");
  for (const auto& r : config_.receivers) {
    auto [i, j] = node_grid_.locate(r);
    receiver_nodes_.push_back(recording_node(node_grid_, i, j));
  }
}

Gather AcousticSourceModel::simulate(std::span<const double> theta) const {
  if (theta.size() != 4) throw ValidationError("source model: theta must have 4 entries");
  const double depth = theta[0];
  const RickerWavelet wavelet{theta[3], theta[1], theta[2]};
  if (!(wavelet.sharpness > 0.0)) throw NumericalError("source model: sharpness must be positive");

  const double dx = config_.dx;
  const double fi = (config_.source_x1 - kDomainX1Min) / dx;
  const double fj = (kDomainX2Max - depth) / dx;
  const auto i0 = static_cast<std::size_t>(std::floor(fi));
  const auto j0 = static_cast<std::size_t>(std::floor(fj));
  if (fi < 1.0 || fj < 1.0 || i0 + 2 >= node_grid_.nx() || j0 + 2 >= node_grid_.nz()) {
    throw NumericalError("source model: source too close to the boundary");
  }
  const double wi = fi - static_cast<double>(i0);
  const double wj = fj - static_cast<double>(j0);
  const double inv_area = 1.0 / (dx * dx);
  const std::array<std::pair<std::size_t, double>, 4> taps{{
      {node_grid_.index(i0, j0), (1 - wi) * (1 - wj) * inv_area},
      {node_grid_.index(i0 + 1, j0), wi * (1 - wj) * inv_area},
      {node_grid_.index(i0, j0 + 1), (1 - wi) * wj * inv_area},
      {node_grid_.index(i0 + 1, j0 + 1), wi * wj * inv_area},
  }};

  const std::size_t nt = config_.grid.size();
  const std::size_t sub = config_.substeps;
  std::vector<std::vector<double>> rec(receiver_nodes_.size(), std::vector<double>(nt, 0.0));
  const std::vector<double> zeros(node_grid_.nodes(), 0.0);
  solver_.run(
      config_.grid.dt() / static_cast<double>(sub), (nt - 1) * sub, zeros, zeros,
      [&](double t, std::span<double> rhs) {
        const double f = wavelet(t);
        for (const auto& [n, w] : taps) rhs[n] += w * f;
      },
      [&](std::size_t step, std::span<const double> u) {
        if (step % sub != 0) return;
        for (std::size_t r = 0; r < receiver_nodes_.size(); ++r) rec[r][step / sub] = u[receiver_nodes_[r]];
      });
  std::vector<Trace> traces;
  std::vector<TraceLabel> labels;
  for (std::size_t r = 0; r < rec.size(); ++r) {
    traces.emplace_back(config_.grid, std::move(rec[r]));
    labels.push_back({0, static_cast<int>(r), 0});
  }
  return Gather(std::move(traces), std::move(labels));
}

}  // namespace w2b
