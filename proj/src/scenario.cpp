#include "w2bayes/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <openssl/evp.h>

#include "w2bayes/errors.hpp"
#include "w2bayes/linear_model.hpp"

namespace w2b {

namespace {

using nlohmann::json;

// Read-only view of a config node that remembers its dotted path for diagnostics.
class Field {
 public:
  Field(const json& node, std::string path) : node_(&node), path_(std::move(path)) {}

  const json& node() const { return *node_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("scenario field '" + (path_.empty() ? std::string("<root>") : path_) +
                          "': " + what);
  }

  bool has(std::string_view key) const {
    return node_->is_object() && node_->contains(key) && !(*node_)[std::string(key)].is_null();
  }

  Field at(std::string_view key) const {
    if (!node_->is_object()) fail("expected an object");
    const std::string k(key);
    if (!node_->contains(k) || (*node_)[k].is_null()) Field(*node_, child(k)).fail("missing");
    return Field((*node_)[k], child(k));
  }

  Field at(std::size_t i) const {
    if (!node_->is_array()) fail("expected an array");
    if (i >= node_->size()) fail("index " + std::to_string(i) + " out of range");
    return Field((*node_)[i], child(std::to_string(i)));
  }

  std::size_t size() const {
    if (!node_->is_array()) fail("expected an array");
    return node_->size();
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    if (!node_->is_object()) fail("expected an object");
    for (const auto& [k, v] : node_->items()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) Field(v, child(k)).fail("unknown key");
    }
  }

  double number() const {
    if (!node_->is_number()) fail("expected a number");
    const double x = node_->get<double>();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }

  double positive() const {
    const double x = number();
    if (!(x > 0.0)) fail("must be positive");
    return x;
  }

  std::uint64_t uint() const {
    if (node_->is_number_unsigned()) return node_->get<std::uint64_t>();
    if (node_->is_number_integer() && node_->get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(node_->get<std::int64_t>());
    }
    if (node_->is_number_float()) {
      const double x = node_->get<double>();
      if (x >= 0.0 && x == std::floor(x) && x < 9007199254740992.0) return static_cast<std::uint64_t>(x);
    }
    fail("expected a nonnegative integer");
  }

  std::string string() const {
    if (!node_->is_string()) fail("expected a string");
    return node_->get<std::string>();
  }

  std::vector<double> numbers() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i).number();
    return out;
  }

  Point2 point() const {
    if (size() != 2) fail("expected [x1, x2]");
    return {at(0).number(), at(1).number()};
  }

 private:
  std::string child(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  const json* node_;
  std::string path_;
};

TimeGrid parse_time(const Field& f) {
  f.allow({"t0", "final", "samples"});
  const double t0 = f.has("t0") ? f.at("t0").number() : 0.0;
  const double T = f.at("final").number();
  const std::uint64_t n = f.at("samples").uint();
  if (n < 2) f.at("samples").fail("need at least 2 samples");
  if (!(T > t0)) f.at("final").fail("must exceed t0");
  return make_grid(t0, T, static_cast<std::size_t>(n));
}

std::vector<Point2> parse_points(const Field& f) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(f.at(i).point());
  if (out.empty()) f.fail("must not be empty");
  return out;
}

// Explicit [[x1, x2], ...], a surface line {x1_min, x1_max, spacing}, or a named preset.
std::vector<Point2> parse_receivers(const Field& f) {
  if (f.node().is_string()) {
    if (f.string() == "boundary-201") return build_receiver_layout_53();
    f.fail("unknown receiver preset '" + f.string() + "'");
  }
  if (f.node().is_object()) {
    f.allow({"x1_min", "x1_max", "spacing"});
    return surface_receivers(f.at("x1_min").number(), f.at("x1_max").number(),
                             f.at("spacing").positive());
  }
  return parse_points(f);
}

// Explicit points or an evenly spaced line {count, x1_min, x1_max, x2}.
std::vector<Point2> parse_sources(const Field& f) {
  if (f.node().is_object()) {
    f.allow({"count", "x1_min", "x1_max", "x2"});
    return source_line(static_cast<std::size_t>(f.at("count").uint()), f.at("x1_min").number(),
                       f.at("x1_max").number(), f.at("x2").number());
  }
  return parse_points(f);
}

RickerWavelet parse_wavelet(const Field& f) {
  f.allow({"amplitude", "center_time", "sharpness"});
  RickerWavelet w;
  if (f.has("amplitude")) w.amplitude = f.at("amplitude").number();
  if (f.has("center_time")) w.center_time = f.at("center_time").number();
  if (f.has("sharpness")) w.sharpness = f.at("sharpness").positive();
  return w;
}

struct ParsedForward {
  ForwardSpec spec;
  std::vector<std::string> names;
};

std::vector<std::string> numbered(const std::string& stem, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(stem + "_" + std::to_string(i));
  return out;
}

ParsedForward parse_forward(const Field& f) {
  const std::string kind = f.at("kind").string();
  if (kind == "dalembert") {
    f.allow({"kind", "receivers", "time", "parameterization", "x0"});
    DalembertSpec s;
    s.receivers = f.at("receivers").numbers();
    if (s.receivers.empty()) f.at("receivers").fail("must not be empty");
    if (!std::is_sorted(s.receivers.begin(), s.receivers.end(), std::less_equal<>())) {
      f.at("receivers").fail("must be strictly increasing");
    }
    s.grid = parse_time(f.at("time"));
    const std::string p = f.has("parameterization") ? f.at("parameterization").string() : "amplitude";
    if (p == "amplitude") {
      s.parameterization = DalembertModel::Parameterization::AmplitudeOnly;
    } else if (p == "location_amplitude") {
      s.parameterization = DalembertModel::Parameterization::LocationAmplitude;
    } else {
      f.at("parameterization").fail("expected 'amplitude' or 'location_amplitude'");
    }
    if (f.has("x0")) s.x0 = f.at("x0").number();
    const bool amp = s.parameterization == DalembertModel::Parameterization::AmplitudeOnly;
    return {s, amp ? std::vector<std::string>{"amplitude"} : std::vector<std::string>{"location", "amplitude"}};
  }
  if (kind == "acoustic") {
    f.allow({"kind", "dx", "time", "substeps", "blocks", "sources", "receivers", "wavelet",
             "source_half_width"});
    AcousticConfig c;
    c.dx = f.at("dx").positive();
    c.grid = parse_time(f.at("time"));
    if (f.has("substeps")) c.substeps = static_cast<std::size_t>(f.at("substeps").uint());
    if (c.substeps == 0) f.at("substeps").fail("must be at least 1");
    if (f.has("blocks")) {
      const Field b = f.at("blocks");
      b.allow({"rows", "cols"});
      c.blocks.rows = static_cast<int>(b.at("rows").uint());
      c.blocks.cols = static_cast<int>(b.at("cols").uint());
      if (c.blocks.rows < 1 || c.blocks.cols < 1) b.fail("rows and cols must be at least 1");
    }
    c.sources = parse_sources(f.at("sources"));
    c.receivers = parse_receivers(f.at("receivers"));
    if (f.has("wavelet")) c.wavelet = parse_wavelet(f.at("wavelet"));
    if (f.has("source_half_width")) c.source_half_width = f.at("source_half_width").positive();
    return {c, numbered("speed", c.blocks.count())};
  }
  if (kind == "acoustic_source") {
    f.allow({"kind", "dx", "time", "substeps", "source_x1", "interface_depth", "top_speed",
             "bottom_speed", "receivers"});
    SourceModelConfig c;
    c.dx = f.at("dx").positive();
    c.grid = parse_time(f.at("time"));
    if (f.has("substeps")) c.substeps = static_cast<std::size_t>(f.at("substeps").uint());
    if (c.substeps == 0) f.at("substeps").fail("must be at least 1");
    if (f.has("source_x1")) c.source_x1 = f.at("source_x1").number();
    if (f.has("interface_depth")) c.interface_depth = f.at("interface_depth").number();
    if (f.has("top_speed")) c.top_speed = f.at("top_speed").positive();
    if (f.has("bottom_speed")) c.bottom_speed = f.at("bottom_speed").positive();
    c.receivers = parse_receivers(f.at("receivers"));
    return {c, {"depth", "center_time", "sharpness", "amplitude"}};
  }
  if (kind == "linear") {
    f.allow({"kind", "time", "basis"});
    LinearSpec s;
    s.grid = parse_time(f.at("time"));
    const Field b = f.at("basis");
    for (std::size_t i = 0; i < b.size(); ++i) {
      s.basis.push_back(b.at(i).numbers());
      if (s.basis.back().size() != s.grid.size()) b.at(i).fail("length must equal time.samples");
    }
    if (s.basis.empty()) b.fail("must not be empty");
    return {s, numbered("coef", s.basis.size())};
  }
  f.at("kind").fail("unknown forward model '" + kind + "'");
}

NoiseSpec parse_noise(const Field& f) {
  NoiseSpec n;
  if (f.node().is_null()) return n;
  f.allow({"multiplicative", "additive"});
  if (f.has("multiplicative")) {
    const Field m = f.at("multiplicative");
    m.allow({"kind", "shape"});
    if (m.at("kind").string() != "gamma") m.at("kind").fail("expected 'gamma'");
    n.multiplicative = GammaMultiplicative{m.at("shape").positive()};
  }
  if (f.has("additive")) {
    const Field a = f.at("additive");
    const std::string kind = a.at("kind").string();
    if (kind == "uniform") {
      a.allow({"kind", "half_width"});
      n.additive = UniformAdditive{a.at("half_width").positive()};
    } else if (kind == "gaussian") {
      a.allow({"kind", "sigma"});
      n.additive = GaussianAdditive{a.at("sigma").positive()};
    } else {
      a.at("kind").fail("expected 'uniform' or 'gaussian'");
    }
  }
  return n;
}

ScalingStrategy parse_scaling(const Field& f) {
  const std::string kind = f.at("kind").string();
  if (kind == "linear") {
    f.allow({"kind", "shift", "margin_rel"});
    LinearScaling s;
    if (f.has("shift")) s.shift = f.at("shift").number();
    if (f.has("margin_rel")) s.margin_rel = f.at("margin_rel").positive();
    return s;
  }
  if (kind == "square") {
    f.allow({"kind"});
    return SquareScaling{};
  }
  if (kind == "exponential") {
    f.allow({"kind", "c"});
    return ExponentialScaling{f.has("c") ? f.at("c").positive() : 1.0};
  }
  if (kind == "absolute") {
    f.allow({"kind"});
    return AbsoluteScaling{};
  }
  if (kind == "linexp") {
    f.allow({"kind", "c"});
    return LinearExponentialScaling{f.has("c") ? f.at("c").positive() : 1.0};
  }
  f.at("kind").fail("unknown scaling '" + kind + "'");
}

LikelihoodModel parse_likelihood(const Field& f, std::size_t n_obs) {
  f.allow({"kind", "scaling"});
  const std::string kind = f.at("kind").string();
  if (kind == "w2") {
    const ScalingStrategy sc = f.has("scaling") ? parse_scaling(f.at("scaling")) : ScalingStrategy{LinearScaling{}};
    return LikelihoodModel::exponential_w2(sc, n_obs);
  }
  if (kind == "l2") return LikelihoodModel::gaussian_l2(n_obs);
  f.at("kind").fail("expected 'w2' or 'l2'");
}

ProposalSpec parse_proposal(const Field& f, std::size_t m) {
  f.allow({"variances", "covariance", "adapt_after", "adapt_scale", "jitter"});
  ProposalSpec p;
  if (f.has("covariance") == f.has("variances")) f.fail("give exactly one of 'variances' or 'covariance'");
  if (f.has("variances")) {
    const auto v = f.at("variances").numbers();
    if (v.size() != m) f.at("variances").fail("expected " + std::to_string(m) + " entries");
    for (std::size_t i = 0; i < m; ++i) {
      if (!(v[i] > 0.0)) f.at("variances").at(i).fail("must be positive");
    }
    p = ProposalSpec::diagonal(v);
  } else {
    const Field c = f.at("covariance");
    if (c.size() != m) c.fail("expected " + std::to_string(m) + " rows");
    p.covariance.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = c.at(i).numbers();
      if (row.size() != m) c.at(i).fail("expected " + std::to_string(m) + " entries");
      for (std::size_t j = 0; j < m; ++j) {
        p.covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
      }
    }
  }
  try {
    RandomWalkProposal check(p.covariance);
  } catch (const NumericalError& e) {
    f.fail(std::string("covariance is not symmetric positive definite (") + e.what() + ")");
  }
  if (f.has("adapt_after")) p.adapt_after = static_cast<std::size_t>(f.at("adapt_after").uint());
  if (f.has("adapt_scale")) p.adapt_scale = f.at("adapt_scale").positive();
  if (f.has("jitter")) {
    p.jitter = f.at("jitter").number();
    if (*p.jitter < 0.0) f.at("jitter").fail("must be nonnegative");
  }
  return p;
}

std::size_t spec_dim(const ForwardSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DalembertSpec>) {
          return s.parameterization == DalembertModel::Parameterization::AmplitudeOnly ? 1 : 2;
        } else if constexpr (std::is_same_v<T, AcousticConfig>) {
          return s.blocks.count();
        } else if constexpr (std::is_same_v<T, SourceModelConfig>) {
          return 4;
        } else {
          return s.basis.size();
        }
      },
      spec);
}

const TimeGrid& spec_grid(const ForwardSpec& spec) {
  return std::visit([](const auto& s) -> const TimeGrid& { return s.grid; }, spec);
}

void check_dim(const Field& f, std::size_t got, std::size_t m) {
  if (got != m) {
    f.fail("has " + std::to_string(got) + " entries but the forward model has " + std::to_string(m) +
           " parameters");
  }
}

void check_inside(const Field& f, const UniformBoxPrior& prior, const std::vector<double>& theta) {
  if (!prior.contains(theta)) f.fail("lies outside the prior box");
}

// Built-ins as JSON text; doubles as the schema reference.
constexpr const char* kPaper51A = R"({
  "name": "paper-5.1A",
  "forward": {
    "kind": "dalembert",
    "receivers": [-3, -2, -1, 0, 1, 2, 3],
    "time": {"t0": 0, "final": 5, "samples": 101},
    "parameterization": "amplitude",
    "x0": 0
  },
  "theta_true": [5],
  "noise": {
    "multiplicative": {"kind": "gamma", "shape": 60},
    "additive": {"kind": "uniform", "half_width": 0.25}
  },
  "likelihood": {"kind": "w2", "scaling": {"kind": "linear"}},
  "priors": {"theta": [[2, 8]], "s": {"shape": 1, "rate": 0.1}},
  "proposal": {"variances": [0.005], "adapt_after": 0},
  "initial": {"theta": [3], "s": 70},
  "schedule": {"iterations": 30000, "burn_in": 10000, "thin": 4},
  "seed": 1,
  "output": "runs/paper-5.1A",
  "histogram_bins": 40,
  "landscape": {"param_index": 0, "start": 2, "stop": 8, "step": 0.05, "fixed": [5], "s_ref": 1}
})";

constexpr const char* kPaper51B = R"({
  "name": "paper-5.1B",
  "forward": {
    "kind": "dalembert",
    "receivers": [-3, -2, -1, 0, 1, 2, 3],
    "time": {"t0": 0, "final": 5, "samples": 101},
    "parameterization": "location_amplitude"
  },
  "theta_true": [0, 5],
  "noise": {"additive": {"kind": "gaussian", "sigma": 0.1}},
  "likelihood": {"kind": "w2", "scaling": {"kind": "linear"}},
  "priors": {"theta": [[-3, 3], [2, 8]], "s": {"shape": 1, "rate": 0.1}},
  "proposal": {"variances": [0.005, 0.005], "adapt_after": 0},
  "initial": {"theta": [0.6, 3], "s": 70},
  "schedule": {"iterations": 25000, "burn_in": 5000, "thin": 4},
  "seed": 1,
  "output": "runs/paper-5.1B",
  "histogram_bins": 40,
  "landscape": {"param_index": 0, "start": -3, "stop": 3, "step": 0.05, "fixed": [0, 5], "s_ref": 1}
})";

constexpr const char* kPaper53 = R"({
  "name": "paper-5.3",
  "forward": {
    "kind": "acoustic",
    "dx": 0.02,
    "time": {"t0": 0, "final": 4, "samples": 801},
    "substeps": 3,
    "blocks": {"rows": 2, "cols": 5},
    "sources": {"count": 5, "x1_min": -0.8, "x1_max": 0.8, "x2": -0.2},
    "receivers": "boundary-201",
    "wavelet": {"amplitude": 1000, "center_time": 0.1, "sharpness": 10},
    "source_half_width": 0.04
  },
  "theta_true": [3, 2, 3.5, 2.5, 4, 3, 4.5, 3.5, 5, 4],
  "noise": {
    "multiplicative": {"kind": "gamma", "shape": 1000},
    "additive": {"kind": "uniform", "half_width": 0.05}
  },
  "likelihood": {"kind": "w2", "scaling": {"kind": "linear"}},
  "priors": {
    "theta": [[1, 6], [1, 6], [1, 6], [1, 6], [1, 6], [1, 6], [1, 6], [1, 6], [1, 6], [1, 6]],
    "s": {"shape": 1, "rate": 0.1}
  },
  "proposal": {
    "variances": [0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001],
    "adapt_after": 1000
  },
  "initial": {"theta": [3.8, 3.8, 3.8, 3.8, 3.8, 3.8, 3.8, 3.8, 3.8, 3.8], "s": 5000},
  "schedule": {"iterations": 80000, "burn_in": 65000, "thin": 3},
  "seed": 1,
  "output": "runs/paper-5.3",
  "histogram_bins": 40
})";

constexpr const char* kDesk53 = R"({
  "name": "desk-5.3",
  "forward": {
    "kind": "acoustic",
    "dx": 0.04,
    "time": {"t0": 0, "final": 2, "samples": 201},
    "substeps": 3,
    "blocks": {"rows": 1, "cols": 2},
    "sources": [[-0.4, -0.2], [0.4, -0.2]],
    "receivers": {"x1_min": -0.8, "x1_max": 0.8, "spacing": 0.04},
    "wavelet": {"amplitude": 1000, "center_time": 0.1, "sharpness": 10},
    "source_half_width": 0.04
  },
  "theta_true": [3, 4],
  "noise": {
    "multiplicative": {"kind": "gamma", "shape": 1000},
    "additive": {"kind": "uniform", "half_width": 0.05}
  },
  "likelihood": {"kind": "w2", "scaling": {"kind": "linear"}},
  "priors": {"theta": [[1, 6], [1, 6]], "s": {"shape": 1, "rate": 0.1}},
  "proposal": {"variances": [0.001, 0.001], "adapt_after": 1000},
  "initial": {"theta": [3.8, 3.8], "s": 5000},
  "schedule": {"iterations": 4000, "burn_in": 2000, "thin": 2},
  "seed": 1,
  "output": "runs/desk-5.3",
  "histogram_bins": 40
})";

constexpr const char* kPaper52Analog = R"({
  "name": "paper-5.2-analog",
  "forward": {
    "kind": "acoustic_source",
    "dx": 0.04,
    "time": {"t0": 0, "final": 2, "samples": 201},
    "substeps": 3,
    "source_x1": 0,
    "interface_depth": -1,
    "top_speed": 2,
    "bottom_speed": 3,
    "receivers": {"x1_min": -0.8, "x1_max": 0.8, "spacing": 0.04}
  },
  "theta_true": [-0.6, 0.3, 10, 1000],
  "noise": {
    "multiplicative": {"kind": "gamma", "shape": 1000},
    "additive": {"kind": "uniform", "half_width": 0.05}
  },
  "likelihood": {"kind": "w2", "scaling": {"kind": "linear"}},
  "priors": {
    "theta": [[-0.9, -0.3], [0.2, 0.4], [5, 20], [500, 1500]],
    "s": {"shape": 1, "rate": 0.1}
  },
  "proposal": {"variances": [0.0001, 0.00001, 0.1, 100], "adapt_after": 1000},
  "initial": {"theta": [-0.5, 0.25, 12, 800], "s": 2000},
  "schedule": {"iterations": 10000, "burn_in": 2000, "thin": 4},
  "seed": 1,
  "output": "runs/paper-5.2-analog",
  "histogram_bins": 40
})";

// One coefficient times 1 + cos(2 pi t) on 50 samples of [0, 1], Gaussian
// noise and the Gaussian likelihood: the posterior is known in closed form.
json linear_gaussian_config() {
  constexpr std::size_t n = 50;
  const TimeGrid grid = make_grid(0.0, 1.0, n);
  std::vector<double> basis(n);
  for (std::size_t k = 0; k < n; ++k) basis[k] = 1.0 + std::cos(2.0 * std::numbers::pi * grid.time(k));
  json j = json::parse(R"({
    "name": "linear-gaussian",
    "forward": {"kind": "linear", "time": {"t0": 0, "final": 1, "samples": 50}},
    "theta_true": [1.5],
    "noise": {"additive": {"kind": "gaussian", "sigma": 0.5}},
    "likelihood": {"kind": "l2"},
    "priors": {"theta": [[-10, 10]], "s": {"shape": 1, "rate": 0.1}},
    "proposal": {"variances": [0.02], "adapt_after": 0},
    "initial": {"theta": [0], "s": 1},
    "schedule": {"iterations": 20000, "burn_in": 2000, "thin": 2},
    "seed": 1,
    "output": "runs/linear-gaussian",
    "histogram_bins": 40
  })");
  j["forward"]["basis"] = json::array({basis});
  return j;
}

json with_schedule(const char* base, const char* name, std::uint64_t iters, std::uint64_t burn,
                   std::uint64_t thin) {
  json j = json::parse(base);
  j["name"] = name;
  j["output"] = std::string("runs/") + name;
  j["schedule"] = {{"iterations", iters}, {"burn_in", burn}, {"thin", thin}};
  return j;
}

}  // namespace

std::vector<double> LandscapeSpec::grid() const {
  if (!(step > 0.0)) throw ValidationError("landscape: step must be positive");
  if (stop < start) throw ValidationError("landscape: stop must not precede start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = start + static_cast<double>(i) * step;
  return g;
}

std::vector<std::string> builtin_names() {
  return {"paper-5.1A", "paper-5.1B", "paper-5.3", "paper-5.2-analog", "desk-5.1A",
          "desk-5.1B",  "desk-5.3",   "linear-gaussian"};
}

json builtin_config(std::string_view name) {
  if (name == "paper-5.1A") return json::parse(kPaper51A);
  if (name == "paper-5.1B") return json::parse(kPaper51B);
  if (name == "paper-5.3") return json::parse(kPaper53);
  if (name == "paper-5.2-analog") return json::parse(kPaper52Analog);
  if (name == "desk-5.1A") return with_schedule(kPaper51A, "desk-5.1A", 6000, 2000, 4);
  if (name == "desk-5.1B") return with_schedule(kPaper51B, "desk-5.1B", 10000, 2000, 4);
  if (name == "desk-5.3") return json::parse(kDesk53);
  if (name == "linear-gaussian") return linear_gaussian_config();
  throw ValidationError("unknown built-in scenario '" + std::string(name) + "'");
}

json load_config(const std::string& name_or_path) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return builtin_config(name_or_path);
  }
  std::ifstream in(name_or_path);
  if (!in) {
    throw ValidationError("scenario '" + name_or_path + "' is neither a built-in nor a readable file");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario file " + name_or_path + ": " + e.what());
  }
}

void apply_override(json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ValidationError("override '" + std::string(assignment) + "': expected key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }

  json* cur = &config;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string seg = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (seg.empty()) throw ValidationError("override '" + key + "': empty path segment");
    if (cur->is_array()) {
      std::size_t idx = 0;
      const auto [p, ec] = std::from_chars(seg.data(), seg.data() + seg.size(), idx);
      if (ec != std::errc() || p != seg.data() + seg.size() || idx >= cur->size()) {
        throw ValidationError("override '" + key + "': '" + seg + "' is not a valid array index");
      }
      cur = &(*cur)[idx];
    } else if (cur->is_object() || cur->is_null()) {
      cur = &(*cur)[seg];
    } else {
      throw ValidationError("override '" + key + "': cannot descend into a scalar at '" + seg + "'");
    }
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  *cur = std::move(value);
}

Scenario parse_scenario(const json& config) {
  const Field root(config, "");
  root.allow({"name", "forward", "theta_true", "noise", "likelihood", "priors", "proposal", "initial",
              "schedule", "seed", "output", "histogram_bins", "landscape"});

  Scenario sc;
  sc.config = config;
  sc.name = root.has("name") ? root.at("name").string() : std::string("scenario");

  auto fwd = parse_forward(root.at("forward"));
  sc.forward = std::move(fwd.spec);
  sc.parameter_names = std::move(fwd.names);
  const std::size_t m = spec_dim(sc.forward);
  const std::size_t n_obs = spec_grid(sc.forward).size();

  sc.theta_true = root.at("theta_true").numbers();
  check_dim(root.at("theta_true"), sc.theta_true.size(), m);

  sc.noise = root.has("noise") ? parse_noise(root.at("noise")) : NoiseSpec{};
  sc.likelihood = parse_likelihood(root.at("likelihood"), n_obs);

  const Field priors = root.at("priors");
  priors.allow({"theta", "s"});
  const Field box = priors.at("theta");
  check_dim(box, box.size(), m);
  std::vector<Interval> bounds;
  for (std::size_t i = 0; i < m; ++i) {
    const Field iv = box.at(i);
    if (iv.size() != 2) iv.fail("expected [lo, hi]");
    const double lo = iv.at(0).number();
    const double hi = iv.at(1).number();
    if (!(lo < hi)) iv.fail("lo must be below hi");
    bounds.push_back({lo, hi});
  }
  sc.prior = UniformBoxPrior(std::move(bounds));
  const Field sp = priors.at("s");
  sp.allow({"shape", "rate"});
  sc.s_prior = GammaPrior{sp.at("shape").positive(), sp.at("rate").positive()};

  sc.proposal = parse_proposal(root.at("proposal"), m);

  const Field init = root.at("initial");
  init.allow({"theta", "s"});
  sc.theta0 = init.at("theta").numbers();
  check_dim(init.at("theta"), sc.theta0.size(), m);
  sc.s0 = init.at("s").positive();

  check_inside(root.at("theta_true"), sc.prior, sc.theta_true);
  check_inside(init.at("theta"), sc.prior, sc.theta0);

  const Field sched = root.at("schedule");
  sched.allow({"iterations", "burn_in", "thin"});
  sc.schedule.iterations = static_cast<std::size_t>(sched.at("iterations").uint());
  sc.schedule.burn_in = static_cast<std::size_t>(sched.at("burn_in").uint());
  sc.schedule.thin = static_cast<std::size_t>(sched.at("thin").uint());
  if (sc.schedule.burn_in >= sc.schedule.iterations) {
    sched.at("burn_in").fail("must be smaller than iterations");
  }
  if (sc.schedule.thin == 0) sched.at("thin").fail("must be at least 1");
  if (sc.schedule.retained_count() == 0) sched.fail("retains no samples");
  if (sc.proposal.adapt_after > sc.schedule.burn_in) {
    root.at("proposal").at("adapt_after").fail("must not exceed schedule.burn_in");
  }
  if (sc.proposal.adapt_after != 0 && sc.proposal.adapt_after < m + 2) {
    root.at("proposal").at("adapt_after").fail("needs at least dim + 2 states");
  }

  sc.seed = root.at("seed").uint();
  sc.schedule.seed = seed_plan(sc.seed).chain;
  sc.output = root.has("output") ? root.at("output").string() : "runs/" + sc.name;
  if (root.has("histogram_bins")) {
    sc.histogram_bins = static_cast<std::size_t>(root.at("histogram_bins").uint());
    if (sc.histogram_bins == 0) root.at("histogram_bins").fail("must be at least 1");
  }

  if (const auto* ac = std::get_if<AcousticConfig>(&sc.forward)) {
    double top = 0.0;
    for (const auto& b : sc.prior.bounds()) top = std::max(top, b.hi);
    const double dt = ac->grid.dt() / static_cast<double>(ac->substeps);
    const double cfl = top * dt * std::numbers::sqrt2 / ac->dx;
    if (!(cfl < 1.0)) {
      root.at("forward").at("substeps").fail("CFL number " + std::to_string(cfl) +
                                             " at the largest prior speed; raise substeps");
    }
  }

  if (root.has("landscape")) {
    const Field l = root.at("landscape");
    l.allow({"param_index", "start", "stop", "step", "fixed", "s_ref"});
    sc.landscape.param_index = static_cast<std::size_t>(l.at("param_index").uint());
    if (sc.landscape.param_index >= m) l.at("param_index").fail("out of range");
    sc.landscape.start = l.at("start").number();
    sc.landscape.stop = l.at("stop").number();
    sc.landscape.step = l.at("step").positive();
    if (sc.landscape.stop < sc.landscape.start) l.at("stop").fail("must not precede start");
    sc.landscape.fixed = l.has("fixed") ? l.at("fixed").numbers() : sc.theta_true;
    check_dim(l.has("fixed") ? l.at("fixed") : root.at("theta_true"), sc.landscape.fixed.size(), m);
    sc.landscape.s_ref = l.has("s_ref") ? l.at("s_ref").positive() : 1.0;
  } else {
    const Interval b = sc.prior.bounds()[0];
    sc.landscape = {0, b.lo, b.hi, (b.hi - b.lo) / 120.0, sc.theta_true, 1.0};
  }

  try {
    sc.noise.validate();
    sc.s_prior.validate();
  } catch (const std::exception& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& name_or_path, const std::vector<std::string>& overrides) {
  json config = load_config(name_or_path);
  for (const auto& o : overrides) apply_override(config, o);
  return parse_scenario(config);
}

json canonical_config(const json& config) {
  if (config.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : config.items()) out[k] = canonical_config(v);
    return out;
  }
  if (config.is_array()) {
    json out = json::array();
    for (const auto& v : config) out.push_back(canonical_config(v));
    return out;
  }
  if (config.is_number_float()) {
    const double x = config.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9007199254740992.0) {
      return static_cast<std::int64_t>(x);
    }
    return x;
  }
  if (config.is_number_unsigned()) {
    const auto u = config.get<std::uint64_t>();
    if (u <= static_cast<std::uint64_t>(INT64_MAX)) return static_cast<std::int64_t>(u);
  }
  return config;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string config_fingerprint(const json& config) {
  json c = canonical_config(config);
  if (c.is_object()) c.erase("output");
  return sha256_hex(c.dump());
}

SeedPlan seed_plan(std::uint64_t master) {
  return {master, derive_seed(master, SeedStream::DataNoise), derive_seed(master, SeedStream::Chain)};
}

std::shared_ptr<const ForwardModel> make_forward_model(const ForwardSpec& spec, unsigned threads) {
  return std::visit(
      [threads](const auto& s) -> std::shared_ptr<const ForwardModel> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DalembertSpec>) {
          return std::make_shared<DalembertModel>(s.receivers, s.grid, s.parameterization, s.x0);
        } else if constexpr (std::is_same_v<T, AcousticConfig>) {
          AcousticConfig c = s;
          c.threads = std::max(1u, threads);
          return std::make_shared<AcousticModel>(std::move(c));
        } else if constexpr (std::is_same_v<T, SourceModelConfig>) {
          return std::make_shared<AcousticSourceModel>(s);
        } else {
          return std::make_shared<LinearModel>(s.grid, s.basis);
        }
      },
      spec);
}

std::optional<BlockLayout> block_layout(const Scenario& scenario) {
  if (const auto* ac = std::get_if<AcousticConfig>(&scenario.forward)) return ac->blocks;
  return std::nullopt;
}

}  // namespace w2b
