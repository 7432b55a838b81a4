#pragma once

#include <cstdint>
#include <random>

namespace w2b {

/// Seedable generator with platform-independent variates: uniforms take the
/// top 53 bits of mt19937_64, normals use Box-Muller without caching, gammas
/// use Marsaglia-Tsang. Every call consumes a deterministic number of engine
/// outputs given the same state, so runs are bit-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Gamma with shape a > 0 and rate b > 0 (mean a/b).
  double gamma(double shape, double rate);

 private:
  std::mt19937_64 engine_;
};

/// Stream indices for derive_seed.
enum class SeedStream : std::uint32_t { DataNoise = 0, Chain = 1 };

/// Independent sub-seed from (master, stream, index) via std::seed_seq.
std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint32_t index = 0);

}  // namespace w2b
