#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sidebandit {

// Independent sub-streams of one experiment. Changing the policy never
// touches the environment streams.
enum class StreamRole : std::uint64_t {
  kLosses = 1,
  kGraphs = 2,
  kPolicy = 3,
  kVerify = 4,
};

// Seeded 64-bit stream. The mapping from raw bits to uniforms is done here
// rather than through <random> distributions so draws are identical across
// standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Stream keyed by (base_seed, replication, role). Keys that differ in any
  // component give unrelated streams.
  static Rng derive(std::uint64_t base_seed, std::uint64_t replication,
                    StreamRole role) {
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed),
                      static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(replication),
                      static_cast<std::uint32_t>(replication >> 32),
                      static_cast<std::uint32_t>(role)};
    Rng rng(0);
    rng.engine_.seed(seq);
    return rng;
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
  }

  // Exponential with unit mean.
  double exponential() { return -std::log(uniform()); }

  bool bernoulli(double p) { return uniform() < p; }

  // Geometric on {1, 2, ...} with success probability p, by exact inverse CDF.
  std::uint64_t geometric(double p) {
    if (p >= 1.0) return 1;
    const double k = std::ceil(std::log(uniform()) / std::log1p(-p));
    if (!(k >= 1.0)) return 1;
    if (k >= 9.0e18) return static_cast<std::uint64_t>(9.0e18);
    return static_cast<std::uint64_t>(k);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sidebandit
