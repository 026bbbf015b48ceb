#pragma once

#include <cmath>
#include <cstdint>

namespace signet {

// Counter-based splittable RNG. Every draw is a pure function of
// (seed, domain, stream, counter), so generation order never matters and
// parallel producers get identical results to serial ones. The mixer is the
// splitmix64 finalizer, which passes BigCrush when driven by a Weyl sequence.
inline constexpr std::uint64_t kWeylGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream domains keep unrelated consumers of the same seed independent.
enum class StreamDomain : std::uint64_t {
  pair_draws = 0,    // per-pair interaction sampling
  initial_state = 1, // initial opinion vectors
  probe = 2,         // power-iteration start vectors and similar
};

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, StreamDomain domain, std::uint64_t stream)
      : base_(mix64(mix64(seed + kWeylGamma * static_cast<std::uint64_t>(domain)) ^
                    mix64(stream + 0xD1B54A32D192ED03ull))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix64(base_ + kWeylGamma * (counter + 1));
  }

  // Uniform on [0, 1): 53 random bits.
  double unit(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]: safe as a log() argument.
  double unit_open(std::uint64_t counter) const {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * unit(counter);
  }

  // Box-Muller from two counters; deterministic across platforms, unlike
  // std::normal_distribution whose algorithm is implementation-defined.
  void normal_pair(std::uint64_t counter, double& z1, double& z2) const {
    const double r = std::sqrt(-2.0 * std::log(unit_open(counter)));
    const double theta = 2.0 * M_PI * unit(counter + 1);
    z1 = r * std::cos(theta);
    z2 = r * std::sin(theta);
  }

 private:
  std::uint64_t base_;
};

// Unordered pairs {i, j}, i < j, are numbered j*(j-1)/2 + i. The index does
// not depend on n, so the network generated at population n is exactly the
// leading n x n submatrix of the one generated at any larger population with
// the same seed: sweeps over n (and, through the activation draw, over P) are
// coupled samples rather than independent ones.
inline std::uint64_t pair_index(std::uint64_t i, std::uint64_t j) {
  return j * (j - 1) / 2 + i;
}

}  // namespace signet
