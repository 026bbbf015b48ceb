#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "signet/graph.hpp"

namespace signet {

enum class DistFamily { normal, custom_symmetric };

// Distribution of the interaction strength Z: mean 0, variance sigma^2.
struct DistributionSpec {
  DistFamily family = DistFamily::normal;
  double sigma = 1.0;                // normal only
  std::vector<double> sample_table;  // custom: equiprobable symmetric values

  static DistributionSpec normal(double sigma);
  static DistributionSpec custom(std::vector<double> table);

  double variance() const;
  // E|Z|; sigma * sqrt(2/pi) for the normal family, exact table mean of
  // absolute values for custom tables. Never a hard-coded literal.
  double abs_mean() const;
  void validate() const;
};

// Proportions of the five interaction types for complex mixtures.
struct Proportions {
  double pp = 0.0;  // mutual trust       (+/+)
  double mm = 0.0;  // mutual mistrust    (-/-)
  double pm = 0.0;  // trust/mistrust     (+/-)
  double p0 = 0.0;  // unilateral trust   (+/0)
  double m0 = 0.0;  // unilateral mistrust(-/0)

  double sum() const { return pp + mm + pm + p0 + m0; }
};

// Single source of every closed-form input. proportions == nullopt means the
// random mixture of independent signed draws.
struct ScenarioConfig {
  int n = 0;
  double P = 0.0;
  double d = 0.0;
  DistributionSpec dist;
  std::optional<Proportions> proportions;
  std::uint64_t seed = 0;

  bool random_mixture() const { return !proportions.has_value(); }
  std::string scenario_id() const;
  void validate() const;
};

// Moment machinery feeding the closed-form predictions:
//   Phat = pp+pm+mm+p0/2+m0/2, Pbar = pp-mm+p0/2-m0/2, Pstar = pp+mm-pm,
//   C = (n-1) P Phat E|Z|, E = P Pbar E|Z| / (C+d),
//   V = P Phat sigma^2/(C+d)^2 - E^2, T = P Pstar E^2|Z|/(C+d)^2,
//   tau = (T - E^2)/V.
// The random mixture takes Phat = 1, Pbar = 0, Pstar = 0.
struct MomentStats {
  double Phat = 0, Pbar = 0, Pstar = 0;
  double C = 0;    // expected row sum of |S|
  double E = 0;    // mean of off-diagonal W entries
  double V = 0;    // variance of off-diagonal W entries
  double T = 0;    // E(W_ij * W_ji)
  double tau = 0;  // (T - E^2)/V
};

// Sample moments used to validate the generators against derived_stats.
struct SampleStats {
  double mean_S = 0;        // over all off-diagonal cells
  double mean_absS = 0;
  double mean_S2 = 0;
  double mean_cross = 0;    // mean of S_ij * S_ji over unordered pairs
  double row_sum_mean = 0;  // of |S| row sums
  double row_sum_std = 0;
  std::int64_t cells = 0;
};

SignedNetwork gen_random_mixture(const ScenarioConfig& cfg);
SignedNetwork gen_complex_mixture(const ScenarioConfig& cfg);

// Serial reference twins of the parallel generators; bitwise-identical output
// by construction (kept for kernel-equivalence tests and benchmarks).
SignedNetwork gen_random_mixture_serial(const ScenarioConfig& cfg);
SignedNetwork gen_complex_mixture_serial(const ScenarioConfig& cfg);

MomentStats derived_stats(const ScenarioConfig& cfg);
SampleStats empirical_stats(const SignedNetwork& net);

}  // namespace signet
