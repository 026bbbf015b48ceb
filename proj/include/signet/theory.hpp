#pragma once

#include <optional>
#include <string>

#include "signet/netgen.hpp"

namespace signet {

struct CirclePrediction {
  double center_x = 0.0;  // W_ii on the real axis
  double radius = 0.0;
};

// Bulk support of the spectrum: ellipse centered at (center_x, 0) with
// horizontal semi-axis a = sqrt(nV)(1+tau), vertical b = sqrt(nV)(1-tau).
struct EllipsePrediction {
  double center_x = 0.0;  // W_ii - E
  double a = 0.0;
  double b = 0.0;
};

enum class Regime { bulk, outlier };

struct RatePrediction {
  Regime regime = Regime::bulk;  // outlier iff |nE| > sqrt(nV)
  double Me = 0.0;               // max(Delta1, Delta2)
  double Delta1 = 0.0;           // a + |center_x|
  double Delta2 = 0.0;           // sqrt(b^2 + center_x^2)
  std::optional<double> lambda_outlier;  // real; present in outlier regime
  double governing_modulus = 0.0;        // in (0, 1]
  double rate = 0.0;                     // -ln(governing_modulus), nats/step
  bool assumption1_ok = true;            // trust and mistrust coexist
  bool assumption2_ok = true;            // d above the d_lower threshold
};

struct RandomMixturePrediction {
  RatePrediction rate;
  CirclePrediction circle;
  MomentStats stats;
};

struct ComplexMixturePrediction {
  RatePrediction rate;
  EllipsePrediction ellipse;
  MomentStats stats;
};

struct AssumptionReport {
  double M1 = 0.0;       // (sigma^2 + E^2|Z|)^2 / (sigma^2 E|Z|)
  double M2 = 0.0;       // 2 sigma^4 / sqrt(2 sigma^2 E^2|Z| - P E^4|Z|) + P E|Z| / 2
  double d_lower = 0.0;  // max(M1, M2)
  bool assumption1_ok = true;
  bool assumption2_ok = true;
};

enum class InteractionType { pp, mm, pm, p0, m0 };
enum class Scenario { random_mixture, pp, mm, pm, p0, m0 };

// Directions of the rate in (n, P, d); claims validated by sweeps, not
// derived independently.
struct MonotonicitySigns {
  int dn = 0, dP = 0, dd = 0;
};

// Circle law: rho(W) = (sqrt(n P sigma^2) + d) / ((n-1) P E|Z| + d),
// circle radius sqrt(n P sigma^2)/(C+d) centered at W_ii = d/(C+d).
RandomMixturePrediction predict_random_mixture(const ScenarioConfig& cfg);

// Ellipse + rank-one outlier for genuine mixtures; pure-type proportion
// vectors are redirected to predict_pure_type. In the outlier regime
// lambda_outlier = (n-1)E + (T - E^2)/E + W_ii, and the governing modulus is
// max(M_e, |lambda_outlier|) capped at 1 (row-stochastic spectral bound; the
// cap binds only when one trust family has proportion 1 and the outlier is
// the unit eigenvalue itself).
ComplexMixturePrediction predict_complex_mixture(const ScenarioConfig& cfg);

// Per-type closed forms at the same ellipse machinery:
//   (+/+), (+/0): unit outlier (lambda = 1), governing modulus M_e
//   (+/-):        bulk, governing modulus M_e
//   (-/-):        lambda = -((n-3) P E|Z| - d) / ((n-1) P E|Z| + d)
//   (-/0):        lambda = -((n-3) P E|Z| - 2d) / ((n-1) P E|Z| + 2d)
// governed by max(|lambda|, M_e). `cfg.proportions` is ignored; the type
// argument wins.
ComplexMixturePrediction predict_pure_type(InteractionType type,
                                           const ScenarioConfig& cfg);

// Trust/mistrust mixture {+/+: P_pp, -/-: 1-P_pp}. P_pp = 0 routes to the
// pure (-/-) closed form (continuous limit). P_pp = 1 keeps the outlier
// branch: the predicted outlier reaches +1 (cap), the outlier mode stops
// decaying, and the reported rate is 0 with assumption1_ok = false.
ComplexMixturePrediction predict_mixture_pp_mm(double P_pp,
                                               const ScenarioConfig& cfg);

// Mistrust mixture {-/-: P_mm, -/0: 1-P_mm} with Phat = (P_mm+1)/2:
// modulus = ((n-3) P Phat E|Z| - d) / ((n-1) P Phat E|Z| + d).
// Throws NumericError when the formula regime is invalid (modulus <= 0).
ComplexMixturePrediction predict_mixture_mm_m0(double P_mm,
                                               const ScenarioConfig& cfg);

// Extreme modulus over the ellipse ((x+c)/(1+Na))^2 + (y/(1-Nb))^2 = 1:
// equals 1 + Na + |c|, attained at an endpoint of the horizontal axis.
// Requires Na > Nb > 0 (ConfigError otherwise).
double ellipse_extreme_modulus(double Na, double Nb, double c);

AssumptionReport check_assumptions(const ScenarioConfig& cfg);

// (+,+,-) for random/(+/+)/(+/-)/(+/0); (-,-,+) for (-/-)/(-/0).
MonotonicitySigns monotonicity_table(Scenario scenario);

Scenario scenario_from_string(const std::string& name);
std::string to_string(Scenario scenario);

}  // namespace signet
