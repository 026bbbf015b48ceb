#include "signet/theory.hpp"

#include <cmath>
#include <sstream>

#include "signet/errors.hpp"

namespace signet {

namespace {

constexpr double kPureTol = 0.0;  // a proportion is "pure" only when exactly 1

// Shared ellipse geometry: center W_ii - E, semi-axes sqrt(nV)(1 +- tau),
// endpoint moduli Delta1 = a + |c| and Delta2 = sqrt(b^2 + c^2).
struct Geometry {
  double Wii, c, root_nV, a, b, Delta1, Delta2, Me;
};

Geometry geometry_from_stats(const ScenarioConfig& cfg, const MomentStats& st) {
  Geometry g{};
  g.Wii = cfg.d / (st.C + cfg.d);
  g.c = g.Wii - st.E;
  g.root_nV = std::sqrt(cfg.n * st.V);
  g.a = g.root_nV * (1.0 + st.tau);
  g.b = g.root_nV * (1.0 - st.tau);
  g.Delta1 = g.a + std::abs(g.c);
  g.Delta2 = std::sqrt(g.b * g.b + g.c * g.c);
  g.Me = std::max(g.Delta1, g.Delta2);
  return g;
}

bool assumption1(const ScenarioConfig& cfg) {
  if (cfg.random_mixture()) return true;  // both signs occur
  // Trust and mistrust coexist: pp + p0 = 1 (no mistrust anywhere) and
  // mm + m0 = 1 (no trust) are the failure modes. Tested through the
  // complementary sums, which are sums of nonnegative terms and therefore
  // safe against cancellation.
  const Proportions& q = *cfg.proportions;
  const double mistrust = q.mm + q.pm + q.m0;
  const double trust = q.pp + q.pm + q.p0;
  return mistrust > 1e-9 && trust > 1e-9;
}

RatePrediction assemble(const ScenarioConfig& cfg, const MomentStats& st,
                        const Geometry& g, std::optional<double> outlier) {
  RatePrediction pred;
  pred.Delta1 = g.Delta1;
  pred.Delta2 = g.Delta2;
  pred.Me = g.Me;
  pred.assumption1_ok = assumption1(cfg);
  pred.assumption2_ok = check_assumptions(cfg).assumption2_ok;
  const bool has_outlier =
      std::abs(cfg.n * st.E) > g.root_nV || outlier.has_value();
  if (!has_outlier) {
    pred.regime = Regime::bulk;
    pred.governing_modulus = g.Me;
  } else {
    pred.regime = Regime::outlier;
    double lam = outlier ? *outlier
                         : (cfg.n - 1) * st.E +
                               (st.T - st.E * st.E) / st.E + g.Wii;
    // rho(W) <= max row sum of |W| = 1: a predicted modulus beyond 1 is an
    // approximation artifact of the rank-one formula, tight only when one
    // trust family fills the whole network and the outlier is the unit
    // eigenvalue itself.
    if (lam > 1.0) lam = 1.0;
    if (lam < -1.0) lam = -1.0;
    pred.lambda_outlier = lam;
    pred.governing_modulus = std::max(g.Me, std::abs(lam));
  }
  pred.rate = -std::log(pred.governing_modulus);
  return pred;
}

std::optional<InteractionType> pure_type_of(const ScenarioConfig& cfg) {
  if (cfg.random_mixture()) return std::nullopt;
  const Proportions& q = *cfg.proportions;
  if (q.pp >= 1.0 - kPureTol) return InteractionType::pp;
  if (q.mm >= 1.0 - kPureTol) return InteractionType::mm;
  if (q.pm >= 1.0 - kPureTol) return InteractionType::pm;
  if (q.p0 >= 1.0 - kPureTol) return InteractionType::p0;
  if (q.m0 >= 1.0 - kPureTol) return InteractionType::m0;
  return std::nullopt;
}

Proportions pure_proportions(InteractionType type) {
  Proportions q;
  switch (type) {
    case InteractionType::pp: q.pp = 1.0; break;
    case InteractionType::mm: q.mm = 1.0; break;
    case InteractionType::pm: q.pm = 1.0; break;
    case InteractionType::p0: q.p0 = 1.0; break;
    case InteractionType::m0: q.m0 = 1.0; break;
  }
  return q;
}

}  // namespace

RandomMixturePrediction predict_random_mixture(const ScenarioConfig& cfg) {
  if (!cfg.random_mixture())
    throw ConfigError("predict_random_mixture: config carries proportions");
  cfg.validate();
  RandomMixturePrediction out;
  out.stats = derived_stats(cfg);
  const double Eabs = cfg.dist.abs_mean();
  const double denom = (cfg.n - 1) * cfg.P * Eabs + cfg.d;
  const double radius = std::sqrt(cfg.n * cfg.P * cfg.dist.variance()) / denom;
  out.circle.center_x = cfg.d / denom;  // W_ii
  out.circle.radius = radius;
  out.rate.regime = Regime::bulk;
  // rho = radius + center: the circle hugs the origin-shifted bulk and the
  // rightmost point governs.
  out.rate.governing_modulus = (std::sqrt(cfg.n * cfg.P * cfg.dist.variance()) + cfg.d) / denom;
  out.rate.Delta1 = out.rate.governing_modulus;
  out.rate.Delta2 = std::sqrt(radius * radius +
                              out.circle.center_x * out.circle.center_x);
  out.rate.Me = out.rate.governing_modulus;
  out.rate.rate = -std::log(out.rate.governing_modulus);
  out.rate.assumption1_ok = true;
  out.rate.assumption2_ok = check_assumptions(cfg).assumption2_ok;
  return out;
}

ComplexMixturePrediction predict_complex_mixture(const ScenarioConfig& cfg) {
  if (cfg.random_mixture())
    throw ConfigError("predict_complex_mixture: config lacks proportions");
  cfg.validate();
  if (auto type = pure_type_of(cfg)) return predict_pure_type(*type, cfg);

  ComplexMixturePrediction out;
  out.stats = derived_stats(cfg);
  const Geometry g = geometry_from_stats(cfg, out.stats);
  out.ellipse = {g.c, g.a, g.b};
  out.rate = assemble(cfg, out.stats, g, std::nullopt);
  return out;
}

ComplexMixturePrediction predict_pure_type(InteractionType type,
                                           const ScenarioConfig& cfg) {
  ScenarioConfig pure = cfg;
  pure.proportions = pure_proportions(type);
  pure.validate();

  ComplexMixturePrediction out;
  out.stats = derived_stats(pure);
  const Geometry g = geometry_from_stats(pure, out.stats);
  out.ellipse = {g.c, g.a, g.b};

  const double Eabs = pure.dist.abs_mean();
  const double n = pure.n, P = pure.P, d = pure.d;
  switch (type) {
    case InteractionType::pp:
    case InteractionType::p0: {
      // Nonnegative row-stochastic |W| = W: Perron eigenvalue exactly 1.
      // That mode converges instead of decaying, so the rate is set by the
      // bulk edge M_e, not by the unit outlier.
      RatePrediction pred;
      pred.regime = Regime::outlier;
      pred.Delta1 = g.Delta1;
      pred.Delta2 = g.Delta2;
      pred.Me = g.Me;
      pred.lambda_outlier = 1.0;
      pred.governing_modulus = g.Me;
      pred.rate = -std::log(g.Me);
      pred.assumption1_ok = assumption1(pure);
      pred.assumption2_ok = check_assumptions(pure).assumption2_ok;
      out.rate = pred;
      break;
    }
    case InteractionType::pm:
      out.rate = assemble(pure, out.stats, g, std::nullopt);  // E = 0: bulk
      break;
    case InteractionType::mm:
      // -1 + 2(W_ii - E) = -((n-3) P E|Z| - d) / ((n-1) P E|Z| + d)
      out.rate = assemble(pure, out.stats, g,
                          -((n - 3) * P * Eabs - d) / ((n - 1) * P * Eabs + d));
      break;
    case InteractionType::m0:
      // Same with the halved interaction density: Phat = 1/2.
      out.rate =
          assemble(pure, out.stats, g,
                   -((n - 3) * P * Eabs - 2 * d) / ((n - 1) * P * Eabs + 2 * d));
      break;
  }
  return out;
}

ComplexMixturePrediction predict_mixture_pp_mm(double P_pp,
                                               const ScenarioConfig& cfg) {
  if (P_pp < 0.0 || P_pp > 1.0)
    throw ConfigError("predict_mixture_pp_mm: P_pp outside [0,1]");
  ScenarioConfig mix = cfg;
  mix.proportions = Proportions{P_pp, 1.0 - P_pp, 0.0, 0.0, 0.0};
  if (P_pp == 0.0) return predict_pure_type(InteractionType::mm, mix);

  // P_pp = 1 stays on the outlier branch deliberately: the outlier reaches +1
  // (unit eigenvalue), its mode stops decaying, and the sweep's rate
  // continuation is 0 rather than the post-consensus secondary rate.
  mix.validate();
  ComplexMixturePrediction out;
  out.stats = derived_stats(mix);
  const Geometry g = geometry_from_stats(mix, out.stats);
  out.ellipse = {g.c, g.a, g.b};
  out.rate = assemble(mix, out.stats, g, std::nullopt);
  return out;
}

ComplexMixturePrediction predict_mixture_mm_m0(double P_mm,
                                               const ScenarioConfig& cfg) {
  if (P_mm < 0.0 || P_mm > 1.0)
    throw ConfigError("predict_mixture_mm_m0: P_mm outside [0,1]");
  ScenarioConfig mix = cfg;
  mix.proportions = Proportions{0.0, P_mm, 0.0, 0.0, 1.0 - P_mm};
  mix.validate();

  ComplexMixturePrediction out;
  out.stats = derived_stats(mix);  // Phat = (P_mm + 1)/2
  const Geometry g = geometry_from_stats(mix, out.stats);
  out.ellipse = {g.c, g.a, g.b};

  const double PPhatE = mix.P * out.stats.Phat * mix.dist.abs_mean();
  const double modulus =
      ((mix.n - 3) * PPhatE - mix.d) / ((mix.n - 1) * PPhatE + mix.d);
  if (!(modulus > 0.0)) {
    std::ostringstream os;
    os << "predict_mixture_mm_m0: formula regime invalid (modulus = "
       << modulus << " <= 0 at n = " << mix.n << ", d = " << mix.d << ")";
    throw NumericError(os.str());
  }
  RatePrediction pred;
  pred.regime = Regime::outlier;
  pred.Delta1 = g.Delta1;
  pred.Delta2 = g.Delta2;
  pred.Me = g.Me;
  pred.lambda_outlier = -modulus;
  pred.governing_modulus = modulus;  // the theorem's closed form, unmixed
  pred.rate = -std::log(modulus);
  pred.assumption1_ok = assumption1(mix);
  pred.assumption2_ok = check_assumptions(mix).assumption2_ok;
  out.rate = pred;
  return out;
}

double ellipse_extreme_modulus(double Na, double Nb, double c) {
  if (!(Na > Nb) || !(Nb > 0.0))
    throw ConfigError("ellipse_extreme_modulus: requires Na > Nb > 0");
  return 1.0 + Na + std::abs(c);
}

AssumptionReport check_assumptions(const ScenarioConfig& cfg) {
  AssumptionReport rep;
  const double s2 = cfg.dist.variance();
  const double Eabs = cfg.dist.abs_mean();
  rep.M1 = (s2 + Eabs * Eabs) * (s2 + Eabs * Eabs) / (s2 * Eabs);
  const double under = 2.0 * s2 * Eabs * Eabs - cfg.P * std::pow(Eabs, 4);
  rep.M2 = 2.0 * s2 * s2 / std::sqrt(under) + cfg.P * Eabs / 2.0;
  rep.d_lower = std::max(rep.M1, rep.M2);
  rep.assumption2_ok = cfg.d > rep.d_lower;
  rep.assumption1_ok = assumption1(cfg);
  if (!cfg.random_mixture()) {
    // Equivalence cross-check: trust and mistrust coexist iff |Pbar| != Phat.
    const MomentStats st = derived_stats(cfg);
    const bool via_moments = std::abs(std::abs(st.Pbar) - st.Phat) > 1e-9;
    if (via_moments != rep.assumption1_ok)
      throw NumericError(
          "check_assumptions: coexistence test disagrees with |Pbar| != Phat");
  }
  return rep;
}

MonotonicitySigns monotonicity_table(Scenario scenario) {
  switch (scenario) {
    case Scenario::random_mixture:
    case Scenario::pp:
    case Scenario::pm:
    case Scenario::p0:
      return {+1, +1, -1};
    case Scenario::mm:
    case Scenario::m0:
      return {-1, -1, +1};
  }
  throw ConfigError("monotonicity_table: unknown scenario");
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "random") return Scenario::random_mixture;
  if (name == "pp") return Scenario::pp;
  if (name == "mm") return Scenario::mm;
  if (name == "pm") return Scenario::pm;
  if (name == "p0") return Scenario::p0;
  if (name == "m0") return Scenario::m0;
  throw ConfigError("unknown scenario name: " + name);
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::random_mixture: return "random";
    case Scenario::pp: return "pp";
    case Scenario::mm: return "mm";
    case Scenario::pm: return "pm";
    case Scenario::p0: return "p0";
    case Scenario::m0: return "m0";
  }
  throw ConfigError("to_string: unknown scenario");
}

}  // namespace signet
