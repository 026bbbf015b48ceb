#include "signet/netgen.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "signet/errors.hpp"
#include "signet/rng.hpp"

namespace signet {

DistributionSpec DistributionSpec::normal(double sigma) {
  DistributionSpec d;
  d.family = DistFamily::normal;
  d.sigma = sigma;
  return d;
}

DistributionSpec DistributionSpec::custom(std::vector<double> table) {
  DistributionSpec d;
  d.family = DistFamily::custom_symmetric;
  d.sample_table = std::move(table);
  return d;
}

void DistributionSpec::validate() const {
  if (family == DistFamily::normal) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw ConfigError("DistributionSpec: sigma must be positive");
    return;
  }
  if (sample_table.empty())
    throw ConfigError("DistributionSpec: empty sample table");
  double mean = 0.0, scale = 0.0;
  for (double v : sample_table) {
    if (!std::isfinite(v)) throw ConfigError("DistributionSpec: non-finite table value");
    mean += v;
    scale = std::max(scale, std::abs(v));
  }
  mean /= static_cast<double>(sample_table.size());
  if (std::abs(mean) > 1e-12 * std::max(1.0, scale))
    throw ConfigError("DistributionSpec: sample table must have mean 0");
  if (!(variance() > 0.0))
    throw ConfigError("DistributionSpec: zero-variance table");
}

double DistributionSpec::variance() const {
  if (family == DistFamily::normal) return sigma * sigma;
  double s2 = 0.0;
  for (double v : sample_table) s2 += v * v;
  return s2 / static_cast<double>(sample_table.size());
}

double DistributionSpec::abs_mean() const {
  if (family == DistFamily::normal) return sigma * std::sqrt(2.0 / M_PI);
  double s = 0.0;
  for (double v : sample_table) s += std::abs(v);
  return s / static_cast<double>(sample_table.size());
}

void ScenarioConfig::validate() const {
  if (n < 2) throw ConfigError("ScenarioConfig: n must be at least 2");
  if (!(P > 0.0) || P > 1.0) throw ConfigError("ScenarioConfig: P must lie in (0,1]");
  if (!(d > 0.0)) throw ConfigError("ScenarioConfig: d must be positive");
  dist.validate();
  if (proportions) {
    const Proportions& q = *proportions;
    for (double v : {q.pp, q.mm, q.pm, q.p0, q.m0})
      if (v < 0.0) throw ConfigError("ScenarioConfig: negative proportion");
    if (std::abs(q.sum() - 1.0) > 1e-12)
      throw ConfigError("ScenarioConfig: proportions must sum to 1");
  }
}

std::string ScenarioConfig::scenario_id() const {
  if (random_mixture()) return "random";
  const Proportions& q = *proportions;
  if (q.pp == 1.0) return "pp";
  if (q.mm == 1.0) return "mm";
  if (q.pm == 1.0) return "pm";
  if (q.p0 == 1.0) return "p0";
  if (q.m0 == 1.0) return "m0";
  // Comma-free so the id can sit in the first CSV column unquoted.
  std::ostringstream os;
  os << "mix";
  const std::pair<const char*, double> parts[] = {
      {"pp", q.pp}, {"mm", q.mm}, {"pm", q.pm}, {"p0", q.p0}, {"m0", q.m0}};
  for (const auto& [name, val] : parts)
    if (val != 0.0) os << "_" << name << "=" << val;
  return os.str();
}

namespace {

// Fixed draw protocol per unordered pair (counter -> meaning):
//   0: interaction, 1: type, 2: orientation, 3-4: two magnitude draws.
// Pure functions of (seed, pair index), so any evaluation order agrees.
struct PairSample {
  double z1, z2;  // signed draws (random mixture) or magnitude sources
  double u_type, u_orient;
  bool active;
};

inline PairSample sample_pair(const ScenarioConfig& cfg, std::uint64_t idx) {
  CounterRng rng(cfg.seed, StreamDomain::pair_draws, idx);
  PairSample s{};
  s.active = rng.unit(0) < cfg.P;
  if (!s.active) return s;
  s.u_type = rng.unit(1);
  s.u_orient = rng.unit(2);
  if (cfg.dist.family == DistFamily::normal) {
    rng.normal_pair(3, s.z1, s.z2);
    s.z1 *= cfg.dist.sigma;
    s.z2 *= cfg.dist.sigma;
  } else {
    const auto& t = cfg.dist.sample_table;
    const auto m = t.size();
    s.z1 = t[static_cast<std::size_t>(rng.unit(3) * static_cast<double>(m)) % m];
    s.z2 = t[static_cast<std::size_t>(rng.unit(4) * static_cast<double>(m)) % m];
  }
  return s;
}

inline void place_pair(const ScenarioConfig& cfg, const PairSample& s, int i,
                       int j, Eigen::MatrixXd& S) {
  if (!s.active) return;
  if (cfg.random_mixture()) {
    S(i, j) = s.z1;
    S(j, i) = s.z2;
    return;
  }
  const Proportions& q = *cfg.proportions;
  const double a = std::abs(s.z1), b = std::abs(s.z2);
  const bool o = s.u_orient < 0.5;
  double u = s.u_type;
  if ((u -= q.pp) < 0.0) {
    S(i, j) = a;
    S(j, i) = b;
  } else if ((u -= q.mm) < 0.0) {
    S(i, j) = -a;
    S(j, i) = -b;
  } else if ((u -= q.pm) < 0.0) {
    S(i, j) = o ? a : -a;
    S(j, i) = o ? -b : b;
  } else if ((u -= q.p0) < 0.0) {
    S(i, j) = o ? a : 0.0;
    S(j, i) = o ? 0.0 : b;
  } else {
    S(i, j) = o ? -a : 0.0;
    S(j, i) = o ? 0.0 : -b;
  }
}

SignedNetwork generate(const ScenarioConfig& cfg, bool parallel) {
  cfg.validate();
  SignedNetwork net;
  net.n = cfg.n;
  net.S = Eigen::MatrixXd::Zero(cfg.n, cfg.n);
  net.meta = NetMeta{cfg.seed, cfg.scenario_id()};
  const std::int64_t m = static_cast<std::int64_t>(cfg.n) * (cfg.n - 1) / 2;
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < m; ++p) {
      // Invert p = j(j-1)/2 + i, 0 <= i < j.
      auto j = static_cast<std::int64_t>(
          (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(p))) / 2.0);
      while (j * (j - 1) / 2 > p) --j;
      while ((j + 1) * j / 2 <= p) ++j;
      const std::int64_t i = p - j * (j - 1) / 2;
      place_pair(cfg, sample_pair(cfg, static_cast<std::uint64_t>(p)),
                 static_cast<int>(i), static_cast<int>(j), net.S);
    }
  } else {
    for (int j = 1; j < cfg.n; ++j)
      for (int i = 0; i < j; ++i)
        place_pair(cfg, sample_pair(cfg, pair_index(i, j)), i, j, net.S);
  }
  return net;
}

}  // namespace

SignedNetwork gen_random_mixture(const ScenarioConfig& cfg) {
  if (!cfg.random_mixture())
    throw ConfigError("gen_random_mixture: config carries type proportions");
  return generate(cfg, true);
}

SignedNetwork gen_complex_mixture(const ScenarioConfig& cfg) {
  if (cfg.random_mixture())
    throw ConfigError("gen_complex_mixture: config lacks type proportions");
  return generate(cfg, true);
}

SignedNetwork gen_random_mixture_serial(const ScenarioConfig& cfg) {
  if (!cfg.random_mixture())
    throw ConfigError("gen_random_mixture: config carries type proportions");
  return generate(cfg, false);
}

SignedNetwork gen_complex_mixture_serial(const ScenarioConfig& cfg) {
  if (cfg.random_mixture())
    throw ConfigError("gen_complex_mixture: config lacks type proportions");
  return generate(cfg, false);
}

MomentStats derived_stats(const ScenarioConfig& cfg) {
  cfg.validate();
  MomentStats st;
  const double Eabs = cfg.dist.abs_mean();
  const double var = cfg.dist.variance();
  if (cfg.random_mixture()) {
    st.Phat = 1.0;  // every interacting entry is a full signed draw
    st.Pbar = 0.0;
    st.Pstar = 0.0;
  } else {
    const Proportions& q = *cfg.proportions;
    st.Phat = q.pp + q.pm + q.mm + 0.5 * q.p0 + 0.5 * q.m0;
    st.Pbar = q.pp - q.mm + 0.5 * q.p0 - 0.5 * q.m0;
    st.Pstar = q.pp + q.mm - q.pm;
  }
  st.C = (cfg.n - 1) * cfg.P * st.Phat * Eabs;
  const double D = st.C + cfg.d;
  st.E = cfg.P * st.Pbar * Eabs / D;
  const double V_lead = cfg.P * st.Phat * var / (D * D);
  st.V = V_lead - st.E * st.E;
  st.T = cfg.P * st.Pstar * Eabs * Eabs / (D * D);
  // Relative guard: exact-zero V lands on either side of 0.0 depending on
  // rounding, and the pipeline divides by V downstream.
  if (!(st.V > 1e-12 * V_lead)) {
    std::ostringstream os;
    os << "derived_stats: degenerate variance V = " << st.V
       << " (requires sigma^2 > P*Pbar^2*E^2|Z|/Phat; sigma^2 = " << var
       << ", P*Pbar^2*E^2|Z|/Phat = "
       << cfg.P * st.Pbar * st.Pbar * Eabs * Eabs / st.Phat << ")";
    throw ConfigError(os.str());
  }
  st.tau = (st.T - st.E * st.E) / st.V;
  return st;
}

SampleStats empirical_stats(const SignedNetwork& net) {
  net.validate();
  SampleStats st;
  const int n = net.n;
  double sum = 0, sum_abs = 0, sum_sq = 0, cross = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double v = net.S(i, j);
      sum += v;
      sum_abs += std::abs(v);
      sum_sq += v * v;
      if (i < j) cross += net.S(i, j) * net.S(j, i);
    }
  const double cells = static_cast<double>(n) * (n - 1);
  st.cells = static_cast<std::int64_t>(cells);
  st.mean_S = sum / cells;
  st.mean_absS = sum_abs / cells;
  st.mean_S2 = sum_sq / cells;
  st.mean_cross = cross / (cells / 2.0);
  Eigen::VectorXd rows = net.S.cwiseAbs().rowwise().sum();
  st.row_sum_mean = rows.mean();
  st.row_sum_std =
      std::sqrt((rows.array() - st.row_sum_mean).square().sum() / n);
  return st;
}

}  // namespace signet
