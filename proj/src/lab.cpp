#include "signet/lab.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "signet/errors.hpp"
#include "signet/influence.hpp"

namespace signet {

namespace {

using json = nlohmann::json;

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

std::string regime_name(Regime r) {
  return r == Regime::bulk ? "bulk" : "outlier";
}

// The three fixed 4-node influence matrices used by the example1 preset.
// Same structure and magnitudes, different sign patterns.
std::vector<Eigen::MatrixXd> example1_matrices() {
  Eigen::MatrixXd W1(4, 4), W2(4, 4), W3(4, 4);
  W1 << 0.25, 0.25, -0.25, 0.25,
        0.5, 0.5, 0, 0,
        0.25, -0.25, 0.25, -0.25,
        0, 0, -0.5, 0.5;
  W2 = W1;
  W2.row(3) << 0, 0, 0.5, 0.5;
  W3 = W2;
  W3.row(2) << 0.25, -0.25, 0.25, 0.25;
  return {W1, W2, W3};
}

InfluenceMatrix wrap_influence(const Eigen::MatrixXd& W) {
  InfluenceMatrix out;
  out.n = static_cast<int>(W.rows());
  out.W = W;
  out.row_abs_sums = W.cwiseAbs().rowwise().sum();
  out.d = 0.0;
  return out;
}

ScenarioConfig cell_config(const ExperimentSpec& spec, double value, std::uint64_t seed) {
  ScenarioConfig cfg = spec.base;
  cfg.seed = seed;
  const std::string& p = spec.sweep_param;
  if (p == "n") {
    cfg.n = static_cast<int>(std::llround(value));
  } else if (p == "P") {
    cfg.P = value;
  } else if (p == "d") {
    cfg.d = value;
  } else if (p == "P_pp") {
    cfg.proportions = Proportions{value, 1.0 - value, 0.0, 0.0, 0.0};
  } else if (p == "P_mm") {
    cfg.proportions = Proportions{0.0, value, 0.0, 0.0, 1.0 - value};
  } else if (!p.empty() && p != "none") {
    throw ConfigError("run_experiment: unknown sweep parameter '" + p + "'");
  }
  return cfg;
}

struct CellPrediction {
  double rate = 0.0;
  double modulus = 0.0;
  std::string regime;
  std::optional<CirclePrediction> circle;
  std::optional<EllipsePrediction> ellipse;
  std::optional<double> outlier;
};

CellPrediction predict_cell(const ExperimentSpec& spec, const ScenarioConfig& cfg,
                            double value) {
  CellPrediction out;
  if (cfg.random_mixture()) {
    RandomMixturePrediction p = predict_random_mixture(cfg);
    out.rate = p.rate.rate;
    out.modulus = p.rate.governing_modulus;
    out.regime = regime_name(p.rate.regime);
    out.circle = p.circle;
    return out;
  }
  ComplexMixturePrediction p =
      spec.sweep_param == "P_pp"   ? predict_mixture_pp_mm(value, cfg)
      : spec.sweep_param == "P_mm" ? predict_mixture_mm_m0(value, cfg)
                                   : predict_complex_mixture(cfg);
  out.rate = p.rate.rate;
  out.modulus = p.rate.governing_modulus;
  out.regime = regime_name(p.rate.regime);
  out.ellipse = p.ellipse;
  out.outlier = p.rate.lambda_outlier;
  return out;
}

std::vector<SweepRecord> run_example1(const ExperimentSpec& spec) {
  const auto mats = example1_matrices();
  std::vector<SweepRecord> records;
  const std::uint64_t seed = spec.seeds.front();
  for (std::size_t m = 0; m < mats.size(); ++m) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRecord rec;
    rec.scenario = "example1_W" + std::to_string(m + 1);
    rec.param = "matrix";
    rec.value = static_cast<double>(m + 1);
    rec.seed = seed;
    InfluenceMatrix W = wrap_influence(mats[m]);
    Spectrum spec_m = eigenvalues(W.W);
    EmpiricalRateResult rr = rate_from_spectrum(spec_m);
    rec.r_spectral = rr.rate;
    rec.modulus_spectral = rr.governing_modulus;
    Trajectory traj = simulate(W, random_initial_state(W.n, seed));
    LimitClassification cls = classify_limit(traj);
    rec.r_dynamics = empirical_rate(traj, rate_reference(traj, cls));
    rec.r_theory = 0.0;
    rec.modulus_theory = 0.0;
    rec.regime = "example";
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    export_spectrum_json(spec_m, std::nullopt, std::nullopt, std::nullopt,
                         spec.out_dir / ("spectrum_" + rec.scenario + ".json"));
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SweepRecord> run_example2(const ExperimentSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  const double p_pp = 0.25, p_mm = 0.25, p_pm = 0.5;
  const double p_unbalanced = enumerate_triangle_balance(p_pp, p_mm, p_pm);
  SweepRecord rec;
  rec.scenario = "example2_triangle";
  rec.param = "P_unbalanced";
  rec.value = p_unbalanced;
  rec.seed = spec.seeds.front();
  rec.regime = "enumeration";
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  json doc;
  doc["type_probs"] = {{"pp", p_pp}, {"mm", p_mm}, {"pm", p_pm}};
  doc["enumerated"] = p_unbalanced;
  doc["claimed"] = 0.8;  // headline value this enumeration is checked against
  std::ofstream out(spec.out_dir / "example2.json");
  if (!out) throw ConfigError("run_experiment: cannot write example2.json");
  out << doc.dump(2) << "\n";
  return {rec};
}

}  // namespace

void ExperimentSpec::validate() const {
  if (seeds.empty()) throw ConfigError("ExperimentSpec: seeds must be nonempty");
  for (std::size_t i = 1; i < sweep_values.size(); ++i)
    if (!(sweep_values[i] > sweep_values[i - 1]))
      throw ConfigError("ExperimentSpec: sweep values must be strictly increasing");
  if (!sweep_param.empty() && sweep_param != "none" && sweep_values.empty())
    throw ConfigError("ExperimentSpec: sweep parameter given without values");
  if (preset != Preset::example1 && preset != Preset::example2) {
    // Sweeps replace the swept field per cell; the base must stand alone.
    base.validate();
  }
  if (sweep_param == "P_pp" || sweep_param == "P_mm") {
    for (double v : sweep_values)
      if (v < 0.0 || v > 1.0)
        throw ConfigError("ExperimentSpec: mixture proportions must lie in [0,1]");
  }
}

std::vector<SweepRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec)
    throw ConfigError("run_experiment: cannot create output directory " +
                      spec.out_dir.string() + ": " + ec.message());

  std::vector<SweepRecord> records;
  if (spec.preset == Preset::example1) {
    records = run_example1(spec);
  } else if (spec.preset == Preset::example2) {
    records = run_example2(spec);
  } else {
    std::vector<double> values = spec.sweep_values;
    if (values.empty()) values.push_back(0.0);  // single-cell presets
    const std::size_t n_cells = values.size() * spec.seeds.size();
    records.resize(n_cells);
    const bool want_json = spec.preset == Preset::spectrum;

    // Preassigned slots keep the output order schedule-independent.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t cell = 0; cell < static_cast<std::int64_t>(n_cells); ++cell) {
      const std::size_t vi = static_cast<std::size_t>(cell) / spec.seeds.size();
      const std::size_t si = static_cast<std::size_t>(cell) % spec.seeds.size();
      const double value = values[vi];
      const std::uint64_t seed = spec.seeds[si];
      SweepRecord rec;
      rec.param = spec.sweep_param.empty() ? "none" : spec.sweep_param;
      rec.value = value;
      rec.seed = seed;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        ScenarioConfig cfg = cell_config(spec, value, seed);
        cfg.validate();
        rec.scenario = cfg.scenario_id();
        CellPrediction pred = predict_cell(spec, cfg, value);
        rec.r_theory = pred.rate;
        rec.modulus_theory = pred.modulus;
        rec.regime = pred.regime;

        SignedNetwork net = cfg.random_mixture() ? gen_random_mixture(cfg)
                                                 : gen_complex_mixture(cfg);
        InfluenceMatrix W = build_influence(net, cfg.d);
        Spectrum sp = eigenvalues(W.W);
        EmpiricalRateResult rr = rate_from_spectrum(sp);
        rec.r_spectral = rr.rate;
        rec.modulus_spectral = rr.governing_modulus;

        Trajectory traj = simulate(W, random_initial_state(cfg.n, seed));
        if (traj.stop_reason == Trajectory::StopReason::converged) {
          LimitClassification cls = classify_limit(traj);
          rec.r_dynamics = empirical_rate(traj, rate_reference(traj, cls));
        } else {
          rec.r_dynamics = std::numeric_limits<double>::infinity();
        }

        if (want_json) {
          std::ostringstream name;
          name << "spectrum_" << rec.scenario << "_seed" << seed << ".json";
          export_spectrum_json(sp, pred.circle, pred.ellipse, pred.outlier,
                               spec.out_dir / name.str());
        }
      } catch (const std::exception& e) {
        // Per-cell failures (e.g. solver cap) are recorded; the run continues.
        const double inf = std::numeric_limits<double>::infinity();
        if (rec.scenario.empty()) rec.scenario = "invalid";
        rec.r_theory = rec.r_spectral = rec.r_dynamics = inf;
        rec.modulus_theory = rec.modulus_spectral = inf;
        std::string msg = e.what();
        for (char& c : msg)
          if (c == ',' || c == '\n') c = ' ';
        rec.regime = "error: " + msg;
      }
      rec.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      records[static_cast<std::size_t>(cell)] = std::move(rec);
    }
  }

  export_csv(records, spec.out_dir / "records.csv");
  return records;
}

double enumerate_triangle_balance(double p_pp, double p_mm, double p_pm) {
  const double probs[3] = {p_pp, p_mm, p_pm};
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError("enumerate_triangle_balance: probabilities must lie in [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ConfigError("enumerate_triangle_balance: probabilities must sum to 1");

  // Pairs of the 3-clique: (0,1), (0,2), (1,2); types 0:(+/+) 1:(-/-) 2:(+/-).
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  double p_unbalanced = 0.0;
  for (int t0 = 0; t0 < 3; ++t0)
    for (int t1 = 0; t1 < 3; ++t1)
      for (int t2 = 0; t2 < 3; ++t2) {
        const int types[3] = {t0, t1, t2};
        const double weight = probs[t0] * probs[t1] * probs[t2];
        if (weight == 0.0) continue;
        SignedNetwork net;
        net.n = 3;
        net.S = Eigen::MatrixXd::Zero(3, 3);
        for (int e = 0; e < 3; ++e) {
          const int i = pairs[e][0], j = pairs[e][1];
          // Unit magnitudes; the (+/-) pair points trust from i to j.
          switch (types[e]) {
            case 0: net.S(i, j) = net.S(j, i) = 1.0; break;
            case 1: net.S(i, j) = net.S(j, i) = -1.0; break;
            case 2: net.S(i, j) = 1.0; net.S(j, i) = -1.0; break;
          }
        }
        if (!is_structurally_balanced(net).balanced) p_unbalanced += weight;
      }
  return p_unbalanced;
}

void export_csv(const std::vector<SweepRecord>& records,
                const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("export_csv: cannot open " + file.string());
  out << "scenario,param,value,seed,r_theory,r_spectral,r_dynamics,"
         "modulus_theory,modulus_spectral,regime,wall_ms\n";
  for (const SweepRecord& r : records) {
    out << r.scenario << ',' << r.param << ',' << format_double(r.value) << ','
        << r.seed << ',' << format_double(r.r_theory) << ','
        << format_double(r.r_spectral) << ',' << format_double(r.r_dynamics)
        << ',' << format_double(r.modulus_theory) << ','
        << format_double(r.modulus_spectral) << ',' << r.regime << ','
        << std::llround(r.wall_ms) << '\n';
  }
  if (!out) throw ConfigError("export_csv: write failed for " + file.string());
}

void export_spectrum_json(const Spectrum& spec,
                          const std::optional<CirclePrediction>& circle,
                          const std::optional<EllipsePrediction>& ellipse,
                          const std::optional<double>& outlier,
                          const std::filesystem::path& file) {
  std::vector<std::complex<double>> ev = spec.eigenvalues;
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  json doc;
  doc["eigenvalues"] = json::array();
  for (const auto& z : ev) doc["eigenvalues"].push_back({z.real(), z.imag()});
  if (circle)
    doc["circle"] = {{"center_x", circle->center_x}, {"radius", circle->radius}};
  if (ellipse)
    doc["ellipse"] = {{"center_x", ellipse->center_x}, {"a", ellipse->a}, {"b", ellipse->b}};
  doc["outlier"] = outlier ? json(*outlier) : json(nullptr);
  std::ofstream out(file);
  if (!out) throw ConfigError("export_spectrum_json: cannot open " + file.string());
  out << doc.dump(2) << "\n";
  if (!out)
    throw ConfigError("export_spectrum_json: write failed for " + file.string());
}

namespace {

std::vector<double> grid(double from, double to, double step) {
  std::vector<double> v;
  for (int i = 0;; ++i) {
    // Snap to 9 decimals so accumulated float error never leaks into ids/CSV.
    const double x = std::round((from + i * step) * 1e9) / 1e9;
    if (x > to + 1e-9) break;
    v.push_back(x);
  }
  return v;
}

}  // namespace

ExperimentSpec make_preset(Preset preset, const ScenarioConfig& base,
                           const std::filesystem::path& out_dir,
                           const std::vector<std::uint64_t>& seeds) {
  ExperimentSpec spec;
  spec.preset = preset;
  spec.base = base;
  spec.out_dir = out_dir;
  spec.seeds = seeds;
  const bool random = base.random_mixture();
  switch (preset) {
    case Preset::example1:
    case Preset::example2:
    case Preset::spectrum:
      break;  // no sweep axis
    case Preset::rate_vs_n:
      spec.sweep_param = "n";
      spec.sweep_values = random ? grid(100, 1500, 100) : grid(50, 1500, 50);
      break;
    case Preset::rate_vs_P:
      spec.sweep_param = "P";
      spec.sweep_values = random ? grid(0.1, 0.9, 0.05) : grid(0.05, 1.0, 0.05);
      break;
    case Preset::rate_vs_d:
      spec.sweep_param = "d";
      spec.sweep_values = random ? grid(10, 100, 10) : grid(3, 47, 4);
      break;
    case Preset::mixture_sweep:
      spec.sweep_param = "P_pp";
      spec.sweep_values = grid(0.0, 1.0, 0.1);
      break;
  }
  return spec;
}

ScenarioConfig scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario_from_json: ") + e.what());
  }
  try {
    ScenarioConfig cfg;
    cfg.n = doc.at("n").get<int>();
    cfg.P = doc.at("P").get<double>();
    cfg.d = doc.at("d").get<double>();
    if (doc.contains("dist")) {
      const json& dj = doc["dist"];
      const std::string family = dj.value("family", "normal");
      if (family == "normal") {
        cfg.dist = DistributionSpec::normal(dj.value("sigma", 1.0));
      } else if (family == "custom") {
        cfg.dist = DistributionSpec::custom(
            dj.at("sample_table").get<std::vector<double>>());
      } else {
        throw ConfigError("scenario_from_json: unknown dist family '" + family + "'");
      }
    }
    if (doc.contains("proportions") && !doc["proportions"].is_null()) {
      const json& pj = doc["proportions"];
      Proportions q;
      q.pp = pj.value("pp", 0.0);
      q.mm = pj.value("mm", 0.0);
      q.pm = pj.value("pm", 0.0);
      q.p0 = pj.value("p0", 0.0);
      q.m0 = pj.value("m0", 0.0);
      cfg.proportions = q;
    }
    cfg.seed = doc.value("seed", std::uint64_t{0});
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario_from_json: ") + e.what());
  }
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["n"] = cfg.n;
  doc["P"] = cfg.P;
  doc["d"] = cfg.d;
  if (cfg.dist.family == DistFamily::normal) {
    doc["dist"] = {{"family", "normal"}, {"sigma", cfg.dist.sigma}};
  } else {
    doc["dist"] = {{"family", "custom"}, {"sample_table", cfg.dist.sample_table}};
  }
  if (cfg.proportions) {
    const Proportions& q = *cfg.proportions;
    doc["proportions"] = {{"pp", q.pp}, {"mm", q.mm}, {"pm", q.pm},
                          {"p0", q.p0}, {"m0", q.m0}};
  }
  doc["seed"] = cfg.seed;
  return doc.dump(2);
}

ExperimentSpec experiment_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("experiment_from_json: ") + e.what());
  }
  try {
    const Preset preset = preset_from_string(doc.at("preset").get<std::string>());
    ScenarioConfig base;
    base.n = 500;
    base.P = 0.5;
    base.d = 5.0;
    base.dist = DistributionSpec::normal(1.0);
    if (doc.contains("base")) base = scenario_from_json(doc["base"].dump());
    std::vector<std::uint64_t> seeds{1};
    if (doc.contains("seeds")) seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
    std::filesystem::path out = doc.value("outputs", std::string("out"));
    ExperimentSpec spec = make_preset(preset, base, out, seeds);
    if (doc.contains("sweep")) {
      const json& sj = doc["sweep"];
      spec.sweep_param = sj.at("param").get<std::string>();
      spec.sweep_values = sj.at("values").get<std::vector<double>>();
    }
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment_from_json: ") + e.what());
  }
}

Preset preset_from_string(const std::string& name) {
  if (name == "example1") return Preset::example1;
  if (name == "example2") return Preset::example2;
  if (name == "spectrum") return Preset::spectrum;
  if (name == "rate-vs-n") return Preset::rate_vs_n;
  if (name == "rate-vs-P") return Preset::rate_vs_P;
  if (name == "rate-vs-d") return Preset::rate_vs_d;
  if (name == "mixture-sweep") return Preset::mixture_sweep;
  throw ConfigError("unknown preset '" + name + "'");
}

std::string to_string(Preset preset) {
  switch (preset) {
    case Preset::example1: return "example1";
    case Preset::example2: return "example2";
    case Preset::spectrum: return "spectrum";
    case Preset::rate_vs_n: return "rate-vs-n";
    case Preset::rate_vs_P: return "rate-vs-P";
    case Preset::rate_vs_d: return "rate-vs-d";
    case Preset::mixture_sweep: return "mixture-sweep";
  }
  throw ConfigError("to_string: invalid preset");
}

}  // namespace signet
