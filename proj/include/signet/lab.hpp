#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "signet/dynamics.hpp"
#include "signet/netgen.hpp"
#include "signet/spectral.hpp"
#include "signet/theory.hpp"

namespace signet {

enum class Preset {
  example1,       // three hardcoded 4x4 influence matrices
  example2,       // triangle balance enumeration
  spectrum,       // eigenvalue clouds vs predicted circle/ellipse
  rate_vs_n,
  rate_vs_P,
  rate_vs_d,
  mixture_sweep,  // trust/mistrust and mistrust/unilateral families
};

struct ExperimentSpec {
  Preset preset = Preset::spectrum;
  ScenarioConfig base;
  std::string sweep_param;           // "n" | "P" | "d" | "P_pp" | "P_mm" | ""
  std::vector<double> sweep_values;  // strictly increasing
  std::vector<std::uint64_t> seeds;  // nonempty
  std::filesystem::path out_dir;

  void validate() const;
};

struct SweepRecord {
  std::string scenario;
  std::string param;
  double value = 0.0;
  std::uint64_t seed = 0;
  double r_theory = 0.0;
  double r_spectral = 0.0;
  double r_dynamics = 0.0;
  double modulus_theory = 0.0;
  double modulus_spectral = 0.0;
  std::string regime;
  double wall_ms = 0.0;
};

// Runs every (value, seed) cell: generate, build W, predict, eigensolve,
// simulate. Writes <out_dir>/records.csv plus per-cell spectrum JSON for the
// spectrum/example presets. Cells run in parallel into preassigned slots, so
// the record order (and the CSV bytes, wall_ms aside) is schedule-independent.
std::vector<SweepRecord> run_experiment(const ExperimentSpec& spec);

// Exact weighted enumeration of the 27 type assignments of a 3-clique;
// returns the probability that the triangle is structurally unbalanced.
// probs = {+/+, -/-, +/-} weights summing to 1.
double enumerate_triangle_balance(double p_pp, double p_mm, double p_pm);

void export_csv(const std::vector<SweepRecord>& records,
                const std::filesystem::path& file);

// {"eigenvalues":[[re,im],...],
//  "circle":{"center_x":..,"radius":..} | "ellipse":{"center_x":..,"a":..,"b":..},
//  "outlier": re | null}
void export_spectrum_json(const Spectrum& spec,
                          const std::optional<CirclePrediction>& circle,
                          const std::optional<EllipsePrediction>& ellipse,
                          const std::optional<double>& outlier,
                          const std::filesystem::path& file);

// Preset grids mirror the source tables: n = 100:100:1500 (random mixture)
// or 50:50:1500 (five types), P = 0.1:0.05:0.9 or 0.05:0.05:1,
// d = 10:10:100 or 3:4:47, all at base n=500, P=0.5, d=5, sigma=1.
ExperimentSpec make_preset(Preset preset, const ScenarioConfig& base,
                           const std::filesystem::path& out_dir,
                           const std::vector<std::uint64_t>& seeds);

// JSON round-trip for configs; field names mirror the structs
// (n, P, d, dist{family,sigma,sample_table}, proportions{pp,mm,pm,p0,m0} or
// absent for the random mixture, seed). Throws ConfigError on malformed
// documents.
ScenarioConfig scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioConfig& cfg);

// Experiment documents mirror ExperimentSpec: {"preset":..., "base":{...},
// "sweep":{"param":...,"values":[...]}, "seeds":[...], "outputs":...}.
// Absent fields fall back to the preset's defaults via make_preset.
ExperimentSpec experiment_from_json(const std::string& text);

Preset preset_from_string(const std::string& name);
std::string to_string(Preset preset);

}  // namespace signet
