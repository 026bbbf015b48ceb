#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "signet/errors.hpp"
#include "signet/lab.hpp"
#include "signet/netgen.hpp"
#include "signet/spectral.hpp"

using namespace signet;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("signet_lab_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// CSV lines with the trailing wall-clock field stripped, so runs can be
// compared for content while timing varies.
std::vector<std::string> csv_without_timing(const fs::path& file) {
  std::istringstream in(slurp(file));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.rfind(',');
    REQUIRE(cut != std::string::npos);
    lines.push_back(line.substr(0, cut));
  }
  return lines;
}

ScenarioConfig small_base(int n) {
  ScenarioConfig cfg;
  cfg.n = n;
  cfg.P = 0.5;
  cfg.d = 5.0;
  cfg.dist = DistributionSpec::normal(1.0);
  return cfg;
}

}  // namespace

TEST_CASE("triangle enumeration matches an independent sign-product count") {
  // All-trust triangles are always balanced; all-mistrust and any one-sided
  // pair never are.
  CHECK(enumerate_triangle_balance(1.0, 0.0, 0.0) == 0.0);
  CHECK(enumerate_triangle_balance(0.0, 1.0, 0.0) == 1.0);
  CHECK(enumerate_triangle_balance(0.0, 0.0, 1.0) == 1.0);

  // Independent oracle: a triangle is balanced iff no pair is one-sided and
  // the number of mutual-mistrust pairs is even.
  const auto oracle = [](double ppp, double pmm, double ppm) {
    const double probs[3] = {ppp, pmm, ppm};
    double unbalanced = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          const double w = probs[a] * probs[b] * probs[c];
          const int mm = (a == 1) + (b == 1) + (c == 1);
          const bool onesided = a == 2 || b == 2 || c == 2;
          if (onesided || mm % 2 == 1) unbalanced += w;
        }
    return unbalanced;
  };
  CHECK(enumerate_triangle_balance(0.25, 0.25, 0.5) ==
        doctest::Approx(oracle(0.25, 0.25, 0.5)).epsilon(1e-14));
  CHECK(enumerate_triangle_balance(0.25, 0.25, 0.5) == doctest::Approx(0.9375));
  CHECK(enumerate_triangle_balance(0.2, 0.3, 0.5) ==
        doctest::Approx(oracle(0.2, 0.3, 0.5)).epsilon(1e-14));
  CHECK(enumerate_triangle_balance(0.6, 0.4, 0.0) ==
        doctest::Approx(oracle(0.6, 0.4, 0.0)).epsilon(1e-14));

  CHECK_THROWS_AS(enumerate_triangle_balance(0.5, 0.5, 0.1), ConfigError);
  CHECK_THROWS_AS(enumerate_triangle_balance(-0.1, 0.6, 0.5), ConfigError);
  CHECK_THROWS_AS(enumerate_triangle_balance(2.0, -1.0, 0.0), ConfigError);
}

TEST_CASE("CSV export writes the documented schema") {
  const fs::path dir = fresh_dir("csv");
  fs::create_directories(dir);

  export_csv({}, dir / "empty.csv");
  CHECK(slurp(dir / "empty.csv") ==
        "scenario,param,value,seed,r_theory,r_spectral,r_dynamics,"
        "modulus_theory,modulus_spectral,regime,wall_ms\n");

  SweepRecord rec;
  rec.scenario = "pp";
  rec.param = "n";
  rec.value = 0.3;
  rec.seed = 7;
  rec.r_theory = 0.25;
  rec.r_spectral = std::numeric_limits<double>::infinity();
  rec.r_dynamics = 1.5;
  rec.modulus_theory = 0.9;
  rec.modulus_spectral = 0.875;
  rec.regime = "bulk";
  rec.wall_ms = 12.7;  // rounded to whole milliseconds on output
  export_csv({rec}, dir / "one.csv");
  std::istringstream in(slurp(dir / "one.csv"));
  std::string header, line;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, line));
  CHECK(line == "pp,n,0.3,7,0.25,inf,1.5,0.9,0.875,bulk,13");

  CHECK_THROWS_AS(export_csv({rec}, "/nonexistent_dir_zz/records.csv"), ConfigError);
}

TEST_CASE("spectrum JSON lists eigenvalues in a deterministic order") {
  const fs::path dir = fresh_dir("json");
  fs::create_directories(dir);

  Spectrum sp;
  sp.eigenvalues = {{0.3, 0.4}, {0.5, 0.0}, {-0.8, 0.0}, {0.3, -0.4}};
  sp.moduli_sorted = {0.8, 0.5, 0.5, 0.5};

  SUBCASE("bare spectrum") {
    export_spectrum_json(sp, std::nullopt, std::nullopt, std::nullopt, dir / "s.json");
    const json doc = json::parse(slurp(dir / "s.json"));
    REQUIRE(doc.at("eigenvalues").size() == 4);
    // Modulus-descending, ties broken by real then imaginary part.
    CHECK(doc["eigenvalues"][0][0].get<double>() == doctest::Approx(-0.8));
    CHECK(doc["eigenvalues"][1][0].get<double>() == doctest::Approx(0.5));
    CHECK(doc["eigenvalues"][2][1].get<double>() == doctest::Approx(0.4));
    CHECK(doc["eigenvalues"][3][1].get<double>() == doctest::Approx(-0.4));
    CHECK(doc.at("outlier").is_null());
    CHECK(!doc.contains("circle"));
    CHECK(!doc.contains("ellipse"));
  }

  SUBCASE("with predicted geometry") {
    CirclePrediction circle;
    circle.center_x = 0.01;
    circle.radius = 0.4;
    EllipsePrediction ell;
    ell.center_x = -0.02;
    ell.a = 0.5;
    ell.b = 0.3;
    export_spectrum_json(sp, circle, ell, -0.95, dir / "g.json");
    const json doc = json::parse(slurp(dir / "g.json"));
    CHECK(doc.at("circle").at("radius").get<double>() == doctest::Approx(0.4));
    CHECK(doc.at("ellipse").at("a").get<double>() == doctest::Approx(0.5));
    CHECK(doc.at("ellipse").at("center_x").get<double>() == doctest::Approx(-0.02));
    CHECK(doc.at("outlier").get<double>() == doctest::Approx(-0.95));
  }
}

TEST_CASE("four-node showcase run matches the golden CSV outside timing") {
  const fs::path dir = fresh_dir("example1");
  ExperimentSpec spec = make_preset(Preset::example1, ScenarioConfig{}, dir, {1});
  const auto records = run_experiment(spec);
  REQUIRE(records.size() == 3);
  for (std::size_t m = 0; m < 3; ++m) {
    CHECK(records[m].scenario == "example1_W" + std::to_string(m + 1));
    const fs::path jf = dir / ("spectrum_example1_W" + std::to_string(m + 1) + ".json");
    REQUIRE(fs::exists(jf));
    CHECK(json::parse(slurp(jf)).at("eigenvalues").size() == 4);
  }

  const fs::path golden = fs::path(TEST_DATA_DIR) / "example1_golden.csv";
  REQUIRE_MESSAGE(fs::exists(golden),
                  "regenerate with: signet reproduce example1 --out <dir> "
                  "and copy records.csv here");
  CHECK(csv_without_timing(dir / "records.csv") == csv_without_timing(golden));
}

TEST_CASE("triangle showcase records the enumerated disagreement probability") {
  const fs::path dir = fresh_dir("example2");
  ExperimentSpec spec = make_preset(Preset::example2, ScenarioConfig{}, dir, {1});
  const auto records = run_experiment(spec);
  REQUIRE(records.size() == 1);
  CHECK(records[0].scenario == "example2_triangle");
  CHECK(records[0].value == doctest::Approx(0.9375).epsilon(1e-14));

  const json doc = json::parse(slurp(dir / "example2.json"));
  CHECK(doc.at("enumerated").get<double>() == doctest::Approx(0.9375));
  CHECK(doc.at("claimed").get<double>() == doctest::Approx(0.8));
}

TEST_CASE("scenario configs round-trip through JSON") {
  ScenarioConfig cfg;
  cfg.n = 123;
  cfg.P = 0.35;
  cfg.d = 7.5;
  cfg.dist = DistributionSpec::custom({-1.0, 0.25, 2.0});
  cfg.proportions = Proportions{0.1, 0.2, 0.3, 0.15, 0.25};
  cfg.seed = 42;

  const ScenarioConfig back = scenario_from_json(scenario_to_json(cfg));
  CHECK(back.n == cfg.n);
  CHECK(back.P == cfg.P);
  CHECK(back.d == cfg.d);
  CHECK(back.seed == cfg.seed);
  REQUIRE(back.dist.family == DistFamily::custom_symmetric);
  CHECK(back.dist.sample_table == cfg.dist.sample_table);
  REQUIRE(bool(back.proportions));
  CHECK(back.proportions->pp == cfg.proportions->pp);
  CHECK(back.proportions->m0 == cfg.proportions->m0);

  ScenarioConfig rnd = small_base(200);
  rnd.seed = 9;
  const ScenarioConfig rnd_back = scenario_from_json(scenario_to_json(rnd));
  CHECK(!rnd_back.proportions);
  CHECK(rnd_back.dist.family == DistFamily::normal);
  CHECK(rnd_back.dist.sigma == 1.0);

  CHECK_THROWS_AS(scenario_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json("{}"), ConfigError);  // missing n/P/d
  CHECK_THROWS_AS(scenario_from_json(R"({"n":10,"P":0.5,"d":5,"dist":{"family":"cauchy"}})"),
                  ConfigError);
}

TEST_CASE("experiment specs parse from JSON with preset defaults") {
  const std::string text = R"({
    "preset": "rate-vs-n",
    "seeds": [3, 4],
    "outputs": "/tmp/signet_lab_from_json",
    "base": {"n": 500, "P": 0.5, "d": 5,
             "proportions": {"mm": 1.0}}
  })";
  const ExperimentSpec spec = experiment_from_json(text);
  CHECK(spec.preset == Preset::rate_vs_n);
  CHECK(spec.sweep_param == "n");
  CHECK(spec.sweep_values.size() == 30);  // typed grid: 50..1500 step 50
  CHECK(spec.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(spec.out_dir == fs::path("/tmp/signet_lab_from_json"));
  REQUIRE(bool(spec.base.proportions));
  CHECK(spec.base.proportions->mm == 1.0);

  const ExperimentSpec override_spec = experiment_from_json(R"({
    "preset": "rate-vs-n",
    "sweep": {"param": "d", "values": [10, 20]}
  })");
  CHECK(override_spec.sweep_param == "d");
  CHECK(override_spec.sweep_values == std::vector<double>{10.0, 20.0});
  CHECK(override_spec.seeds == std::vector<std::uint64_t>{1});
  CHECK(override_spec.base.n == 500);  // default base

  CHECK_THROWS_AS(experiment_from_json("{}"), ConfigError);          // no preset
  CHECK_THROWS_AS(experiment_from_json(R"({"preset":"bogus"})"), ConfigError);
  CHECK_THROWS_AS(experiment_from_json("[1,2"), ConfigError);        // parse error
}

TEST_CASE("preset grids cover the documented ranges") {
  ScenarioConfig random_base = small_base(500);
  ScenarioConfig typed_base = random_base;
  typed_base.proportions = Proportions{0.0, 1.0, 0.0, 0.0, 0.0};
  const fs::path dir = "unused";

  const auto vn_r = make_preset(Preset::rate_vs_n, random_base, dir, {1});
  CHECK(vn_r.sweep_param == "n");
  REQUIRE(vn_r.sweep_values.size() == 15);
  CHECK(vn_r.sweep_values.front() == 100.0);
  CHECK(vn_r.sweep_values.back() == 1500.0);
  const auto vn_t = make_preset(Preset::rate_vs_n, typed_base, dir, {1});
  REQUIRE(vn_t.sweep_values.size() == 30);
  CHECK(vn_t.sweep_values.front() == 50.0);
  CHECK(vn_t.sweep_values.back() == 1500.0);

  const auto vP_r = make_preset(Preset::rate_vs_P, random_base, dir, {1});
  REQUIRE(vP_r.sweep_values.size() == 17);
  CHECK(vP_r.sweep_values.front() == 0.1);
  CHECK(vP_r.sweep_values.back() == 0.9);
  const auto vP_t = make_preset(Preset::rate_vs_P, typed_base, dir, {1});
  REQUIRE(vP_t.sweep_values.size() == 20);
  CHECK(vP_t.sweep_values.front() == 0.05);
  CHECK(vP_t.sweep_values.back() == 1.0);

  const auto vd_r = make_preset(Preset::rate_vs_d, random_base, dir, {1});
  REQUIRE(vd_r.sweep_values.size() == 10);
  CHECK(vd_r.sweep_values.front() == 10.0);
  CHECK(vd_r.sweep_values.back() == 100.0);
  const auto vd_t = make_preset(Preset::rate_vs_d, typed_base, dir, {1});
  REQUIRE(vd_t.sweep_values.size() == 12);
  CHECK(vd_t.sweep_values.front() == 3.0);
  CHECK(vd_t.sweep_values.back() == 47.0);

  const auto mix = make_preset(Preset::mixture_sweep, random_base, dir, {1});
  CHECK(mix.sweep_param == "P_pp");
  REQUIRE(mix.sweep_values.size() == 11);
  CHECK(mix.sweep_values.front() == 0.0);
  CHECK(mix.sweep_values.back() == 1.0);

  const auto spectrum = make_preset(Preset::spectrum, random_base, dir, {1});
  CHECK(spectrum.sweep_param.empty());
  CHECK(spectrum.sweep_values.empty());

  for (Preset p : {Preset::example1, Preset::example2, Preset::spectrum,
                   Preset::rate_vs_n, Preset::rate_vs_P, Preset::rate_vs_d,
                   Preset::mixture_sweep})
    CHECK(preset_from_string(to_string(p)) == p);
  CHECK_THROWS_AS(preset_from_string("rate_vs_n"), ConfigError);
}

TEST_CASE("experiment spec validation rejects malformed sweeps") {
  ExperimentSpec spec = make_preset(Preset::spectrum, small_base(60), "unused", {1});
  CHECK_NOTHROW(spec.validate());

  ExperimentSpec no_seeds = spec;
  no_seeds.seeds.clear();
  CHECK_THROWS_AS(no_seeds.validate(), ConfigError);

  ExperimentSpec flat = spec;
  flat.sweep_param = "P";
  flat.sweep_values = {0.2, 0.2};
  CHECK_THROWS_AS(flat.validate(), ConfigError);

  ExperimentSpec empty_sweep = spec;
  empty_sweep.sweep_param = "P";
  CHECK_THROWS_AS(empty_sweep.validate(), ConfigError);

  ExperimentSpec bad_mix = spec;
  bad_mix.sweep_param = "P_pp";
  bad_mix.sweep_values = {0.5, 1.5};
  CHECK_THROWS_AS(bad_mix.validate(), ConfigError);

  ExperimentSpec bad_base = spec;
  bad_base.base.n = 1;
  CHECK_THROWS_AS(bad_base.validate(), ConfigError);

  // An unknown sweep parameter passes static validation but every cell fails
  // at runtime; failures are recorded rather than aborting the run.
  ExperimentSpec bogus = spec;
  bogus.sweep_param = "bogus";
  bogus.sweep_values = {1.0, 2.0};
  bogus.out_dir = fresh_dir("bogus_param");
  const auto records = run_experiment(bogus);
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    CHECK(r.scenario == "invalid");
    CHECK(r.regime.rfind("error:", 0) == 0);
    CHECK(std::isinf(r.r_theory));
  }
}

TEST_CASE("spectrum runs are reproducible and schedule-independent") {
  ScenarioConfig base = small_base(60);
  const fs::path dir_a = fresh_dir("spectrum_a");
  ExperimentSpec spec = make_preset(Preset::spectrum, base, dir_a, {1, 2});
  const auto records = run_experiment(spec);
  REQUIRE(records.size() == 2);

  for (const auto& rec : records) {
    CHECK(rec.scenario == "random");
    CHECK(rec.param == "none");
    CHECK(rec.value == 0.0);
    CHECK(rec.regime == "bulk");
    CHECK(rec.r_theory > 0.0);
    CHECK(std::isfinite(rec.r_spectral));
    CHECK(rec.r_dynamics > 0.0);
    // At this size the predicted bulk modulus is only asymptotic; demand
    // agreement in the right ballpark, not to experiment tolerances.
    CHECK(rec.modulus_spectral == doctest::Approx(rec.modulus_theory).epsilon(0.3));
  }
  CHECK(records[0].seed == 1);
  CHECK(records[1].seed == 2);

  for (std::uint64_t seed : {1, 2}) {
    const fs::path jf = dir_a / ("spectrum_random_seed" + std::to_string(seed) + ".json");
    REQUIRE(fs::exists(jf));
    const json doc = json::parse(slurp(jf));
    CHECK(doc.at("eigenvalues").size() == 60);
    CHECK(doc.contains("circle"));
    CHECK(doc.at("outlier").is_null());
  }

  // Rerun single-threaded: identical records.csv apart from wall-clock times.
  const int old_threads = omp_get_max_threads();
  omp_set_num_threads(1);
  const fs::path dir_b = fresh_dir("spectrum_b");
  ExperimentSpec serial_spec = spec;
  serial_spec.out_dir = dir_b;
  run_experiment(serial_spec);
  omp_set_num_threads(old_threads);
  CHECK(csv_without_timing(dir_a / "records.csv") ==
        csv_without_timing(dir_b / "records.csv"));
}

TEST_CASE("mixture sweep cells carry readable scenario ids") {
  ScenarioConfig base = small_base(80);
  ExperimentSpec spec =
      make_preset(Preset::mixture_sweep, base, fresh_dir("mixture"), {1});
  spec.sweep_values = {0.0, 0.3, 1.0};
  const auto records = run_experiment(spec);
  REQUIRE(records.size() == 3);

  CHECK(records[0].scenario == "mm");
  CHECK(records[1].scenario == "mix_pp=0.3_mm=0.7");
  CHECK(records[2].scenario == "pp");
  for (const auto& r : records) CHECK(r.param == "P_pp");

  // Endpoints sit in the outlier regime; the all-trust end pins a unit
  // eigenvalue, which shows up as a zero predicted rate.
  CHECK(records[0].regime == "outlier");
  CHECK(records[2].regime == "outlier");
  CHECK(records[2].r_theory == 0.0);
  CHECK(records[2].modulus_theory == 1.0);

  ExperimentSpec unilateral = spec;
  unilateral.sweep_param = "P_mm";
  unilateral.sweep_values = {0.4};
  unilateral.out_dir = fresh_dir("mixture_m0");
  const auto urec = run_experiment(unilateral);
  REQUIRE(urec.size() == 1);
  CHECK(urec[0].scenario == "mix_mm=0.4_m0=0.6");
}
