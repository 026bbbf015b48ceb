#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "signet/errors.hpp"
#include "signet/lab.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::uint64_t seed = 1;
  std::string seeds;  // comma-separated list
  std::string out = "out";
  int n = 500;
  double P = 0.5;
  double d = 5.0;
  double sigma = 1.0;
  std::string proportions;  // "pp,mm,pm,p0,m0"
};

void add_common(CLI::App* cmd, CommonOpts* o) {
  cmd->add_option("--config", o->config, "JSON config file (mirrors the API structs)");
  cmd->add_option("--seed", o->seed, "single RNG seed");
  cmd->add_option("--seeds", o->seeds, "comma-separated RNG seed list");
  cmd->add_option("--out", o->out, "output directory");
  cmd->add_option("--n", o->n, "number of individuals");
  cmd->add_option("--p", o->P, "pair interaction probability");
  cmd->add_option("--d", o->d, "self-confidence level");
  cmd->add_option("--sigma", o->sigma, "interaction strength std dev");
  cmd->add_option("--proportions", o->proportions,
                  "interaction-type proportions pp,mm,pm,p0,m0 (omit for the random mixture)");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw signet::ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint64_t> parse_seeds(const CommonOpts& o, bool sweep_default) {
  std::vector<std::uint64_t> seeds;
  if (!o.seeds.empty()) {
    std::stringstream ss(o.seeds);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        seeds.push_back(std::stoull(tok));
      } catch (const std::exception&) {
        throw signet::ConfigError("invalid seed list entry '" + tok + "'");
      }
    }
    if (seeds.empty()) throw signet::ConfigError("empty --seeds list");
    return seeds;
  }
  if (sweep_default) {
    for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
  } else {
    seeds.push_back(o.seed);
  }
  return seeds;
}

signet::ScenarioConfig scenario_from_opts(const CommonOpts& o) {
  if (!o.config.empty()) {
    signet::ScenarioConfig cfg = signet::scenario_from_json(slurp(o.config));
    return cfg;
  }
  signet::ScenarioConfig cfg;
  cfg.n = o.n;
  cfg.P = o.P;
  cfg.d = o.d;
  cfg.dist = signet::DistributionSpec::normal(o.sigma);
  cfg.seed = o.seed;
  if (!o.proportions.empty()) {
    std::stringstream ss(o.proportions);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) {
      try {
        vals.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw signet::ConfigError("invalid proportions entry '" + tok + "'");
      }
    }
    if (vals.size() != 5)
      throw signet::ConfigError("--proportions needs five values pp,mm,pm,p0,m0");
    cfg.proportions = signet::Proportions{vals[0], vals[1], vals[2], vals[3], vals[4]};
  }
  return cfg;
}

void print_records(const std::vector<signet::SweepRecord>& records,
                   const std::filesystem::path& out_dir) {
  std::cout << records.size() << " record(s) -> " << (out_dir / "records.csv").string()
            << "\n";
  for (const auto& r : records) {
    std::cout << "  " << r.scenario << " " << r.param << "=" << r.value
              << " seed=" << r.seed << " r_theory=" << r.r_theory
              << " r_spectral=" << r.r_spectral << " r_dynamics=" << r.r_dynamics
              << " regime=" << r.regime << "\n";
    if (records.size() > 12 && &r == &records[11]) {
      std::cout << "  ... (" << records.size() - 12 << " more in the CSV)\n";
      break;
    }
  }
}

int run(int argc, char** argv) {
  CLI::App app{"signet: convergence-rate laboratory for signed opinion networks"};
  app.require_subcommand(1);

  CommonOpts spectrum_o, rate_o, mixture_o, repro_o, check_o;
  std::string preset_name;

  CLI::App* c_spectrum =
      app.add_subcommand("spectrum", "eigenvalue cloud + predicted geometry for one scenario");
  add_common(c_spectrum, &spectrum_o);

  CLI::App* c_rate = app.add_subcommand(
      "rate-sweep", "convergence-rate sweep (rate-vs-n preset unless --config overrides)");
  add_common(c_rate, &rate_o);

  CLI::App* c_mix = app.add_subcommand(
      "mixture-sweep", "trust/mistrust and mistrust/unilateral mixture-proportion sweeps");
  add_common(c_mix, &mixture_o);

  CLI::App* c_repro = app.add_subcommand("reproduce", "run a named experiment preset");
  c_repro->add_option("preset", preset_name,
                      "example1|example2|spectrum|rate-vs-n|rate-vs-P|rate-vs-d|mixture-sweep")
      ->required();
  add_common(c_repro, &repro_o);

  CLI::App* c_check =
      app.add_subcommand("check-assumptions", "closed-form validity thresholds for a scenario");
  add_common(c_check, &check_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (c_spectrum->parsed()) {
    signet::ScenarioConfig base = scenario_from_opts(spectrum_o);
    signet::ExperimentSpec spec = signet::make_preset(
        signet::Preset::spectrum, base, spectrum_o.out, parse_seeds(spectrum_o, false));
    auto records = signet::run_experiment(spec);
    print_records(records, spec.out_dir);
  } else if (c_rate->parsed()) {
    signet::ExperimentSpec spec;
    if (!rate_o.config.empty()) {
      spec = signet::experiment_from_json(slurp(rate_o.config));
      if (!rate_o.seeds.empty()) spec.seeds = parse_seeds(rate_o, true);
    } else {
      spec = signet::make_preset(signet::Preset::rate_vs_n, scenario_from_opts(rate_o),
                                 rate_o.out, parse_seeds(rate_o, true));
    }
    auto records = signet::run_experiment(spec);
    print_records(records, spec.out_dir);
  } else if (c_mix->parsed()) {
    if (!mixture_o.config.empty()) {
      signet::ExperimentSpec spec = signet::experiment_from_json(slurp(mixture_o.config));
      auto records = signet::run_experiment(spec);
      print_records(records, spec.out_dir);
    } else {
      signet::ScenarioConfig base = scenario_from_opts(mixture_o);
      const auto seeds = parse_seeds(mixture_o, true);
      signet::ExperimentSpec pp_mm = signet::make_preset(
          signet::Preset::mixture_sweep, base, std::filesystem::path(mixture_o.out) / "pp_mm",
          seeds);
      auto rec1 = signet::run_experiment(pp_mm);
      print_records(rec1, pp_mm.out_dir);
      signet::ExperimentSpec mm_m0 = pp_mm;
      mm_m0.sweep_param = "P_mm";
      mm_m0.out_dir = std::filesystem::path(mixture_o.out) / "mm_m0";
      auto rec2 = signet::run_experiment(mm_m0);
      print_records(rec2, mm_m0.out_dir);
    }
  } else if (c_repro->parsed()) {
    const signet::Preset preset = signet::preset_from_string(preset_name);
    signet::ExperimentSpec spec = signet::make_preset(
        preset, scenario_from_opts(repro_o), repro_o.out, parse_seeds(repro_o, true));
    auto records = signet::run_experiment(spec);
    print_records(records, spec.out_dir);
  } else if (c_check->parsed()) {
    signet::ScenarioConfig cfg = scenario_from_opts(check_o);
    cfg.validate();
    signet::AssumptionReport rep = signet::check_assumptions(cfg);
    std::cout << "scenario " << cfg.scenario_id() << " (n=" << cfg.n << " P=" << cfg.P
              << " d=" << cfg.d << " sigma=" << cfg.dist.sigma << ")\n"
              << "  M1 = " << rep.M1 << "\n"
              << "  M2 = " << rep.M2 << "\n"
              << "  d_lower = max(M1, M2) = " << rep.d_lower << "\n"
              << "  trust/mistrust coexistence: " << (rep.assumption1_ok ? "yes" : "no")
              << "\n"
              << "  d > d_lower: " << (rep.assumption2_ok ? "yes" : "no") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const signet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const signet::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
