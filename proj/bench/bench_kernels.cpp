// Timing harness for the parallel kernels against their serial reference
// twins. Also asserts bitwise-identical output, since the twins exist to
// guarantee the parallel versions change nothing but wall time.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "signet/influence.hpp"
#include "signet/netgen.hpp"

using namespace signet;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    const double t = ms_since(t0);
    if (t < best) best = t;
  }
  return best;
}

ScenarioConfig make_cfg(int n, bool typed) {
  ScenarioConfig cfg;
  cfg.n = n;
  cfg.P = 0.5;
  cfg.d = 5.0;
  cfg.dist = DistributionSpec::normal(1.0);
  cfg.seed = 42;
  if (typed) cfg.proportions = Proportions{0.2, 0.2, 0.2, 0.2, 0.2};
  return cfg;
}

bool same_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  return A.rows() == B.rows() && A.cols() == B.cols() && (A.array() == B.array()).all();
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("%-28s %8s %12s %12s %8s\n", "kernel", "n", "serial_ms", "parallel_ms",
              "speedup");

  for (int n : {500, 1500, 3000}) {
    const ScenarioConfig rnd = make_cfg(n, false);
    SignedNetwork a, b;
    const double ts = best_of(reps, [&] { a = gen_random_mixture_serial(rnd); });
    const double tp = best_of(reps, [&] { b = gen_random_mixture(rnd); });
    if (!same_matrix(a.S, b.S)) {
      std::fprintf(stderr, "FATAL: random-mixture twins disagree at n=%d\n", n);
      return 1;
    }
    std::printf("%-28s %8d %12.2f %12.2f %7.2fx\n", "gen_random_mixture", n, ts, tp,
                ts / tp);
  }

  for (int n : {500, 1500, 3000}) {
    const ScenarioConfig typed = make_cfg(n, true);
    SignedNetwork a, b;
    const double ts = best_of(reps, [&] { a = gen_complex_mixture_serial(typed); });
    const double tp = best_of(reps, [&] { b = gen_complex_mixture(typed); });
    if (!same_matrix(a.S, b.S)) {
      std::fprintf(stderr, "FATAL: complex-mixture twins disagree at n=%d\n", n);
      return 1;
    }
    std::printf("%-28s %8d %12.2f %12.2f %7.2fx\n", "gen_complex_mixture", n, ts, tp,
                ts / tp);
  }

  for (int n : {500, 1500, 3000}) {
    const SignedNetwork net = gen_random_mixture(make_cfg(n, false));
    InfluenceMatrix a, b;
    const double ts = best_of(reps, [&] { a = build_influence_serial(net, 5.0); });
    const double tp = best_of(reps, [&] { b = build_influence(net, 5.0); });
    if (!same_matrix(a.W, b.W)) {
      std::fprintf(stderr, "FATAL: influence twins disagree at n=%d\n", n);
      return 1;
    }
    std::printf("%-28s %8d %12.2f %12.2f %7.2fx\n", "build_influence", n, ts, tp,
                ts / tp);
  }

  std::printf("all parallel kernels bitwise-match their serial twins\n");
  return 0;
}
