#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "signet/errors.hpp"
#include "signet/influence.hpp"
#include "signet/netgen.hpp"

using namespace signet;

namespace {

SignedNetwork sample_net(int n, double P, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.n = n;
  cfg.P = P;
  cfg.d = 5.0;
  cfg.dist = DistributionSpec::normal(1.0);
  cfg.seed = seed;
  return gen_random_mixture(cfg);
}

}  // namespace

TEST_CASE("influence matrix matches the hand-computed 2x2 normalization") {
  SignedNetwork net;
  net.n = 2;
  net.S = Eigen::MatrixXd::Zero(2, 2);
  net.S(0, 1) = 1.0;
  net.S(1, 0) = -2.0;
  const InfluenceMatrix W = build_influence(net, 3.0);
  CHECK(W.W(0, 0) == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
  CHECK(W.W(0, 1) == doctest::Approx(1.0 / 4.0).epsilon(1e-15));
  CHECK(W.W(1, 0) == doctest::Approx(-2.0 / 5.0).epsilon(1e-15));
  CHECK(W.W(1, 1) == doctest::Approx(3.0 / 5.0).epsilon(1e-15));
  CHECK(W.row_abs_sums[0] == 1.0);
  CHECK(W.row_abs_sums[1] == 2.0);
}

TEST_CASE("absolute row sums of W are exactly one") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const SignedNetwork net = sample_net(300, 0.5, seed);
    const InfluenceMatrix W = build_influence(net, 5.0);
    const Eigen::VectorXd sums = W.W.cwiseAbs().rowwise().sum();
    CHECK((sums.array() - 1.0).abs().maxCoeff() <= 1e-12);
  }
  // Also with tiny d, where the diagonal no longer dominates.
  const SignedNetwork net = sample_net(200, 0.8, 7);
  const InfluenceMatrix W = build_influence(net, 0.01);
  CHECK((W.W.cwiseAbs().rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("diagonal is the self-confidence share and signs copy S") {
  const SignedNetwork net = sample_net(150, 0.5, 11);
  const double d = 4.0;
  const InfluenceMatrix W = build_influence(net, d);
  for (int i = 0; i < net.n; ++i) {
    CHECK(W.W(i, i) == doctest::Approx(d / (d + W.row_abs_sums[i])).epsilon(1e-15));
    for (int j = 0; j < net.n; ++j)
      if (i != j) {
        if (net.S(i, j) == 0.0)
          CHECK(W.W(i, j) == 0.0);
        else
          CHECK(W.W(i, j) * net.S(i, j) > 0.0);
      }
  }
}

TEST_CASE("parallel and serial influence builders agree bitwise") {
  const SignedNetwork net = sample_net(400, 0.6, 13);
  const InfluenceMatrix a = build_influence(net, 5.0);
  const InfluenceMatrix b = build_influence_serial(net, 5.0);
  CHECK((a.W.array() == b.W.array()).all());
  CHECK((a.row_abs_sums.array() == b.row_abs_sums.array()).all());
}

TEST_CASE("nonpositive d is rejected") {
  const SignedNetwork net = sample_net(20, 0.5, 1);
  CHECK_THROWS_AS(build_influence(net, 0.0), ConfigError);
  CHECK_THROWS_AS(build_influence(net, -1.0), ConfigError);
}

TEST_CASE("one application of W keeps opinions inside the box") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SignedNetwork net = sample_net(100, 0.5, 19);
  const InfluenceMatrix W = build_influence(net, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd x(100);
    for (int i = 0; i < 100; ++i) x[i] = u(gen);
    CHECK(opinion_bound_check(W, x));
  }
  Eigen::VectorXd outside(2);
  outside << 1.2, 0.0;
  CHECK(!opinion_bound_check(outside));
}
