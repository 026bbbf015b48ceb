#include "signet/influence.hpp"

#include <cmath>

#include "signet/errors.hpp"

namespace signet {

namespace {

InfluenceMatrix build(const SignedNetwork& net, double d, bool parallel) {
  net.validate();
  if (!(d > 0.0)) throw ConfigError("build_influence: d must be positive");
  InfluenceMatrix out;
  out.n = net.n;
  out.d = d;
  out.row_abs_sums = net.S.cwiseAbs().rowwise().sum();
  out.W.resize(net.n, net.n);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < net.n; ++i) {
      const double inv = 1.0 / (d + out.row_abs_sums[i]);
      for (int j = 0; j < net.n; ++j) out.W(i, j) = net.S(i, j) * inv;
      out.W(i, i) = d * inv;
    }
  } else {
    for (int i = 0; i < net.n; ++i) {
      const double inv = 1.0 / (d + out.row_abs_sums[i]);
      for (int j = 0; j < net.n; ++j) out.W(i, j) = net.S(i, j) * inv;
      out.W(i, i) = d * inv;
    }
  }
  return out;
}

}  // namespace

InfluenceMatrix build_influence(const SignedNetwork& net, double d) {
  return build(net, d, true);
}

InfluenceMatrix build_influence_serial(const SignedNetwork& net, double d) {
  return build(net, d, false);
}

bool opinion_bound_check(const InfluenceMatrix& W, const Eigen::VectorXd& X) {
  return opinion_bound_check(Eigen::VectorXd(W.W * X));
}

bool opinion_bound_check(const Eigen::VectorXd& WX) {
  for (int i = 0; i < WX.size(); ++i)
    if (!(std::abs(WX[i]) <= 1.0 + 1e-12)) return false;
  return true;
}

}  // namespace signet
