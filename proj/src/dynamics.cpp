#include "signet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "signet/errors.hpp"
#include "signet/rng.hpp"

namespace signet {

Trajectory simulate(const InfluenceMatrix& W, const Eigen::VectorXd& X0,
                    int k_max, double step_tol) {
  if (X0.size() != W.n) throw ConfigError("simulate: X0 size does not match W");
  if (X0.cwiseAbs().maxCoeff() > 1.0 + 1e-12)
    throw ConfigError("simulate: X0 outside [-1,1]^n");

  Trajectory traj;
  traj.states.reserve(256);
  traj.states.push_back(X0);
  traj.stop_reason = Trajectory::StopReason::max_iters;

  Eigen::VectorXd x = X0;
  for (int k = 0; k < k_max; ++k) {
    Eigen::VectorXd xn = W.W * x;
    if (!opinion_bound_check(xn))
      throw NumericError("simulate: opinion bound violated at step " + std::to_string(k + 1));
    const double step = (xn - x).cwiseAbs().maxCoeff();
    traj.states.push_back(xn);
    x.swap(xn);
    if (step < step_tol) {
      // Converged at k: X(k) is already a fixed point to within step_tol
      // (k = 0 when X0 itself is stationary).
      traj.k_stop = k;
      traj.stop_reason = Trajectory::StopReason::converged;
      return traj;
    }
  }
  traj.k_stop = k_max;
  return traj;
}

LimitClassification classify_limit(const Trajectory& traj, double tol) {
  if (traj.stop_reason != Trajectory::StopReason::converged)
    throw NumericError("classify_limit: trajectory did not converge");
  const Eigen::VectorXd& fin = traj.states.back();
  const int n = static_cast<int>(fin.size());

  // Averaged tail as the reported limit estimate. Only trailing states that
  // already agree with the final one are averaged: for trajectories that
  // converge in a couple of steps, a blind 10-state average would fold the
  // transient into the limit.
  const int avail = static_cast<int>(traj.states.size());
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(n);
  int m = 0;
  for (int j = std::max(0, avail - 10); j < avail; ++j) {
    const Eigen::VectorXd& s = traj.states[static_cast<std::size_t>(j)];
    if ((s - fin).cwiseAbs().maxCoeff() >= tol) continue;
    avg += s;
    ++m;
  }
  avg /= static_cast<double>(m);  // m >= 1: fin always qualifies

  LimitClassification cls;
  if (fin.cwiseAbs().maxCoeff() < tol) {
    cls.kind = LimitKind::stable_zero;
    cls.limit = Eigen::VectorXd::Zero(n);
    return cls;
  }
  const double spread = fin.maxCoeff() - fin.minCoeff();
  if (spread < tol) {
    cls.kind = LimitKind::consensus;
    cls.alpha = fin.mean();
    cls.limit = avg;
    return cls;
  }
  const Eigen::VectorXd mag = fin.cwiseAbs();
  const double alpha = mag.mean();
  const bool equal_mag = (mag.array() - alpha).abs().maxCoeff() < tol;
  const bool both_signs = fin.minCoeff() < -tol && fin.maxCoeff() > tol;
  if (equal_mag && both_signs && alpha > tol) {
    cls.kind = LimitKind::bipartite_consensus;
    cls.alpha = alpha;
    cls.limit = avg;
    return cls;
  }
  cls.kind = LimitKind::general_convergence;
  cls.limit = avg;
  return cls;
}

Eigen::VectorXd rate_reference(const Trajectory& traj, const LimitClassification& cls) {
  if (cls.kind == LimitKind::stable_zero)
    return Eigen::VectorXd::Zero(traj.states.back().size());
  return traj.states.back();
}

double empirical_rate(const Trajectory& traj, const Eigen::VectorXd& ref,
                      int window, double err_floor) {
  const int count = static_cast<int>(traj.states.size());
  if (count < 2) throw ConfigError("empirical_rate: trajectory too short");
  if (ref.size() != traj.states.front().size())
    throw ConfigError("empirical_rate: reference size mismatch");

  std::vector<double> err(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    err[static_cast<std::size_t>(k)] = (traj.states[static_cast<std::size_t>(k)] - ref).norm();

  const double last_step =
      (traj.states[static_cast<std::size_t>(count - 1)] -
       traj.states[static_cast<std::size_t>(count - 2)])
          .norm();
  const double ref_err = (traj.states.back() - ref).norm();
  const double floor_eff = std::max({err_floor, 3.0 * last_step, 3.0 * ref_err});
  const double ceil_eff = 0.1 * err[0];

  std::vector<int> eligible;
  for (int k = 0; k < count; ++k) {
    const double e = err[static_cast<std::size_t>(k)];
    if (e <= ceil_eff && e >= floor_eff) eligible.push_back(k);
  }
  if (static_cast<int>(eligible.size()) < 2)
    return std::numeric_limits<double>::infinity();

  const int take = std::min(window, static_cast<int>(eligible.size()));
  const int first = static_cast<int>(eligible.size()) - take;

  // Least squares for ln err = a*k + b over the retained points.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = first; i < static_cast<int>(eligible.size()); ++i) {
    const double x = static_cast<double>(eligible[static_cast<std::size_t>(i)]);
    const double y = std::log(err[static_cast<std::size_t>(eligible[static_cast<std::size_t>(i)])]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(take);
  const double denom = nn * sxx - sx * sx;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  const double slope = (nn * sxy - sx * sy) / denom;
  return -slope;
}

Eigen::VectorXd random_initial_state(int n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("random_initial_state: n must be positive");
  CounterRng rng(seed, StreamDomain::initial_state, 0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.uniform(static_cast<std::uint64_t>(i), -1.0, 1.0);
  return x;
}

}  // namespace signet
