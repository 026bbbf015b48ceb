#pragma once

#include <Eigen/Dense>
#include <vector>

#include "signet/influence.hpp"

namespace signet {

struct Trajectory {
  enum class StopReason { converged, max_iters };
  std::vector<Eigen::VectorXd> states;  // X(0), X(1), ..., X(k_stop)
  int k_stop = 0;
  StopReason stop_reason = StopReason::converged;
};

enum class LimitKind { consensus, bipartite_consensus, stable_zero, general_convergence };

struct LimitClassification {
  LimitKind kind = LimitKind::general_convergence;
  double alpha = 0.0;  // common magnitude for bipartite consensus
  Eigen::VectorXd limit;
};

// Iterate X(k+1) = W X(k) until the max-norm step difference drops below
// step_tol or k_max is reached. Every step asserts the [-1,1] bound; a
// violation (numerical blow-up) throws NumericError naming the step.
Trajectory simulate(const InfluenceMatrix& W, const Eigen::VectorXd& X0,
                    int k_max = 20000, double step_tol = 1e-10);

// Classifies from the final converged state; the reported limit vector
// averages those of the last 10 states that agree with the final one within
// tol, which suppresses rounding noise on semisimple unit clusters without
// folding the transient into the limit of a fast run. Order: stable-zero
// before consensus -- the all-zero limit satisfies both and stability is
// the sharper statement. Throws NumericError on an unconverged trajectory.
LimitClassification classify_limit(const Trajectory& traj, double tol = 1e-6);

// Reference vector for rate fitting: the zero vector for stable-zero
// systems (the exact limit), otherwise the final iterate, whose residual
// (~step_tol) is far below that of any averaged estimate and so does not
// contaminate the error tail for fast-converging systems.
Eigen::VectorXd rate_reference(const Trajectory& traj, const LimitClassification& cls);

// Least-squares slope of ln ||X(k) - ref||_2, negated, over the last
// `window` eligible steps. Eligible: error below 10% of its initial value
// (transient skipped) and above max(err_floor, 3x the final step size,
// 3x ||ref - X(k_stop)||) -- the tail where the reference's own error
// dominates is skipped. Returns +inf if fewer than two eligible points
// exist (convergence faster than the floor can resolve).
double empirical_rate(const Trajectory& traj, const Eigen::VectorXd& ref,
                      int window = 50, double err_floor = 1e-7);

// Deterministic i.i.d. uniform [-1,1] initial opinions for a seed.
Eigen::VectorXd random_initial_state(int n, std::uint64_t seed);

}  // namespace signet
