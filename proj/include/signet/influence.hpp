#pragma once

#include <Eigen/Dense>

#include "signet/graph.hpp"

namespace signet {

// Row-normalized influence matrix:
//   W_ij = S_ij / (d + |S|_i)  (j != i),   W_ii = d / (d + |S|_i),
// where |S|_i is the i-th row sum of |S|. Rows of |W| sum to 1 exactly by
// the identity (d + |S|_i)/(d + |S|_i) = 1.
struct InfluenceMatrix {
  int n = 0;
  Eigen::MatrixXd W;
  Eigen::VectorXd row_abs_sums;  // |S|_i
  double d = 0.0;
};

InfluenceMatrix build_influence(const SignedNetwork& net, double d);
InfluenceMatrix build_influence_serial(const SignedNetwork& net, double d);

// True iff W*X stays inside [-1,1]^n; guaranteed by the row-sum identity
// whenever X is inside, used as a runtime assertion in dynamics. The vector
// overload checks an already-computed product without repeating the matvec.
bool opinion_bound_check(const InfluenceMatrix& W, const Eigen::VectorXd& X);
bool opinion_bound_check(const Eigen::VectorXd& WX);

}  // namespace signet
