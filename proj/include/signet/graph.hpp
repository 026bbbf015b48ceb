#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace signet {

struct NetMeta {
  std::uint64_t seed = 0;
  std::string scenario;
};

// Raw interaction matrix S. S(i,j) != 0 means information flows j -> i:
// row i lists who influences individual i.
struct SignedNetwork {
  int n = 0;
  Eigen::MatrixXd S;
  std::optional<NetMeta> meta;

  // Throws ConfigError on shape mismatch, nonzero diagonal, or non-finite
  // entries.
  void validate() const;
};

struct SccDecomposition {
  // Components in emission order: every cross-component arc points from a
  // later component to an earlier one, so this order makes the permuted
  // matrix block upper triangular and puts closed components last.
  std::vector<std::vector<int>> components;
  std::vector<bool> closed_flags;  // closed = no arc arrives from outside
  std::vector<int> topo_order;     // identity over `components` (kept explicit)
};

struct BalanceWitness {
  enum class Kind { opposite_pair, odd_negative_cycle };
  Kind kind;
  // opposite_pair: the two endpoints; odd_negative_cycle: the cycle's nodes.
  std::vector<int> nodes;
};

struct BalanceResult {
  bool balanced = false;
  std::optional<std::pair<std::vector<int>, std::vector<int>>> bipartition;
  std::optional<BalanceWitness> witness;
};

struct InfluenceMatrix;  // influence.hpp

SccDecomposition scc_decompose(const SignedNetwork& net);

// Digraph structural balance on `nodes`. Any pair with strictly opposite
// signs in the two directions is immediately unbalanced; otherwise each
// linked pair carries one sign and the undirected sign graph is 2-colored,
// each connected component independently. Throws ConfigError on an empty or
// out-of-range node set.
BalanceResult is_structurally_balanced(const SignedNetwork& net,
                                       const std::vector<int>& nodes);
// Whole-network convenience overload (nodes = 0..n-1).
BalanceResult is_structurally_balanced(const SignedNetwork& net);

// D * S * D with D_ii = +1 on the first set, -1 on the second. Entries with
// both endpoints in the bipartition must come out nonnegative; otherwise the
// bipartition does not certify balance and ConfigError is thrown.
SignedNetwork gauge_transform(
    const SignedNetwork& net,
    const std::pair<std::vector<int>, std::vector<int>>& bipartition);

// Node order concatenating the components of `dec`; conjugating by it makes
// the matrix block upper triangular with irreducible diagonal blocks.
// perm[k] = original index of the node placed at position k.
std::vector<int> canonic_permutation(const SccDecomposition& dec);

// Per-row (center, radius) = (W_ii, sum_{j != i} |W_ij|).
std::vector<std::pair<double, double>> gershgorin_discs(
    const InfluenceMatrix& W);

}  // namespace signet
