#pragma once

// Ground-truth checks: joint-distribution equivalence (equivalence.hpp) and
// the irreducibility audit, which enumerates every pairwise state merge of a
// node and reports those that coarsen exactly.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bnreshape/equivalence.hpp"
#include "bnreshape/network.hpp"
#include "bnreshape/reshape_internal.hpp"
#include "bnreshape/types.hpp"

namespace bnr {

struct IrreducibilityResult {
  bool irreducible = true;
  // State pairs whose merge leaves the joint over the other nodes unchanged
  // within tol. Only pairwise merges are enumerated: a k-way exact merge is
  // a composition of exact pairwise merges for this check's purpose.
  std::vector<std::pair<std::string, std::string>> mergeable;
};

namespace detail {

inline CoarseningMap pair_merge(const StateSpace& space, std::size_t i, std::size_t j) {
  std::map<std::string, std::vector<std::string>> groups;
  std::string merged = space.label(i) + "+" + space.label(j);
  while (space.contains(merged)) merged += "'";
  for (std::size_t s = 0; s < space.size(); ++s) {
    if (s == i || s == j) continue;
    groups[space.label(s)] = {space.label(s)};
  }
  groups[merged] = {space.label(i), space.label(j)};
  return make_coarsening(space, groups);
}

}  // namespace detail

// A state space is irreducible when no pair of states can be merged without
// changing the joint probability over the rest of the network. Candidates
// must pass both the candidate-spread test and the brute-force joint
// comparison of the actually coarsened network.
inline IrreducibilityResult is_irreducible(const Network& net, const std::string& id,
                                           double tol = kDefaultTol) {
  const NodeDef& node = net.node(id);
  IrreducibilityResult result;
  for (std::size_t i = 0; i < node.states.size(); ++i) {
    for (std::size_t j = i + 1; j < node.states.size(); ++j) {
      const CoarseningMap map = detail::pair_merge(node.states, i, j);
      if (coarsen_deviation(net, id, map).max_spread > tol) continue;
      const auto coarsened = internal_coarsen(net, id, map, CoarsenMode::kApproximate);
      if (coarsened.report.residual_joint_error > tol) continue;
      result.mergeable.emplace_back(node.states.label(i), node.states.label(j));
    }
  }
  result.irreducible = result.mergeable.empty();
  return result;
}

}  // namespace bnr
