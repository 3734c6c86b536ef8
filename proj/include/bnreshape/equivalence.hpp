#pragma once

// Ground-truth joint-distribution comparison between two networks. Both full
// joints are enumerated and marginalized to a shared variable set; the result
// is the largest absolute cell difference. Zero means the compared marginals
// are identical, which is the preservation guarantee every reshaping
// operation is tested against.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bnreshape/joint.hpp"
#include "bnreshape/network.hpp"
#include "bnreshape/types.hpp"

namespace bnr {

struct EquivalenceResult {
  double max_abs_diff = 0.0;
  // Assignment (variable, state label) where the maximum occurs, when > 0.
  std::optional<std::vector<std::pair<std::string, std::string>>> offending;
  std::vector<std::string> compared_vars;
};

// Compares the joints of `net_a` and `net_b` marginalized to `vars` (named on
// the `net_a` side). `rename` maps net_a ids to net_b ids for nodes that were
// renamed by a transformation; unlisted ids must match by name. Compared
// variables must have identical state spaces.
inline EquivalenceResult joint_equivalence(
    const Network& net_a, const Network& net_b, const std::vector<std::string>& vars,
    const std::map<std::string, std::string>& rename = {}) {
  std::vector<std::string> vars_b;
  vars_b.reserve(vars.size());
  for (const auto& id : vars) {
    auto it = rename.find(id);
    const std::string& id_b = (it == rename.end()) ? id : it->second;
    if (!net_a.has_node(id) || !net_b.has_node(id_b)) {
      throw ValidationError("compared variable '" + id + "' missing from a network");
    }
    if (net_a.node(id).states != net_b.node(id_b).states) {
      throw ValidationError("state spaces of '" + id + "' and '" + id_b + "' differ");
    }
    vars_b.push_back(id_b);
  }

  const JointTable a = marginal_over(full_joint(net_a), vars);
  const JointTable b = marginal_over(full_joint(net_b), vars_b);

  EquivalenceResult result;
  result.compared_vars = vars;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < a.p.size(); ++i) {
    double d = std::abs(a.p[i] - b.p[i]);
    if (d > result.max_abs_diff) {
      result.max_abs_diff = d;
      worst = i;
    }
  }
  if (result.max_abs_diff > 0.0) {
    auto states = config_at(a.cards, worst);
    std::vector<std::pair<std::string, std::string>> where;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      where.emplace_back(vars[i], net_a.node(vars[i]).states.label(states[i]));
    }
    result.offending = std::move(where);
  }
  return result;
}

// Convenience: every shared variable except `exclude`, in net_a order.
inline std::vector<std::string> shared_vars_except(const Network& net_a,
                                                   const Network& net_b,
                                                   const std::string& exclude) {
  std::vector<std::string> vars;
  for (const auto& n : net_a.nodes()) {
    if (n.id != exclude && net_b.has_node(n.id)) vars.push_back(n.id);
  }
  return vars;
}

}  // namespace bnr
