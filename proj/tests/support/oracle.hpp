#pragma once

// Brute-force enumeration oracle for the test suite. Written before the
// library's joint/inference code and kept independent of it: assignments are
// walked by direct recursion over the node list and CPT rows are located
// with locally written index arithmetic. Only the plain data types are
// shared. Every preservation claim in the suite bottoms out here.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bnreshape/network.hpp"
#include "bnreshape/types.hpp"

namespace oracle {

using Assignment = std::map<std::string, std::size_t>;

// Probability of one full assignment: the product over nodes of the CPT
// entry picked by the assignment. Row arithmetic: first parent slowest.
inline double probability(const bnr::Network& net, const Assignment& assignment) {
  double p = 1.0;
  for (const auto& n : net.nodes()) {
    std::size_t row = 0;
    for (const auto& parent : n.parents) {
      row = row * net.node(parent).states.size() + assignment.at(parent);
    }
    p *= n.cpt.at(row, assignment.at(n.id));
  }
  return p;
}

inline void walk(const bnr::Network& net, std::size_t depth, Assignment& partial,
                 const std::function<void(const Assignment&)>& fn) {
  if (depth == net.size()) {
    fn(partial);
    return;
  }
  const auto& n = net.nodes()[depth];
  for (std::size_t s = 0; s < n.states.size(); ++s) {
    partial[n.id] = s;
    walk(net, depth + 1, partial, fn);
  }
  partial.erase(n.id);
}

inline void for_each_assignment(const bnr::Network& net,
                                const std::function<void(const Assignment&)>& fn) {
  Assignment partial;
  walk(net, 0, partial, fn);
}

inline double assignment_weight(const bnr::Evidence& ev, const Assignment& a) {
  double w = 1.0;
  for (const auto& [id, likelihood] : ev.likelihoods) {
    w *= likelihood.at(a.at(id));
  }
  return w;
}

inline double evidence_probability(const bnr::Network& net, const bnr::Evidence& ev) {
  double total = 0.0;
  for_each_assignment(net, [&](const Assignment& a) {
    total += probability(net, a) * assignment_weight(ev, a);
  });
  return total;
}

// Posterior distribution of every node under likelihood evidence.
inline std::map<std::string, std::vector<double>> posteriors(const bnr::Network& net,
                                                             const bnr::Evidence& ev) {
  std::map<std::string, std::vector<double>> acc;
  for (const auto& n : net.nodes()) acc[n.id].assign(n.states.size(), 0.0);
  double z = 0.0;
  for_each_assignment(net, [&](const Assignment& a) {
    const double w = probability(net, a) * assignment_weight(ev, a);
    z += w;
    for (const auto& [id, state] : a) acc[id][state] += w;
  });
  for (auto& [id, dist] : acc) {
    for (double& v : dist) v /= z;
  }
  return acc;
}

// Marginal over a subset of nodes, indexed by the subset's state labels in
// the order given (first variable slowest).
inline std::vector<double> marginal(const bnr::Network& net,
                                    const std::vector<std::string>& vars) {
  std::size_t cells = 1;
  for (const auto& id : vars) cells *= net.node(id).states.size();
  std::vector<double> out(cells, 0.0);
  for_each_assignment(net, [&](const Assignment& a) {
    std::size_t idx = 0;
    for (const auto& id : vars) {
      idx = idx * net.node(id).states.size() + a.at(id);
    }
    out[idx] += probability(net, a);
  });
  return out;
}

}  // namespace oracle
