#pragma once

// Exact posterior computation under virtual (likelihood) evidence by
// full-joint enumeration. Evidence on multiple nodes multiplies likelihoods.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bnreshape/joint.hpp"
#include "bnreshape/network.hpp"
#include "bnreshape/types.hpp"

namespace bnr {

// Normalized per-node posterior distributions.
struct PosteriorSet {
  std::map<std::string, std::vector<double>> marginals;

  const std::vector<double>& of(const std::string& id) const {
    auto it = marginals.find(id);
    if (it == marginals.end()) throw ValidationError("no posterior for node '" + id + "'");
    return it->second;
  }
};

namespace detail {

inline void check_evidence(const Network& net, const Evidence& ev) {
  for (const auto& [id, likelihood] : ev.likelihoods) {
    if (!net.has_node(id)) {
      throw ValidationError("evidence on unknown node '" + id + "'");
    }
    if (likelihood.size() != net.node(id).states.size()) {
      throw ValidationError("evidence vector for '" + id + "' has wrong length");
    }
    bool any_positive = false;
    for (double v : likelihood) {
      if (v < 0.0) throw ValidationError("negative likelihood for node '" + id + "'");
      if (v > 0.0) any_positive = true;
    }
    if (!any_positive) {
      throw ValidationError("likelihood for node '" + id + "' is identically zero");
    }
  }
}

// Joint reweighted by the product of all likelihood vectors; unnormalized.
inline JointTable weighted_joint(const Network& net, const Evidence& ev) {
  check_evidence(net, ev);
  JointTable joint = full_joint(net);
  if (ev.empty()) return joint;

  std::vector<const std::vector<double>*> weights(joint.vars.size(), nullptr);
  for (std::size_t i = 0; i < joint.vars.size(); ++i) {
    auto it = ev.likelihoods.find(joint.vars[i]);
    if (it != ev.likelihoods.end()) weights[i] = &it->second;
  }

  std::vector<std::size_t> assignment(joint.vars.size(), 0);
  for (std::size_t idx = 0; idx < joint.p.size(); ++idx) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i]) joint.p[idx] *= (*weights[i])[assignment[i]];
    }
    next_config(joint.cards, assignment);
  }
  joint.normalized = false;
  return joint;
}

}  // namespace detail

// Normalizing constant of the posterior: sum over full assignments of the
// joint times the product of likelihoods. 1 for all-ones likelihoods.
inline double evidence_probability(const Network& net, const Evidence& ev) {
  return detail::weighted_joint(net, ev).total();
}

// Posterior marginal of every node given the evidence.
inline PosteriorSet posterior_marginals(const Network& net, const Evidence& ev) {
  JointTable weighted = detail::weighted_joint(net, ev);
  double z = weighted.total();
  if (z <= 0.0) {
    throw ValidationError("evidence has probability zero; no posterior exists");
  }

  PosteriorSet out;
  std::vector<std::vector<double>> acc(weighted.vars.size());
  for (std::size_t i = 0; i < weighted.vars.size(); ++i) {
    acc[i].assign(weighted.cards[i], 0.0);
  }
  std::vector<std::size_t> assignment(weighted.vars.size(), 0);
  for (std::size_t idx = 0; idx < weighted.p.size(); ++idx) {
    for (std::size_t i = 0; i < weighted.vars.size(); ++i) {
      acc[i][assignment[i]] += weighted.p[idx];
    }
    next_config(weighted.cards, assignment);
  }
  for (std::size_t i = 0; i < weighted.vars.size(); ++i) {
    for (double& v : acc[i]) v /= z;
    out.marginals[weighted.vars[i]] = std::move(acc[i]);
  }
  return out;
}

}  // namespace bnr
