#pragma once

// Exhaustive joint-distribution computation. This is deliberately plain
// enumeration: it is the ground truth the transformation operations are
// checked against, so correctness beats speed. Intended for networks up to
// roughly a dozen binary-equivalent variables.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bnreshape/network.hpp"
#include "bnreshape/types.hpp"

namespace bnr {

// Dense table over full assignments, row-major over the variable order with
// the first variable varying slowest.
struct JointTable {
  std::vector<std::string> vars;
  std::vector<std::size_t> cards;
  std::vector<double> p;
  bool normalized = true;

  std::size_t index_of(std::span<const std::size_t> states) const {
    return config_index(cards, states);
  }

  double total() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
  }
};

// Product over nodes of the CPT entry selected by each full assignment.
// Variable order is the network's declaration order.
inline JointTable full_joint(const Network& net) {
  ensure_valid(net);

  JointTable joint;
  joint.vars.reserve(net.size());
  joint.cards.reserve(net.size());
  for (const auto& n : net.nodes()) {
    joint.vars.push_back(n.id);
    joint.cards.push_back(n.states.size());
  }

  // Per node: positions of its parents in the variable order.
  std::vector<std::vector<std::size_t>> parent_pos(net.size());
  std::vector<std::vector<std::size_t>> parent_cards(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (const auto& p : net.node_at(i).parents) {
      parent_pos[i].push_back(net.index_of(p));
      parent_cards[i].push_back(net.node(p).states.size());
    }
  }

  joint.p.assign(config_count(joint.cards), 0.0);
  std::vector<std::size_t> assignment(net.size(), 0);
  std::vector<std::size_t> parent_states;
  for (std::size_t idx = 0; idx < joint.p.size(); ++idx) {
    double prob = 1.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
      parent_states.clear();
      for (std::size_t pos : parent_pos[i]) parent_states.push_back(assignment[pos]);
      std::size_t row = config_index(parent_cards[i], parent_states);
      prob *= net.node_at(i).cpt.at(row, assignment[i]);
    }
    joint.p[idx] = prob;
    next_config(joint.cards, assignment);
  }
  return joint;
}

// Sums out every variable not in `keep`. The result's variable order is the
// order of `keep` as given; normalization of the input carries over.
inline JointTable marginal_over(const JointTable& joint,
                                const std::vector<std::string>& keep) {
  JointTable out;
  out.normalized = joint.normalized;
  std::vector<std::size_t> keep_pos;
  for (const auto& id : keep) {
    std::size_t pos = joint.vars.size();
    for (std::size_t i = 0; i < joint.vars.size(); ++i) {
      if (joint.vars[i] == id) {
        pos = i;
        break;
      }
    }
    if (pos == joint.vars.size()) {
      throw ValidationError("marginal over unknown variable '" + id + "'");
    }
    out.vars.push_back(id);
    out.cards.push_back(joint.cards[pos]);
    keep_pos.push_back(pos);
  }

  out.p.assign(config_count(out.cards), 0.0);
  std::vector<std::size_t> assignment(joint.vars.size(), 0);
  std::vector<std::size_t> kept(keep.size(), 0);
  for (std::size_t idx = 0; idx < joint.p.size(); ++idx) {
    for (std::size_t i = 0; i < keep_pos.size(); ++i) kept[i] = assignment[keep_pos[i]];
    out.p[config_index(out.cards, kept)] += joint.p[idx];
    next_config(joint.cards, assignment);
  }
  return out;
}

}  // namespace bnr
