#pragma once

// Network data model: nodes with ordered state spaces, parent lists and CPTs,
// plus the derived structure (successors, Markov boundary), validation, and
// deterministic topological ordering.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bnreshape/types.hpp"

namespace bnr {

struct NodeDef {
  std::string id;
  StateSpace states;
  std::vector<std::string> parents;  // ordered; defines CPT row indexing
  Cpt cpt;

  bool operator==(const NodeDef&) const = default;
};

// Directed acyclic graph of discrete chance nodes in declaration order.
// Successors and successors' parents are always derived from structure.
class Network {
 public:
  Network() = default;
  explicit Network(std::vector<NodeDef> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<NodeDef>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  bool has_node(const std::string& id) const { return find(id).has_value(); }

  std::size_t index_of(const std::string& id) const {
    auto idx = find(id);
    if (!idx) throw ValidationError("unknown node '" + id + "'");
    return *idx;
  }

  const NodeDef& node(const std::string& id) const { return nodes_[index_of(id)]; }
  const NodeDef& node_at(std::size_t i) const { return nodes_.at(i); }

  // Mutators used by the transformation operations, which copy first.
  void add_node(NodeDef def, std::optional<std::size_t> position = std::nullopt) {
    if (has_node(def.id)) throw ValidationError("duplicate node id '" + def.id + "'");
    if (position && *position <= nodes_.size()) {
      nodes_.insert(nodes_.begin() + static_cast<std::ptrdiff_t>(*position), std::move(def));
    } else {
      nodes_.push_back(std::move(def));
    }
  }

  void replace_node(NodeDef def) { nodes_[index_of(def.id)] = std::move(def); }

  void remove_node(const std::string& id) {
    nodes_.erase(nodes_.begin() + static_cast<std::ptrdiff_t>(index_of(id)));
  }

  // Children of `id`, in declaration order.
  std::vector<std::string> successors(const std::string& id) const {
    index_of(id);
    std::vector<std::string> out;
    for (const auto& n : nodes_) {
      for (const auto& p : n.parents) {
        if (p == id) {
          out.push_back(n.id);
          break;
        }
      }
    }
    return out;
  }

  // P_{S_x}: parents of successors, excluding the node itself, in declaration
  // order without duplicates.
  std::vector<std::string> successor_parents(const std::string& id) const {
    std::set<std::string> keep;
    for (const auto& s : successors(id)) {
      for (const auto& p : node(s).parents) {
        if (p != id) keep.insert(p);
      }
    }
    std::vector<std::string> out;
    for (const auto& n : nodes_) {
      if (keep.count(n.id)) out.push_back(n.id);
    }
    return out;
  }

  // Markov boundary: parents, successors, and successors' other parents.
  std::vector<std::string> markov_boundary(const std::string& id) const {
    std::set<std::string> keep(node(id).parents.begin(), node(id).parents.end());
    for (const auto& s : successors(id)) {
      keep.insert(s);
      for (const auto& p : node(s).parents) {
        if (p != id) keep.insert(p);
      }
    }
    std::vector<std::string> out;
    for (const auto& n : nodes_) {
      if (keep.count(n.id)) out.push_back(n.id);
    }
    return out;
  }

  std::vector<std::size_t> parent_cards(const NodeDef& def) const {
    std::vector<std::size_t> cards;
    cards.reserve(def.parents.size());
    for (const auto& p : def.parents) cards.push_back(node(p).states.size());
    return cards;
  }

  // True if there is a directed path from `from` to `to` that does not use
  // the direct arc from->to. Decides arc-reversal legality.
  bool has_indirect_path(const std::string& from, const std::string& to) const {
    std::vector<std::string> stack{from};
    std::set<std::string> visited;
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      if (!visited.insert(cur).second) continue;
      for (const auto& child : successors(cur)) {
        if (cur == from && child == to) continue;  // skip the direct arc
        if (child == to) return true;
        stack.push_back(child);
      }
    }
    return false;
  }

  // Deterministic topological order: repeatedly takes the lowest-declared
  // node with no unprocessed parents. Empty result on a cycle is impossible;
  // instead the nodes stuck on a cycle are left out.
  std::vector<std::size_t> topological_order() const {
    std::vector<std::size_t> order;
    std::vector<int> in_degree(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (const auto& p : nodes_[i].parents) {
        if (find(p)) ++in_degree[i];
      }
    }
    std::vector<bool> done(nodes_.size(), false);
    for (;;) {
      std::size_t pick = nodes_.size();
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!done[i] && in_degree[i] == 0) {
          pick = i;
          break;
        }
      }
      if (pick == nodes_.size()) break;
      done[pick] = true;
      order.push_back(pick);
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (done[i]) continue;
        for (const auto& p : nodes_[i].parents) {
          if (p == nodes_[pick].id) --in_degree[i];
        }
      }
    }
    return order;
  }

  bool operator==(const Network&) const = default;

 private:
  std::optional<std::size_t> find(const std::string& id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].id == id) return i;
    }
    return std::nullopt;
  }

  std::vector<NodeDef> nodes_;
};

// ---------------------------------------------------------------------------
// Validation. Violations are the payload, not exceptions.

struct Violation {
  enum class Kind {
    kDuplicateId,
    kBadStateSpace,
    kDanglingParent,
    kSelfParent,
    kDuplicateParent,
    kCycle,
    kShapeMismatch,
    kBadEntry,
    kBadRowSum,
  };

  Kind kind;
  std::string node;
  std::optional<std::size_t> row;
  std::string message;
};

inline std::vector<Violation> validate_network(const Network& net,
                                               double tol = kDefaultTol) {
  std::vector<Violation> out;
  std::set<std::string> ids;
  for (const auto& n : net.nodes()) {
    if (!ids.insert(n.id).second) {
      out.push_back({Violation::Kind::kDuplicateId, n.id, std::nullopt,
                     "duplicate node id '" + n.id + "'"});
    }
  }

  for (const auto& n : net.nodes()) {
    if (n.states.size() == 0) {
      out.push_back({Violation::Kind::kBadStateSpace, n.id, std::nullopt,
                     "node '" + n.id + "' has an empty state space"});
    }
    std::set<std::string> labels;
    for (const auto& l : n.states.labels) {
      if (l.empty()) {
        out.push_back({Violation::Kind::kBadStateSpace, n.id, std::nullopt,
                       "node '" + n.id + "' has an empty state label"});
      }
      if (!labels.insert(l).second) {
        out.push_back({Violation::Kind::kBadStateSpace, n.id, std::nullopt,
                       "node '" + n.id + "' repeats state label '" + l + "'"});
      }
    }

    std::set<std::string> parent_set;
    bool parents_ok = true;
    for (const auto& p : n.parents) {
      if (p == n.id) {
        out.push_back({Violation::Kind::kSelfParent, n.id, std::nullopt,
                       "node '" + n.id + "' lists itself as a parent"});
        parents_ok = false;
      }
      if (!ids.count(p)) {
        out.push_back({Violation::Kind::kDanglingParent, n.id, std::nullopt,
                       "node '" + n.id + "' references unknown parent '" + p + "'"});
        parents_ok = false;
      }
      if (!parent_set.insert(p).second) {
        out.push_back({Violation::Kind::kDuplicateParent, n.id, std::nullopt,
                       "node '" + n.id + "' repeats parent '" + p + "'"});
        parents_ok = false;
      }
    }
    if (!parents_ok) continue;  // CPT shape is meaningless without the parents

    std::size_t expected_rows = 1;
    for (const auto& p : n.parents) expected_rows *= net.node(p).states.size();
    if (!n.cpt.rectangular() || n.cpt.n_rows() != expected_rows ||
        n.cpt.n_cols() != n.states.size()) {
      std::ostringstream msg;
      msg << "node '" << n.id << "' CPT must be " << expected_rows << "x"
          << n.states.size();
      out.push_back({Violation::Kind::kShapeMismatch, n.id, std::nullopt, msg.str()});
      continue;
    }
    for (std::size_t r = 0; r < n.cpt.n_rows(); ++r) {
      bool entries_ok = true;
      for (std::size_t c = 0; c < n.cpt.n_cols(); ++c) {
        double v = n.cpt.at(r, c);
        if (!(v >= 0.0 && v <= 1.0)) {
          out.push_back({Violation::Kind::kBadEntry, n.id, r,
                         "node '" + n.id + "' has an out-of-range probability"});
          entries_ok = false;
          break;
        }
      }
      if (!entries_ok) continue;
      double s = n.cpt.row_sum(r);
      if (std::abs(s - 1.0) > tol) {
        std::ostringstream msg;
        msg << "node '" << n.id << "' row " << r << " sums to " << s;
        out.push_back({Violation::Kind::kBadRowSum, n.id, r, msg.str()});
      }
    }
  }

  if (net.topological_order().size() != net.size()) {
    std::vector<std::size_t> order = net.topological_order();
    std::set<std::size_t> placed(order.begin(), order.end());
    std::string cyclic;
    for (std::size_t i = 0; i < net.size(); ++i) {
      if (!placed.count(i)) {
        if (!cyclic.empty()) cyclic += ", ";
        cyclic += net.node_at(i).id;
      }
    }
    out.push_back({Violation::Kind::kCycle, "", std::nullopt,
                   "parent relation has a cycle through: " + cyclic});
  }

  return out;
}

// Throws ValidationError listing every violation.
inline void ensure_valid(const Network& net, double tol = kDefaultTol) {
  auto violations = validate_network(net, tol);
  if (violations.empty()) return;
  std::string msg = "invalid network:";
  for (const auto& v : violations) msg += "\n  " + v.message;
  throw ValidationError(msg);
}

// Ordered parent-state assignments matching CPT row order: one entry per row,
// each a list of (parent id, state label) pairs. A root node yields a single
// empty configuration.
inline std::vector<std::vector<std::pair<std::string, std::string>>>
parent_configurations(const Network& net, const std::string& id) {
  const NodeDef& def = net.node(id);
  const auto cards = net.parent_cards(def);
  std::vector<std::vector<std::pair<std::string, std::string>>> out;
  out.reserve(config_count(cards));
  std::vector<std::size_t> states(cards.size(), 0);
  for (std::size_t r = 0; r < config_count(cards); ++r) {
    std::vector<std::pair<std::string, std::string>> config;
    config.reserve(def.parents.size());
    for (std::size_t i = 0; i < def.parents.size(); ++i) {
      config.emplace_back(def.parents[i], net.node(def.parents[i]).states.label(states[i]));
    }
    out.push_back(std::move(config));
    next_config(cards, states);
  }
  return out;
}

}  // namespace bnr
