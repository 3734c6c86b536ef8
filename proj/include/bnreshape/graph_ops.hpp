#pragma once

// Joint-preserving structural transformations: arc reversal, barren-node
// removal, node elimination, and redundant-arc detection/removal. All take a
// network by const reference and return a new one; the full joint over the
// surviving variables is preserved.

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "bnreshape/network.hpp"
#include "bnreshape/types.hpp"

namespace bnr {

// Collects notes about convention fallbacks (zero-probability divisions that
// produced uniform rows). Optional everywhere.
struct TransformLog {
  std::vector<std::string> notes;

  void note(std::string msg) { notes.push_back(std::move(msg)); }
};

namespace detail {

// Ordered union, keeping the order of `a` then the unseen tail of `b`.
inline std::vector<std::string> ordered_union(const std::vector<std::string>& a,
                                              const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& id : b) {
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  return out;
}

// States of `subset` parents extracted from a configuration over `all`.
inline std::vector<std::size_t> project_config(const std::vector<std::string>& all,
                                               const std::vector<std::size_t>& config,
                                               const std::vector<std::string>& subset) {
  std::vector<std::size_t> out;
  out.reserve(subset.size());
  for (const auto& id : subset) {
    auto it = std::find(all.begin(), all.end(), id);
    out.push_back(config[static_cast<std::size_t>(it - all.begin())]);
  }
  return out;
}

}  // namespace detail

// Shachter arc reversal: exchanges the conditioning direction of from->to.
// Both nodes end up conditioned on the union of their old parents; the full
// joint is unchanged. Requires that the direct arc is the only directed path
// between the two nodes.
inline Network reverse_arc(const Network& net, const std::string& from,
                           const std::string& to, TransformLog* log = nullptr) {
  const NodeDef& x = net.node(from);
  const NodeDef& y = net.node(to);
  auto arc = std::find(y.parents.begin(), y.parents.end(), from);
  if (arc == y.parents.end()) {
    throw ValidationError("no arc " + from + "->" + to + " to reverse");
  }
  if (net.has_indirect_path(from, to)) {
    throw ValidationError("reversing " + from + "->" + to +
                          " would create a cycle (another directed path exists)");
  }

  const std::vector<std::string>& a = x.parents;             // P_x
  std::vector<std::string> b = y.parents;                    // P_y minus x
  b.erase(std::find(b.begin(), b.end(), from));
  const std::vector<std::string> u = detail::ordered_union(a, b);

  std::vector<std::size_t> u_cards;
  for (const auto& id : u) u_cards.push_back(net.node(id).states.size());
  const std::size_t m = x.states.size();
  const std::size_t n = y.states.size();

  Cpt new_y(config_count(u_cards), n);
  Cpt new_x(config_count(u_cards) * n, m);

  // Row lookup in y's old CPT needs x spliced back into its old position.
  const std::size_t x_pos = static_cast<std::size_t>(arc - y.parents.begin());
  std::vector<std::size_t> y_parent_cards = net.parent_cards(y);
  std::vector<std::size_t> a_cards = net.parent_cards(x);

  std::vector<std::size_t> u_config(u.size(), 0);
  for (std::size_t r = 0; r < new_y.n_rows(); ++r) {
    const auto a_states = detail::project_config(u, u_config, a);
    const auto b_states = detail::project_config(u, u_config, b);
    const std::size_t x_row = config_index(a_cards, a_states);

    std::vector<std::size_t> y_states(y.parents.size());
    for (std::size_t ys = 0; ys < n; ++ys) {
      double total = 0.0;
      for (std::size_t xs = 0; xs < m; ++xs) {
        for (std::size_t i = 0, bi = 0; i < y.parents.size(); ++i) {
          y_states[i] = (i == x_pos) ? xs : b_states[bi++];
        }
        total += y.cpt.at(config_index(y_parent_cards, y_states), ys) * x.cpt.at(x_row, xs);
      }
      new_y.at(r, ys) = total;

      std::vector<double>& x_row_out = new_x.row(r * n + ys);
      if (total == 0.0) {
        x_row_out = Cpt::uniform_row(m);
        if (log) {
          log->note("uniform row for " + from + " at zero-probability configuration of " +
                    to + " (row " + std::to_string(r * n + ys) + ")");
        }
        continue;
      }
      for (std::size_t xs = 0; xs < m; ++xs) {
        for (std::size_t i = 0, bi = 0; i < y.parents.size(); ++i) {
          y_states[i] = (i == x_pos) ? xs : b_states[bi++];
        }
        x_row_out[xs] =
            y.cpt.at(config_index(y_parent_cards, y_states), ys) * x.cpt.at(x_row, xs) / total;
      }
    }
    next_config(u_cards, u_config);
  }

  Network out = net;
  NodeDef to_def = y;
  to_def.parents = u;
  to_def.cpt = std::move(new_y);
  NodeDef from_def = x;
  from_def.parents = u;
  from_def.parents.push_back(to);  // y last, so it varies fastest
  from_def.cpt = std::move(new_x);
  out.replace_node(std::move(to_def));
  out.replace_node(std::move(from_def));
  return out;
}

// Deletes a node with no successors. The remaining joint equals the old one
// marginalized over the node.
inline Network remove_barren(const Network& net, const std::string& id) {
  auto succ = net.successors(id);
  if (!succ.empty()) {
    throw ValidationError("node '" + id + "' has successors and is not barren");
  }
  Network out = net;
  out.remove_node(id);
  return out;
}

// Removes a node probabilistically: reverses the arc to each successor, in
// topological order (declaration order breaking ties), until the node is
// barren, then deletes it.
inline Network eliminate_node(const Network& net, const std::string& id,
                              TransformLog* log = nullptr) {
  Network out = net;
  out.index_of(id);
  for (;;) {
    const auto succ = out.successors(id);
    if (succ.empty()) break;
    const auto order = out.topological_order();
    std::vector<std::size_t> rank(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    std::string next = succ.front();
    for (const auto& s : succ) {
      if (rank[out.index_of(s)] < rank[out.index_of(next)]) next = s;
    }
    out = reverse_arc(out, id, next, log);
  }
  return remove_barren(out, id);
}

// True iff `to`'s CPT rows are identical (within tol) across all states of
// `from`, for every fixed configuration of `to`'s other parents.
inline bool is_arc_redundant(const Network& net, const std::string& from,
                             const std::string& to, double tol = kDefaultTol) {
  const NodeDef& y = net.node(to);
  auto arc = std::find(y.parents.begin(), y.parents.end(), from);
  if (arc == y.parents.end()) {
    throw ValidationError("no arc " + from + "->" + to + " to test");
  }
  const std::size_t x_pos = static_cast<std::size_t>(arc - y.parents.begin());
  const auto cards = net.parent_cards(y);

  std::vector<std::size_t> config(y.parents.size(), 0);
  for (std::size_t r = 0; r < y.cpt.n_rows(); ++r) {
    if (config[x_pos] != 0) {
      std::vector<std::size_t> base = config;
      base[x_pos] = 0;
      const auto& ref = y.cpt.row(config_index(cards, base));
      const auto& row = y.cpt.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (std::abs(row[c] - ref[c]) > tol) return false;
      }
    }
    next_config(cards, config);
  }
  return true;
}

// Drops the arc and collapses the CPT, keeping the rows at the removed
// parent's first state. Preserves the joint exactly when the arc is
// redundant.
inline Network remove_redundant_arc(const Network& net, const std::string& from,
                                    const std::string& to) {
  const NodeDef& y = net.node(to);
  auto arc = std::find(y.parents.begin(), y.parents.end(), from);
  if (arc == y.parents.end()) {
    throw ValidationError("no arc " + from + "->" + to + " to remove");
  }
  const std::size_t x_pos = static_cast<std::size_t>(arc - y.parents.begin());
  const auto cards = net.parent_cards(y);

  NodeDef replacement = y;
  replacement.parents.erase(replacement.parents.begin() +
                            static_cast<std::ptrdiff_t>(x_pos));
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> config(y.parents.size(), 0);
  for (std::size_t r = 0; r < y.cpt.n_rows(); ++r) {
    if (config[x_pos] == 0) rows.push_back(y.cpt.row(r));
    next_config(cards, config);
  }
  replacement.cpt = Cpt(std::move(rows));

  Network out = net;
  out.replace_node(std::move(replacement));
  return out;
}

// Gives a node a new id, updating every parent list that references it.
inline Network rename_node(const Network& net, const std::string& old_id,
                           const std::string& new_id) {
  if (old_id == new_id) return net;
  net.index_of(old_id);
  if (net.has_node(new_id)) {
    throw ValidationError("cannot rename '" + old_id + "' to existing id '" + new_id + "'");
  }
  std::vector<NodeDef> nodes = net.nodes();
  for (auto& n : nodes) {
    if (n.id == old_id) n.id = new_id;
    for (auto& p : n.parents) {
      if (p == old_id) p = new_id;
    }
  }
  return Network(std::move(nodes));
}

}  // namespace bnr
