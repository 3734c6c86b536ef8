#pragma once

// Core value types for discrete Bayesian networks: state spaces, conditional
// probability tables, likelihood evidence, and the partition maps used by the
// state-space refinement and coarsening operations.
//
// Everything here is an immutable-by-convention value type: operations take
// const references and return new values, so concurrent use is safe.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bnr {

// Tolerance for algebraic identities (row sums, joint equivalence, ...).
inline constexpr double kDefaultTol = 1e-9;

// Thrown when an input violates a documented precondition or invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Mixed-radix configuration indexing. Used for CPT rows and joint tables:
// the first dimension varies slowest.

inline std::size_t config_count(std::span<const std::size_t> cards) {
  std::size_t n = 1;
  for (std::size_t c : cards) n *= c;
  return n;
}

inline std::size_t config_index(std::span<const std::size_t> cards,
                                std::span<const std::size_t> states) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < cards.size(); ++i) {
    idx = idx * cards[i] + states[i];
  }
  return idx;
}

inline std::vector<std::size_t> config_at(std::span<const std::size_t> cards,
                                          std::size_t index) {
  std::vector<std::size_t> states(cards.size());
  for (std::size_t i = cards.size(); i-- > 0;) {
    states[i] = index % cards[i];
    index /= cards[i];
  }
  return states;
}

// Advances a configuration in place; returns false after the last one.
inline bool next_config(std::span<const std::size_t> cards,
                        std::vector<std::size_t>& states) {
  for (std::size_t i = cards.size(); i-- > 0;) {
    if (++states[i] < cards[i]) return true;
    states[i] = 0;
  }
  return false;
}

// ---------------------------------------------------------------------------

// Ordered list of distinct state labels. Order is significant: CPT columns
// and joint-table axes follow it.
struct StateSpace {
  std::vector<std::string> labels;

  StateSpace() = default;
  StateSpace(std::initializer_list<std::string> init) : labels(init) {}
  explicit StateSpace(std::vector<std::string> l) : labels(std::move(l)) {}

  std::size_t size() const { return labels.size(); }
  const std::string& label(std::size_t i) const { return labels.at(i); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
  }

  bool contains(const std::string& label) const {
    return index_of(label).has_value();
  }

  bool operator==(const StateSpace&) const = default;
};

// ---------------------------------------------------------------------------

// Row-per-parent-configuration stochastic table. Rows are indexed row-major
// over the declared parent order (first parent varies slowest); columns
// follow the node's state order. Rows sum to 1 within tolerance.
class Cpt {
 public:
  Cpt() = default;

  Cpt(std::size_t n_rows, std::size_t n_cols, double fill = 0.0)
      : rows_(n_rows, std::vector<double>(n_cols, fill)) {}

  explicit Cpt(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {}

  std::size_t n_rows() const { return rows_.size(); }
  std::size_t n_cols() const { return rows_.empty() ? 0 : rows_.front().size(); }

  bool rectangular() const {
    for (const auto& r : rows_) {
      if (r.size() != n_cols()) return false;
    }
    return true;
  }

  double at(std::size_t r, std::size_t c) const { return rows_.at(r).at(c); }
  double& at(std::size_t r, std::size_t c) { return rows_.at(r).at(c); }

  const std::vector<double>& row(std::size_t r) const { return rows_.at(r); }
  std::vector<double>& row(std::size_t r) { return rows_.at(r); }

  const std::vector<std::vector<double>>& rows() const { return rows_; }

  double row_sum(std::size_t r) const {
    double s = 0.0;
    for (double v : rows_.at(r)) s += v;
    return s;
  }

  // Bitwise equality; used by the round-trip tests.
  bool operator==(const Cpt&) const = default;

  static std::vector<double> uniform_row(std::size_t n) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
  }

 private:
  std::vector<std::vector<double>> rows_;
};

// ---------------------------------------------------------------------------

// Virtual (likelihood) evidence: per-node nonnegative likelihood vectors over
// that node's states. Vectors need not be normalized; scaling one by a
// positive constant does not change posteriors.
struct Evidence {
  std::map<std::string, std::vector<double>> likelihoods;

  bool empty() const { return likelihoods.empty(); }

  Evidence& set(const std::string& node, std::vector<double> likelihood) {
    likelihoods[node] = std::move(likelihood);
    return *this;
  }
};

// ---------------------------------------------------------------------------
// Partition maps between an old and a new state space.

namespace detail {

inline void check_partition(const StateSpace& base, const StateSpace& image,
                            const std::map<std::string, std::vector<std::string>>& assignment,
                            const char* base_role, const char* image_role) {
  if (assignment.size() != base.size()) {
    throw ValidationError(std::string("state map must assign every ") + base_role + " state");
  }
  std::vector<int> seen(image.size(), 0);
  for (const auto& [from, to_list] : assignment) {
    if (!base.contains(from)) {
      throw ValidationError("state map mentions unknown " + std::string(base_role) +
                            " state '" + from + "'");
    }
    if (to_list.empty()) {
      throw ValidationError("state '" + from + "' maps to no " + image_role + " state");
    }
    for (const auto& to : to_list) {
      auto idx = image.index_of(to);
      if (!idx) {
        throw ValidationError("state map mentions unknown " + std::string(image_role) +
                              " state '" + to + "'");
      }
      if (seen[*idx]++) {
        throw ValidationError("state '" + to + "' appears in more than one class");
      }
    }
  }
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (!seen[i]) {
      throw ValidationError("state '" + image.label(i) + "' is not covered by the map");
    }
  }
}

}  // namespace detail

// Refine(w): maps each old state to the ordered list of new states it splits
// into. The images are disjoint and cover the new space exactly.
struct RefinementMap {
  StateSpace old_space;
  StateSpace new_space;
  std::map<std::string, std::vector<std::string>> assignment;  // old -> new list

  void check() const {
    detail::check_partition(old_space, new_space, assignment, "old", "new");
  }

  const std::vector<std::string>& image_of(const std::string& old_label) const {
    auto it = assignment.find(old_label);
    if (it == assignment.end()) {
      throw ValidationError("no refinement image for state '" + old_label + "'");
    }
    return it->second;
  }

  // The unique old state a new state came from.
  const std::string& old_of(const std::string& new_label) const {
    for (const auto& [from, to_list] : assignment) {
      if (std::find(to_list.begin(), to_list.end(), new_label) != to_list.end()) {
        return from;
      }
    }
    throw ValidationError("state '" + new_label + "' is outside the refinement image");
  }
};

// Coarsen(w'): maps each new state to the set of old states merged into it.
// The preimages are disjoint, non-empty, and cover the old space exactly.
struct CoarseningMap {
  StateSpace old_space;
  StateSpace new_space;
  std::map<std::string, std::vector<std::string>> assignment;  // new -> old set

  void check() const {
    detail::check_partition(new_space, old_space, assignment, "new", "old");
  }

  const std::vector<std::string>& preimage_of(const std::string& new_label) const {
    auto it = assignment.find(new_label);
    if (it == assignment.end()) {
      throw ValidationError("no coarsening class for state '" + new_label + "'");
    }
    return it->second;
  }

  const std::string& coarse_of(const std::string& old_label) const {
    for (const auto& [to, from_list] : assignment) {
      if (std::find(from_list.begin(), from_list.end(), old_label) != from_list.end()) {
        return to;
      }
    }
    throw ValidationError("state '" + old_label + "' is outside the coarsening preimage");
  }
};

// Builds a refinement whose new space is the concatenation of the image lists
// in old-space order.
inline RefinementMap make_refinement(
    const StateSpace& old_space,
    const std::map<std::string, std::vector<std::string>>& assignment) {
  RefinementMap map;
  map.old_space = old_space;
  map.assignment = assignment;
  for (const auto& old_label : old_space.labels) {
    auto it = assignment.find(old_label);
    if (it == assignment.end()) {
      throw ValidationError("refinement must assign every old state; missing '" +
                            old_label + "'");
    }
    for (const auto& new_label : it->second) {
      map.new_space.labels.push_back(new_label);
    }
  }
  map.check();
  return map;
}

// Builds a coarsening whose new space is ordered by each class's earliest
// member in the old space.
inline CoarseningMap make_coarsening(
    const StateSpace& old_space,
    const std::map<std::string, std::vector<std::string>>& groups) {
  CoarseningMap map;
  map.old_space = old_space;
  map.assignment = groups;
  std::vector<std::pair<std::size_t, std::string>> order;
  for (const auto& [new_label, old_list] : groups) {
    std::size_t earliest = old_space.size();
    for (const auto& old_label : old_list) {
      auto idx = old_space.index_of(old_label);
      if (!idx) {
        throw ValidationError("coarsening mentions unknown old state '" + old_label + "'");
      }
      earliest = std::min(earliest, *idx);
    }
    order.emplace_back(earliest, new_label);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [pos, new_label] : order) {
    map.new_space.labels.push_back(new_label);
  }
  map.check();
  return map;
}

// A coarsening read backwards is a refinement, and vice versa.
inline RefinementMap inverse(const CoarseningMap& map) {
  map.check();
  RefinementMap inv;
  inv.old_space = map.new_space;
  inv.new_space = map.old_space;
  for (const auto& [new_label, old_list] : map.assignment) {
    inv.assignment[new_label] = old_list;
  }
  inv.check();
  return inv;
}

inline CoarseningMap inverse(const RefinementMap& map) {
  map.check();
  CoarseningMap inv;
  inv.old_space = map.new_space;
  inv.new_space = map.old_space;
  for (const auto& [old_label, new_list] : map.assignment) {
    inv.assignment[old_label] = new_list;
  }
  inv.check();
  return inv;
}

}  // namespace bnr
