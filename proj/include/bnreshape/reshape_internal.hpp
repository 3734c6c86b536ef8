#pragma once

// The internal reshaping operation: rewrite the target's own CPT (the upper
// arc) and its successors' CPTs (the lower arcs) in place, without touching
// the topology. Refinement accepts a caller-supplied upper CPT subject to
// the column-sum constraint, and optional lower CPTs subject to the
// brute-force joint-equivalence check; coarsening derives both, and is exact
// only when the candidate lower rows agree across the target's parent
// configurations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bnreshape/equivalence.hpp"
#include "bnreshape/network.hpp"
#include "bnreshape/types.hpp"

namespace bnr {

// One candidate lower-arc row, as induced by a single configuration of the
// target's parents.
struct CandidateRow {
  std::string successor;
  std::string coarse_state;
  std::vector<std::string> other_config;   // successor's other parents, in order
  std::vector<std::string> target_config;  // target's parents, in order
  std::vector<double> row;                 // over the successor's states
};

// Disagreement between candidates at one successor CPT cell.
struct SpreadEntry {
  std::string successor;
  std::string coarse_state;
  std::vector<std::string> other_config;
  std::string state;
  double lo = 0.0;
  double hi = 0.0;

  double spread() const { return hi - lo; }
};

struct DeviationReport {
  std::vector<CandidateRow> candidates;
  std::vector<SpreadEntry> spreads;
  double max_spread = 0.0;
  std::optional<SpreadEntry> worst;
  // Max joint difference over the non-target variables of the network an
  // approximate coarsening actually produced.
  double residual_joint_error = 0.0;
  std::vector<std::string> notes;

  bool exact_within(double tol) const { return max_spread <= tol; }
};

class NotCoarsenableError : public std::runtime_error {
 public:
  NotCoarsenableError(const std::string& msg, DeviationReport report)
      : std::runtime_error(msg), report_(std::move(report)) {}

  const DeviationReport& report() const { return report_; }

 private:
  DeviationReport report_;
};

enum class CoarsenMode { kExact, kApproximate };

// ---------------------------------------------------------------------------

// The obvious lower-arc solution: every refined state inherits the rows of
// the old state it came from; unrefined states keep their rows unchanged.
// Always joint-preserving, for any upper CPT satisfying the column-sum
// constraint.
inline std::map<std::string, Cpt> trivial_lower(const Network& net,
                                                const std::string& target,
                                                const RefinementMap& map) {
  map.check();
  const NodeDef& x = net.node(target);
  if (map.old_space != x.states) {
    throw ValidationError("refinement map does not match the states of '" + target + "'");
  }

  std::map<std::string, Cpt> out;
  for (const auto& sid : net.successors(target)) {
    const NodeDef& s = net.node(sid);
    const std::size_t x_pos = static_cast<std::size_t>(
        std::find(s.parents.begin(), s.parents.end(), target) - s.parents.begin());
    const auto old_cards = net.parent_cards(s);
    auto new_cards = old_cards;
    new_cards[x_pos] = map.new_space.size();

    std::vector<std::vector<double>> rows;
    rows.reserve(config_count(new_cards));
    std::vector<std::size_t> config(new_cards.size(), 0);
    for (std::size_t r = 0; r < config_count(new_cards); ++r) {
      auto old_config = config;
      const std::string& new_label = map.new_space.label(config[x_pos]);
      old_config[x_pos] = *map.old_space.index_of(map.old_of(new_label));
      rows.push_back(s.cpt.row(config_index(old_cards, old_config)));
      next_config(new_cards, config);
    }
    out[sid] = Cpt(std::move(rows));
  }
  return out;
}

// ---------------------------------------------------------------------------

// Per-refined-state split ratios, when the upper CPT divides each old state
// in the same proportion under every parent configuration.
struct SplitRatios {
  std::map<std::string, double> k;         // new label -> ratio
  std::vector<std::string> degenerate;     // old states with no mass anywhere
};

// Returns the ratios when p(w'|P)/p(w|P) is constant across all parent
// configurations for every refined state, otherwise nullopt. Rows where the
// old state has probability zero impose no constraint; an old state with
// zero probability everywhere gets uniform ratios by convention and is
// listed as degenerate. Assumes the column-sum constraint already holds.
inline std::optional<SplitRatios> proportional_split_check(const Cpt& upper,
                                                           const Cpt& old_upper,
                                                           const RefinementMap& map,
                                                           double tol = kDefaultTol) {
  map.check();
  if (upper.n_rows() != old_upper.n_rows() || old_upper.n_cols() != map.old_space.size() ||
      upper.n_cols() != map.new_space.size()) {
    throw ValidationError("upper CPT shapes do not match the refinement map");
  }

  SplitRatios ratios;
  for (std::size_t s = 0; s < map.old_space.size(); ++s) {
    const std::string& old_label = map.old_space.label(s);
    const auto& image = map.image_of(old_label);
    bool any_mass = false;
    for (const auto& new_label : image) {
      const std::size_t col = *map.new_space.index_of(new_label);
      std::optional<double> k;
      for (std::size_t r = 0; r < upper.n_rows(); ++r) {
        const double denom = old_upper.at(r, s);
        if (denom == 0.0) continue;
        any_mass = true;
        const double ratio = upper.at(r, col) / denom;
        if (!k) {
          k = ratio;
        } else if (std::abs(*k - ratio) > tol) {
          return std::nullopt;
        }
      }
      ratios.k[new_label] = k.value_or(1.0 / static_cast<double>(image.size()));
    }
    if (!any_mass) ratios.degenerate.push_back(old_label);
  }
  return ratios;
}

// ---------------------------------------------------------------------------

namespace detail {

inline void check_upper_constraint(const Cpt& old_upper, const Cpt& upper,
                                   const RefinementMap& map, double tol) {
  if (upper.n_rows() != old_upper.n_rows() || !upper.rectangular() ||
      upper.n_cols() != map.new_space.size()) {
    throw ValidationError("upper CPT must have one row per parent configuration and one "
                          "column per new state");
  }
  for (std::size_t r = 0; r < upper.n_rows(); ++r) {
    for (std::size_t s = 0; s < map.old_space.size(); ++s) {
      double refined = 0.0;
      for (const auto& new_label : map.image_of(map.old_space.label(s))) {
        refined += upper.at(r, *map.new_space.index_of(new_label));
      }
      if (std::abs(refined - old_upper.at(r, s)) > tol) {
        std::ostringstream msg;
        msg << "upper CPT row " << r << ": probabilities of the states refined from '"
            << map.old_space.label(s) << "' sum to " << refined << ", expected "
            << old_upper.at(r, s);
        throw ValidationError(msg.str());
      }
    }
  }
}

}  // namespace detail

// Replaces the target's CPT with `upper` (over the refined space, same
// parents) and its successors' CPTs with `lower`. The column-sum constraint
// on `upper` is checked directly. Omitted lower CPTs default to the trivial
// solution, which is accepted outright; any custom lower CPT is accepted
// only if the joint over all non-target variables is preserved within tol,
// verified by brute-force enumeration.
inline Network internal_refine(const Network& net, const std::string& target,
                               const RefinementMap& map, const Cpt& upper,
                               const std::optional<std::map<std::string, Cpt>>& lower =
                                   std::nullopt,
                               double tol = kDefaultTol) {
  map.check();
  const NodeDef& x = net.node(target);
  if (map.old_space != x.states) {
    throw ValidationError("refinement map does not match the states of '" + target + "'");
  }
  detail::check_upper_constraint(x.cpt, upper, map, tol);

  auto lowers = trivial_lower(net, target, map);
  bool custom = false;
  if (lower) {
    for (const auto& [sid, cpt] : *lower) {
      auto it = lowers.find(sid);
      if (it == lowers.end()) {
        throw ValidationError("'" + sid + "' is not a successor of '" + target + "'");
      }
      if (cpt.n_rows() != it->second.n_rows() || !cpt.rectangular() ||
          cpt.n_cols() != it->second.n_cols()) {
        throw ValidationError("lower CPT for '" + sid + "' has the wrong shape");
      }
      custom = custom || !(cpt == it->second);
      it->second = cpt;
    }
  }

  Network out = net;
  NodeDef target_def = x;
  target_def.states = map.new_space;
  target_def.cpt = upper;
  out.replace_node(std::move(target_def));
  for (auto& [sid, cpt] : lowers) {
    NodeDef s = net.node(sid);
    s.cpt = std::move(cpt);
    out.replace_node(std::move(s));
  }
  ensure_valid(out, tol);

  if (custom) {
    const auto vars = shared_vars_except(net, out, target);
    const auto eq = joint_equivalence(net, out, vars);
    if (eq.max_abs_diff > tol) {
      std::ostringstream msg;
      msg << "lower CPTs change the joint over the untouched variables (max deviation "
          << eq.max_abs_diff << ")";
      throw ValidationError(msg.str());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace detail {

struct CoarsenAnalysis {
  Cpt new_upper;
  std::map<std::string, Cpt> new_lowers;
  DeviationReport report;
};

inline std::vector<std::string> labels_of(const Network& net,
                                          const std::vector<std::string>& ids,
                                          const std::vector<std::size_t>& states) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.push_back(net.node(ids[i]).states.label(states[i]));
  }
  return out;
}

inline CoarsenAnalysis analyze_coarsening(const Network& net, const std::string& target,
                                          const CoarseningMap& map) {
  map.check();
  const NodeDef& x = net.node(target);
  if (map.old_space != x.states) {
    throw ValidationError("coarsening map does not match the states of '" + target + "'");
  }

  CoarsenAnalysis out;

  // Merged upper arc: each new state takes the summed probability of its
  // class, per parent configuration.
  out.new_upper = Cpt(x.cpt.n_rows(), map.new_space.size());
  for (std::size_t r = 0; r < x.cpt.n_rows(); ++r) {
    for (std::size_t c = 0; c < map.new_space.size(); ++c) {
      double sum = 0.0;
      for (const auto& old_label : map.preimage_of(map.new_space.label(c))) {
        sum += x.cpt.at(r, *map.old_space.index_of(old_label));
      }
      out.new_upper.at(r, c) = sum;
    }
  }

  const auto target_cards = net.parent_cards(x);
  const std::size_t target_rows = x.cpt.n_rows();

  for (std::size_t c = 0; c < map.new_space.size(); ++c) {
    if (map.preimage_of(map.new_space.label(c)).size() < 2) continue;
    for (std::size_t r = 0; r < target_rows; ++r) {
      if (out.new_upper.at(r, c) == 0.0) {
        out.report.notes.push_back("state '" + map.new_space.label(c) +
                                   "' has probability zero under parent configuration " +
                                   std::to_string(r) + " of '" + target +
                                   "'; configuration excluded from candidates");
      }
    }
  }

  for (const auto& sid : net.successors(target)) {
    const NodeDef& s = net.node(sid);
    const std::size_t x_pos = static_cast<std::size_t>(
        std::find(s.parents.begin(), s.parents.end(), target) - s.parents.begin());
    const auto old_cards = net.parent_cards(s);
    auto new_cards = old_cards;
    new_cards[x_pos] = map.new_space.size();

    std::vector<std::string> others = s.parents;
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(x_pos));
    std::vector<std::size_t> other_cards = old_cards;
    other_cards.erase(other_cards.begin() + static_cast<std::ptrdiff_t>(x_pos));

    // Mean candidate row per (new state, other-parent configuration); only
    // merged classes need candidates, singletons copy their old row.
    std::vector<std::vector<std::vector<double>>> mean_rows(
        map.new_space.size(),
        std::vector<std::vector<double>>(config_count(other_cards)));

    for (std::size_t c = 0; c < map.new_space.size(); ++c) {
      const std::string& coarse = map.new_space.label(c);
      const auto& members = map.preimage_of(coarse);
      if (members.size() < 2) continue;

      std::vector<std::size_t> member_idx;
      for (const auto& old_label : members) {
        member_idx.push_back(*map.old_space.index_of(old_label));
      }

      std::vector<std::size_t> other_config(others.size(), 0);
      for (std::size_t oc = 0; oc < config_count(other_cards); ++oc) {
        std::vector<std::vector<double>> included;
        std::vector<std::size_t> target_config(target_cards.size(), 0);
        for (std::size_t r = 0; r < target_rows; ++r) {
          const double denom = out.new_upper.at(r, c);
          if (denom == 0.0) {
            next_config(target_cards, target_config);
            continue;
          }
          std::vector<double> row(s.states.size(), 0.0);
          for (std::size_t mi : member_idx) {
            auto full = other_config;
            full.insert(full.begin() + static_cast<std::ptrdiff_t>(x_pos), mi);
            const auto& old_row = s.cpt.row(config_index(old_cards, full));
            const double weight = x.cpt.at(r, mi) / denom;
            for (std::size_t j = 0; j < row.size(); ++j) row[j] += weight * old_row[j];
          }
          out.report.candidates.push_back(
              {sid, coarse, labels_of(net, others, other_config),
               labels_of(net, x.parents, target_config), row});
          included.push_back(std::move(row));
          next_config(target_cards, target_config);
        }

        std::vector<double>& mean = mean_rows[c][oc];
        if (included.empty()) {
          mean = Cpt::uniform_row(s.states.size());
          out.report.notes.push_back("state '" + coarse +
                                     "' has probability zero everywhere; '" + sid +
                                     "' row set to uniform");
        } else {
          mean.assign(s.states.size(), 0.0);
          for (const auto& row : included) {
            for (std::size_t j = 0; j < row.size(); ++j) mean[j] += row[j];
          }
          for (double& v : mean) v /= static_cast<double>(included.size());

          for (std::size_t j = 0; j < s.states.size(); ++j) {
            SpreadEntry entry;
            entry.successor = sid;
            entry.coarse_state = coarse;
            entry.other_config = labels_of(net, others, other_config);
            entry.state = s.states.label(j);
            entry.lo = entry.hi = included.front()[j];
            for (const auto& row : included) {
              entry.lo = std::min(entry.lo, row[j]);
              entry.hi = std::max(entry.hi, row[j]);
            }
            if (entry.spread() > out.report.max_spread) {
              out.report.max_spread = entry.spread();
              out.report.worst = entry;
            }
            out.report.spreads.push_back(std::move(entry));
          }
        }
        next_config(other_cards, other_config);
      }
    }

    // Assemble the successor's new CPT over the coarsened space.
    std::vector<std::vector<double>> rows;
    rows.reserve(config_count(new_cards));
    std::vector<std::size_t> config(new_cards.size(), 0);
    for (std::size_t r = 0; r < config_count(new_cards); ++r) {
      const std::size_t c = config[x_pos];
      const auto& members = map.preimage_of(map.new_space.label(c));
      if (members.size() < 2) {
        auto old_config = config;
        old_config[x_pos] = *map.old_space.index_of(members.front());
        rows.push_back(s.cpt.row(config_index(old_cards, old_config)));
      } else {
        auto other_config = config;
        other_config.erase(other_config.begin() + static_cast<std::ptrdiff_t>(x_pos));
        rows.push_back(mean_rows[c][config_index(other_cards, other_config)]);
      }
      next_config(new_cards, config);
    }
    out.new_lowers[sid] = Cpt(std::move(rows));
  }

  return out;
}

}  // namespace detail

// Report-only variant: evaluates the merge candidates and their spreads
// without touching the network. Max spread 0 means the coarsening is exact.
inline DeviationReport coarsen_deviation(const Network& net, const std::string& target,
                                         const CoarseningMap& map) {
  return detail::analyze_coarsening(net, target, map).report;
}

struct CoarsenResult {
  Network net;
  DeviationReport report;
};

// Coarsens the target in place. The merged upper CPT sums the old columns;
// each successor row is derived from the candidates. In exact mode any
// candidate disagreement above tol raises NotCoarsenableError carrying the
// report; in approximate mode disagreeing candidates are combined by their
// unweighted mean across the target's parent configurations.
inline CoarsenResult internal_coarsen(const Network& net, const std::string& target,
                                      const CoarseningMap& map,
                                      CoarsenMode mode = CoarsenMode::kExact,
                                      double tol = kDefaultTol) {
  auto analysis = detail::analyze_coarsening(net, target, map);
  if (mode == CoarsenMode::kExact && !analysis.report.exact_within(tol)) {
    std::ostringstream msg;
    msg << "states cannot be coarsened without changing the joint (max candidate spread "
        << analysis.report.max_spread << " > " << tol << ")";
    throw NotCoarsenableError(msg.str(), std::move(analysis.report));
  }

  Network out = net;
  NodeDef target_def = net.node(target);
  target_def.states = map.new_space;
  target_def.cpt = std::move(analysis.new_upper);
  out.replace_node(std::move(target_def));
  for (auto& [sid, cpt] : analysis.new_lowers) {
    NodeDef s = net.node(sid);
    s.cpt = std::move(cpt);
    out.replace_node(std::move(s));
  }
  ensure_valid(out);

  analysis.report.residual_joint_error =
      joint_equivalence(net, out, shared_vars_except(net, out, target)).max_abs_diff;
  return {std::move(out), std::move(analysis.report)};
}

}  // namespace bnr
