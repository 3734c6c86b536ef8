#pragma once

// The external reshaping operation: append a child node carrying the new
// state space, with a CPT encoding the refinement split or the coarsening
// merge, then eliminate the target through arc reversals. The joint over
// every original node other than the target is preserved exactly; new arcs
// between the target's parents and successors appear in general.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bnreshape/graph_ops.hpp"
#include "bnreshape/network.hpp"
#include "bnreshape/types.hpp"

namespace bnr {

// Relative weights for splitting each old state over its refined states.
// `global` applies one weight vector per old state; `per_parent` gives one
// such map per parent configuration of the target (row-major order). Weights
// are aligned with the refinement image list; singleton images may be
// omitted (weight 1).
struct SplitSpec {
  using WeightMap = std::map<std::string, std::vector<double>>;

  WeightMap global;
  std::optional<std::vector<WeightMap>> per_parent;

  bool is_global() const { return !per_parent.has_value(); }
};

namespace detail {

inline std::vector<double> split_weights(const SplitSpec::WeightMap& weights,
                                         const std::string& old_label,
                                         std::size_t image_size) {
  auto it = weights.find(old_label);
  if (it == weights.end()) {
    if (image_size == 1) return {1.0};
    throw ValidationError("no split weights for refined state '" + old_label + "'");
  }
  if (it->second.size() != image_size) {
    throw ValidationError("split weights for '" + old_label +
                          "' do not match its refinement image");
  }
  double sum = 0.0;
  for (double w : it->second) {
    if (w < 0.0) throw ValidationError("negative split weight for '" + old_label + "'");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kDefaultTol) {
    throw ValidationError("split weights for '" + old_label + "' sum to " +
                          std::to_string(sum));
  }
  return it->second;
}

}  // namespace detail

// Distributes the target's old conditional over the refined states:
// p'(w'|P) = p(w|P) * weight(w'). The result satisfies the column-sum
// constraint by construction. This is also how candidate upper CPTs for the
// internal operation are built from split ratios.
inline Cpt make_upper_cpt(const Network& net, const std::string& target,
                          const RefinementMap& map, const SplitSpec& split) {
  map.check();
  const NodeDef& def = net.node(target);
  if (map.old_space != def.states) {
    throw ValidationError("refinement map does not match the states of '" + target + "'");
  }
  if (split.per_parent && split.per_parent->size() != def.cpt.n_rows()) {
    throw ValidationError("per-parent split needs one weight map per parent configuration");
  }

  Cpt upper(def.cpt.n_rows(), map.new_space.size());
  for (std::size_t r = 0; r < def.cpt.n_rows(); ++r) {
    const auto& weights = split.per_parent ? (*split.per_parent)[r] : split.global;
    std::size_t col = 0;
    for (std::size_t s = 0; s < def.states.size(); ++s) {
      const auto& image = map.image_of(def.states.label(s));
      const auto w = detail::split_weights(weights, def.states.label(s), image.size());
      for (std::size_t i = 0; i < image.size(); ++i) {
        upper.at(r, col++) = def.cpt.at(r, s) * w[i];
      }
    }
  }
  return upper;
}

namespace detail {

// Child CPT with one row per old target state, supported on the new space.
inline NodeDef mapped_child(const std::string& target, const std::string& new_id,
                            const StateSpace& old_space, const StateSpace& new_space,
                            const std::map<std::string, std::vector<std::string>>& image,
                            const SplitSpec::WeightMap* weights) {
  NodeDef child;
  child.id = new_id;
  child.states = new_space;
  child.parents = {target};
  Cpt cpt(old_space.size(), new_space.size());
  for (std::size_t s = 0; s < old_space.size(); ++s) {
    const auto& targets = image.at(old_space.label(s));
    std::vector<double> w(targets.size(), 1.0);
    if (weights) w = split_weights(*weights, old_space.label(s), targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
      cpt.at(s, *new_space.index_of(targets[i])) = w[i];
    }
  }
  child.cpt = std::move(cpt);
  return child;
}

inline void check_target_space(const Network& net, const std::string& target,
                               const StateSpace& expected, const std::string& new_id) {
  if (net.node(target).states != expected) {
    throw ValidationError("state map does not match the states of '" + target + "'");
  }
  if (net.has_node(new_id)) {
    throw ValidationError("replacement id '" + new_id + "' already exists");
  }
}

}  // namespace detail

// Refines the target's state space through an external child node. The split
// must be global: the external pathway applies the same ratio under every
// parent configuration. The new node is inserted in the target's place, so
// elimination handles it before the target's old successors.
inline Network external_refine(const Network& net, const std::string& target,
                               const RefinementMap& map, const SplitSpec& split,
                               const std::string& new_id, TransformLog* log = nullptr) {
  map.check();
  if (!split.is_global()) {
    throw ValidationError("the external operation cannot express per-parent splits");
  }
  detail::check_target_space(net, target, map.old_space, new_id);

  Network out = net;
  out.add_node(detail::mapped_child(target, new_id, map.old_space, map.new_space,
                                    map.assignment, &split.global),
               out.index_of(target) + 1);
  return eliminate_node(out, target, log);
}

// Coarsens the target's state space through an external child node whose CPT
// deterministically sends each old state to its merged state.
inline Network external_coarsen(const Network& net, const std::string& target,
                                const CoarseningMap& map, const std::string& new_id,
                                TransformLog* log = nullptr) {
  map.check();
  detail::check_target_space(net, target, map.old_space, new_id);

  // Reuse the refinement layout: old state -> singleton image {coarse state}.
  std::map<std::string, std::vector<std::string>> image;
  for (const auto& old_label : map.old_space.labels) {
    image[old_label] = {map.coarse_of(old_label)};
  }

  Network out = net;
  out.add_node(detail::mapped_child(target, new_id, map.old_space, map.new_space, image,
                                    nullptr),
               out.index_of(target) + 1);
  return eliminate_node(out, target, log);
}

}  // namespace bnr
