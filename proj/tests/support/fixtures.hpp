#pragma once

// Shared fixture networks for the test suite: a four-node vehicle
// identification model in two variants. FIG3 has a binary vehicle node; FIG7
// uses the three-state vehicle split and a different feature CPT that makes
// exact pairwise coarsening impossible.

#include <map>
#include <string>
#include <vector>

#include "bnreshape/network.hpp"
#include "bnreshape/reshape_external.hpp"
#include "bnreshape/types.hpp"

namespace fixtures {

using bnr::Cpt;
using bnr::Evidence;
using bnr::Network;
using bnr::NodeDef;
using bnr::StateSpace;

// M (military unit) -> V (vehicle present) -> F (feature); T (terrain) -> F.
inline Network fig3() {
  NodeDef m{"M", StateSpace{"A", "B"}, {}, Cpt({{0.4, 0.6}})};
  NodeDef t{"T", StateSpace{"G", "B"}, {}, Cpt({{0.7, 0.3}})};
  NodeDef v{"V", StateSpace{"Y", "N"}, {"M"}, Cpt({{0.8, 0.2}, {0.4, 0.6}})};
  NodeDef f{"F",
            StateSpace{"A", "B", "O"},
            {"V", "T"},
            Cpt({{0.45, 0.45, 0.1},    // V=Y, T=G
                 {0.3, 0.3, 0.4},      // V=Y, T=B
                 {0.1, 0.1, 0.8},      // V=N, T=G
                 {0.2, 0.2, 0.6}})};   // V=N, T=B
  return Network({m, t, v, f});
}

// Same graph with the vehicle node split into tank/truck/none; the feature
// node is declared with parents (T, V).
inline Network fig7() {
  NodeDef m{"M", StateSpace{"A", "B"}, {}, Cpt({{0.4, 0.6}})};
  NodeDef t{"T", StateSpace{"G", "B"}, {}, Cpt({{0.7, 0.3}})};
  NodeDef v{"V", StateSpace{"A", "U", "N"}, {"M"},
            Cpt({{0.3, 0.5, 0.2}, {0.1, 0.3, 0.6}})};
  NodeDef f{"F",
            StateSpace{"A", "B", "O"},
            {"T", "V"},
            Cpt({{0.4, 0.5, 0.1},      // T=G, V=A
                 {0.6, 0.3, 0.1},      // T=G, V=U
                 {0.1, 0.1, 0.8},      // T=G, V=N
                 {0.1, 0.5, 0.4},      // T=B, V=A
                 {0.4, 0.2, 0.4},      // T=B, V=U
                 {0.2, 0.2, 0.6}})};   // T=B, V=N
  return Network({m, t, v, f});
}

inline Evidence feature_evidence() {
  Evidence ev;
  ev.set("F", {0.12, 0.76, 0.05});
  return ev;
}

// Tank/truck refinement of V used throughout: Y splits 1:4, N stays.
inline bnr::RefinementMap vehicle_refinement() {
  return bnr::make_refinement(StateSpace{"Y", "N"}, {{"Y", {"A", "U"}}, {"N", {"N"}}});
}

inline bnr::SplitSpec vehicle_split() {
  bnr::SplitSpec split;
  split.global["Y"] = {0.2, 0.8};
  return split;
}

// The inverse merge on the three-state vehicle space.
inline bnr::CoarseningMap vehicle_coarsening() {
  return bnr::make_coarsening(StateSpace{"A", "U", "N"},
                              {{"Y", {"A", "U"}}, {"N", {"N"}}});
}

}  // namespace fixtures
