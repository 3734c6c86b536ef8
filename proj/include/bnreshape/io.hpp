#pragma once

// JSON file formats.
//
// Network file: {"nodes": [{"id", "states", "parents", "cpt"}, ...]} with
// "cpt" an array of rows in row-major parent-configuration order (first
// parent varies slowest). Evidence file: {"<node id>": [likelihoods...]}.
// Operation file: {"op": "refine"|"coarsen", "mode": "external"|"internal",
// "target", ...} — see parse_reshape_op.
//
// Serialization is deterministic and round-trips doubles bit-exactly.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnreshape/network.hpp"
#include "bnreshape/reshape_external.hpp"
#include "bnreshape/reshape_internal.hpp"
#include "bnreshape/types.hpp"

namespace bnr {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Network

inline Json to_json(const Network& net) {
  Json nodes = Json::array();
  for (const auto& n : net.nodes()) {
    Json node;
    node["id"] = n.id;
    node["states"] = n.states.labels;
    node["parents"] = n.parents;
    node["cpt"] = n.cpt.rows();
    nodes.push_back(std::move(node));
  }
  return Json{{"nodes", std::move(nodes)}};
}

inline Network network_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array()) {
    throw ValidationError("network file must be an object with a \"nodes\" array");
  }
  std::vector<NodeDef> nodes;
  for (const auto& item : j["nodes"]) {
    NodeDef n;
    try {
      n.id = item.at("id").get<std::string>();
      n.states = StateSpace(item.at("states").get<std::vector<std::string>>());
      n.parents = item.at("parents").get<std::vector<std::string>>();
      n.cpt = Cpt(item.at("cpt").get<std::vector<std::vector<double>>>());
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("malformed node entry: ") + e.what());
    }
    nodes.push_back(std::move(n));
  }
  return Network(std::move(nodes));
}

// ---------------------------------------------------------------------------
// Evidence

inline Json to_json(const Evidence& ev) {
  Json j = Json::object();
  for (const auto& [id, likelihood] : ev.likelihoods) j[id] = likelihood;
  return j;
}

inline Evidence evidence_from_json(const Json& j) {
  if (!j.is_object()) {
    throw ValidationError("evidence file must map node ids to likelihood arrays");
  }
  Evidence ev;
  for (const auto& [id, value] : j.items()) {
    try {
      ev.likelihoods[id] = value.get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("malformed likelihood for '") + id + "': " + e.what());
    }
  }
  return ev;
}

// ---------------------------------------------------------------------------
// Operation descriptions

enum class OpKind { kRefine, kCoarsen };
enum class OpMode { kExternal, kInternal };

// A parsed refine/coarsen request. The state map is resolved against the
// target's current state space: refinement images are concatenated in
// old-space order, coarse states are ordered by their earliest old member.
struct ReshapeOp {
  OpKind kind = OpKind::kRefine;
  OpMode mode = OpMode::kExternal;
  std::string target;
  std::string new_id;                       // external only
  std::optional<RefinementMap> refinement;  // kind == kRefine
  std::optional<CoarseningMap> coarsening;  // kind == kCoarsen
  SplitSpec split;                          // external refine
  std::optional<Cpt> upper;                 // internal refine
  std::optional<std::map<std::string, Cpt>> lower;
  CoarsenMode coarsen_mode = CoarsenMode::kExact;
  std::optional<double> tol;
};

inline ReshapeOp parse_reshape_op(const Json& j, const Network& net) {
  ReshapeOp op;
  try {
    const std::string kind = j.at("op").get<std::string>();
    if (kind == "refine") {
      op.kind = OpKind::kRefine;
    } else if (kind == "coarsen") {
      op.kind = OpKind::kCoarsen;
    } else {
      throw ValidationError("\"op\" must be \"refine\" or \"coarsen\"");
    }

    if (j.contains("mode")) {
      const std::string mode = j.at("mode").get<std::string>();
      if (mode == "external") {
        op.mode = OpMode::kExternal;
      } else if (mode == "internal") {
        op.mode = OpMode::kInternal;
      } else {
        throw ValidationError("\"mode\" must be \"external\" or \"internal\"");
      }
    }

    op.target = j.at("target").get<std::string>();
    const StateSpace& old_space = net.node(op.target).states;

    std::map<std::string, std::vector<std::string>> assignment;
    for (const auto& [key, value] : j.at("map").items()) {
      assignment[key] = value.get<std::vector<std::string>>();
    }
    if (op.kind == OpKind::kRefine) {
      op.refinement = make_refinement(old_space, assignment);
    } else {
      op.coarsening = make_coarsening(old_space, assignment);
    }

    if (j.contains("new_id")) op.new_id = j.at("new_id").get<std::string>();
    if (j.contains("split")) {
      for (const auto& [key, value] : j.at("split").items()) {
        op.split.global[key] = value.get<std::vector<double>>();
      }
    }
    if (j.contains("upper")) {
      op.upper = Cpt(j.at("upper").get<std::vector<std::vector<double>>>());
    }
    if (j.contains("lower")) {
      std::map<std::string, Cpt> lower;
      for (const auto& [key, value] : j.at("lower").items()) {
        lower[key] = Cpt(value.get<std::vector<std::vector<double>>>());
      }
      op.lower = std::move(lower);
    }
    if (j.contains("coarsen_mode")) {
      const std::string mode = j.at("coarsen_mode").get<std::string>();
      if (mode == "exact") {
        op.coarsen_mode = CoarsenMode::kExact;
      } else if (mode == "approximate") {
        op.coarsen_mode = CoarsenMode::kApproximate;
      } else {
        throw ValidationError("\"coarsen_mode\" must be \"exact\" or \"approximate\"");
      }
    }
    if (j.contains("tol")) op.tol = j.at("tol").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed operation file: ") + e.what());
  }
  return op;
}

// ---------------------------------------------------------------------------
// File helpers

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("cannot parse '" + path + "': " + e.what());
  }
}

inline Network load_network(const std::string& path) {
  return network_from_json(load_json_file(path));
}

inline Evidence load_evidence(const std::string& path) {
  return evidence_from_json(load_json_file(path));
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline void save_network(const std::string& path, const Network& net) {
  save_json(path, to_json(net));
}

}  // namespace bnr
