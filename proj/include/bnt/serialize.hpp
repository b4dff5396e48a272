#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "bnt/embedding.hpp"
#include "bnt/identifiability.hpp"
#include "bnt/monitors.hpp"

namespace bnt {

using Json = nlohmann::json;

// Placements round-trip as {"inputs":[ids],"outputs":[ids]}.

inline Json placement_to_json(const MonitorPlacement& chi) {
  return Json{{"inputs", chi.inputs}, {"outputs", chi.outputs}};
}

inline MonitorPlacement placement_from_json(const Json& j) {
  if (!j.contains("inputs") || !j.contains("outputs"))
    throw ParseError("placement JSON needs inputs and outputs", 0);
  return MonitorPlacement(j["inputs"].get<std::vector<NodeId>>(),
                          j["outputs"].get<std::vector<NodeId>>());
}

inline MonitorPlacement placement_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("placement JSON: ") + e.what(), 0);
  }
  return placement_from_json(j);
}

inline Json ident_report_to_json(const IdentReport& r) {
  Json j;
  j["mu"] = r.mu;
  if (r.witness_pair) {
    j["witness"] = Json{{"U", r.witness_pair->first},
                        {"W", r.witness_pair->second}};
  } else {
    j["witness"] = nullptr;
  }
  j["scheme"] = to_string(r.scheme);
  j["alpha"] = r.truncation ? Json(*r.truncation) : Json(nullptr);
  j["pairs_examined"] = r.pairs_examined;
  j["lower_bound_only"] = r.lower_bound_only;
  return j;
}

inline Json bounds_to_json(const BoundsReport& b) {
  return Json{{"monitor_bound", b.monitor_bound},
              {"degree_bound", b.degree_bound},
              {"edge_bound", b.edge_bound},
              {"line_free", b.line_free}};
}

// Node maps serialize as an array of [from, to] pairs.

inline Json node_map_to_json(const NodeMap& f) {
  Json arr = Json::array();
  for (NodeId u = 0; u < f.mapping.size(); ++u)
    arr.push_back(Json::array({u, f.mapping[u]}));
  return arr;
}

inline NodeMap node_map_from_json(const Json& j, std::size_t domain_size) {
  NodeMap f;
  f.mapping.assign(domain_size, 0);
  std::vector<bool> seen(domain_size, false);
  for (const auto& pair : j) {
    NodeId from = pair.at(0).get<NodeId>();
    if (from >= domain_size || seen[from])
      throw ParseError("node map JSON: bad or repeated source id", 0);
    seen[from] = true;
    f.mapping[from] = pair.at(1).get<NodeId>();
  }
  for (bool s : seen)
    if (!s) throw ParseError("node map JSON: not total", 0);
  return f;
}

inline std::string rational_to_string(const Rational& r) {
  return r.str();
}

}  // namespace bnt
