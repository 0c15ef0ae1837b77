#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cachelease/benders.hpp"
#include "cachelease/topology.hpp"

namespace cachelease {

/// Self-contained topology document: stations, per-policy regions, window,
/// seed and grid step, enough to reproduce a run from the file alone.
nlohmann::json topology_to_json(const Topology& topology);
Topology topology_from_json(const nlohmann::json& j);

void save_topology(const Topology& topology, const std::string& path);
Topology load_topology(const std::string& path);

nlohmann::json benders_result_to_json(const BendersResult& result);

/// FNV-1a hash of a canonical dump, stamped into every artifact.
std::string config_fingerprint(const nlohmann::json& config);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace cachelease
