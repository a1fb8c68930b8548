#pragma once

#include <string>

#include <json.hpp>

#include "omd/instance.hpp"
#include "omd/solver.hpp"

namespace omd {

// JSON schemas. Doubles are emitted with shortest round-trip precision, so
// save/load cycles reproduce every number bit-for-bit.

nlohmann::json to_json(const ProxSetup& setup);
ProxSetup setup_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

/// Full run dump: config, setup, lipschitz bound, per-step records and the
/// summary. Iterates are included only with include_iterates (they dominate
/// file size on long runs). elapsed_seconds is the one field that differs
/// between otherwise identical runs.
nlohmann::json to_json(const TraceFile& file, bool include_iterates);
TraceFile trace_from_json(const nlohmann::json& j);

void save_trace(const TraceFile& file, const std::string& path,
                bool include_iterates);
TraceFile load_trace(const std::string& path);

std::string algorithm_name(Algorithm algorithm);
Algorithm algorithm_from_name(const std::string& name);

}  // namespace omd
