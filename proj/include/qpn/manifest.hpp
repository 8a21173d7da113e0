#pragma once

#include <json.hpp>
#include <string>

#include "qpn/config.hpp"

namespace qpn {

/// Configuration echo for run manifests (all resolved values, not just the
/// keys present in the source file).
nlohmann::json config_to_json(const RunConfig& cfg);

/// Common manifest envelope: tool version, schemas, status and timestamp.
nlohmann::json manifest_header(const std::string& command, const std::string& status);

}  // namespace qpn
