#pragma once

#include <json.hpp>
#include <string>

#include "fsm/fock_space.hpp"

namespace fsm {

// {"grid": {"half_width", "count"}, "n_max", "components": [{"n", "re": [...], "im": [...]}]}
nlohmann::json fock_to_json(const FockVector& v);
FockVector fock_from_json(const nlohmann::json& j);

void write_fock(const std::string& path, const FockVector& v);
FockVector read_fock(const std::string& path);

}  // namespace fsm
