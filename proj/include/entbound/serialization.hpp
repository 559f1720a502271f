// JSON records for states: {dims, re, im} with flat row-major arrays
// for density matrices, {dims, vec_re, vec_im} for pure vectors.
#pragma once

#include "entbound/qstate.hpp"

#include <json.hpp>

#include <string>

namespace entbound {

using Json = nlohmann::json;

Json to_json(const MultipartiteState& rho);
Json to_json(const PureState& psi);

/// Validates invariants on read and throws std::invalid_argument on
/// malformed records or invariant violations.
MultipartiteState state_from_json(const Json& record);
PureState pure_from_json(const Json& record);

bool is_pure_record(const Json& record);

/// Loads either record form and returns a density operator (rank-1 for
/// pure records).
MultipartiteState load_state(const std::string& path);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& value);

}  // namespace entbound
