#pragma once

#include "json.hpp"
#include "puppetwire/estimation.hpp"
#include "puppetwire/recommend.hpp"
#include "puppetwire/runtime.hpp"

namespace puppetwire {

// Field-for-field JSON encodings of the domain types carried on the wire.
// Decoders are strict: wrong types, missing or unknown fields throw
// Error(SCHEMA_VIOLATION).

nlohmann::json sample_to_json(const SensorSample& sample);
SensorSample sample_from_json(const nlohmann::json& j);

nlohmann::json recommendation_to_json(const Recommendation& rec);
Recommendation recommendation_from_json(const nlohmann::json& j);

nlohmann::json frame_to_json(const StateFrame& frame);
StateFrame frame_from_json(const nlohmann::json& j);

}  // namespace puppetwire
