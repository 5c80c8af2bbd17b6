#pragma once

// Internal JSON building blocks shared by the config codec and the report
// writers. Not part of the installed API.

#include <json.hpp>

#include "becphase/model.hpp"
#include "becphase/scenarios.hpp"

namespace becphase::detail {

nlohmann::json num_or_null(double x);
nlohmann::json opt_or_null(const std::optional<double>& x);
nlohmann::json interval_json(const Interval& iv);
nlohmann::json mode_json(const SpatialMode& mode);
nlohmann::json detection_spec_json(const DetectionSpec& spec);
nlohmann::json forced_json(const std::vector<std::optional<int>>& forced);

/// The "state" object of the config schema (kind, lambda, n_a, n_b, modes).
nlohmann::json state_json(const ScenarioConfig& cfg);
/// The "plan" object of the config schema (detections, forced, grid_size).
nlohmann::json plan_json(const ScenarioConfig& cfg);
/// The "epr" object of the config schema (engine is a top-level key).
nlohmann::json epr_section_json(const EprConfig& cfg);

}  // namespace becphase::detail
