#include "json_detail.hpp"

#include <cmath>

namespace becphase::detail {

using nlohmann::json;

json num_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

json opt_or_null(const std::optional<double>& x) {
    if (x && std::isfinite(*x)) return *x;
    return nullptr;
}

json interval_json(const Interval& iv) { return json{{"lo", iv.lo}, {"hi", iv.hi}}; }

json mode_json(const SpatialMode& mode) {
    json j;
    j["amplitude_scale"] = mode.amplitude_scale();
    switch (mode.kind()) {
        case SpatialMode::Kind::Uniform:
            j["kind"] = "uniform";
            break;
        case SpatialMode::Kind::Gaussian:
            j["kind"] = "gaussian";
            j["center"] = mode.center();
            j["width"] = mode.width();
            break;
        case SpatialMode::Kind::PlaneWave:
            j["kind"] = "plane_wave";
            j["wavenumber"] = mode.wavenumber();
            break;
        case SpatialMode::Kind::RegionIndicator: {
            j["kind"] = "region_indicator";
            json arr = json::array();
            for (const Interval& iv : mode.intervals()) arr.push_back(interval_json(iv));
            j["intervals"] = std::move(arr);
            break;
        }
    }
    return j;
}

json detection_spec_json(const DetectionSpec& spec) {
    return json{{"position", spec.position}, {"angle", spec.angle}, {"width", spec.width}};
}

json forced_json(const std::vector<std::optional<int>>& forced) {
    json arr = json::array();
    for (const std::optional<int>& f : forced) {
        if (f)
            arr.push_back(*f);
        else
            arr.push_back(nullptr);
    }
    return arr;
}

json state_json(const ScenarioConfig& cfg) {
    json j;
    j["kind"] = cfg.use_phase_state ? "phase" : "fock";
    if (cfg.use_phase_state) j["lambda"] = cfg.lambda;
    j["n_a"] = cfg.n_a;
    j["n_b"] = cfg.n_b;
    j["mode_a"] = mode_json(cfg.modes.u_a);
    j["mode_b"] = mode_json(cfg.modes.v_b);
    return j;
}

json plan_json(const ScenarioConfig& cfg) {
    json j;
    json arr = json::array();
    for (const DetectionSpec& spec : cfg.detections) arr.push_back(detection_spec_json(spec));
    j["detections"] = std::move(arr);
    if (!cfg.forced.empty()) j["forced"] = forced_json(cfg.forced);
    if (cfg.grid_size > 0) j["grid_size"] = cfg.grid_size;
    return j;
}

json epr_section_json(const EprConfig& cfg) {
    json j;
    j["n_a"] = cfg.n_a;
    j["n_b"] = cfg.n_b;
    j["region_a"] = interval_json(cfg.geometry.region_a);
    j["region_b"] = interval_json(cfg.geometry.region_b);
    j["amplitude_scale"] = cfg.geometry.amplitude_scale;
    j["m_a"] = cfg.m_a;
    if (cfg.detection_width > 0.0) j["detection_width"] = cfg.detection_width;
    if (!cfg.angle_cycle.empty()) j["angle_cycle"] = cfg.angle_cycle;
    if (!cfg.forced.empty()) j["forced"] = forced_json(cfg.forced);
    j["probe_count"] = cfg.probe_count;
    if (cfg.probe_width > 0.0) j["probe_width"] = cfg.probe_width;
    if (cfg.grid_size > 0) j["grid_size"] = cfg.grid_size;
    return j;
}

}  // namespace becphase::detail
