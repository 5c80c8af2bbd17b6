#include "becphase/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "becphase/numeric.hpp"

namespace becphase {

SpatialMode SpatialMode::uniform(double amplitude_scale) {
    if (!(amplitude_scale > 0.0) || !std::isfinite(amplitude_scale))
        throw std::invalid_argument("uniform mode: amplitude_scale must be positive");
    SpatialMode m;
    m.kind_ = Kind::Uniform;
    m.scale_ = amplitude_scale;
    return m;
}

SpatialMode SpatialMode::gaussian(double center, double width, double amplitude_scale) {
    if (!(width > 0.0) || !std::isfinite(width))
        throw std::invalid_argument("gaussian mode: width must be positive");
    if (!(amplitude_scale > 0.0) || !std::isfinite(amplitude_scale) || !std::isfinite(center))
        throw std::invalid_argument("gaussian mode: bad parameters");
    SpatialMode m;
    m.kind_ = Kind::Gaussian;
    m.scale_ = amplitude_scale;
    m.center_ = center;
    m.width_ = width;
    return m;
}

SpatialMode SpatialMode::plane_wave(double wavenumber, double amplitude_scale) {
    if (!(amplitude_scale > 0.0) || !std::isfinite(amplitude_scale) || !std::isfinite(wavenumber))
        throw std::invalid_argument("plane wave mode: bad parameters");
    SpatialMode m;
    m.kind_ = Kind::PlaneWave;
    m.scale_ = amplitude_scale;
    m.wavenumber_ = wavenumber;
    return m;
}

SpatialMode SpatialMode::region_indicator(std::vector<Interval> intervals,
                                          double amplitude_scale) {
    if (intervals.empty())
        throw std::invalid_argument("region indicator mode: needs at least one interval");
    if (!(amplitude_scale > 0.0) || !std::isfinite(amplitude_scale))
        throw std::invalid_argument("region indicator mode: amplitude_scale must be positive");
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (!(intervals[i].hi > intervals[i].lo))
            throw std::invalid_argument("region indicator mode: empty interval");
        if (i > 0 && intervals[i].lo < intervals[i - 1].hi)
            throw std::invalid_argument("region indicator mode: overlapping intervals");
    }
    SpatialMode m;
    m.kind_ = Kind::RegionIndicator;
    m.scale_ = amplitude_scale;
    m.intervals_ = std::move(intervals);
    return m;
}

std::complex<double> SpatialMode::evaluate(double r) const {
    switch (kind_) {
        case Kind::Uniform:
            return {scale_, 0.0};
        case Kind::Gaussian: {
            const double z = (r - center_) / width_;
            return {scale_ * std::exp(-0.5 * z * z), 0.0};
        }
        case Kind::PlaneWave:
            return std::polar(scale_, wavenumber_ * r);
        case Kind::RegionIndicator:
            for (const Interval& iv : intervals_) {
                if (iv.contains(r)) return {scale_, 0.0};
            }
            return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

double SpatialMode::magnitude(double r) const {
    return std::abs(evaluate(r));
}

Support SpatialMode::support() const {
    Support s;
    if (kind_ == Kind::RegionIndicator) {
        s.intervals = intervals_;
    } else {
        s.everywhere = true;
    }
    return s;
}

double SpatialMode::magnitude_variation(const Interval& window) const {
    switch (kind_) {
        case Kind::Uniform:
        case Kind::PlaneWave:
            return 0.0;
        case Kind::Gaussian: {
            const double at_lo = magnitude(window.lo);
            const double at_hi = magnitude(window.hi);
            if (window.contains(center_))
                return scale_ - std::min(at_lo, at_hi);
            return std::abs(at_lo - at_hi);  // monotone away from the center
        }
        case Kind::RegionIndicator:
            for (const Interval& iv : intervals_) {
                if (iv.contains(window)) return 0.0;
            }
            for (const Interval& iv : intervals_) {
                if (window.hi >= iv.lo && window.lo <= iv.hi) return scale_;  // edge inside
            }
            return 0.0;  // fully outside every interval
    }
    return 0.0;
}

namespace {

// Largest |amplitude| over the window; pairs with magnitude_variation for
// the relative 1% rule.
double magnitude_max(const SpatialMode& mode, const Interval& window) {
    switch (mode.kind()) {
        case SpatialMode::Kind::Uniform:
        case SpatialMode::Kind::PlaneWave:
            return mode.amplitude_scale();
        case SpatialMode::Kind::Gaussian:
            if (window.contains(mode.center())) return mode.amplitude_scale();
            return std::max(mode.magnitude(window.lo), mode.magnitude(window.hi));
        case SpatialMode::Kind::RegionIndicator:
            for (const Interval& iv : mode.intervals()) {
                if (window.hi >= iv.lo && window.lo <= iv.hi) return mode.amplitude_scale();
            }
            return 0.0;
    }
    return 0.0;
}

}  // namespace

std::complex<double> ModePair::cross(double r) const {
    return u_a.evaluate(r) * std::conj(v_b.evaluate(r));
}

double ModePair::relative_phase(double r) const {
    const std::complex<double> c = cross(r);
    if (std::abs(c) == 0.0)
        throw ZeroAmplitude("relative phase undefined: a mode amplitude vanishes at r");
    return wrap_angle(std::arg(c));
}

Support ModePair::overlap_support() const {
    const Support sa = u_a.support();
    const Support sb = v_b.support();
    if (sa.everywhere && sb.everywhere) return sa;
    if (sa.everywhere) return sb;
    if (sb.everywhere) return sa;
    Support out;
    for (const Interval& ia : sa.intervals) {
        for (const Interval& ib : sb.intervals) {
            const double lo = std::max(ia.lo, ib.lo);
            const double hi = std::min(ia.hi, ib.hi);
            if (hi > lo) out.intervals.push_back({lo, hi});
        }
    }
    std::sort(out.intervals.begin(), out.intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return out;
}

PhaseState::PhaseState(double lambda_in, std::int64_t n_a_in, std::int64_t n_b_in,
                       ModePair modes_in)
    : lambda(wrap_angle(lambda_in)), n_a(n_a_in), n_b(n_b_in), modes(std::move(modes_in)) {}

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::Exact: return "exact";
        case Engine::LambdaIntegral: return "lambda";
        case Engine::Phase: return "phase";
    }
    return "unknown";
}

DoubleFockState fock_of(const ScenarioConfig& cfg) {
    return DoubleFockState{cfg.n_a, cfg.n_b, cfg.modes};
}

PhaseState phase_of(const ScenarioConfig& cfg) {
    return PhaseState(cfg.lambda, cfg.n_a, cfg.n_b, cfg.modes);
}

const char* violation_code_name(ConfigViolation::Code code) {
    switch (code) {
        case ConfigViolation::Code::EmptyCondensate: return "EmptyCondensate";
        case ConfigViolation::Code::OverlappingRegions: return "OverlappingRegions";
        case ConfigViolation::Code::SequenceTooLongForApproxEngine:
            return "SequenceTooLongForApproxEngine";
        case ConfigViolation::Code::InvalidWindow: return "InvalidWindow";
        case ConfigViolation::Code::InvalidParameter: return "InvalidParameter";
    }
    return "Unknown";
}

std::vector<ConfigViolation> validate_config(const ScenarioConfig& cfg) {
    using Code = ConfigViolation::Code;
    std::vector<ConfigViolation> out;
    const auto add = [&](Code code, std::string path, std::string message) {
        out.push_back(ConfigViolation{code, std::move(path), std::move(message)});
    };

    if (cfg.n_a < 0) add(Code::EmptyCondensate, "state.n_a", "occupation must be >= 0");
    if (cfg.n_b < 0) add(Code::EmptyCondensate, "state.n_b", "occupation must be >= 0");
    if (cfg.n_a >= 0 && cfg.n_b >= 0 && cfg.n_a + cfg.n_b < 1)
        add(Code::EmptyCondensate, "state", "n_a + n_b must be at least 1");

    if (cfg.ensemble_size < 1)
        add(Code::InvalidParameter, "ensemble", "ensemble size must be >= 1");

    if ((cfg.engine == Engine::Phase) != cfg.use_phase_state)
        add(Code::InvalidParameter, "engine",
            cfg.use_phase_state ? "a phase state requires the phase engine"
                                : "the phase engine requires a phase state");

    const auto m = static_cast<std::int64_t>(cfg.detections.size());

    if (cfg.engine == Engine::Exact && m > cfg.n_a + cfg.n_b)
        add(Code::InvalidParameter, "plan",
            "more detections than particles (" + std::to_string(m) + " > " +
                std::to_string(cfg.n_a + cfg.n_b) + ")");

    if (cfg.engine == Engine::LambdaIntegral && m > std::min(cfg.n_a, cfg.n_b) / 10)
        add(Code::SequenceTooLongForApproxEngine, "plan",
            "the large-N engine needs record count <= min(n_a, n_b)/10 (" +
                std::to_string(m) + " > " + std::to_string(std::min(cfg.n_a, cfg.n_b) / 10) +
                ")");

    if (cfg.grid_size != 0 && cfg.grid_size < m + 1)
        add(Code::InvalidParameter, "grid_size",
            "posterior grid needs at least m + 1 = " + std::to_string(m + 1) + " nodes");

    if (!cfg.forced.empty() && cfg.forced.size() != cfg.detections.size())
        add(Code::InvalidParameter, "plan.forced",
            "forced outcomes must align one-to-one with detections");
    for (std::size_t i = 0; i < cfg.forced.size(); ++i) {
        if (cfg.forced[i] && *cfg.forced[i] != 1 && *cfg.forced[i] != -1)
            add(Code::InvalidParameter, "plan.forced[" + std::to_string(i) + "]",
                "forced outcome must be +1 or -1");
    }

    for (std::size_t i = 0; i < cfg.detections.size(); ++i) {
        const DetectionSpec& d = cfg.detections[i];
        const std::string base = "plan.detections[" + std::to_string(i) + "]";
        if (!std::isfinite(d.position) || !std::isfinite(d.angle) || !std::isfinite(d.width)) {
            add(Code::InvalidWindow, base, "position, angle and width must be finite");
            continue;
        }
        if (!(d.width > 0.0)) {
            add(Code::InvalidWindow, base + ".width", "window width must be positive");
            continue;
        }
        const Interval w = d.window();
        for (const SpatialMode* mode : {&cfg.modes.u_a, &cfg.modes.v_b}) {
            const double mx = magnitude_max(*mode, w);
            const double var = mode->magnitude_variation(w);
            if (mx > 0.0 && var > 0.01 * mx) {
                std::ostringstream msg;
                msg << "mode amplitude varies by " << var << " across the window (limit 1% of "
                    << mx << "); narrow the window";
                add(Code::InvalidWindow, base + ".width", msg.str());
                break;
            }
        }
    }

    for (std::size_t i = 0; i < cfg.detections.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.detections.size(); ++j) {
            if (cfg.detections[i].window().overlaps(cfg.detections[j].window()))
                add(Code::OverlappingRegions, "plan.detections[" + std::to_string(j) + "]",
                    "window overlaps plan.detections[" + std::to_string(i) + "]");
        }
    }

    return out;
}

void ensure_valid(const ScenarioConfig& cfg) {
    const std::vector<ConfigViolation> violations = validate_config(cfg);
    if (violations.empty()) return;
    std::ostringstream msg;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i > 0) msg << "; ";
        msg << violations[i].path << ": " << violations[i].message << " ["
            << violation_code_name(violations[i].code) << "]";
    }
    throw ConfigError(ConfigError::Kind::InvariantViolation, violations.front().path, msg.str());
}

}  // namespace becphase
