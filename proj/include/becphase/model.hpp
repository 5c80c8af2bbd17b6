#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "becphase/errors.hpp"

namespace becphase {

/// Closed interval [lo, hi] on the 1-d position axis.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double r) const { return r >= lo && r <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
    bool overlaps(const Interval& other) const { return lo < other.hi && other.lo < hi; }
};

/// Where a mode amplitude is nonzero: the whole axis or a union of intervals.
struct Support {
    bool everywhere = false;
    std::vector<Interval> intervals;  // sorted and disjoint; unused when everywhere
};

/// Parametric complex one-particle wavefunction on the position axis.
/// Closed-form families only, so the probability formulas see exact
/// amplitudes instead of interpolated samples.
class SpatialMode {
public:
    enum class Kind { Uniform, Gaussian, PlaneWave, RegionIndicator };

    /// Default-constructed: uniform with unit amplitude.
    SpatialMode() = default;

    static SpatialMode uniform(double amplitude_scale = 1.0);
    /// amplitude_scale * exp(-(r-center)^2 / (2 width^2)); width > 0.
    static SpatialMode gaussian(double center, double width, double amplitude_scale = 1.0);
    /// amplitude_scale * e^{i k r}.
    static SpatialMode plane_wave(double wavenumber, double amplitude_scale = 1.0);
    /// amplitude_scale inside any of the intervals, 0 outside. Intervals are
    /// sorted; they must be nonempty and pairwise disjoint.
    static SpatialMode region_indicator(std::vector<Interval> intervals,
                                        double amplitude_scale = 1.0);

    std::complex<double> evaluate(double r) const;
    double magnitude(double r) const;
    Support support() const;

    /// Largest |amplitude| spread over the window: max - min of the magnitude.
    /// Detector windows must keep this below 1% of the window maximum.
    double magnitude_variation(const Interval& window) const;

    Kind kind() const { return kind_; }
    double amplitude_scale() const { return scale_; }
    double center() const { return center_; }
    double width() const { return width_; }
    double wavenumber() const { return wavenumber_; }
    const std::vector<Interval>& intervals() const { return intervals_; }

private:
    Kind kind_ = Kind::Uniform;
    double scale_ = 1.0;
    double center_ = 0.0;
    double width_ = 1.0;
    double wavenumber_ = 0.0;
    std::vector<Interval> intervals_;
};

/// The two condensate modes, u_a for the alpha condensate and v_b for beta.
struct ModePair {
    SpatialMode u_a;
    SpatialMode v_b;

    /// u_a(r) * conj(v_b(r)).
    std::complex<double> cross(double r) const;

    /// xi(r) = arg(u_a(r) / v_b(r)) in [0, 2*pi).
    /// Throws ZeroAmplitude where either amplitude vanishes.
    double relative_phase(double r) const;

    /// Intersection of the two supports (where interference can happen).
    Support overlap_support() const;
};

/// One planned detection: window center, transverse spin angle, window width.
struct DetectionSpec {
    double position = 0.0;
    double angle = 0.0;  // phi, radians
    double width = 0.0;  // window extent Delta

    Interval window() const {
        return {position - width / 2.0, position + width / 2.0};
    }
};

/// A detection that happened: its spec plus the outcome eta = +/-1.
struct DetectionRecord {
    DetectionSpec spec;
    int eta = +1;
};

/// Two condensates with definite particle numbers (no relative phase).
struct DoubleFockState {
    std::int64_t n_a = 0;
    std::int64_t n_b = 0;
    ModePair modes;
};

/// Two condensates sharing a definite relative phase lambda in [0, 2*pi).
class PhaseState {
public:
    PhaseState(double lambda_in, std::int64_t n_a_in, std::int64_t n_b_in, ModePair modes_in);

    double lambda;
    std::int64_t n_a;
    std::int64_t n_b;
    ModePair modes;
};

enum class Engine { Exact, LambdaIntegral, Phase };

const char* engine_name(Engine e);

/// Everything a seeded run needs: the initial state, the measurement plan,
/// and the sampling controls. Immutable once validated.
struct ScenarioConfig {
    bool use_phase_state = false;
    double lambda = 0.0;  // only read when use_phase_state
    std::int64_t n_a = 0;
    std::int64_t n_b = 0;
    ModePair modes;
    std::vector<DetectionSpec> detections;
    /// Optional forced outcomes, aligned with detections when nonempty;
    /// nullopt entries are sampled.
    std::vector<std::optional<int>> forced;
    std::int64_t ensemble_size = 1;
    std::uint64_t master_seed = 0;
    Engine engine = Engine::Exact;
    /// Posterior grid size; 0 selects max(4(m+1), 256).
    int grid_size = 0;
};

DoubleFockState fock_of(const ScenarioConfig& cfg);
PhaseState phase_of(const ScenarioConfig& cfg);

struct ConfigViolation {
    enum class Code {
        EmptyCondensate,
        OverlappingRegions,
        SequenceTooLongForApproxEngine,
        InvalidWindow,
        InvalidParameter,
    };
    Code code;
    std::string path;     // dotted field path, e.g. "plan.detections[3].width"
    std::string message;
};

const char* violation_code_name(ConfigViolation::Code code);

/// Checks every cross-field invariant and returns the complete list of
/// violations; an empty result means the config is runnable.
std::vector<ConfigViolation> validate_config(const ScenarioConfig& cfg);

/// Throws ConfigError (InvariantViolation, first offending path) listing all
/// violations; used by runners that require an already-valid config.
void ensure_valid(const ScenarioConfig& cfg);

}  // namespace becphase
