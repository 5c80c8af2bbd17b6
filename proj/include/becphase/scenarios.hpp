#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "becphase/approx_engine.hpp"
#include "becphase/model.hpp"
#include "becphase/rng.hpp"

namespace becphase {

/// One realized detection inside a run, with the engine conditional of the
/// realized outcome and the posterior narrowness right after it.
struct StepRecord {
    DetectionSpec spec;
    int eta = +1;
    double conditional_p = 0.0;
    std::optional<double> posterior_mean;
    double posterior_resultant = 0.0;
    double posterior_std = 0.0;  // +inf while the posterior is flat
};

struct EnsembleSummary {
    std::int64_t runs = 0;
    double median_final_resultant = 0.0;
    double median_final_circular_std = 0.0;
    std::vector<double> final_resultants;
    std::vector<double> final_circular_stds;
};

struct RunReport {
    std::string scenario;
    Engine engine = Engine::Exact;
    std::uint64_t master_seed = 0;
    std::uint64_t run_index = 0;
    ScenarioConfig config;
    std::vector<StepRecord> steps;
    double log_weight = 0.0;  // sum of log conditional_p over steps
    CircularStats final_stats;
    std::vector<double> posterior_grid;
    std::vector<double> posterior_weights;
    std::optional<EnsembleSummary> ensemble;
    std::vector<std::string> conventions;
    std::vector<std::string> notes;
};

struct SampledStep {
    DetectionRecord record;
    double conditional_p = 0.0;
};

/// Draws outcomes for cfg.detections sequentially from the configured
/// engine's conditional distributions; honors cfg.forced entries.
/// Deterministic in (cfg, run_index).
std::vector<SampledStep> sample_sequence(const ScenarioConfig& cfg, std::uint64_t run_index);

/// Full interference run: sampled (or forced) outcomes plus the lambda
/// posterior trajectory after every step.
RunReport run_interference(const ScenarioConfig& cfg, std::uint64_t run_index);

/// Runs cfg.ensemble_size independent runs (streams derived from the master
/// seed by run index); the returned report carries run 0's trajectory plus
/// the ensemble summary.
RunReport run_interference_ensemble(const ScenarioConfig& cfg);

/// Two distant regions where both condensate modes overlap (and nowhere
/// else), built from region-indicator modes so xi = 0 across both regions.
struct EprGeometry {
    Interval region_a{-2.0, -1.0};
    Interval region_b{1.0, 2.0};
    double amplitude_scale = 1.0;

    ModePair modes() const;
};

struct EprConfig {
    std::int64_t n_a = 0;
    std::int64_t n_b = 0;
    EprGeometry geometry;
    int m_a = 0;                     // detections in region A
    double detection_width = 0.0;    // 0 = half the A spacing
    std::vector<double> angle_cycle; // empty = {0, pi/4, pi/2, 3pi/4}
    std::vector<std::optional<int>> forced;
    int probe_count = 1000;          // B-side probe windows
    double probe_width = 0.0;        // 0 = half the B probe spacing
    Engine engine = Engine::Exact;
    int grid_size = 0;
};

/// State of the remote region after each A detection: the posterior-selected
/// angle phi_lambda, the conditional polarization of one B detection at that
/// angle, and the conditional expectation of the summed phi_lambda-spin over
/// the probe windows.
struct EprStep {
    int m_a = 0;
    DetectionSpec spec;
    int eta = +1;
    double conditional_p = 0.0;
    double posterior_resultant = 0.0;
    double phi_lambda = 0.0;
    double b_polarization = 0.0;
    double summed_spin = 0.0;
};

struct EprReport {
    EprConfig config;
    std::uint64_t master_seed = 0;
    std::uint64_t run_index = 0;
    std::vector<DetectionSpec> a_specs;
    std::vector<double> probe_positions;
    double probe_width = 0.0;
    std::vector<EprStep> steps;
    std::vector<double> posterior_grid;
    std::vector<double> posterior_weights;
    std::vector<std::string> conventions;
    std::vector<std::string> notes;
};

/// Sequential A-side detections with per-step B-side conditionals.
/// Throws SpecOutsideRegion when a detection or probe window does not fit
/// inside its region.
EprReport run_epr(const EprConfig& cfg, std::uint64_t master_seed, std::uint64_t run_index = 0);

/// Spin-singlet pair measured at transverse angles phi_1, phi_2:
/// E = -cos(phi_1 - phi_2).
double bohm_singlet_correlation(double phi_1, double phi_2);

/// One sampled outcome pair (eta_1, eta_2) of the singlet measurement.
std::pair<int, int> sample_bohm_singlet(double phi_1, double phi_2, SplitMix64& rng);

/// CHSH combination E(a1,b1) - E(a1,b2) + E(a2,b1) + E(a2,b2) from the
/// closed-form singlet correlation.
double chsh_value(double a1, double a2, double b1, double b2);

/// Block z-spin correlation in the N-pair macroscopic singlet: outcomes are
/// +-N, perfectly anticorrelated, each marginal uniform.
double macroscopic_singlet_correlation(std::int64_t block_size);
std::pair<std::int64_t, std::int64_t> sample_macroscopic_singlet(std::int64_t block_size,
                                                                 SplitMix64& rng);

struct SingletReport {
    double phi_1 = 0.0;
    double phi_2 = 0.0;
    std::int64_t samples = 0;
    std::uint64_t master_seed = 0;
    double correlation_closed_form = 0.0;
    double correlation_sampled = 0.0;
};

SingletReport run_singlet(double phi_1, double phi_2, std::int64_t samples,
                          std::uint64_t master_seed);

struct MacroscopicSingletReport {
    std::int64_t block_size = 0;
    std::int64_t samples = 0;
    std::uint64_t master_seed = 0;
    double correlation_closed_form = -1.0;
    double correlation_sampled = 0.0;
    double plus_frequency_a = 0.0;       // marginal frequency of +N in block a
    double anticorrelated_fraction = 0.0;
};

MacroscopicSingletReport run_macroscopic_singlet(std::int64_t block_size, std::int64_t samples,
                                                 std::uint64_t master_seed);

/// Exact Binomial(n, p) sample by inversion with a two-sided walk outward
/// from the mode; platform-deterministic.
std::int64_t sample_binomial(std::int64_t n, double p, SplitMix64& rng);

struct WeighingReport {
    std::int64_t particles = 0;
    std::complex<double> amp_left;
    std::complex<double> amp_right;
    double p_left = 0.0;          // |a|^2 / (|a|^2 + |b|^2)
    double mean_theory = 0.0;     // N (2p - 1)
    double variance_theory = 0.0; // 4 N p (1 - p)
    std::int64_t sample_count = 0;
    std::uint64_t master_seed = 0;
    std::vector<std::int64_t> samples;  // imbalance D = N_L - N_R per sample
    double sample_mean = 0.0;
    double sample_variance = 0.0;
};

/// Weighing a superposed condensate: the left-right particle imbalance
/// D = 2 Binomial(N, p) - N, sampled exactly, with closed-form moments.
WeighingReport weighing_distribution(std::int64_t particles,
                                     std::complex<double> amp_left,
                                     std::complex<double> amp_right,
                                     std::int64_t sample_count,
                                     std::uint64_t master_seed);

/// DC Josephson current at a junction phase difference.
double dc_josephson_current(double phase_difference, double critical_current);

struct CompareRow {
    std::string outcomes;  // e.g. "++-"; '+' for eta=+1
    double p_exact = 0.0;
    double p_lambda = 0.0;
    double relative_error = 0.0;  // |exact-lambda| / lambda
};

/// Joint probabilities of every outcome string of cfg.detections under the
/// exact and large-N engines, for side-by-side comparison.
std::vector<CompareRow> compare_engines(const ScenarioConfig& cfg);

}  // namespace becphase
