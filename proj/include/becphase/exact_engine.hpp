#pragma once

#include <complex>
#include <span>
#include <vector>

#include "becphase/model.hpp"

namespace becphase {

struct OutcomePair {
    double p_plus = 0.0;
    double p_minus = 0.0;
};

/// State of the exact second-quantized computation after m detections.
/// amplitudes[k] is the coefficient of the Fock component with k particles
/// drawn from condensate a (and m-k from b); the vector is kept normalized
/// and the running log of realized conditional probabilities lives in
/// log_weight.
struct ExactState {
    DoubleFockState origin;
    int detections = 0;
    std::vector<std::complex<double>> amplitudes;  // size detections + 1
    double log_weight = 0.0;
};

/// Throws EmptyCondensate when n_a + n_b < 1 or a count is negative.
ExactState init_exact(const DoubleFockState& state);

/// Probabilities of eta = +/-1 for the next detection, conditional on a
/// successful detection in the window. Throws CondensateExhausted when all
/// particles are already detected, NoDensityAtPosition when both mode
/// amplitudes vanish at the window.
OutcomePair outcome_probs_exact(const ExactState& state, const DetectionSpec& spec);

/// Returns the state extended by one recorded detection; amplitudes are
/// renormalized and log_weight grows by log p(record.eta). Throws
/// ZeroProbabilityOutcome when the recorded outcome cannot occur.
ExactState apply_detection_exact(const ExactState& state, const DetectionRecord& record);

/// Probability of the full outcome string, conditional on one successful
/// detection per window: |c_m ... c_1 |Phi>|^2 normalized over all 2^m
/// strings. Invariant under record permutation; equals the chain product of
/// per-step conditionals in the large-N limit.
double joint_probability_exact(const DoubleFockState& state,
                               std::span<const DetectionRecord> records);

/// <a> in a double Fock state: exactly zero (no order-parameter phase).
std::complex<double> field_expectation_exact(const DoubleFockState& state);

/// <a^dag b> in the current conditioned state; the cross-condensate
/// coherence that detections build up from zero.
std::complex<double> coherence_ab(const ExactState& state);

}  // namespace becphase
