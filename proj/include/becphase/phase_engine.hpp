#pragma once

#include <complex>
#include <span>

#include "becphase/approx_engine.hpp"
#include "becphase/model.hpp"

namespace becphase {

/// One-particle spin density matrix in the {alpha, beta} basis at a point.
struct TwoByTwoDensity {
    std::complex<double> aa;  // <alpha|W|alpha>
    std::complex<double> ab;  // <alpha|W|beta>
    std::complex<double> ba;  // <beta|W|alpha>
    std::complex<double> bb;  // <beta|W|beta>

    double trace() const { return aa.real() + bb.real(); }
    std::complex<double> determinant() const { return aa * bb - ab * ba; }
    TwoByTwoDensity normalized() const;
};

/// Detection probabilities for a state with a definite relative phase:
/// p(eta) = (1 + eta V(r) cos(lambda - xi(r) - phi)) / 2 with visibility
/// V = 2 sqrt(n_a n_b)|u_a||v_b| / (n_a|u_a|^2 + n_b|v_b|^2). Independent
/// per detection: a phase state does not update under measurement.
/// Throws NoDensityAtPosition when both densities vanish.
OutcomePair outcome_prob_phase(const PhaseState& state, const DetectionSpec& spec);

/// The (unnormalized) pure spin density matrix at r:
/// diag(n_a|u_a|^2, n_b|v_b|^2), off-diagonal sqrt(n_a n_b) e^{+-i lambda}
/// times the mode cross terms. Trace equals the local total density.
TwoByTwoDensity density_matrix_phase(const PhaseState& state, double r);

/// (n_a|u_a|^2 - n_b|v_b|^2) / (n_a|u_a|^2 + n_b|v_b|^2): identical for
/// phase and Fock descriptions and independent of lambda.
double z_spin_expectation(std::int64_t n_a, std::int64_t n_b, const ModePair& modes, double r);
double z_spin_expectation(const PhaseState& state, double r);
double z_spin_expectation(const DoubleFockState& state, double r);

/// Uniform average over lambda of the phase-state probability of the record
/// string, via the same exact quadrature as the large-N engine but computed
/// through outcome_prob_phase. Equals joint_probability_lambda identically;
/// kept as an independent code path to guard refactorings.
double lambda_average(const DoubleFockState& state_template,
                      std::span<const DetectionRecord> records,
                      int grid_size = 0);

}  // namespace becphase
