#include "becphase/phase_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "becphase/numeric.hpp"

namespace becphase {

namespace {

struct LocalDensity {
    std::complex<double> u;
    std::complex<double> v;
    double d_a = 0.0;
    double d_b = 0.0;
    double cross = 0.0;
    double phase_offset = 0.0;  // -(xi + phi), see approx_engine
};

LocalDensity local_density(std::int64_t n_a, std::int64_t n_b, const ModePair& modes,
                           double r, double phi) {
    LocalDensity d;
    d.u = modes.u_a.evaluate(r);
    d.v = modes.v_b.evaluate(r);
    const double au = std::abs(d.u);
    const double av = std::abs(d.v);
    d.d_a = static_cast<double>(n_a) * au * au;
    d.d_b = static_cast<double>(n_b) * av * av;
    d.cross = 2.0 * std::sqrt(static_cast<double>(n_a) * static_cast<double>(n_b)) * au * av;
    const double xi = (au > 0.0 && av > 0.0) ? std::arg(d.u * std::conj(d.v)) : 0.0;
    d.phase_offset = -(xi + phi);
    return d;
}

void check_guard(const DoubleFockState& state, std::int64_t m) {
    if (state.n_a < 0 || state.n_b < 0 || state.n_a + state.n_b < 1)
        throw EmptyCondensate("need n_a, n_b >= 0 and n_a + n_b >= 1");
    if (m > std::min(state.n_a, state.n_b) / 10)
        throw SequenceTooLongForApproxEngine(
            "lambda averaging needs record count <= min(n_a, n_b)/10 (" + std::to_string(m) +
            " > " + std::to_string(std::min(state.n_a, state.n_b) / 10) + ")");
}

double phase_prob(const LocalDensity& d, int eta, double lambda) {
    const double total = d.d_a + d.d_b;
    const double f = total + eta * d.cross * std::cos(lambda + d.phase_offset);
    return std::clamp(f / (2.0 * total), 0.0, 1.0);
}

}  // namespace

TwoByTwoDensity TwoByTwoDensity::normalized() const {
    const double t = trace();
    return {aa / t, ab / t, ba / t, bb / t};
}

OutcomePair outcome_prob_phase(const PhaseState& state, const DetectionSpec& spec) {
    const LocalDensity d =
        local_density(state.n_a, state.n_b, state.modes, spec.position, spec.angle);
    if (!(d.d_a + d.d_b > 0.0))
        throw NoDensityAtPosition("no detectable amplitude in the window at r = " +
                                  std::to_string(spec.position));
    return {phase_prob(d, +1, state.lambda), phase_prob(d, -1, state.lambda)};
}

TwoByTwoDensity density_matrix_phase(const PhaseState& state, double r) {
    const LocalDensity d = local_density(state.n_a, state.n_b, state.modes, r, 0.0);
    if (!(d.d_a + d.d_b > 0.0))
        throw NoDensityAtPosition("no density at r = " + std::to_string(r));
    const double root = std::sqrt(static_cast<double>(state.n_a) * static_cast<double>(state.n_b));
    // Off-diagonal phased so that tr(W sigma_phi) reproduces outcome_prob_phase.
    const std::complex<double> ab =
        root * std::polar(1.0, -state.lambda) * d.u * std::conj(d.v);
    return {std::complex<double>{d.d_a, 0.0}, ab, std::conj(ab),
            std::complex<double>{d.d_b, 0.0}};
}

double z_spin_expectation(std::int64_t n_a, std::int64_t n_b, const ModePair& modes, double r) {
    const LocalDensity d = local_density(n_a, n_b, modes, r, 0.0);
    const double total = d.d_a + d.d_b;
    if (!(total > 0.0))
        throw NoDensityAtPosition("no density at r = " + std::to_string(r));
    return (d.d_a - d.d_b) / total;
}

double z_spin_expectation(const PhaseState& state, double r) {
    return z_spin_expectation(state.n_a, state.n_b, state.modes, r);
}

double z_spin_expectation(const DoubleFockState& state, double r) {
    return z_spin_expectation(state.n_a, state.n_b, state.modes, r);
}

double lambda_average(const DoubleFockState& state_template,
                      std::span<const DetectionRecord> records,
                      int grid_size) {
    const auto m = static_cast<std::int64_t>(records.size());
    check_guard(state_template, m);
    if (m == 0) return 1.0;
    const int k = grid_size > 0 ? grid_size : default_grid_size(static_cast<int>(m));
    if (k < m + 1)
        throw GridTooCoarse("grid of " + std::to_string(k) + " nodes cannot average " +
                            std::to_string(m) + " probability factors exactly");

    // Independent of the posterior machinery on purpose: per-node log sums
    // of phase-state probabilities, then a max-shifted exp average.
    std::vector<double> log_p(k, 0.0);
    for (const DetectionRecord& rec : records) {
        const LocalDensity d = local_density(state_template.n_a, state_template.n_b,
                                             state_template.modes, rec.spec.position,
                                             rec.spec.angle);
        if (!(d.d_a + d.d_b > 0.0))
            throw NoDensityAtPosition("no detectable amplitude in the window at r = " +
                                      std::to_string(rec.spec.position));
        for (int i = 0; i < k; ++i) {
            const double lambda = two_pi * static_cast<double>(i) / static_cast<double>(k);
            const double p = phase_prob(d, rec.eta, lambda);
            log_p[i] += p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
        }
    }
    const double lse = log_sum_exp(log_p);
    if (!std::isfinite(lse)) return 0.0;
    return std::exp(lse - std::log(static_cast<double>(k)));
}

}  // namespace becphase
