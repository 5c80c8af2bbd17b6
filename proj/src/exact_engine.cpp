#include "becphase/exact_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "becphase/numeric.hpp"

namespace becphase {

namespace {

// The two halves of applying the detected-mode annihilator to the amplitude
// vector: from_a[k+1] = e^{+i phi/2} u(r) sqrt(n_a - k) A[k] and
// from_b[k] = e^{-i phi/2} v(r) sqrt(n_b - (m-k)) A[k]. eta multiplies
// from_b at combination time.
struct StepVectors {
    std::vector<std::complex<double>> from_a;
    std::vector<std::complex<double>> from_b;
    double norm_a = 0.0;                  // ||from_a||^2
    double norm_b = 0.0;                  // ||from_b||^2
    std::complex<double> overlap{0.0, 0.0};  // <from_a, from_b>
};

StepVectors step_vectors(const ExactState& state, const DetectionSpec& spec) {
    const int m = state.detections;
    const std::int64_t n_a = state.origin.n_a;
    const std::int64_t n_b = state.origin.n_b;
    const std::complex<double> u = state.origin.modes.u_a.evaluate(spec.position);
    const std::complex<double> v = state.origin.modes.v_b.evaluate(spec.position);
    const std::complex<double> eu = std::polar(1.0, +spec.angle / 2.0) * u;
    const std::complex<double> ev = std::polar(1.0, -spec.angle / 2.0) * v;

    StepVectors sv;
    sv.from_a.assign(m + 2, {0.0, 0.0});
    sv.from_b.assign(m + 2, {0.0, 0.0});
    for (int k = 0; k <= m; ++k) {
        const std::complex<double>& a = state.amplitudes[k];
        if (a == std::complex<double>{0.0, 0.0}) continue;
        if (n_a - k > 0) sv.from_a[k + 1] += eu * std::sqrt(static_cast<double>(n_a - k)) * a;
        if (n_b - (m - k) > 0)
            sv.from_b[k] += ev * std::sqrt(static_cast<double>(n_b - (m - k))) * a;
    }
    for (int k = 0; k <= m + 1; ++k) {
        sv.norm_a += std::norm(sv.from_a[k]);
        sv.norm_b += std::norm(sv.from_b[k]);
        sv.overlap += sv.from_a[k] * std::conj(sv.from_b[k]);
    }
    return sv;
}

void check_can_detect(const ExactState& state) {
    if (state.detections >= state.origin.n_a + state.origin.n_b)
        throw CondensateExhausted("all " +
                                  std::to_string(state.origin.n_a + state.origin.n_b) +
                                  " particles already detected");
}

// log of the falling factorial n (n-1) ... (n-p+1); -inf when p > n.
double log_falling(std::int64_t n, std::int64_t p) {
    if (p > n) return -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::int64_t q = 0; q < p; ++q) s += std::log(static_cast<double>(n - q));
    return s;
}

}  // namespace

ExactState init_exact(const DoubleFockState& state) {
    if (state.n_a < 0 || state.n_b < 0 || state.n_a + state.n_b < 1)
        throw EmptyCondensate("need n_a, n_b >= 0 and n_a + n_b >= 1");
    ExactState s;
    s.origin = state;
    s.detections = 0;
    s.amplitudes = {std::complex<double>{1.0, 0.0}};
    s.log_weight = 0.0;
    return s;
}

OutcomePair outcome_probs_exact(const ExactState& state, const DetectionSpec& spec) {
    check_can_detect(state);
    const StepVectors sv = step_vectors(state, spec);
    const double total = 2.0 * (sv.norm_a + sv.norm_b);
    if (total <= 0.0)
        throw NoDensityAtPosition("no detectable amplitude in the window at r = " +
                                  std::to_string(spec.position));
    const double w_plus = sv.norm_a + sv.norm_b + 2.0 * sv.overlap.real();
    const double w_minus = sv.norm_a + sv.norm_b - 2.0 * sv.overlap.real();
    return {std::max(0.0, w_plus) / total, std::max(0.0, w_minus) / total};
}

ExactState apply_detection_exact(const ExactState& state, const DetectionRecord& record) {
    check_can_detect(state);
    const StepVectors sv = step_vectors(state, record.spec);
    const double total = 2.0 * (sv.norm_a + sv.norm_b);
    if (total <= 0.0)
        throw NoDensityAtPosition("no detectable amplitude in the window at r = " +
                                  std::to_string(record.spec.position));
    const double eta = record.eta;
    const double w = sv.norm_a + sv.norm_b + 2.0 * eta * sv.overlap.real();
    if (!(w > 0.0))
        throw ZeroProbabilityOutcome("recorded outcome eta = " + std::to_string(record.eta) +
                                     " has probability zero under this history");
    ExactState next;
    next.origin = state.origin;
    next.detections = state.detections + 1;
    next.amplitudes.assign(state.detections + 2, {0.0, 0.0});
    const double inv = 1.0 / std::sqrt(w);
    for (int k = 0; k <= state.detections + 1; ++k)
        next.amplitudes[k] = (sv.from_a[k] + eta * sv.from_b[k]) * inv;
    next.log_weight = state.log_weight + std::log(w / total);
    return next;
}

double joint_probability_exact(const DoubleFockState& state,
                               std::span<const DetectionRecord> records) {
    const auto m = static_cast<std::int64_t>(records.size());
    if (state.n_a < 0 || state.n_b < 0 || state.n_a + state.n_b < 1)
        throw EmptyCondensate("need n_a, n_b >= 0 and n_a + n_b >= 1");
    if (m > state.n_a + state.n_b)
        throw CondensateExhausted("cannot detect " + std::to_string(m) + " of " +
                                  std::to_string(state.n_a + state.n_b) + " particles");
    if (m == 0) return 1.0;

    // Numerator: squared norm of the projected state, accumulated in log
    // form over unit-normalized prefixes.
    ExactState s = init_exact(state);
    double log_num = 0.0;
    for (const DetectionRecord& rec : records) {
        const StepVectors sv = step_vectors(s, rec.spec);
        if (sv.norm_a + sv.norm_b <= 0.0)
            throw NoDensityAtPosition("no detectable amplitude in the window at r = " +
                                      std::to_string(rec.spec.position));
        const double eta = rec.eta;
        const double w = sv.norm_a + sv.norm_b + 2.0 * eta * sv.overlap.real();
        if (!(w > 0.0)) return 0.0;
        log_num += std::log(w);
        ExactState next;
        next.origin = s.origin;
        next.detections = s.detections + 1;
        next.amplitudes.assign(s.detections + 2, {0.0, 0.0});
        const double inv = 1.0 / std::sqrt(w);
        for (int k = 0; k <= s.detections + 1; ++k)
            next.amplitudes[k] = (sv.from_a[k] + eta * sv.from_b[k]) * inv;
        s = std::move(next);
    }

    // Denominator: sum of the numerator over all 2^m outcome strings. The
    // eta-sum collapses each detection to 2(|u|^2 a'a + |v|^2 b'b), so the
    // total is 2^m sum_p E_p (n_a)_p (n_b)_{m-p} with E the coefficients of
    // prod_j (|u_j|^2 t + |v_j|^2), kept normalized against overflow.
    std::vector<double> E(m + 1, 0.0);
    E[0] = 1.0;
    double log_den = static_cast<double>(m) * std::log(2.0);
    for (std::int64_t j = 0; j < m; ++j) {
        const double x = std::norm(state.modes.u_a.evaluate(records[j].spec.position));
        const double y = std::norm(state.modes.v_b.evaluate(records[j].spec.position));
        for (std::int64_t p = j + 1; p >= 1; --p) E[p] = E[p] * y + E[p - 1] * x;
        E[0] *= y;
        const double scale = x + y;  // > 0, checked by the numerator pass
        for (std::int64_t p = 0; p <= j + 1; ++p) E[p] /= scale;
        log_den += std::log(scale);
    }
    std::vector<double> terms;
    terms.reserve(m + 1);
    for (std::int64_t p = 0; p <= m; ++p) {
        if (E[p] <= 0.0) continue;
        const double t =
            std::log(E[p]) + log_falling(state.n_a, p) + log_falling(state.n_b, m - p);
        if (std::isfinite(t)) terms.push_back(t);
    }
    log_den += log_sum_exp(terms);

    return std::exp(log_num - log_den);
}

std::complex<double> field_expectation_exact(const DoubleFockState&) {
    // <a> vanishes identically in any number state: there is no
    // order-parameter phase to point anywhere.
    return {0.0, 0.0};
}

std::complex<double> coherence_ab(const ExactState& state) {
    const int m = state.detections;
    const std::int64_t n_a = state.origin.n_a;
    const std::int64_t n_b = state.origin.n_b;
    std::complex<double> g{0.0, 0.0};
    for (int k = 1; k <= m; ++k) {
        const std::int64_t fa = n_a - k + 1;       // a-count after raising from k drawn
        const std::int64_t fb = n_b - (m - k);     // b-count before lowering
        if (fa <= 0 || fb <= 0) continue;
        g += std::conj(state.amplitudes[k - 1]) * state.amplitudes[k] *
             std::sqrt(static_cast<double>(fa) * static_cast<double>(fb));
    }
    return g;
}

}  // namespace becphase
