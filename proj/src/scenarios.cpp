#include "becphase/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "becphase/exact_engine.hpp"
#include "becphase/numeric.hpp"
#include "becphase/phase_engine.hpp"

namespace becphase {

namespace {

std::vector<std::string> run_conventions() {
    return {
        "probabilities are conditional on one successful detection per window; "
        "no-detection outcomes are dropped together with their vanishing-width prefactor",
        "detection windows enter the engines as points; widths feed validation "
        "(amplitude variation under 1% of the window max) and probe summation",
        "posterior densities are normalized on their quadrature grid",
        "the large-N engine accepts record counts up to min(n_a, n_b)/10",
    };
}

std::vector<std::string> epr_notes() {
    return {
        "B-side results are per-detection conditional polarizations and the conditional "
        "expectation of the probe-summed spin; single-shot statistics of the total B spin "
        "are outside what the detection formalism here supports",
    };
}

// A minimal engine-agnostic view of "what would the next detection do".
// probs() must not mutate; commit() records an outcome; coherence() returns
// the <a^dag b>-type cross coherence used for summed-spin expectations.
class Stepper {
public:
    virtual ~Stepper() = default;
    virtual OutcomePair probs(const DetectionSpec& spec) const = 0;
    virtual void commit(const DetectionRecord& rec) = 0;
    virtual std::complex<double> coherence() const = 0;
};

class ExactStepper final : public Stepper {
public:
    explicit ExactStepper(const DoubleFockState& st) : state_(init_exact(st)) {}
    OutcomePair probs(const DetectionSpec& spec) const override {
        return outcome_probs_exact(state_, spec);
    }
    void commit(const DetectionRecord& rec) override {
        state_ = apply_detection_exact(state_, rec);
    }
    std::complex<double> coherence() const override { return coherence_ab(state_); }

private:
    ExactState state_;
};

class LambdaStepper final : public Stepper {
public:
    LambdaStepper(const DoubleFockState& st, int plan_length, int grid_size)
        : state_(st),
          acc_(LambdaPosterior::uniform(
              grid_size > 0 ? grid_size : default_grid_size(plan_length + 1))) {}
    OutcomePair probs(const DetectionSpec& spec) const override {
        return acc_.conditional(lambda_factor_params(state_, spec));
    }
    void commit(const DetectionRecord& rec) override {
        acc_.accumulate(lambda_factor_params(state_, rec.spec), rec.eta);
    }
    std::complex<double> coherence() const override {
        const std::vector<double> w = acc_.weights();
        const std::vector<double>& grid = acc_.grid();
        std::complex<double> dir{0.0, 0.0};
        for (std::size_t k = 0; k < w.size(); ++k) dir += w[k] * std::polar(1.0, grid[k]);
        return std::sqrt(static_cast<double>(state_.n_a) * static_cast<double>(state_.n_b)) *
               dir;
    }

private:
    DoubleFockState state_;
    LambdaPosterior acc_;
};

class PhaseStepper final : public Stepper {
public:
    explicit PhaseStepper(PhaseState st) : state_(std::move(st)) {}
    OutcomePair probs(const DetectionSpec& spec) const override {
        return outcome_prob_phase(state_, spec);
    }
    void commit(const DetectionRecord&) override {}  // no back-action on a phase state
    std::complex<double> coherence() const override {
        return std::sqrt(static_cast<double>(state_.n_a) * static_cast<double>(state_.n_b)) *
               std::polar(1.0, state_.lambda);
    }

private:
    PhaseState state_;
};

std::unique_ptr<Stepper> make_stepper(const ScenarioConfig& cfg) {
    switch (cfg.engine) {
        case Engine::Exact:
            return std::make_unique<ExactStepper>(fock_of(cfg));
        case Engine::LambdaIntegral:
            return std::make_unique<LambdaStepper>(
                fock_of(cfg), static_cast<int>(cfg.detections.size()), cfg.grid_size);
        case Engine::Phase:
            return std::make_unique<PhaseStepper>(phase_of(cfg));
    }
    throw std::logic_error("unreachable engine kind");
}

double realized_probability(const OutcomePair& p, int eta) {
    return eta > 0 ? p.p_plus : p.p_minus;
}

}  // namespace

std::vector<SampledStep> sample_sequence(const ScenarioConfig& cfg, std::uint64_t run_index) {
    ensure_valid(cfg);
    std::unique_ptr<Stepper> stepper = make_stepper(cfg);
    SplitMix64 rng = stream_for(cfg.master_seed, run_index);
    std::vector<SampledStep> out;
    out.reserve(cfg.detections.size());
    for (std::size_t i = 0; i < cfg.detections.size(); ++i) {
        const DetectionSpec& spec = cfg.detections[i];
        const OutcomePair p = stepper->probs(spec);
        const std::optional<int> forced =
            cfg.forced.empty() ? std::nullopt : cfg.forced[i];
        const int eta = forced ? *forced : rng.next_sign(p.p_plus);
        const double realized = realized_probability(p, eta);
        if (!(realized > 0.0))
            throw ZeroProbabilityOutcome("forced outcome at step " + std::to_string(i) +
                                         " has probability zero");
        stepper->commit(DetectionRecord{spec, eta});
        out.push_back(SampledStep{DetectionRecord{spec, eta}, realized});
    }
    return out;
}

RunReport run_interference(const ScenarioConfig& cfg, std::uint64_t run_index) {
    const std::vector<SampledStep> sampled = sample_sequence(cfg, run_index);
    const int m = static_cast<int>(sampled.size());
    const int grid = cfg.grid_size > 0 ? cfg.grid_size : default_grid_size(m);

    RunReport report;
    report.scenario = "interference";
    report.engine = cfg.engine;
    report.master_seed = cfg.master_seed;
    report.run_index = run_index;
    report.config = cfg;
    report.conventions = run_conventions();

    LambdaPosterior post = LambdaPosterior::uniform(grid);
    for (const SampledStep& step : sampled) {
        post.accumulate(
            lambda_factor_params(cfg.n_a, cfg.n_b, cfg.modes, step.record.spec),
            step.record.eta);
        const CircularStats stats = circular_stats(post);
        report.log_weight += std::log(step.conditional_p);
        report.steps.push_back(StepRecord{step.record.spec, step.record.eta,
                                          step.conditional_p, stats.mean_direction,
                                          stats.resultant_length, stats.circular_std});
    }
    report.final_stats = circular_stats(post);
    report.posterior_grid = post.grid();
    report.posterior_weights = post.weights();
    return report;
}

RunReport run_interference_ensemble(const ScenarioConfig& cfg) {
    ensure_valid(cfg);
    RunReport first;
    EnsembleSummary summary;
    summary.runs = cfg.ensemble_size;
    for (std::int64_t i = 0; i < cfg.ensemble_size; ++i) {
        RunReport r = run_interference(cfg, static_cast<std::uint64_t>(i));
        summary.final_resultants.push_back(r.final_stats.resultant_length);
        summary.final_circular_stds.push_back(r.final_stats.circular_std);
        if (i == 0) first = std::move(r);
    }
    summary.median_final_resultant = median(summary.final_resultants);
    summary.median_final_circular_std = median(summary.final_circular_stds);
    if (cfg.ensemble_size > 1) first.ensemble = std::move(summary);
    return first;
}

ModePair EprGeometry::modes() const {
    return ModePair{
        SpatialMode::region_indicator({region_a, region_b}, amplitude_scale),
        SpatialMode::region_indicator({region_a, region_b}, amplitude_scale)};
}

EprReport run_epr(const EprConfig& cfg, std::uint64_t master_seed, std::uint64_t run_index) {
    using Kind = ConfigError::Kind;
    const Interval a = cfg.geometry.region_a;
    const Interval b = cfg.geometry.region_b;
    if (!(a.hi > a.lo)) throw ConfigError(Kind::InvariantViolation, "epr.region_a", "empty region");
    if (!(b.hi > b.lo)) throw ConfigError(Kind::InvariantViolation, "epr.region_b", "empty region");
    if (a.overlaps(b))
        throw ConfigError(Kind::InvariantViolation, "epr.region_b",
                          "regions A and B must be disjoint");
    if (cfg.n_a < 1 || cfg.n_b < 1)
        throw ConfigError(Kind::InvariantViolation, "epr.n_a",
                          "both condensates must be occupied");
    if (cfg.m_a < 1)
        throw ConfigError(Kind::InvariantViolation, "epr.m_a", "need at least one A detection");
    if (cfg.probe_count < 1)
        throw ConfigError(Kind::InvariantViolation, "epr.probes", "need at least one probe");
    if (!cfg.forced.empty() && static_cast<int>(cfg.forced.size()) != cfg.m_a)
        throw ConfigError(Kind::InvariantViolation, "epr.forced",
                          "forced outcomes must align one-to-one with A detections");
    if (cfg.engine == Engine::Phase)
        throw ConfigError(Kind::InvariantViolation, "engine",
                          "the EPR scenario studies Fock-state emergence; use exact or lambda");
    if (cfg.engine == Engine::Exact && cfg.m_a > cfg.n_a + cfg.n_b)
        throw ConfigError(Kind::InvariantViolation, "epr.m_a", "more detections than particles");
    if (cfg.engine == Engine::LambdaIntegral &&
        static_cast<std::int64_t>(cfg.m_a) + 1 > std::min(cfg.n_a, cfg.n_b) / 10)
        throw SequenceTooLongForApproxEngine(
            "lambda engine needs m_a + 1 <= min(n_a, n_b)/10");

    const ModePair modes = cfg.geometry.modes();
    const DoubleFockState state{cfg.n_a, cfg.n_b, modes};

    // A-side detection windows on an even grid; angles cycle through the
    // configured schedule (two or more distinct angles break the posterior's
    // reflection degeneracy).
    const std::vector<double> angles =
        cfg.angle_cycle.empty() ? std::vector<double>{0.0, pi / 4.0, pi / 2.0, 3.0 * pi / 4.0}
                                : cfg.angle_cycle;
    const double spacing = a.length() / static_cast<double>(cfg.m_a);
    const double width = cfg.detection_width > 0.0 ? cfg.detection_width : spacing / 2.0;
    std::vector<DetectionSpec> a_specs;
    a_specs.reserve(cfg.m_a);
    for (int i = 0; i < cfg.m_a; ++i) {
        DetectionSpec spec;
        spec.position = a.lo + (static_cast<double>(i) + 0.5) * spacing;
        spec.angle = angles[static_cast<std::size_t>(i) % angles.size()];
        spec.width = width;
        if (!a.contains(spec.window()))
            throw SpecOutsideRegion("A detection window " + std::to_string(i) +
                                    " reaches outside region A; shrink detection_width");
        a_specs.push_back(spec);
    }
    for (std::size_t i = 1; i < a_specs.size(); ++i) {
        if (a_specs[i - 1].window().overlaps(a_specs[i].window()))
            throw ConfigError(Kind::InvariantViolation, "epr.detection_width",
                              "adjacent A windows overlap");
    }

    // B-side probe windows.
    const double probe_spacing = b.length() / static_cast<double>(cfg.probe_count);
    const double probe_width =
        cfg.probe_width > 0.0 ? cfg.probe_width : probe_spacing / 2.0;
    std::vector<double> probe_positions;
    probe_positions.reserve(cfg.probe_count);
    std::complex<double> probe_coef{0.0, 0.0};  // sum of width * conj(u) v over probes
    for (int i = 0; i < cfg.probe_count; ++i) {
        const double pos = b.lo + (static_cast<double>(i) + 0.5) * probe_spacing;
        const Interval window{pos - probe_width / 2.0, pos + probe_width / 2.0};
        if (!b.contains(window))
            throw SpecOutsideRegion("probe window " + std::to_string(i) +
                                    " reaches outside region B; shrink probe_width");
        probe_positions.push_back(pos);
        probe_coef += probe_width * std::conj(modes.u_a.evaluate(pos)) * modes.v_b.evaluate(pos);
    }
    const double xi_b = modes.relative_phase(probe_positions.front());

    EprReport report;
    report.config = cfg;
    report.master_seed = master_seed;
    report.run_index = run_index;
    report.a_specs = a_specs;
    report.probe_positions = probe_positions;
    report.probe_width = probe_width;
    report.conventions = run_conventions();
    report.notes = epr_notes();

    std::unique_ptr<Stepper> stepper;
    if (cfg.engine == Engine::Exact)
        stepper = std::make_unique<ExactStepper>(state);
    else
        stepper = std::make_unique<LambdaStepper>(state, cfg.m_a, cfg.grid_size);

    const int grid = cfg.grid_size > 0 ? cfg.grid_size : default_grid_size(cfg.m_a);
    LambdaPosterior post = LambdaPosterior::uniform(grid);
    SplitMix64 rng = stream_for(master_seed, run_index);

    for (int i = 0; i < cfg.m_a; ++i) {
        const DetectionSpec& spec = a_specs[i];
        const OutcomePair p = stepper->probs(spec);
        const std::optional<int> forced = cfg.forced.empty() ? std::nullopt : cfg.forced[i];
        const int eta = forced ? *forced : rng.next_sign(p.p_plus);
        const double realized = realized_probability(p, eta);
        if (!(realized > 0.0))
            throw ZeroProbabilityOutcome("forced outcome at A step " + std::to_string(i) +
                                         " has probability zero");
        stepper->commit(DetectionRecord{spec, eta});
        post.accumulate(lambda_factor_params(state, spec), eta);

        const CircularStats stats = circular_stats(post);
        // Best B angle under the posterior: phi maximizing the +1 probability
        // at a posterior peak lambda* is lambda* - xi(r_B).
        const double phi_lambda =
            wrap_angle(stats.mean_direction.value_or(0.0) - xi_b);
        DetectionSpec b_spec;
        b_spec.position = probe_positions.front();
        b_spec.angle = phi_lambda;
        b_spec.width = probe_width;
        const OutcomePair bp = stepper->probs(b_spec);
        const double summed =
            2.0 * (std::polar(1.0, -phi_lambda) * probe_coef * stepper->coherence()).real();

        report.steps.push_back(EprStep{i + 1, spec, eta, realized, stats.resultant_length,
                                       phi_lambda, bp.p_plus - bp.p_minus, summed});
    }
    report.posterior_grid = post.grid();
    report.posterior_weights = post.weights();
    return report;
}

double bohm_singlet_correlation(double phi_1, double phi_2) {
    return -std::cos(phi_1 - phi_2);
}

std::pair<int, int> sample_bohm_singlet(double phi_1, double phi_2, SplitMix64& rng) {
    // Marginals are unbiased; the pair product is +1 with probability
    // (1 - cos(phi_1 - phi_2))/2, matching E = -cos.
    const int eta_1 = rng.next_sign(0.5);
    const double p_same = 0.5 * (1.0 - std::cos(phi_1 - phi_2));
    const int eta_2 = rng.next_double() < p_same ? eta_1 : -eta_1;
    return {eta_1, eta_2};
}

double chsh_value(double a1, double a2, double b1, double b2) {
    return std::abs(bohm_singlet_correlation(a1, b1) - bohm_singlet_correlation(a1, b2) +
                    bohm_singlet_correlation(a2, b1) + bohm_singlet_correlation(a2, b2));
}

SingletReport run_singlet(double phi_1, double phi_2, std::int64_t samples,
                          std::uint64_t master_seed) {
    if (samples < 1) throw ConfigError(ConfigError::Kind::InvariantViolation,
                                       "singlet.samples", "need at least one sample");
    SingletReport report;
    report.phi_1 = phi_1;
    report.phi_2 = phi_2;
    report.samples = samples;
    report.master_seed = master_seed;
    report.correlation_closed_form = bohm_singlet_correlation(phi_1, phi_2);
    SplitMix64 rng = stream_for(master_seed, 0);
    std::int64_t product_sum = 0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const auto [e1, e2] = sample_bohm_singlet(phi_1, phi_2, rng);
        product_sum += e1 * e2;
    }
    report.correlation_sampled =
        static_cast<double>(product_sum) / static_cast<double>(samples);
    return report;
}

double macroscopic_singlet_correlation(std::int64_t block_size) {
    if (block_size < 1) throw std::invalid_argument("block size must be >= 1");
    return -1.0;  // z outcomes are +-N with opposite signs by construction
}

std::pair<std::int64_t, std::int64_t> sample_macroscopic_singlet(std::int64_t block_size,
                                                                 SplitMix64& rng) {
    if (block_size < 1) throw std::invalid_argument("block size must be >= 1");
    const std::int64_t z_a = rng.next_sign(0.5) > 0 ? block_size : -block_size;
    return {z_a, -z_a};
}

MacroscopicSingletReport run_macroscopic_singlet(std::int64_t block_size, std::int64_t samples,
                                                 std::uint64_t master_seed) {
    if (samples < 1)
        throw ConfigError(ConfigError::Kind::InvariantViolation, "macroscopic_singlet.samples",
                          "need at least one sample");
    MacroscopicSingletReport report;
    report.block_size = block_size;
    report.samples = samples;
    report.master_seed = master_seed;
    report.correlation_closed_form = macroscopic_singlet_correlation(block_size);
    SplitMix64 rng = stream_for(master_seed, 0);
    double product_sum = 0.0;
    std::int64_t plus_count = 0;
    std::int64_t anti_count = 0;
    const double scale = static_cast<double>(block_size) * static_cast<double>(block_size);
    for (std::int64_t i = 0; i < samples; ++i) {
        const auto [z_a, z_b] = sample_macroscopic_singlet(block_size, rng);
        product_sum += static_cast<double>(z_a) * static_cast<double>(z_b) / scale;
        if (z_a > 0) ++plus_count;
        if (z_a == -z_b) ++anti_count;
    }
    report.correlation_sampled = product_sum / static_cast<double>(samples);
    report.plus_frequency_a =
        static_cast<double>(plus_count) / static_cast<double>(samples);
    report.anticorrelated_fraction =
        static_cast<double>(anti_count) / static_cast<double>(samples);
    return report;
}

std::int64_t sample_binomial(std::int64_t n, double p, SplitMix64& rng) {
    if (n < 0) throw std::invalid_argument("binomial needs n >= 0");
    if (n == 0) return 0;
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;

    // Inversion with a two-sided walk outward from the mode: the expected
    // number of pmf evaluations is O(sqrt(n p (1-p))) and the draw is exact.
    const double q = 1.0 - p;
    std::int64_t mode = static_cast<std::int64_t>((static_cast<double>(n) + 1.0) * p);
    mode = std::clamp<std::int64_t>(mode, 0, n);
    const double log_pmf_mode = std::lgamma(static_cast<double>(n) + 1.0) -
                                std::lgamma(static_cast<double>(mode) + 1.0) -
                                std::lgamma(static_cast<double>(n - mode) + 1.0) +
                                static_cast<double>(mode) * std::log(p) +
                                static_cast<double>(n - mode) * std::log1p(-p);
    const double pmf_mode = std::exp(log_pmf_mode);

    const double u = rng.next_double();
    double acc = pmf_mode;
    if (u < acc) return mode;
    std::int64_t lo = mode;
    std::int64_t hi = mode;
    double pmf_lo = pmf_mode;
    double pmf_hi = pmf_mode;
    while (lo > 0 || hi < n) {
        if (hi < n) {
            pmf_hi *= static_cast<double>(n - hi) * p /
                      (static_cast<double>(hi + 1) * q);
            ++hi;
            acc += pmf_hi;
            if (u < acc) return hi;
        }
        if (lo > 0) {
            pmf_lo *= static_cast<double>(lo) * q /
                      (static_cast<double>(n - lo + 1) * p);
            --lo;
            acc += pmf_lo;
            if (u < acc) return lo;
        }
    }
    return mode;  // only reachable through roundoff in the far tail
}

WeighingReport weighing_distribution(std::int64_t particles,
                                     std::complex<double> amp_left,
                                     std::complex<double> amp_right,
                                     std::int64_t sample_count,
                                     std::uint64_t master_seed) {
    using Kind = ConfigError::Kind;
    if (particles < 1)
        throw ConfigError(Kind::InvariantViolation, "weighing.particles", "need N >= 1");
    if (sample_count < 1)
        throw ConfigError(Kind::InvariantViolation, "weighing.samples",
                          "need at least one sample");
    const double wl = std::norm(amp_left);
    const double wr = std::norm(amp_right);
    if (!(wl + wr > 0.0))
        throw ConfigError(Kind::InvariantViolation, "weighing.amp_left",
                          "amplitudes must not both vanish");

    WeighingReport report;
    report.particles = particles;
    report.amp_left = amp_left;
    report.amp_right = amp_right;
    report.p_left = wl / (wl + wr);
    report.mean_theory = static_cast<double>(particles) * (2.0 * report.p_left - 1.0);
    report.variance_theory =
        4.0 * static_cast<double>(particles) * report.p_left * (1.0 - report.p_left);
    report.sample_count = sample_count;
    report.master_seed = master_seed;
    report.samples.reserve(sample_count);

    SplitMix64 rng = stream_for(master_seed, 0);
    double sum = 0.0;
    for (std::int64_t i = 0; i < sample_count; ++i) {
        const std::int64_t left = sample_binomial(particles, report.p_left, rng);
        const std::int64_t d = 2 * left - particles;
        report.samples.push_back(d);
        sum += static_cast<double>(d);
    }
    report.sample_mean = sum / static_cast<double>(sample_count);
    double ss = 0.0;
    for (std::int64_t d : report.samples) {
        const double dev = static_cast<double>(d) - report.sample_mean;
        ss += dev * dev;
    }
    report.sample_variance =
        sample_count > 1 ? ss / static_cast<double>(sample_count - 1) : 0.0;
    return report;
}

double dc_josephson_current(double phase_difference, double critical_current) {
    if (critical_current < 0.0)
        throw std::invalid_argument("critical current must be nonnegative");
    return critical_current * std::sin(phase_difference);
}

std::vector<CompareRow> compare_engines(const ScenarioConfig& cfg) {
    ensure_valid(cfg);
    const int m = static_cast<int>(cfg.detections.size());
    if (m > 16)
        throw ConfigError(ConfigError::Kind::InvariantViolation, "plan",
                          "comparison enumerates 2^m strings; keep m <= 16");
    const DoubleFockState state = fock_of(cfg);
    std::vector<CompareRow> rows;
    rows.reserve(std::size_t{1} << m);
    std::vector<DetectionRecord> records(cfg.detections.size());
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
        CompareRow row;
        for (int j = 0; j < m; ++j) {
            const int eta = (s >> j) & 1 ? +1 : -1;
            records[j] = DetectionRecord{cfg.detections[j], eta};
            row.outcomes.push_back(eta > 0 ? '+' : '-');
        }
        row.p_exact = joint_probability_exact(state, records);
        row.p_lambda = joint_probability_lambda(state, records, cfg.grid_size);
        const double denom = row.p_lambda > 0.0 ? row.p_lambda
                             : row.p_exact > 0.0 ? row.p_exact
                                                 : 1.0;
        row.relative_error = std::abs(row.p_exact - row.p_lambda) / denom;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace becphase
