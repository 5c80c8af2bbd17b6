#include "becphase/approx_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "becphase/numeric.hpp"

namespace becphase {

namespace {

// Threshold below which the max-renormalized products get rescaled; keeps
// thousands of sub-unity factors away from the denormal range.
constexpr double kRescaleFloor = 1e-100;

void check_guard(const DoubleFockState& state, std::int64_t m) {
    if (state.n_a < 0 || state.n_b < 0 || state.n_a + state.n_b < 1)
        throw EmptyCondensate("need n_a, n_b >= 0 and n_a + n_b >= 1");
    if (m > std::min(state.n_a, state.n_b) / 10)
        throw SequenceTooLongForApproxEngine(
            "large-N engine needs record count <= min(n_a, n_b)/10 (" + std::to_string(m) +
            " > " + std::to_string(std::min(state.n_a, state.n_b) / 10) + ")");
}

}  // namespace

LambdaFactorParams lambda_factor_params(std::int64_t n_a, std::int64_t n_b,
                                        const ModePair& modes, const DetectionSpec& spec) {
    const std::complex<double> u = modes.u_a.evaluate(spec.position);
    const std::complex<double> v = modes.v_b.evaluate(spec.position);
    const double au = std::abs(u);
    const double av = std::abs(v);
    LambdaFactorParams p;
    p.d_a = static_cast<double>(n_a) * au * au;
    p.d_b = static_cast<double>(n_b) * av * av;
    p.cross = 2.0 * std::sqrt(static_cast<double>(n_a) * static_cast<double>(n_b)) * au * av;
    // Sign fixed by the exact engine: pairwise interference carries
    // cos((xi_j + phi_j) - (xi_k + phi_k)), so each factor must read
    // cos(lambda - xi - phi).
    const double xi = (au > 0.0 && av > 0.0) ? std::arg(u * std::conj(v)) : 0.0;
    p.phase_offset = -(xi + spec.angle);
    return p;
}

LambdaFactorParams lambda_factor_params(const DoubleFockState& state,
                                        const DetectionSpec& spec) {
    return lambda_factor_params(state.n_a, state.n_b, state.modes, spec);
}

double lambda_factor(const LambdaFactorParams& params, int eta, double lambda) {
    const double f =
        params.d_a + params.d_b + eta * params.cross * std::cos(lambda + params.phase_offset);
    return std::max(0.0, f);  // AM-GM makes f >= 0; clamp roundoff
}

int default_grid_size(int history_length) {
    return std::max(4 * (history_length + 1), 256);
}

LambdaPosterior LambdaPosterior::uniform(int grid_size) {
    if (grid_size < 1) throw GridTooCoarse("posterior grid needs at least one node");
    LambdaPosterior post;
    post.grid_.resize(grid_size);
    post.cos_grid_.resize(grid_size);
    post.sin_grid_.resize(grid_size);
    post.scaled_.assign(grid_size, 1.0);
    for (int k = 0; k < grid_size; ++k) {
        post.grid_[k] = two_pi * static_cast<double>(k) / static_cast<double>(grid_size);
        post.cos_grid_[k] = std::cos(post.grid_[k]);
        post.sin_grid_[k] = std::sin(post.grid_[k]);
    }
    return post;
}

void LambdaPosterior::accumulate(const LambdaFactorParams& params, int eta) {
    const double total_density = params.d_a + params.d_b;
    if (!(total_density > 0.0))
        throw NoDensityAtPosition("no detectable amplitude at the record position");
    // f/(2D) = 1/2 + (eta V/2)(cos L cos off - sin L sin off); the tables turn
    // the sweep into multiply-adds so thousand-record histories stay cheap.
    const double half_vis = 0.5 * eta * params.cross / total_density;
    const double co = half_vis * std::cos(params.phase_offset);
    const double so = half_vis * std::sin(params.phase_offset);
    double mx = 0.0;
    for (std::size_t k = 0; k < scaled_.size(); ++k) {
        const double f = 0.5 + co * cos_grid_[k] - so * sin_grid_[k];
        scaled_[k] *= std::max(0.0, f);
        mx = std::max(mx, scaled_[k]);
    }
    if (mx > 0.0 && mx < kRescaleFloor) {
        for (double& s : scaled_) s /= mx;
        log_scale_ += std::log(mx);
    }
    ++history_;
}

OutcomePair LambdaPosterior::conditional(const LambdaFactorParams& params) const {
    const double total_density = params.d_a + params.d_b;
    if (!(total_density > 0.0))
        throw NoDensityAtPosition("no detectable amplitude at the probed position");
    double s_plus = 0.0;
    double s_minus = 0.0;
    for (std::size_t k = 0; k < scaled_.size(); ++k) {
        s_plus += scaled_[k] * lambda_factor(params, +1, grid_[k]);
        s_minus += scaled_[k] * lambda_factor(params, -1, grid_[k]);
    }
    const double total = s_plus + s_minus;
    if (!(total > 0.0))
        throw ZeroProbabilityOutcome("posterior weight is zero: impossible history");
    return {s_plus / total, s_minus / total};
}

std::vector<double> LambdaPosterior::log_weights() const {
    std::vector<double> out(scaled_.size());
    for (std::size_t k = 0; k < scaled_.size(); ++k)
        out[k] = scaled_[k] > 0.0 ? std::log(scaled_[k]) + log_scale_
                                  : -std::numeric_limits<double>::infinity();
    return out;
}

std::vector<double> LambdaPosterior::weights() const {
    double sum = 0.0;
    for (double s : scaled_) sum += s;
    if (!(sum > 0.0))
        throw ZeroProbabilityOutcome("posterior weight is zero: impossible history");
    std::vector<double> out(scaled_.size());
    for (std::size_t k = 0; k < scaled_.size(); ++k) out[k] = scaled_[k] / sum;
    return out;
}

double LambdaPosterior::grid_average_log() const {
    double sum = 0.0;
    for (double s : scaled_) sum += s;
    if (!(sum > 0.0)) return -std::numeric_limits<double>::infinity();
    return log_scale_ + std::log(sum / static_cast<double>(scaled_.size()));
}

double joint_probability_lambda(const DoubleFockState& state,
                                std::span<const DetectionRecord> records,
                                int grid_size) {
    const auto m = static_cast<std::int64_t>(records.size());
    check_guard(state, m);
    if (m == 0) return 1.0;
    const int k = grid_size > 0 ? grid_size : default_grid_size(static_cast<int>(m));
    if (k < m + 1)
        throw GridTooCoarse("grid of " + std::to_string(k) + " nodes cannot integrate " +
                            std::to_string(m) + " factors exactly");
    LambdaPosterior acc = LambdaPosterior::uniform(k);
    for (const DetectionRecord& rec : records)
        acc.accumulate(lambda_factor_params(state, rec.spec), rec.eta);
    return std::exp(acc.grid_average_log());
}

OutcomePair conditional_next(const DoubleFockState& state,
                             std::span<const DetectionRecord> history,
                             const DetectionSpec& spec,
                             int grid_size) {
    const auto m = static_cast<std::int64_t>(history.size());
    check_guard(state, m + 1);
    const int k = grid_size > 0 ? grid_size : default_grid_size(static_cast<int>(m) + 1);
    if (k < m + 2)
        throw GridTooCoarse("grid of " + std::to_string(k) + " nodes cannot integrate " +
                            std::to_string(m + 1) + " factors exactly");
    LambdaPosterior acc = LambdaPosterior::uniform(k);
    for (const DetectionRecord& rec : history)
        acc.accumulate(lambda_factor_params(state, rec.spec), rec.eta);
    return acc.conditional(lambda_factor_params(state, spec));
}

LambdaPosterior posterior(const DoubleFockState& state,
                          std::span<const DetectionRecord> history,
                          int grid_size) {
    const auto m = static_cast<std::int64_t>(history.size());
    if (grid_size < m + 1)
        throw GridTooCoarse("posterior after " + std::to_string(m) + " records needs at least " +
                            std::to_string(m + 1) + " grid nodes, got " +
                            std::to_string(grid_size));
    LambdaPosterior post = LambdaPosterior::uniform(grid_size);
    for (const DetectionRecord& rec : history)
        post.accumulate(lambda_factor_params(state, rec.spec), rec.eta);
    return post;
}

CircularStats circular_stats(const LambdaPosterior& post) {
    const std::vector<double> w = post.weights();
    const std::vector<double>& grid = post.grid();
    double c = 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        c += w[k] * std::cos(grid[k]);
        s += w[k] * std::sin(grid[k]);
    }
    const double r = std::hypot(c, s);
    CircularStats stats;
    if (r < 1e-12) {
        stats.mean_direction = std::nullopt;
        stats.resultant_length = 0.0;
        stats.circular_std = std::numeric_limits<double>::infinity();
        return stats;
    }
    stats.mean_direction = wrap_angle(std::atan2(s, c));
    stats.resultant_length = std::min(r, 1.0);
    stats.circular_std = std::sqrt(-2.0 * std::log(stats.resultant_length));
    return stats;
}

}  // namespace becphase
