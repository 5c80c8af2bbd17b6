#pragma once

#include <optional>
#include <span>
#include <vector>

#include "becphase/exact_engine.hpp"  // OutcomePair
#include "becphase/model.hpp"

namespace becphase {

/// Per-detection factor parameters of the large-N integral representation:
/// the joint probability of a string is the uniform average over lambda of
/// products of f(lambda) = d_a + d_b + eta * cross * cos(lambda + phase_offset),
/// normalized by 2(d_a + d_b) per detection.
///
/// phase_offset = -(xi(r) + phi) with xi = arg(u_a/v_b): the sign is fixed by
/// agreement with the exact engine (pairwise interference terms go as
/// cos((xi_j + phi_j) - (xi_k + phi_k))); with real modes (xi = 0) this is the
/// familiar cos(lambda - phi).
struct LambdaFactorParams {
    double d_a = 0.0;          // n_a |u_a(r)|^2
    double d_b = 0.0;          // n_b |v_b(r)|^2
    double cross = 0.0;        // 2 sqrt(n_a n_b) |u_a(r)| |v_b(r)|, <= d_a + d_b
    double phase_offset = 0.0;
};

LambdaFactorParams lambda_factor_params(std::int64_t n_a, std::int64_t n_b,
                                        const ModePair& modes, const DetectionSpec& spec);
LambdaFactorParams lambda_factor_params(const DoubleFockState& state,
                                        const DetectionSpec& spec);

/// d_a + d_b + eta * cross * cos(lambda + phase_offset), clamped at zero
/// against roundoff; always in [0, 2(d_a + d_b)].
double lambda_factor(const LambdaFactorParams& params, int eta, double lambda);

/// Grid size policy: max(4(m+1), 256) nodes, comfortably past the m+1
/// exactness threshold of the periodic rectangle rule.
int default_grid_size(int history_length);

/// Posterior density of lambda on a uniform grid over [0, 2*pi),
/// accumulated one detection record at a time. Weights are carried as
/// max-normalized products with a shared log scale, so histories of
/// thousands of records neither underflow nor lose relative precision.
class LambdaPosterior {
public:
    /// Uniform density on grid_size nodes; grid_size >= 1.
    static LambdaPosterior uniform(int grid_size);

    /// Multiply in one record's factor (normalized by 2(d_a+d_b)).
    /// Throws NoDensityAtPosition when d_a + d_b = 0.
    void accumulate(const LambdaFactorParams& params, int eta);

    /// Outcome probabilities of a further detection under the current
    /// posterior, without committing it.
    OutcomePair conditional(const LambdaFactorParams& params) const;

    const std::vector<double>& grid() const { return grid_; }
    int grid_size() const { return static_cast<int>(grid_.size()); }
    int history_length() const { return history_; }

    /// Unnormalized log density at the grid nodes (-inf at exact zeros).
    std::vector<double> log_weights() const;

    /// Normalized probability masses over the grid nodes; sums to 1.
    std::vector<double> weights() const;

    /// Mean of the raw (scaled) node values times the scale: the uniform
    /// grid average of the accumulated product. Used for joint probabilities.
    double grid_average_log() const;

private:
    std::vector<double> grid_;
    std::vector<double> cos_grid_;  // cos/sin tables make the per-record
    std::vector<double> sin_grid_;  // update a pure multiply-add sweep
    std::vector<double> scaled_;    // products of f/(2(d_a+d_b)), max-renormalized
    double log_scale_ = 0.0;
    int history_ = 0;
};

/// Joint probability of an outcome string in the large-N formula; exact
/// quadrature (grid exceeds the trigonometric degree). Throws
/// SequenceTooLongForApproxEngine when records.size() > min(n_a, n_b)/10.
double joint_probability_lambda(const DoubleFockState& state,
                                std::span<const DetectionRecord> records,
                                int grid_size = 0);

/// Distribution of the next outcome given a history, as a ratio of joint
/// probabilities.
OutcomePair conditional_next(const DoubleFockState& state,
                             std::span<const DetectionRecord> history,
                             const DetectionSpec& spec,
                             int grid_size = 0);

/// Posterior over lambda after a history. Throws GridTooCoarse when
/// grid_size < m + 1 (the quadrature exactness threshold).
LambdaPosterior posterior(const DoubleFockState& state,
                          std::span<const DetectionRecord> history,
                          int grid_size);

struct CircularStats {
    /// Absent when the resultant length is below 1e-12 (flat posterior).
    std::optional<double> mean_direction;
    double resultant_length = 0.0;
    /// sqrt(-2 ln R); +infinity when the mean direction is undefined.
    double circular_std = 0.0;
};

CircularStats circular_stats(const LambdaPosterior& post);

}  // namespace becphase
