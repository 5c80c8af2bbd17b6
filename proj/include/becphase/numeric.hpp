#pragma once

#include <span>
#include <string>
#include <vector>

namespace becphase {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Wraps an angle into [0, 2*pi).
double wrap_angle(double a);

/// log(sum(exp(x))) with max shift; entries of -inf are skipped; empty or
/// all -inf input yields -inf.
double log_sum_exp(std::span<const double> x);

/// Median of a sample (copies and sorts; x must be nonempty).
double median(std::vector<double> x);

/// Decimal formatting with 17 significant digits, enough to round-trip a
/// double exactly; used for all CSV artifacts so outputs are byte-stable.
std::string g17(double v);

}  // namespace becphase
