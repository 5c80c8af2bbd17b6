#include "becphase/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace becphase {

double wrap_angle(double a) {
    double w = std::fmod(a, two_pi);
    if (w < 0.0) w += two_pi;
    // fmod can land exactly on two_pi after the correction when a is a tiny
    // negative number; fold that back to 0.
    if (w >= two_pi) w = 0.0;
    return w;
}

double log_sum_exp(std::span<const double> x) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : x) mx = std::max(mx, v);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double v : x) {
        if (std::isfinite(v)) s += std::exp(v - mx);
    }
    return mx + std::log(s);
}

double median(std::vector<double> x) {
    if (x.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    if (n % 2 == 1) return x[n / 2];
    return 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace becphase
