#include "lti/signals.hpp"

#include <algorithm>
#include <cmath>

#include "lti/numerics.hpp"
#include "lti/rng.hpp"

namespace lti {

void TimeDomain::validate() const {
    if (kind == Kind::discrete && !(step > 0.0))
        throw std::invalid_argument("discrete time domain requires step > 0");
}

void PiecewiseConstantSignal::validate() const {
    if (breakpoints.size() != levels.size())
        throw std::invalid_argument("breakpoints and levels must have equal length");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!std::isfinite(breakpoints[i]) || !std::isfinite(levels[i]))
            throw std::invalid_argument("signal values must be finite");
        if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
    }
}

double eval_signal(const PiecewiseConstantSignal& u, double t) {
    if (u.breakpoints.empty() || t < u.breakpoints.front()) return 0.0;
    // segment containing t: last breakpoint <= t
    auto it = std::upper_bound(u.breakpoints.begin(), u.breakpoints.end(), t);
    return u.levels[static_cast<std::size_t>(it - u.breakpoints.begin()) - 1];
}

double DiscreteSignal::at(long index) const {
    long off = index - start_index;
    if (off < 0 || off >= static_cast<long>(values.size())) return 0.0;
    return values[static_cast<std::size_t>(off)];
}

void Dataset::validate() const {
    if (samples.empty()) throw std::invalid_argument("dataset must be nonempty");
    for (const auto& [t, y] : samples)
        if (!std::isfinite(t) || !std::isfinite(y))
            throw std::invalid_argument("dataset values must be finite");
}

PiecewiseConstantSignal generate_binary_input(std::uint64_t seed, int n_switch,
                                              std::pair<double, double> interval) {
    if (n_switch < 1) throw std::invalid_argument("n_switch must be >= 1");
    if (!(interval.second > interval.first))
        throw std::invalid_argument("interval must be nonempty");
    Rng rng(seed, /*stream=*/0x5157ULL);
    std::vector<double> pts(static_cast<std::size_t>(n_switch));
    for (auto& p : pts) p = rng.uniform(interval.first, interval.second);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    PiecewiseConstantSignal u;
    u.breakpoints = std::move(pts);
    u.levels.resize(u.breakpoints.size());
    for (std::size_t i = 0; i < u.levels.size(); ++i)
        u.levels[i] = (i % 2 == 0) ? 1.0 : 0.0;
    return u;
}

double convolve_true_response(const PiecewiseConstantSignal& u, double w1,
                              double w2, double A, double t) {
    if (!(w1 > 0.0) || !(w2 > 0.0))
        throw std::invalid_argument("decay rates must be positive");
    InputProfile v = InputProfile::reversed(u, t);
    double total = 0.0;
    for (std::size_t m = 0; m < v.levels.size(); ++m) {
        if (v.levels[m] == 0.0) continue;
        double a = v.knots[m], b = v.knots[m + 1];
        total += v.levels[m] *
                 (exp_moment(1, w1, a, b) + A * exp_moment(1, w2, a, b));
    }
    return total;
}

std::vector<double> add_noise(const std::vector<double>& y0, double sigma_ratio,
                              std::uint64_t seed) {
    if (y0.empty()) throw std::invalid_argument("y0 must be nonempty");
    double mean = 0.0;
    for (double v : y0) mean += v;
    mean /= static_cast<double>(y0.size());
    double var = 0.0;  // population variance
    for (double v : y0) var += (v - mean) * (v - mean);
    var /= static_cast<double>(y0.size());
    double sigma = sigma_ratio * std::sqrt(var);
    Rng rng(seed, /*stream=*/0xA01EULL);
    std::vector<double> y = y0;
    for (auto& v : y) v += sigma * rng.normal();
    return y;
}

double InputProfile::value(double sigma) const {
    if (levels.empty() || sigma < 0.0 || sigma >= knots.back()) return 0.0;
    auto it = std::upper_bound(knots.begin(), knots.end(), sigma);
    std::size_t m = static_cast<std::size_t>(it - knots.begin());
    if (m == 0) return levels.front();
    return levels[m - 1];
}

InputProfile InputProfile::reversed(const PiecewiseConstantSignal& u, double t0) {
    InputProfile v;
    if (u.breakpoints.empty() || t0 <= u.breakpoints.front()) return v;
    double support = t0 - u.breakpoints.front();
    v.knots.push_back(0.0);
    for (auto it = u.breakpoints.rbegin(); it != u.breakpoints.rend(); ++it) {
        double s = t0 - *it;
        if (s > 0.0 && s < support) v.knots.push_back(s);
    }
    std::sort(v.knots.begin(), v.knots.end());
    v.knots.push_back(support);
    v.levels.resize(v.knots.size() - 1);
    for (std::size_t m = 0; m < v.levels.size(); ++m)
        v.levels[m] = eval_signal(u, t0 - 0.5 * (v.knots[m] + v.knots[m + 1]));
    // trim trailing zero segments
    while (!v.levels.empty() && v.levels.back() == 0.0) {
        v.levels.pop_back();
        v.knots.pop_back();
    }
    if (v.levels.empty()) v.knots.clear();
    return v;
}

}  // namespace lti
