#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lti/errors.hpp"

namespace lti {

struct TimeDomain {
    enum class Kind { continuous, discrete };
    Kind kind = Kind::continuous;
    double step = 0.0;  // positive for discrete

    void validate() const;
};

// Piecewise-constant input u(t): levels[i] holds on [breakpoints[i],
// breakpoints[i+1]), the last level extends to +inf, and u == 0 before the
// first breakpoint.
struct PiecewiseConstantSignal {
    std::vector<double> breakpoints;
    std::vector<double> levels;

    void validate() const;
};

double eval_signal(const PiecewiseConstantSignal& u, double t);

// Integer-indexed signal, zero outside the stored range.
struct DiscreteSignal {
    long start_index = 0;
    std::vector<double> values;

    double at(long index) const;
};

struct Dataset {
    std::vector<std::pair<double, double>> samples;  // (t_i, y_i)

    void validate() const;
};

// Binary {0,1} excitation: n_switch switching instants drawn uniformly in
// the interval, sorted, alternating starting at level 1.
PiecewiseConstantSignal generate_binary_input(std::uint64_t seed, int n_switch,
                                              std::pair<double, double> interval);

// (u * h)(t) for the bimodal test system h(t) = H(t) (e^{-w1 t} + A e^{-w2 t}) t,
// exact per-segment antiderivatives.
double convolve_true_response(const PiecewiseConstantSignal& u, double w1,
                              double w2, double A, double t);

// y0 + Gaussian noise with std dev sigma_ratio * population std of y0.
std::vector<double> add_noise(const std::vector<double>& y0, double sigma_ratio,
                              std::uint64_t seed);

// Time-reversed view v(sigma) = u(t0 - sigma) for sigma >= 0, stored as
// sorted segments; zero beyond support_end().  This is the shape every
// convolution integral in the Gram computations reduces to.
struct InputProfile {
    std::vector<double> knots;   // knots.front() == 0; size == levels.size() + 1
    std::vector<double> levels;  // level on [knots[m], knots[m+1])

    bool is_zero() const { return levels.empty(); }
    double support_end() const { return knots.empty() ? 0.0 : knots.back(); }
    double value(double sigma) const;

    static InputProfile reversed(const PiecewiseConstantSignal& u, double t0);
};

}  // namespace lti
