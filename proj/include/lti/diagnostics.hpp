#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lti/gram.hpp"
#include "lti/kernels.hpp"

namespace lti {

enum class StabilityVerdict { bounded, diverging, inconclusive };

std::string to_string(StabilityVerdict v);

struct StabilityReport {
    std::vector<double> horizons;
    std::vector<double> l1_values;      // ∫∫_{[0,T]^2} |K| per horizon
    std::vector<double> lemma2_values;  // ∫ |∫ K(t1,t2) h(t1) dt1| dt2, probe h = 1
    StabilityVerdict verdict = StabilityVerdict::inconclusive;
};

// Trend heuristics; divergence cannot be proven numerically, so verdicts are
// evidence with an explicit inconclusive outcome.
struct StabilityThresholds {
    double bounded_rel_increment = 1e-6;  // last two increments below this x value
    double growth_fraction = 0.10;        // required growth over the last doubling
    double increment_slack = 0.95;        // "nondecreasing" up to this factor
};

using KernelFn = std::function<double(double, double)>;

// Wrap a spec for the functor-based diagnostics below.
KernelFn kernel_fn(const KernelSpec& spec);

double l1_norm_estimate(const KernelFn& kernel, double T,
                        const QuadratureConfig& q = {},
                        double char_length = 2.0);
double l1_norm_estimate(const KernelSpec& spec, double T,
                        const QuadratureConfig& q = {});

StabilityReport stability_trend(const KernelFn& kernel,
                                const std::vector<double>& horizons,
                                const QuadratureConfig& q = {},
                                const StabilityThresholds& th = {},
                                double char_length = 2.0);
StabilityReport stability_trend(const KernelSpec& spec,
                                const std::vector<double>& horizons,
                                const QuadratureConfig& q = {},
                                const StabilityThresholds& th = {});

// ∫_0^T (pi/2 - arctan t2) dt2, the Lemma-2 probe integral of the
// K = H H / (1 + (t1+t2)^2) counterexample; closed form
// T (pi/2 - arctan T) + log(1 + T^2)/2.
double counterexample_lemma2_integral(double T);
double counterexample_lemma2_closed_form(double T);

struct DegreeProbe {
    double section_time = 0.0;
    std::vector<double> derivative_estimates;  // order 0..max_order at 0+
    int estimated_degree = 0;  // 0 means undefined up to max_order
};

// One-sided finite differences of the section Ktilde_t at 0+;
// estimated_degree = 1 + smallest order with |estimate| > degree_threshold.
DegreeProbe relative_degree_probe(const KernelSpec& spec, double t, int max_order,
                                  double h_step, double degree_threshold = 1e-3);

// Centered derivative estimates of Ktilde_t at interior tau with steps h and
// h/2; agreement signals differentiability at the probed order.
std::vector<double> smoothness_probe(const KernelSpec& spec, double t, double tau,
                                     int order, double h_step);

}  // namespace lti
