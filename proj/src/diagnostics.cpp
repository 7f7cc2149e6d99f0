#include "lti/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "lti/numerics.hpp"

namespace lti {

std::string to_string(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::bounded: return "bounded";
        case StabilityVerdict::diverging: return "diverging";
        case StabilityVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

KernelFn kernel_fn(const KernelSpec& spec) {
    spec.validate();
    return [spec](double t1, double t2) { return kernel_eval(spec, t1, t2); };
}

namespace {

std::vector<double> axis_grid(double T, double char_length) {
    double len = std::min(char_length, T / 4.0);
    std::vector<double> pts{0.0, T};
    return limit_panel_length(pts, len);
}

double spec_char_length(const KernelSpec& spec) {
    double wmax = 0.0;
    for (const auto& a : spec.atoms) wmax = std::max(wmax, a.omega);
    switch (spec.family) {
        case KernelFamily::heaviside:
            return 1e30;
        case KernelFamily::exponential_mixture:
        case KernelFamily::warped_mixture:
            return wmax > 0.0 ? std::min(2.0, 3.0 / wmax) : 2.0;
        case KernelFamily::translation_invariant:
            if (wmax <= 0.0) return 2.0;
            return spec.ti_shape == TiShape::gaussian
                       ? std::min(2.0, 0.5 / std::sqrt(wmax))
                       : std::min(2.0, 1.5 / wmax);
    }
    return 2.0;
}

}  // namespace

double l1_norm_estimate(const KernelFn& kernel, double T,
                        const QuadratureConfig& q, double char_length) {
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    q.validate();
    std::vector<double> grid = axis_grid(T, char_length);
    PanelRule rule{q.panel_order, q.entry_rel_tol, 5};
    auto f = [&](double t1, double t2) { return std::abs(kernel(t1, t2)); };
    return integrate_panels_2d(f, grid, grid, rule, /*split_diagonal=*/true);
}

double l1_norm_estimate(const KernelSpec& spec, double T,
                        const QuadratureConfig& q) {
    if (spec.family == KernelFamily::translation_invariant && spec.delay == 0.0) {
        // |f(t1-t2)| over the square reduces to 2 * int_0^T |f(d)| (T-d) dd
        // (f is even); the 1-D form tolerates the |cos| kinks, which fall
        // inside 2-D panels and stall the tensor quadrature
        if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
        q.validate();
        auto f = [&](double d) {
            return std::abs(kernel_section(spec, d, 0.0)) * (T - d);
        };
        auto grid = limit_panel_length(
            {0.0, T}, std::min(spec_char_length(spec), T / 4.0));
        // the kink panels limit refinement to ~4x error reduction per level,
        // so allow a deep refinement budget; 1-D keeps this cheap
        return 2.0 *
               integrate_panels(f, grid, PanelRule{q.panel_order, 1e-7, 12});
    }
    return l1_norm_estimate(kernel_fn(spec), T, q, spec_char_length(spec));
}

namespace {

// ∫_0^T |∫_0^T K(t1,t2) dt1| dt2 with the probe h = 1, fixed two-level panels.
double lemma2_value(const KernelFn& kernel, double T, const QuadratureConfig& q,
                    double char_length) {
    std::vector<double> grid = axis_grid(T, char_length);
    PanelRule inner_rule{q.panel_order, 1e-6, 6};
    auto inner = [&](double t2) {
        auto f = [&](double t1) { return kernel(t1, t2); };
        // split at t1 == t2: max/min-type kernels have a crease there
        auto inner_grid = merge_breakpoints({t2}, grid, 0.0, T);
        return std::abs(integrate_panels(f, inner_grid, inner_rule));
    };
    const auto& xs = gl_nodes(q.panel_order);
    const auto& ws = gl_weights(q.panel_order);
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < grid.size(); ++p) {
        double mid = 0.5 * (grid[p] + grid[p + 1]);
        double half = 0.5 * (grid[p + 1] - grid[p]);
        for (int i = 0; i < q.panel_order; ++i)
            total += half * ws[static_cast<std::size_t>(i)] *
                     inner(mid + half * xs[static_cast<std::size_t>(i)]);
    }
    return total;
}

}  // namespace

namespace {

void check_horizons(const std::vector<double>& horizons) {
    if (horizons.size() < 3)
        throw std::invalid_argument("need at least 3 horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (!(horizons[i] > 0.0) || (i > 0 && !(horizons[i] > horizons[i - 1])))
            throw std::invalid_argument("horizons must be positive and strictly increasing");
    }
}

void classify_trend(StabilityReport& rep, const StabilityThresholds& th) {
    const auto n = rep.l1_values.size();
    std::vector<double> inc(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j)
        inc[j] = rep.l1_values[j + 1] - rep.l1_values[j];

    bool bounded = true;
    for (std::size_t j = n - 3; j + 1 < n; ++j)
        if (!(inc[j] < th.bounded_rel_increment * rep.l1_values[j + 1]))
            bounded = false;
    if (bounded) {
        rep.verdict = StabilityVerdict::bounded;
        return;
    }

    bool nondecreasing = true;
    for (std::size_t j = 0; j + 1 < inc.size(); ++j)
        if (!(inc[j + 1] >= th.increment_slack * inc[j])) nondecreasing = false;
    double growth = rep.l1_values[n - 2] > 0.0
                        ? inc[n - 2] / rep.l1_values[n - 2]
                        : 0.0;
    rep.verdict = (nondecreasing && growth > th.growth_fraction)
                      ? StabilityVerdict::diverging
                      : StabilityVerdict::inconclusive;
}

}  // namespace

StabilityReport stability_trend(const KernelFn& kernel,
                                const std::vector<double>& horizons,
                                const QuadratureConfig& q,
                                const StabilityThresholds& th,
                                double char_length) {
    check_horizons(horizons);
    StabilityReport rep;
    rep.horizons = horizons;
    for (double T : horizons) {
        rep.l1_values.push_back(l1_norm_estimate(kernel, T, q, char_length));
        rep.lemma2_values.push_back(lemma2_value(kernel, T, q, char_length));
    }
    classify_trend(rep, th);
    return rep;
}

StabilityReport stability_trend(const KernelSpec& spec,
                                const std::vector<double>& horizons,
                                const QuadratureConfig& q,
                                const StabilityThresholds& th) {
    check_horizons(horizons);
    StabilityReport rep;
    rep.horizons = horizons;
    auto fn = kernel_fn(spec);
    double len = spec_char_length(spec);
    for (double T : horizons) {
        rep.l1_values.push_back(l1_norm_estimate(spec, T, q));
        rep.lemma2_values.push_back(lemma2_value(fn, T, q, len));
    }
    classify_trend(rep, th);
    return rep;
}

double counterexample_lemma2_integral(double T) {
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    auto f = [](double t2) { return M_PI / 2.0 - std::atan(t2); };
    std::vector<double> pts = limit_panel_length({0.0, T}, 2.0);
    return integrate_panels(f, pts, PanelRule{8, 1e-12, 7});
}

double counterexample_lemma2_closed_form(double T) {
    return T * (M_PI / 2.0 - std::atan(T)) + 0.5 * std::log1p(T * T);
}

DegreeProbe relative_degree_probe(const KernelSpec& spec, double t, int max_order,
                                  double h_step, double degree_threshold) {
    spec.validate();
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    if (max_order < 0 || max_order > 4)
        throw std::invalid_argument("max_order must be in [0, 4]");
    if (!(h_step > 0.0) || !(t - max_order * h_step > 0.0))
        throw std::invalid_argument("h_step too large for this section time");
    DegreeProbe probe;
    probe.section_time = t;
    std::vector<double> g(static_cast<std::size_t>(max_order) + 1);
    for (int j = 0; j <= max_order; ++j)
        g[static_cast<std::size_t>(j)] = kernel_section(spec, t, j * h_step);
    for (int i = 0; i <= max_order; ++i) {
        // forward difference of order i at 0+
        double acc = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= i; ++j) {
            double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
            acc += sign * binom * g[static_cast<std::size_t>(j)];
            binom = binom * (i - j) / (j + 1);
        }
        probe.derivative_estimates.push_back(acc / pow_int(h_step, i));
    }
    probe.estimated_degree = 0;
    for (int i = 0; i <= max_order; ++i) {
        if (std::abs(probe.derivative_estimates[static_cast<std::size_t>(i)]) >
            degree_threshold) {
            probe.estimated_degree = i + 1;
            break;
        }
    }
    return probe;
}

std::vector<double> smoothness_probe(const KernelSpec& spec, double t, double tau,
                                     int order, double h_step) {
    spec.validate();
    if (!(t > 0.0) || !(tau > 0.0))
        throw std::invalid_argument("t and tau must be positive");
    if (order < 1 || order > 3)
        throw std::invalid_argument("order must be in [1, 3]");
    auto g = [&](double x) { return kernel_section(spec, t, x); };
    auto estimate = [&](double h) {
        switch (order) {
            case 1: return (g(tau + h) - g(tau - h)) / (2.0 * h);
            case 2: return (g(tau + h) - 2.0 * g(tau) + g(tau - h)) / (h * h);
            default:
                return (g(tau + 2 * h) - 2.0 * g(tau + h) + 2.0 * g(tau - h) -
                        g(tau - 2 * h)) / (2.0 * h * h * h);
        }
    };
    return {estimate(h_step), estimate(h_step / 2.0)};
}

}  // namespace lti
