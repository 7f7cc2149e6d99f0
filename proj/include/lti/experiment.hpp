#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lti/gram.hpp"
#include "lti/mkl.hpp"
#include "lti/signals.hpp"

namespace lti {

// True test system h(t) = H(t) (e^{-w1 t} + amplitude e^{-w2 t}) t.
struct TrueSystem {
    double w1 = 10.0;
    double w2 = 100.0;
    double amplitude = 20.0;
};

double true_impulse(const TrueSystem& sys, double t);

struct ExperimentConfig {
    TrueSystem system;
    int n_runs = 50;
    int sample_count = 100;
    std::pair<double, double> sample_interval{0.0, 0.75};
    double noise_ratio = 0.1;
    int dictionary_size = 40;
    double omega_min = 1.0;
    double omega_max = 1000.0;
    std::vector<int> r_values{1, 2};
    int n_switch = 10;
    std::pair<double, double> input_interval{0.0, 1.0};
    std::uint64_t base_seed = 1;
    double lambda_min = 1e-8;
    double lambda_max = 1e2;
    int lambda_count = 30;
    int fit_nodes = 2001;
    // run the weight optimization essentially to full convergence: the
    // objective is nearly flat across neighboring omega atoms and a loose
    // stop leaves the mass spread over the whole cluster
    double mkl_tol = 1e-15;
    double mkl_stat_tol = 1e-10;
    int mkl_max_iter = 30000;
    QuadratureConfig quad;

    void validate() const;

    // "key = value" entries as returned by read_config_file; unknown or
    // duplicate keys are rejected.
    static ExperimentConfig parse(
        const std::vector<std::pair<std::string, std::string>>& entries,
        const std::string& source);
};

std::vector<double> log_spaced(double lo, double hi, int n);

// m single-atom min-shape warped kernels, k = r - 1, omega log-spaced,
// with Grams assembled on the given input/times.
KernelDictionary build_dictionary(const ExperimentConfig& config, int r,
                                  const PiecewiseConstantSignal& u,
                                  const std::vector<double>& times);

// Bulk evaluator for h*(t) and y*(t) of a min-shape warped-mixture model.
// Precomputes aggregated prefix tables over the union of the reversed-input
// knots so thousands of curve points cost microseconds each; agrees with
// eval_impulse_response / predict_output.
class MinMixtureCurve {
public:
    MinMixtureCurve(const KernelSpec& spec, const PiecewiseConstantSignal& u,
                    const std::vector<double>& times, const Eigen::VectorXd& c);

    double impulse_response(double t) const;
    double output(double t) const;

private:
    struct AtomTables {
        double mass = 0.0, omega = 0.0;
        std::vector<double> e_prefix;   // ∫ tau^k e^{-w tau} A(tau)
        std::vector<double> f1_prefix;  // ∫ V tau^k e^{-w tau}
        std::vector<double> f2_prefix;  // ∫ V tau^{2k+1} e^{-w tau}
    };

    void tables_at(const AtomTables& at, double sigma, double& e, double& f1,
                   double& f2) const;
    double poly_a(double sigma) const;

    KernelSpec spec_;
    PiecewiseConstantSignal u_;
    int k_ = 0;
    std::vector<double> knots_;   // union support knots, knots_[0] == 0
    std::vector<double> levels_;  // aggregated V = sum_i c_i u(t_i - .)
    std::vector<double> a_prefix_;  // A(sigma) = ∫_0^sigma V tau^k
    std::vector<AtomTables> atoms_;
};

// fit_h / fit_y percentage scores by composite trapezoid rule on [0, 1];
// n_nodes must be odd and >= 3.  Throws NumericalError on a zero denominator.
std::pair<double, double> fit_scores(const std::function<double(double)>& h_star,
                                     const std::function<double(double)>& y_star,
                                     const TrueSystem& truth,
                                     const PiecewiseConstantSignal& u,
                                     int n_nodes);

struct RunResult {
    int run = 0;
    int r = 0;
    double lambda = 0.0;
    double fit_h = 0.0;
    double fit_y = 0.0;
    int active_atoms = 0;
    bool failed = false;
    std::string error;
};

struct Quartiles {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

// Inclusive-median convention: for odd counts the median belongs to both
// halves when computing q1/q3.
Quartiles compute_quartiles(std::vector<double> values);

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RunResult> runs;  // ordered by (run, r); failed runs flagged

    std::vector<double> scores(int r, bool fit_h) const;  // successful runs only
    int excluded(int r) const;
};

// Fully deterministic given config; per-run failures are logged to *log (if
// any) and excluded from summaries.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                std::ostream* log = nullptr);

void write_report_csv(const std::string& path, const ExperimentReport& report);
void write_summary_csv(const std::string& path, const ExperimentReport& report);

}  // namespace lti
