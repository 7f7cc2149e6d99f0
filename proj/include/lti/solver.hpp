#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lti/gram.hpp"
#include "lti/kernels.hpp"
#include "lti/signals.hpp"

namespace lti {

// Regularized least-squares estimate: kernel spec (possibly a weighted
// mixture), the input, the sample times and the representer coefficients.
struct IdentifiedModel {
    KernelSpec spec;
    PiecewiseConstantSignal u;
    std::vector<double> times;
    Eigen::VectorXd c;
    double lambda = 0.0;
    QuadratureConfig quad;

    void validate() const;
};

struct GcvResult {
    std::vector<double> lambda_grid;
    std::vector<double> scores;
    double selected = 0.0;
};

// Solve (K + lambda I) c = y; the solution satisfies the first-order
// condition K[(K + lambda I)c - y] = 0 of the regularization objective.
// One diagonal-jitter retry (1e-12 * trace/l) before giving up.
Eigen::VectorXd fit_rls(const GramMatrix& K, const Eigen::VectorXd& y,
                        double lambda);

// h*(t) = sum_i c_i (u * K_t)(t_i); exactly 0 for t < 0.
double eval_impulse_response(const IdentifiedModel& model, double t);

// y*(t) = sum_i c_i K(t_i, t)-cross-entry; at a training time this equals
// (K c)_j with the same Gram entries.
double predict_output(const IdentifiedModel& model, double t);

// GCV(lambda) = l * ||(I - H) y||^2 / trace(I - H)^2,  H = K (K + lambda I)^{-1}.
double gcv_score(const GramMatrix& K, const Eigen::VectorXd& y, double lambda);

// Evaluate gcv_score over the grid; ties broken toward the larger lambda.
GcvResult select_lambda(const GramMatrix& K, const Eigen::VectorXd& y,
                        const std::vector<double>& grid);

std::vector<double> log_lambda_grid(double lo = 1e-8, double hi = 1e2, int n = 30);

}  // namespace lti
