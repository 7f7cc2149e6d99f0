#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lti/gram.hpp"
#include "lti/kernels.hpp"

namespace lti {

struct KernelDictionary {
    std::vector<KernelSpec> basis;
    std::vector<GramMatrix> grams;  // same sample times

    void validate() const;
    Eigen::Index sample_count() const;
};

struct MklOptions {
    double lambda = 1.0;
    double tol = 1e-9;        // relative objective decrease stopping rule
    double stat_tol = 1e-8;   // stationarity stopping rule (gradient map with
                              // the infinity-normalized gradient)
    int max_iter = 500;
    double armijo = 1e-4;
    double weight_clamp = 1e-14;  // weights below this are snapped to zero
};

struct MklModel {
    Eigen::VectorXd d;  // simplex weights
    Eigen::VectorXd c;  // representer coefficients for K(d)
    double lambda = 0.0;
    std::vector<double> objective_trace;
    double stationarity = 0.0;  // ||d - proj(d - grad J)|| at the final iterate
    int iterations = 0;
};

// Scale every Gram to mean diagonal 1 and fold the factor into the basis
// atom masses, so each spec still generates its (scaled) Gram.  Without this
// the simplex weights cannot compensate the scale spread across the omega
// grid (a high-frequency Gram can be orders of magnitude smaller), and the
// mixture degenerates to the few largest kernels.
void normalize_dictionary(KernelDictionary& dict);

// Euclidean projection onto the standard simplex (sort-and-threshold).
Eigen::VectorXd simplex_project(const Eigen::VectorXd& v);

// Minimize the reduced objective J(d) = (lambda/2) y'(K(d) + lambda I)^{-1} y
// over the simplex by projected gradient with Armijo backtracking.  J is the
// inner minimum of the relaxed kernel-learning problem for squared loss and
// is convex in d, so small stationarity certifies global optimality.
MklModel fit_mkl(const KernelDictionary& dict, const Eigen::VectorXd& y,
                 const MklOptions& opts);

// J(d) and its gradient (exposed for tests).
double mkl_objective(const KernelDictionary& dict, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& d, double lambda,
                     Eigen::VectorXd* grad = nullptr,
                     Eigen::VectorXd* coeffs = nullptr);

// Indices with d_k > threshold, sorted by weight descending.
std::vector<std::pair<int, double>> active_atoms(const MklModel& model,
                                                 double threshold);

// Merge the dictionary into one weighted mixture spec (zero weights dropped).
// Requires a dictionary of single-atom kernels from a common family.
KernelSpec mixture_spec(const KernelDictionary& dict, const Eigen::VectorXd& d);

}  // namespace lti
