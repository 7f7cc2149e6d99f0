#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lti/kernels.hpp"
#include "lti/signals.hpp"

namespace lti {

struct GramMatrix {
    Eigen::MatrixXd entries;
    std::vector<double> times;
};

struct QuadratureConfig {
    int panel_order = 8;
    double entry_rel_tol = 1e-8;
    double horizon = 0.0;  // truncation for semi-infinite diagnostics integrals;
                           // 0 means "use the largest sample time"

    void validate() const;
};

// (u * K_t)(t_sample) = ∫ u(t_sample - tau) K(tau, t) dtau.
double representer_value(const KernelSpec& spec, const PiecewiseConstantSignal& u,
                         double t_sample, double t,
                         const QuadratureConfig& q = {});

// K_ij = ∫∫ u(t_i - tau1) u(t_j - tau2) K(tau1, tau2) dtau1 dtau2.
// Exponential mixtures and Heaviside are separable and exact; warped mixtures
// are reduced by the diagonal split to nested 1-D integrals (closed form for
// the min shape, panel quadrature otherwise); translation-invariant kernels
// use tensor panel quadrature.
double gram_entry(const KernelSpec& spec, const PiecewiseConstantSignal& u,
                  double t_i, double t_j, const QuadratureConfig& q = {});

GramMatrix assemble_gram(const KernelSpec& spec, const PiecewiseConstantSignal& u,
                         const std::vector<double>& times,
                         const QuadratureConfig& q = {});

// Discrete-time path: K_ij = sum_{tau1} sum_{tau2} u(i - tau1) u(j - tau2)
// K(tau1 * step, tau2 * step) over the finite causal support.
GramMatrix gram_discrete(const KernelSpec& spec, const DiscreteSignal& u,
                         const std::vector<long>& indices, double step = 1.0);

// Cumulative moment table  Q(sigma) = ∫_0^sigma v(s) s^k e^{-alpha s} ds
// for an input profile v; constant beyond the profile support.
class CumulativeMoment {
public:
    CumulativeMoment() = default;
    CumulativeMoment(const InputProfile& prof, int k, double alpha);

    double eval(double sigma) const;
    double total() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

private:
    const InputProfile* prof_ = nullptr;
    int k_ = 0;
    double alpha_ = 0.0;
    std::vector<double> prefix_;  // at profile knots
};

}  // namespace lti
