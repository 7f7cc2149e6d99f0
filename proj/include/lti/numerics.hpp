#pragma once

#include <functional>
#include <vector>

#include "lti/errors.hpp"

namespace lti {

// Gauss-Legendre nodes and weights on [-1, 1].
const std::vector<double>& gl_nodes(int order);
const std::vector<double>& gl_weights(int order);

double pow_int(double x, int n);

// Exponential moment  ∫_a^b  tau^n e^{-alpha tau} dtau  for alpha >= 0, 0 <= a <= b.
// Stable for any alpha*(b-a): the range is chunked so that the local series
// converges without cancellation, and the far tail (below ~1e-30 relative)
// is truncated.
double exp_moment(int n, double alpha, double a, double b);

// Both ∫ tau^n1 e^{-alpha tau} and ∫ tau^n2 e^{-alpha tau} over [a, b],
// sharing the per-chunk series work.
void exp_moment2(int n1, int n2, double alpha, double a, double b,
                 double& out1, double& out2);

struct PanelRule {
    int order = 8;         // Gauss-Legendre points per panel
    double rel_tol = 1e-8; // acceptance tolerance between refinements
    int max_refine = 7;
};

// Integrate f over [pts.front(), pts.back()], one GL rule per panel.
// Panels are refined uniformly until two successive values agree to
// rule.rel_tol; throws NumericalError otherwise.
double integrate_panels(const std::function<double(double)>& f,
                        std::vector<double> pts, const PanelRule& rule);

// Tensor-product version over [xs.front(), xs.back()] x [ys.front(), ys.back()].
// With split_diagonal (requires xs == ys) cells crossing t1 == t2 are split
// into two triangles so max/min-type creases stay inside smooth pieces.
double integrate_panels_2d(const std::function<double(double, double)>& f,
                           std::vector<double> xs, std::vector<double> ys,
                           const PanelRule& rule, bool split_diagonal = false);

// Sorted union of breakpoints from a and b clipped to [lo, hi]; the endpoints
// are always present.  Returns at least {lo, hi}; empty if hi <= lo.
std::vector<double> merge_breakpoints(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      double lo, double hi);

// Subdivide pts so that no interval exceeds max_len.
std::vector<double> limit_panel_length(std::vector<double> pts, double max_len);

}  // namespace lti
