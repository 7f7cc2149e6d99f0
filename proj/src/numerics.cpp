#include "lti/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>

namespace lti {

namespace {

struct GlRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GlRule compute_gl(int n) {
    GlRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre P_n(x) and derivative by recurrence
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

const GlRule& gl_rule(int order) {
    // guarded: callers may run concurrently (the experiment harness
    // parallelizes independent runs)
    static std::mutex mutex;
    static std::map<int, GlRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
    return it->second;
}

}  // namespace

const std::vector<double>& gl_nodes(int order) { return gl_rule(order).nodes; }
const std::vector<double>& gl_weights(int order) { return gl_rule(order).weights; }

double pow_int(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

namespace {

constexpr int kMaxMomentOrder = 31;

using BinomTable =
    std::array<std::array<double, kMaxMomentOrder + 1>, kMaxMomentOrder + 1>;

// Binomial coefficients C(n, i) for n <= kMaxMomentOrder; static-local
// initialization keeps the table build thread-safe.
double binom(int n, int i) {
    static const BinomTable table = [] {
        BinomTable t{};
        for (int a = 0; a <= kMaxMomentOrder; ++a) {
            t[static_cast<std::size_t>(a)][0] = 1.0;
            t[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = 1.0;
            for (int b = 1; b < a; ++b)
                t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                    t[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] +
                    t[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b)];
        }
        return t;
    }();
    return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
}

// One chunk [x, x+h] with z = alpha*h <= 4:
//   ∫_x^{x+h} tau^n e^{-alpha tau} dtau
//     = e^{-alpha x} sum_i C(n,i) x^{n-i} J_i,
//   J_i = ∫_0^h s^i e^{-alpha s} ds = h^{i+1} sum_m (-z)^m / (m! (i+m+1)).
// Accumulates both requested orders; J shared between them.
void chunk2(int n1, int n2, double alpha, double x, double h,
            double& acc1, double& acc2) {
    double expx = std::exp(-alpha * x);
    if (expx == 0.0) return;
    double z = alpha * h;
    int nmax = n2;
    double s[kMaxMomentOrder + 1];
    for (int i = 0; i <= nmax; ++i) s[i] = 0.0;
    double term = 1.0;  // (-z)^m / m!
    for (int m = 0; m < 60; ++m) {
        for (int i = 0; i <= nmax; ++i) s[i] += term / (i + m + 1);
        term *= -z / (m + 1);
        if (std::abs(term) < 1e-22) break;
    }
    double hp = h;  // h^{i+1}
    double j[kMaxMomentOrder + 1];
    for (int i = 0; i <= nmax; ++i) {
        j[i] = hp * s[i];
        hp *= h;
    }
    double v1 = 0.0, v2 = 0.0;
    for (int i = 0; i <= n1; ++i) v1 += binom(n1, i) * pow_int(x, n1 - i) * j[i];
    for (int i = 0; i <= n2; ++i) v2 += binom(n2, i) * pow_int(x, n2 - i) * j[i];
    acc1 += expx * v1;
    acc2 += expx * v2;
}

}  // namespace

void exp_moment2(int n1, int n2, double alpha, double a, double b,
                 double& out1, double& out2) {
    out1 = 0.0;
    out2 = 0.0;
    if (n1 > n2) std::swap(n1, n2);
    if (!(b > a) || a < 0.0) return;
    if (alpha == 0.0) {
        out1 = (pow_int(b, n1 + 1) - pow_int(a, n1 + 1)) / (n1 + 1);
        out2 = (pow_int(b, n2 + 1) - pow_int(a, n2 + 1)) / (n2 + 1);
        return;
    }
    // Truncate the far tail: beyond the integrand mode plus ~(70+3n)/alpha the
    // remaining mass is below ~1e-30 of the total.
    double cut = std::max(a, n2 / alpha) + (70.0 + 3.0 * n2) / alpha;
    double end = std::min(b, cut);
    double x = a;
    double step = 4.0 / alpha;
    while (x < end) {
        double h = std::min(end - x, step);
        chunk2(n1, n2, alpha, x, h, out1, out2);
        x += h;
    }
}

double exp_moment(int n, double alpha, double a, double b) {
    double v1, v2;
    exp_moment2(n, n, alpha, a, b, v1, v2);
    return v1;
}

namespace {

double panels_pass(const std::function<double(double)>& f,
                   const std::vector<double>& pts, int order) {
    const auto& xs = gl_nodes(order);
    const auto& ws = gl_weights(order);
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
        double mid = 0.5 * (pts[p] + pts[p + 1]);
        double half = 0.5 * (pts[p + 1] - pts[p]);
        if (half <= 0.0) continue;
        double s = 0.0;
        for (int q = 0; q < order; ++q) s += ws[q] * f(mid + half * xs[q]);
        total += half * s;
    }
    return total;
}

std::vector<double> halve_panels(const std::vector<double>& pts) {
    std::vector<double> out;
    out.reserve(pts.size() * 2);
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
        out.push_back(pts[p]);
        out.push_back(0.5 * (pts[p] + pts[p + 1]));
    }
    out.push_back(pts.back());
    return out;
}

}  // namespace

double integrate_panels(const std::function<double(double)>& f,
                        std::vector<double> pts, const PanelRule& rule) {
    if (pts.size() < 2) return 0.0;
    double prev = panels_pass(f, pts, rule.order);
    for (int r = 0; r < rule.max_refine; ++r) {
        pts = halve_panels(pts);
        double v = panels_pass(f, pts, rule.order);
        if (std::abs(v - prev) <=
            rule.rel_tol * std::max(std::abs(v), std::abs(prev)) + 1e-300)
            return v;
        prev = v;
    }
    throw NumericalError("1-D panel quadrature did not converge to rel_tol");
}

namespace {

double panels_pass_2d(const std::function<double(double, double)>& f,
                      const std::vector<double>& xs, const std::vector<double>& ys,
                      int order, bool split_diagonal) {
    const auto& gn = gl_nodes(order);
    const auto& gw = gl_weights(order);
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < xs.size(); ++p) {
        double xm = 0.5 * (xs[p] + xs[p + 1]);
        double xh = 0.5 * (xs[p + 1] - xs[p]);
        if (xh <= 0.0) continue;
        for (std::size_t q = 0; q + 1 < ys.size(); ++q) {
            double ym = 0.5 * (ys[q] + ys[q + 1]);
            double yh = 0.5 * (ys[q + 1] - ys[q]);
            if (yh <= 0.0) continue;
            if (split_diagonal && p == q) {
                // Two triangles of the diagonal cell, inner limits follow the crease.
                double a = xs[p], b = xs[p + 1];
                double tri = 0.0;
                for (int i = 0; i < order; ++i) {
                    double y = ym + yh * gn[i];
                    // lower triangle: x in [a, y]
                    double hx = 0.5 * (y - a);
                    double cx = 0.5 * (y + a);
                    double inner_lo = 0.0, inner_hi = 0.0;
                    for (int j = 0; j < order; ++j)
                        inner_lo += gw[j] * f(cx + hx * gn[j], y);
                    tri += gw[i] * hx * inner_lo;
                    // upper triangle: x in [y, b]
                    double hx2 = 0.5 * (b - y);
                    double cx2 = 0.5 * (b + y);
                    for (int j = 0; j < order; ++j)
                        inner_hi += gw[j] * f(cx2 + hx2 * gn[j], y);
                    tri += gw[i] * hx2 * inner_hi;
                }
                total += yh * tri;
            } else {
                double cell = 0.0;
                for (int i = 0; i < order; ++i) {
                    double x = xm + xh * gn[i];
                    double row = 0.0;
                    for (int j = 0; j < order; ++j)
                        row += gw[j] * f(x, ym + yh * gn[j]);
                    cell += gw[i] * row;
                }
                total += xh * yh * cell;
            }
        }
    }
    return total;
}

}  // namespace

double integrate_panels_2d(const std::function<double(double, double)>& f,
                           std::vector<double> xs, std::vector<double> ys,
                           const PanelRule& rule, bool split_diagonal) {
    if (xs.size() < 2 || ys.size() < 2) return 0.0;
    if (split_diagonal && xs != ys)
        throw std::invalid_argument("diagonal split requires identical axis grids");
    double prev = panels_pass_2d(f, xs, ys, rule.order, split_diagonal);
    for (int r = 0; r < rule.max_refine; ++r) {
        xs = halve_panels(xs);
        ys = halve_panels(ys);
        double v = panels_pass_2d(f, xs, ys, rule.order, split_diagonal);
        if (std::abs(v - prev) <=
            rule.rel_tol * std::max(std::abs(v), std::abs(prev)) + 1e-300)
            return v;
        prev = v;
    }
    throw NumericalError("2-D panel quadrature did not converge to rel_tol");
}

std::vector<double> merge_breakpoints(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      double lo, double hi) {
    std::vector<double> out;
    if (!(hi > lo)) return out;
    out.push_back(lo);
    for (double v : a)
        if (v > lo && v < hi) out.push_back(v);
    for (double v : b)
        if (v > lo && v < hi) out.push_back(v);
    out.push_back(hi);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double x, double y) { return y - x < 1e-15; }),
              out.end());
    if (out.back() != hi) out.push_back(hi);
    return out;
}

std::vector<double> limit_panel_length(std::vector<double> pts, double max_len) {
    if (pts.size() < 2 || !(max_len > 0.0)) return pts;
    std::vector<double> out;
    out.push_back(pts.front());
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
        double len = pts[p + 1] - pts[p];
        int parts = std::max(1, static_cast<int>(std::ceil(len / max_len)));
        for (int j = 1; j <= parts; ++j)
            out.push_back(pts[p] + len * j / parts);
    }
    out.back() = pts.back();
    return out;
}

}  // namespace lti
