#include "lti/gram.hpp"

#include <algorithm>
#include <cmath>

#include "lti/numerics.hpp"

namespace lti {

void QuadratureConfig::validate() const {
    if (panel_order < 2) throw std::invalid_argument("panel_order must be >= 2");
    if (!(entry_rel_tol > 0.0)) throw std::invalid_argument("entry_rel_tol must be positive");
    if (horizon < 0.0) throw std::invalid_argument("horizon must be >= 0");
}

CumulativeMoment::CumulativeMoment(const InputProfile& prof, int k, double alpha)
    : prof_(&prof), k_(k), alpha_(alpha) {
    prefix_.resize(prof.knots.size(), 0.0);
    for (std::size_t m = 0; m + 1 < prof.knots.size(); ++m) {
        double seg = prof.levels[m] == 0.0
                         ? 0.0
                         : prof.levels[m] * exp_moment(k, alpha, prof.knots[m],
                                                       prof.knots[m + 1]);
        prefix_[m + 1] = prefix_[m] + seg;
    }
}

double CumulativeMoment::eval(double sigma) const {
    if (!prof_ || prof_->is_zero() || sigma <= 0.0) return 0.0;
    if (sigma >= prof_->support_end()) return total();
    auto it = std::upper_bound(prof_->knots.begin(), prof_->knots.end(), sigma);
    std::size_t m = static_cast<std::size_t>(it - prof_->knots.begin());
    if (m == 0) return 0.0;
    --m;
    if (prof_->levels[m] == 0.0) return prefix_[m];
    return prefix_[m] +
           prof_->levels[m] * exp_moment(k_, alpha_, prof_->knots[m], sigma);
}

namespace {

// Separable decomposition of Ktilde on tau1 <= tau2 (single atom, mass 1):
//   Ktilde = (tau1 tau2)^k * sum_r coef_r e^{-a_r tau1} e^{-b_r tau2}
struct SepTerm {
    double coef, a, b;
};

std::vector<SepTerm> warp_terms(WarpShape shape, double omega) {
    if (shape == WarpShape::min) return {{1.0, 0.0, omega}};
    // cubic spline: G(e^{-w t1}, e^{-w t2}) = e^{-w t1} e^{-2w t2}/2 - e^{-3w t2}/6
    return {{0.5, omega, 2.0 * omega}, {-1.0 / 6.0, 0.0, 3.0 * omega}};
}

// Piecewise-polynomial cumulative  P(tau) = ∫_0^tau v(s) s^k ds,
// per segment P(tau) = alpha_m + beta_m tau^{k+1}.
struct PolyCumulative {
    int k = 0;
    const InputProfile* prof = nullptr;
    std::vector<double> alpha, beta;  // per segment
    double total = 0.0;

    PolyCumulative() = default;
    PolyCumulative(const InputProfile& p, int kk) : k(kk), prof(&p) {
        std::size_t n = p.levels.size();
        alpha.resize(n);
        beta.resize(n);
        double c = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            double b = p.levels[m] / (k + 1);
            alpha[m] = c - b * pow_int(p.knots[m], k + 1);
            beta[m] = b;
            c = alpha[m] + b * pow_int(p.knots[m + 1], k + 1);
        }
        total = c;
    }

    // affine-in-tau^{k+1} coefficients valid at tau (clamped past the support)
    void coeffs_at(double tau, double& a_out, double& b_out) const {
        if (!prof || prof->is_zero() || tau >= prof->support_end()) {
            a_out = total;
            b_out = 0.0;
            return;
        }
        auto it = std::upper_bound(prof->knots.begin(), prof->knots.end(), tau);
        std::size_t m = it == prof->knots.begin()
                            ? 0
                            : static_cast<std::size_t>(it - prof->knots.begin()) - 1;
        a_out = alpha[m];
        b_out = beta[m];
    }
};

// ∫_0^{S_B} vB(tau) tau^k e^{-b tau} P(tau) dtau  with P piecewise
// alpha + beta tau^{k+1}: exact via exponential moments on the merged panels.
double outer_poly_closed(const InputProfile& vb, const PolyCumulative& pa, int k,
                         double b) {
    if (vb.is_zero()) return 0.0;
    double acc = 0.0;
    const std::vector<double> empty;
    std::vector<double> pts = merge_breakpoints(
        vb.knots, pa.prof ? pa.prof->knots : empty, 0.0, vb.support_end());
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
        double x1 = pts[p], x2 = pts[p + 1];
        double lvl = vb.value(0.5 * (x1 + x2));
        if (lvl == 0.0) continue;
        double ca, cb;
        pa.coeffs_at(0.5 * (x1 + x2), ca, cb);
        if (ca == 0.0 && cb == 0.0) continue;
        double m1, m2;
        exp_moment2(k, 2 * k + 1, b, x1, x2, m1, m2);
        acc += lvl * (ca * m1 + cb * m2);
    }
    return acc;
}

// Same outer integral with a general cumulative (a > 0): panel quadrature.
double outer_quad(const InputProfile& vb, const CumulativeMoment& qa,
                  const InputProfile& va, int k, double b,
                  const QuadratureConfig& q) {
    if (vb.is_zero()) return 0.0;
    std::vector<double> pts =
        merge_breakpoints(vb.knots, va.knots, 0.0, vb.support_end());
    pts = limit_panel_length(pts, b > 0.0 ? 8.0 / b : vb.support_end());
    PanelRule rule{q.panel_order, q.entry_rel_tol, 7};
    auto f = [&](double tau) {
        double lvl = vb.value(tau);
        if (lvl == 0.0) return 0.0;
        return lvl * pow_int(tau, k) * std::exp(-b * tau) * qa.eval(tau);
    };
    return integrate_panels(f, std::move(pts), rule);
}

double char_length_ti(const KernelSpec& spec) {
    double wmax = 0.0;
    for (const auto& a : spec.atoms) wmax = std::max(wmax, a.omega);
    if (wmax <= 0.0) return 1e30;
    return spec.ti_shape == TiShape::gaussian ? 0.5 / std::sqrt(wmax)
                                              : 1.5 / wmax;
}

double gram_entry_profiles(const KernelSpec& spec, const InputProfile& vi,
                           const InputProfile& vj, const QuadratureConfig& q) {
    if (vi.is_zero() || vj.is_zero()) return 0.0;
    switch (spec.family) {
        case KernelFamily::heaviside:
            return CumulativeMoment(vi, 0, 0.0).total() *
                   CumulativeMoment(vj, 0, 0.0).total();
        case KernelFamily::exponential_mixture: {
            double acc = 0.0;
            for (const auto& atom : spec.atoms) {
                if (atom.mass == 0.0) continue;
                acc += atom.mass * CumulativeMoment(vi, 0, atom.omega).total() *
                       CumulativeMoment(vj, 0, atom.omega).total();
            }
            return acc;
        }
        case KernelFamily::warped_mixture: {
            int k = spec.warp_exponent;
            double acc = 0.0;
            for (const auto& atom : spec.atoms) {
                if (atom.mass == 0.0) continue;
                for (const auto& term : warp_terms(spec.base_shape, atom.omega)) {
                    double part;
                    if (term.a == 0.0) {
                        PolyCumulative pi(vi, k), pj(vj, k);
                        part = outer_poly_closed(vj, pi, k, term.b) +
                               outer_poly_closed(vi, pj, k, term.b);
                    } else {
                        CumulativeMoment qi(vi, k, term.a), qj(vj, k, term.a);
                        part = outer_quad(vj, qi, vi, k, term.b, q) +
                               outer_quad(vi, qj, vj, k, term.b, q);
                    }
                    acc += atom.mass * term.coef * part;
                }
            }
            return acc;
        }
        case KernelFamily::translation_invariant: {
            double clen = char_length_ti(spec);
            std::vector<double> xs = limit_panel_length(vi.knots, clen);
            std::vector<double> ys = limit_panel_length(vj.knots, clen);
            PanelRule rule{q.panel_order, q.entry_rel_tol, 6};
            auto f = [&](double s1, double s2) {
                double l1 = vi.value(s1);
                if (l1 == 0.0) return 0.0;
                double l2 = vj.value(s2);
                if (l2 == 0.0) return 0.0;
                return l1 * l2 * kernel_section(spec, s1, s2);
            };
            return integrate_panels_2d(f, std::move(xs), std::move(ys), rule);
        }
    }
    return 0.0;
}

}  // namespace

double representer_value(const KernelSpec& spec, const PiecewiseConstantSignal& u,
                         double t_sample, double t, const QuadratureConfig& q) {
    spec.validate();
    q.validate();
    double s = t - spec.delay;
    if (s < 0.0) return 0.0;
    InputProfile v = InputProfile::reversed(u, t_sample - spec.delay);
    if (v.is_zero()) return 0.0;
    switch (spec.family) {
        case KernelFamily::heaviside:
            return CumulativeMoment(v, 0, 0.0).total();
        case KernelFamily::exponential_mixture: {
            double acc = 0.0;
            for (const auto& atom : spec.atoms)
                acc += atom.mass * std::exp(-atom.omega * s) *
                       CumulativeMoment(v, 0, atom.omega).total();
            return acc;
        }
        case KernelFamily::warped_mixture: {
            int k = spec.warp_exponent;
            double sk = pow_int(s, k);
            double cut = std::min(s, v.support_end());
            double acc = 0.0;
            for (const auto& atom : spec.atoms) {
                if (atom.mass == 0.0) continue;
                for (const auto& term : warp_terms(spec.base_shape, atom.omega)) {
                    // tau <= s: section factor s^k e^{-b s}; tau carries a
                    CumulativeMoment qa(v, k, term.a);
                    CumulativeMoment qb(v, k, term.b);
                    double below = std::exp(-term.b * s) * qa.eval(cut);
                    double above = std::exp(-term.a * s) * (qb.total() - qb.eval(cut));
                    acc += atom.mass * term.coef * sk * (below + above);
                }
            }
            return acc;
        }
        case KernelFamily::translation_invariant: {
            std::vector<double> single{s};
            std::vector<double> pts =
                merge_breakpoints(v.knots, single, 0.0, v.support_end());
            pts = limit_panel_length(pts, char_length_ti(spec));
            PanelRule rule{q.panel_order, q.entry_rel_tol, 7};
            auto f = [&](double tau) {
                double lvl = v.value(tau);
                if (lvl == 0.0) return 0.0;
                return lvl * kernel_section(spec, tau, s);
            };
            return integrate_panels(f, std::move(pts), rule);
        }
    }
    return 0.0;
}

double gram_entry(const KernelSpec& spec, const PiecewiseConstantSignal& u,
                  double t_i, double t_j, const QuadratureConfig& q) {
    spec.validate();
    q.validate();
    InputProfile vi = InputProfile::reversed(u, t_i - spec.delay);
    InputProfile vj = InputProfile::reversed(u, t_j - spec.delay);
    double v = gram_entry_profiles(spec, vi, vj, q);
    if (!std::isfinite(v)) throw NumericalError("gram entry is not finite");
    return v;
}

GramMatrix assemble_gram(const KernelSpec& spec, const PiecewiseConstantSignal& u,
                         const std::vector<double>& times,
                         const QuadratureConfig& q) {
    if (times.empty()) throw std::invalid_argument("times must be nonempty");
    spec.validate();
    q.validate();
    const auto n = static_cast<Eigen::Index>(times.size());
    std::vector<InputProfile> profs(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        profs[i] = InputProfile::reversed(u, times[i] - spec.delay);
    GramMatrix g;
    g.times = times;
    g.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            double v;
            try {
                v = gram_entry_profiles(spec, profs[static_cast<std::size_t>(i)],
                                        profs[static_cast<std::size_t>(j)], q);
            } catch (const NumericalError& e) {
                throw NumericalError("gram entry (" + std::to_string(i) + "," +
                                     std::to_string(j) + "): " + e.what());
            }
            if (!std::isfinite(v))
                throw NumericalError("gram entry (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") is not finite");
            g.entries(i, j) = v;
            g.entries(j, i) = v;
        }
    }
    return g;
}

GramMatrix gram_discrete(const KernelSpec& spec, const DiscreteSignal& u,
                         const std::vector<long>& indices, double step) {
    spec.validate();
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    const auto n = static_cast<Eigen::Index>(indices.size());
    GramMatrix g;
    g.times.reserve(indices.size());
    for (long idx : indices) g.times.push_back(static_cast<double>(idx) * step);
    g.entries.resize(n, n);
    long len = static_cast<long>(u.values.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            long ti = indices[static_cast<std::size_t>(i)];
            long tj = indices[static_cast<std::size_t>(j)];
            double acc = 0.0;
            for (long tau1 = std::max(0L, ti - u.start_index - len + 1);
                 tau1 <= ti - u.start_index; ++tau1) {
                double u1 = u.at(ti - tau1);
                if (u1 == 0.0) continue;
                for (long tau2 = std::max(0L, tj - u.start_index - len + 1);
                     tau2 <= tj - u.start_index; ++tau2) {
                    double u2 = u.at(tj - tau2);
                    if (u2 == 0.0) continue;
                    acc += u1 * u2 *
                           kernel_eval(spec, static_cast<double>(tau1) * step,
                                       static_cast<double>(tau2) * step);
                }
            }
            g.entries(i, j) = acc;
            g.entries(j, i) = acc;
        }
    }
    return g;
}

}  // namespace lti
