#include "lti/mkl.hpp"

#include <algorithm>
#include <cmath>

#include "lti/solver.hpp"

namespace lti {

void KernelDictionary::validate() const {
    if (basis.empty()) throw std::invalid_argument("dictionary must be nonempty");
    if (basis.size() != grams.size())
        throw std::invalid_argument("dictionary basis/grams size mismatch");
    Eigen::Index n = grams.front().entries.rows();
    for (const auto& g : grams)
        if (g.entries.rows() != n || g.entries.cols() != n)
            throw std::invalid_argument("dictionary Gram dimensions differ");
}

Eigen::Index KernelDictionary::sample_count() const {
    return grams.empty() ? 0 : grams.front().entries.rows();
}

void normalize_dictionary(KernelDictionary& dict) {
    dict.validate();
    const double n = static_cast<double>(dict.sample_count());
    for (std::size_t k = 0; k < dict.grams.size(); ++k) {
        double s = dict.grams[k].entries.trace() / n;
        if (!(s > 0.0)) continue;  // zero Gram: nothing to scale
        dict.grams[k].entries /= s;
        for (auto& atom : dict.basis[k].atoms) atom.mass /= s;
    }
}

Eigen::VectorXd simplex_project(const Eigen::VectorXd& v) {
    const Eigen::Index m = v.size();
    std::vector<double> s(v.data(), v.data() + m);
    std::sort(s.begin(), s.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    int rho = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        cum += s[static_cast<std::size_t>(i)];
        double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (s[static_cast<std::size_t>(i)] - t > 0.0) {
            rho = static_cast<int>(i + 1);
            theta = t;
        }
    }
    (void)rho;
    Eigen::VectorXd out(m);
    for (Eigen::Index i = 0; i < m; ++i) out(i) = std::max(0.0, v(i) - theta);
    return out;
}

namespace {

Eigen::MatrixXd mix_gram(const KernelDictionary& dict, const Eigen::VectorXd& d) {
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dict.sample_count(),
                                              dict.sample_count());
    for (std::size_t k = 0; k < dict.grams.size(); ++k)
        if (d(static_cast<Eigen::Index>(k)) != 0.0)
            K += d(static_cast<Eigen::Index>(k)) * dict.grams[k].entries;
    return K;
}

}  // namespace

double mkl_objective(const KernelDictionary& dict, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& d, double lambda,
                     Eigen::VectorXd* grad, Eigen::VectorXd* coeffs) {
    Eigen::MatrixXd A = mix_gram(dict, d);
    A.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
        double jitter = 1e-12 * A.trace() / static_cast<double>(A.rows());
        A.diagonal().array() += jitter;
        llt.compute(A);
        if (llt.info() != Eigen::Success)
            throw IllConditionedError("Cholesky factorization of K(d) + lambda I failed");
    }
    Eigen::VectorXd c = llt.solve(y);
    if (coeffs) *coeffs = c;
    if (grad) {
        grad->resize(d.size());
        for (std::size_t k = 0; k < dict.grams.size(); ++k)
            (*grad)(static_cast<Eigen::Index>(k)) =
                -0.5 * lambda * c.dot(dict.grams[k].entries * c);
    }
    return 0.5 * lambda * y.dot(c);
}

MklModel fit_mkl(const KernelDictionary& dict, const Eigen::VectorXd& y,
                 const MklOptions& opts) {
    dict.validate();
    if (!(opts.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const Eigen::Index m = static_cast<Eigen::Index>(dict.basis.size());

    MklModel model;
    model.lambda = opts.lambda;
    model.d = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));

    Eigen::VectorXd grad, c;
    double obj = mkl_objective(dict, y, model.d, opts.lambda, &grad, &c);
    model.objective_trace.push_back(obj);

    // J scales with lambda, so a fixed unit step can be arbitrarily far from
    // the curvature scale; the step starts at 1.0 and adapts by doubling after
    // clean acceptances / halving inside the line search.
    double step0 = 1.0;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        model.iterations = iter + 1;
        model.stationarity = (model.d - simplex_project(model.d - grad)).norm();
        // scale-invariant stopping test: J scales linearly with lambda, so the
        // raw residual can be spuriously tiny; the infinity-normalized gradient
        // map still vanishes exactly at KKT points
        double gnorm = grad.lpNorm<Eigen::Infinity>();
        if (gnorm == 0.0) break;
        double scaled_stat =
            (model.d - simplex_project(model.d - grad / gnorm)).norm();
        if (scaled_stat <= opts.stat_tol) break;

        double step = step0;
        bool moved = false;
        int halvings = 0;
        Eigen::VectorXd d_new, c_new;
        double obj_new = obj;
        for (int bt = 0; bt < 120; ++bt) {
            Eigen::VectorXd trial = simplex_project(model.d - step * grad);
            Eigen::VectorXd delta = trial - model.d;
            if (delta.norm() == 0.0) break;  // stationary at this step scale
            double val =
                mkl_objective(dict, y, trial, opts.lambda, nullptr, &c_new);
            if (val <= obj + opts.armijo * grad.dot(delta)) {
                d_new = std::move(trial);
                obj_new = val;
                moved = true;
                break;
            }
            step *= 0.5;
            ++halvings;
        }
        if (!moved) break;
        step0 = halvings == 0 ? std::min(step * 2.0, 1e15) : step;

        model.d = std::move(d_new);
        c = std::move(c_new);
        // the gradient only needs the coefficients of the accepted point, so
        // reuse them instead of refactorizing K(d)
        for (std::size_t k = 0; k < dict.grams.size(); ++k)
            grad(static_cast<Eigen::Index>(k)) =
                -0.5 * opts.lambda * c.dot(dict.grams[k].entries * c);
        double decrease = obj - obj_new;
        obj = obj_new;
        model.objective_trace.push_back(obj);
        model.stationarity = (model.d - simplex_project(model.d - grad)).norm();
        if (decrease < opts.tol * std::abs(obj)) break;
    }

    // snap negligible weights to exact zero and renormalize
    double sum = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        if (model.d(k) < opts.weight_clamp) model.d(k) = 0.0;
        sum += model.d(k);
    }
    if (sum > 0.0) model.d /= sum;
    obj = mkl_objective(dict, y, model.d, opts.lambda, &grad, &c);
    model.c = c;
    model.stationarity = (model.d - simplex_project(model.d - grad)).norm();
    return model;
}

std::vector<std::pair<int, double>> active_atoms(const MklModel& model,
                                                 double threshold) {
    if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
    std::vector<std::pair<int, double>> out;
    for (Eigen::Index k = 0; k < model.d.size(); ++k)
        if (model.d(k) > threshold) out.emplace_back(static_cast<int>(k), model.d(k));
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

KernelSpec mixture_spec(const KernelDictionary& dict, const Eigen::VectorXd& d) {
    dict.validate();
    if (d.size() != static_cast<Eigen::Index>(dict.basis.size()))
        throw std::invalid_argument("weight count must match dictionary size");
    KernelSpec merged = dict.basis.front();
    merged.atoms.clear();
    for (std::size_t k = 0; k < dict.basis.size(); ++k) {
        const KernelSpec& b = dict.basis[k];
        if (b.family != merged.family || b.warp_exponent != merged.warp_exponent ||
            b.base_shape != merged.base_shape || b.delay != merged.delay ||
            b.atoms.size() != 1)
            throw std::invalid_argument(
                "mixture_spec needs single-atom kernels from a common family");
        double w = d(static_cast<Eigen::Index>(k));
        if (w == 0.0) continue;
        merged.atoms.push_back({w * b.atoms.front().mass, b.atoms.front().omega});
    }
    if (merged.atoms.empty())
        throw std::invalid_argument("mixture has no positive weights");
    return merged;
}

}  // namespace lti
