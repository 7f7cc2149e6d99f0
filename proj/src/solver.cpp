#include "lti/solver.hpp"

#include <cmath>
#include <limits>

namespace lti {

void IdentifiedModel::validate() const {
    if (static_cast<std::size_t>(c.size()) != times.size())
        throw std::invalid_argument("coefficient count must match sample count");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

Eigen::VectorXd fit_rls(const GramMatrix& K, const Eigen::VectorXd& y,
                        double lambda) {
    const Eigen::Index n = K.entries.rows();
    if (y.size() != n) throw std::invalid_argument("y size must match Gram size");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    Eigen::MatrixXd A = K.entries;
    A.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
        double jitter = 1e-12 * K.entries.trace() / static_cast<double>(n);
        A.diagonal().array() += jitter;
        llt.compute(A);
        if (llt.info() != Eigen::Success)
            throw IllConditionedError("Cholesky factorization of K + lambda I failed");
    }
    return llt.solve(y);
}

double eval_impulse_response(const IdentifiedModel& model, double t) {
    model.validate();
    if (t < 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < model.times.size(); ++i) {
        double ci = model.c(static_cast<Eigen::Index>(i));
        if (ci == 0.0) continue;
        acc += ci * representer_value(model.spec, model.u, model.times[i], t,
                                      model.quad);
    }
    return acc;
}

double predict_output(const IdentifiedModel& model, double t) {
    model.validate();
    double acc = 0.0;
    for (std::size_t i = 0; i < model.times.size(); ++i) {
        double ci = model.c(static_cast<Eigen::Index>(i));
        if (ci == 0.0) continue;
        acc += ci * gram_entry(model.spec, model.u, model.times[i], t, model.quad);
    }
    return acc;
}

double gcv_score(const GramMatrix& K, const Eigen::VectorXd& y, double lambda) {
    const Eigen::Index n = K.entries.rows();
    if (y.size() != n) throw std::invalid_argument("y size must match Gram size");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.entries);
    if (es.info() != Eigen::Success)
        throw IllConditionedError("eigendecomposition of K failed");
    const Eigen::VectorXd d = es.eigenvalues();
    const Eigen::VectorXd z = es.eigenvectors().transpose() * y;
    double rss = 0.0, tr = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double w = lambda / (d(i) + lambda);  // I - H on this eigendirection
        rss += (w * z(i)) * (w * z(i));
        tr += w;
    }
    if (!(tr > 0.0)) throw NumericalError("degenerate smoother: trace(I - H) <= 0");
    return static_cast<double>(n) * rss / (tr * tr);
}

GcvResult select_lambda(const GramMatrix& K, const Eigen::VectorXd& y,
                        const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("lambda grid must be nonempty");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.entries);
    if (es.info() != Eigen::Success)
        throw IllConditionedError("eigendecomposition of K failed");
    const Eigen::VectorXd d = es.eigenvalues();
    const Eigen::VectorXd z = es.eigenvectors().transpose() * y;
    const Eigen::Index n = K.entries.rows();
    GcvResult res;
    res.lambda_grid = grid;
    bool any = false;
    double best = 0.0;
    for (double lambda : grid) {
        if (!(lambda > 0.0))
            throw std::invalid_argument("lambda grid values must be positive");
        double rss = 0.0, tr = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double w = lambda / (d(i) + lambda);
            rss += (w * z(i)) * (w * z(i));
            tr += w;
        }
        if (!(tr > 0.0)) {
            res.scores.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        double score = static_cast<double>(n) * rss / (tr * tr);
        res.scores.push_back(score);
        // <= : ties resolve toward the larger lambda on an ascending grid
        if (!any || score <= best) {
            any = true;
            best = score;
            res.selected = lambda;
        }
    }
    if (!any) throw NumericalError("all lambda grid points degenerate");
    return res;
}

std::vector<double> log_lambda_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 1)
        throw std::invalid_argument("bad lambda grid parameters");
    std::vector<double> grid(static_cast<std::size_t>(n));
    if (n == 1) {
        grid[0] = lo;
        return grid;
    }
    double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] =
            std::exp(la + (lb - la) * i / (n - 1));
    return grid;
}

}  // namespace lti
