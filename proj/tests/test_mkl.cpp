#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "lti/mkl.hpp"
#include "lti/rng.hpp"

using namespace lti;

namespace {

GramMatrix random_psd(Rng& rng, int n, double scale = 1.0) {
    Eigen::MatrixXd B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = rng.uniform(-1.0, 1.0);
    GramMatrix g;
    g.entries = scale * (B * B.transpose());
    for (int i = 0; i < n; ++i) g.times.push_back(0.1 * i);
    return g;
}

KernelDictionary random_dictionary(Rng& rng, int m, int n) {
    KernelDictionary dict;
    for (int k = 0; k < m; ++k) {
        KernelSpec s;
        s.family = KernelFamily::exponential_mixture;
        s.atoms = {{1.0, 1.0 + k}};
        dict.basis.push_back(s);
        dict.grams.push_back(random_psd(rng, n));
    }
    return dict;
}

// brute-force projection oracle: dense grid over the simplex (m = 3)
Eigen::VectorXd grid_project3(const Eigen::VectorXd& v, int steps) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd arg = Eigen::VectorXd::Zero(3);
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps - i; ++j) {
            Eigen::VectorXd d(3);
            d << static_cast<double>(i) / steps, static_cast<double>(j) / steps,
                static_cast<double>(steps - i - j) / steps;
            double dist = (d - v).squaredNorm();
            if (dist < best) {
                best = dist;
                arg = d;
            }
        }
    return arg;
}

}  // namespace

TEST_CASE("simplex projection basics") {
    Eigen::VectorXd inside(3);
    inside << 0.2, 0.3, 0.5;
    CHECK((simplex_project(inside) - inside).norm() <= 1e-15);

    Eigen::VectorXd big(3);
    big << 5.0, 0.0, 0.0;
    Eigen::VectorXd p = simplex_project(big);
    CHECK(p(0) == doctest::Approx(1.0));
    CHECK(p(1) == 0.0);

    Eigen::VectorXd neg(2);
    neg << -1.0, -3.0;
    p = simplex_project(neg);
    CHECK(p(0) == doctest::Approx(1.0));
    CHECK(p(1) == 0.0);

    // feasibility and idempotence on random vectors
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd v(6);
        for (int i = 0; i < 6; ++i) v(i) = rng.uniform(-2.0, 2.0);
        p = simplex_project(v);
        CHECK(p.minCoeff() >= 0.0);
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((simplex_project(p) - p).norm() <= 1e-12);
    }
}

TEST_CASE("simplex projection against a grid-search oracle") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd v(3);
        for (int i = 0; i < 3; ++i) v(i) = rng.uniform(-1.5, 1.5);
        Eigen::VectorXd exact = simplex_project(v);
        Eigen::VectorXd grid = grid_project3(v, 200);
        CHECK((exact - v).squaredNorm() <= (grid - v).squaredNorm() + 1e-9);
        CHECK((exact - grid).lpNorm<Eigen::Infinity>() <= 1e-2);
    }
}

TEST_CASE("mkl objective matches its definition and gradient") {
    Rng rng(17);
    auto dict = random_dictionary(rng, 4, 6);
    Eigen::VectorXd y(6);
    for (int i = 0; i < 6; ++i) y(i) = rng.uniform(-1.0, 1.0);
    Eigen::VectorXd d(4);
    d << 0.4, 0.3, 0.2, 0.1;
    double lambda = 0.5;

    Eigen::VectorXd grad, c;
    double J = mkl_objective(dict, y, d, lambda, &grad, &c);

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(6, 6);
    for (int k = 0; k < 4; ++k) K += d(k) * dict.grams[static_cast<std::size_t>(k)].entries;
    Eigen::MatrixXd A = K + lambda * Eigen::MatrixXd::Identity(6, 6);
    Eigen::VectorXd cref = A.ldlt().solve(y);
    CHECK(J == doctest::Approx(0.5 * lambda * y.dot(cref)).epsilon(1e-12));
    CHECK((c - cref).norm() <= 1e-10);

    // finite-difference gradient check (central differences on the simplex
    // tangent is unnecessary: J is defined on all of R^m_+ here)
    for (int k = 0; k < 4; ++k) {
        double h = 1e-6;
        Eigen::VectorXd dp = d, dm = d;
        dp(k) += h;
        dm(k) -= h;
        double fd = (mkl_objective(dict, y, dp, lambda) -
                     mkl_objective(dict, y, dm, lambda)) / (2.0 * h);
        CHECK(grad(k) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("fit_mkl degenerate single-kernel dictionary") {
    Rng rng(2);
    auto dict = random_dictionary(rng, 1, 5);
    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i) y(i) = rng.uniform(-1.0, 1.0);
    MklOptions o;
    o.lambda = 0.2;
    auto m = fit_mkl(dict, y, o);
    REQUIRE(m.d.size() == 1);
    CHECK(m.d(0) == doctest::Approx(1.0));
    CHECK(m.lambda == 0.2);
}

TEST_CASE("fit_mkl reaches the random-search optimum with a certificate") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + static_cast<int>(rng.next_u64() % 7);
        int m = 2 + static_cast<int>(rng.next_u64() % 4);
        auto dict = random_dictionary(rng, m, n);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) y(i) = rng.uniform(-1.0, 1.0);
        MklOptions o;
        o.lambda = std::exp(rng.uniform(std::log(0.01), std::log(1.0)));
        o.tol = 1e-14;
        o.stat_tol = 1e-10;
        o.max_iter = 5000;
        auto model = fit_mkl(dict, y, o);

        // feasibility
        CHECK(model.d.minCoeff() >= 0.0);
        CHECK(model.d.sum() == doctest::Approx(1.0).epsilon(1e-12));
        // monotone descent
        for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
            CHECK(model.objective_trace[i] <=
                  model.objective_trace[i - 1] * (1.0 + 1e-12));
        // random-search oracle: convexity means the sampled minimum
        // upper-bounds the true one loosely; the solver must beat it
        double best = std::numeric_limits<double>::infinity();
        Eigen::VectorXd d(m);
        for (int s = 0; s < 10000; ++s) {
            double sum = 0.0;
            for (int k = 0; k < m; ++k) {
                d(k) = -std::log(std::max(rng.uniform(0.0, 1.0), 1e-300));
                sum += d(k);
            }
            d /= sum;
            best = std::min(best, mkl_objective(dict, y, d, o.lambda));
        }
        double final_obj = model.objective_trace.back();
        CHECK(final_obj <= best + 1e-6);
        CHECK(model.stationarity <= 1e-6);
    }
}

TEST_CASE("normalize_dictionary rescales Grams and masses consistently") {
    Rng rng(7);
    KernelDictionary dict;
    for (int k = 0; k < 3; ++k) {
        KernelSpec s;
        s.family = KernelFamily::exponential_mixture;
        s.atoms = {{2.0, 1.0 + k}};
        dict.basis.push_back(s);
        dict.grams.push_back(random_psd(rng, 5, std::pow(10.0, -2 * k)));
    }
    auto masses_before = dict.basis;
    normalize_dictionary(dict);
    for (std::size_t k = 0; k < 3; ++k) {
        double mean_diag = dict.grams[k].entries.trace() / 5.0;
        CHECK(mean_diag == doctest::Approx(1.0).epsilon(1e-12));
        // the scale factor is folded into the atom mass, so spec and Gram
        // still describe the same kernel
        double s = masses_before[k].atoms[0].mass / dict.basis[k].atoms[0].mass;
        CHECK(dict.grams[k].entries.trace() ==
              doctest::Approx(5.0).epsilon(1e-12));
        CHECK(s > 0.0);
    }
}

TEST_CASE("active_atoms thresholding and ordering") {
    MklModel m;
    m.d = Eigen::VectorXd(4);
    m.d << 0.05, 0.6, 0.0, 0.35;
    auto act = active_atoms(m, 0.01);
    REQUIRE(act.size() == 3);
    CHECK(act[0].first == 1);
    CHECK(act[1].first == 3);
    CHECK(act[2].first == 0);
    CHECK(active_atoms(m, 0.7).empty());
    Eigen::VectorXd one(3);
    one << 1.0, 0.0, 0.0;
    m.d = one;
    auto a = active_atoms(m, 0.01);
    REQUIRE(a.size() == 1);
    CHECK(a[0].second == 1.0);
    CHECK_THROWS(active_atoms(m, -0.1));
}

TEST_CASE("mixture_spec merges weighted single-atom kernels") {
    KernelDictionary dict;
    for (double omega : {1.0, 10.0, 100.0}) {
        KernelSpec s;
        s.family = KernelFamily::warped_mixture;
        s.warp_exponent = 1;
        s.atoms = {{2.0, omega}};
        dict.basis.push_back(s);
        GramMatrix g;
        g.entries = Eigen::MatrixXd::Identity(2, 2);
        g.times = {0.0, 1.0};
        dict.grams.push_back(g);
    }
    Eigen::VectorXd d(3);
    d << 0.5, 0.0, 0.5;
    auto merged = mixture_spec(dict, d);
    REQUIRE(merged.atoms.size() == 2);  // zero weight dropped
    CHECK(merged.atoms[0].mass == doctest::Approx(1.0));
    CHECK(merged.atoms[1].omega == 100.0);
    // merged kernel equals the weighted sum pointwise
    double t1 = 0.3, t2 = 0.9;
    double want = 0.5 * kernel_eval(dict.basis[0], t1, t2) +
                  0.5 * kernel_eval(dict.basis[2], t1, t2);
    CHECK(kernel_eval(merged, t1, t2) == doctest::Approx(want).epsilon(1e-14));

    Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    CHECK_THROWS(mixture_spec(dict, zero));
}
