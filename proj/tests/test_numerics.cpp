#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lti/numerics.hpp"
#include "lti/rng.hpp"
#include "oracles.hpp"

using namespace lti;

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
    for (int order : {2, 4, 8, 16}) {
        const auto& xs = gl_nodes(order);
        const auto& ws = gl_weights(order);
        REQUIRE(xs.size() == static_cast<std::size_t>(order));
        double wsum = 0.0;
        for (double w : ws) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        // degree 2*order-1 polynomial x^(2o-1) + x^2: odd part cancels
        double acc = 0.0;
        for (int i = 0; i < order; ++i) {
            auto idx = static_cast<std::size_t>(i);
            acc += ws[idx] * (std::pow(xs[idx], 2 * order - 1) + xs[idx] * xs[idx]);
        }
        CHECK(acc == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    }
}

TEST_CASE("exp_moment matches the analytic antiderivative") {
    // ∫ tau e^{-2 tau} via -(tau/2 + 1/4) e^{-2 tau}
    auto F = [](double t) { return -(t / 2.0 + 0.25) * std::exp(-2.0 * t); };
    CHECK(exp_moment(1, 2.0, 0.5, 3.0) ==
          doctest::Approx(F(3.0) - F(0.5)).epsilon(1e-14));
    CHECK(exp_moment(0, 1.0, 0.0, 1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("exp_moment alpha = 0 reduces to the power rule") {
    CHECK(exp_moment(2, 0.0, 0.5, 2.0) ==
          doctest::Approx((8.0 - 0.125) / 3.0).epsilon(1e-14));
    CHECK(exp_moment(0, 0.0, 1.0, 4.0) == doctest::Approx(3.0));
}

TEST_CASE("exp_moment stays accurate across extreme alpha ranges") {
    // full-range integral equals n!/alpha^{n+1}
    for (double alpha : {1e-3, 1.0, 50.0, 1000.0}) {
        double v = exp_moment(3, alpha, 0.0, 1e6);
        double exact = 6.0 / std::pow(alpha, 4);
        if (alpha < 1e-2) continue;  // 1e6 does not cover the slow tail
        CHECK(v == doctest::Approx(exact).epsilon(1e-12));
    }
    // small intervals where the naive recursion would cancel
    for (double alpha : {500.0, 2000.0}) {
        auto f = [alpha](double t) { return t * t * std::exp(-alpha * t); };
        double ref = oracle::integrate(f, 0.01, 0.012, 1e-18);
        CHECK(exp_moment(2, alpha, 0.01, 0.012) ==
              doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("exp_moment against the oracle on random ranges") {
    Rng rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        int n = static_cast<int>(rng.next_u64() % 5);
        double alpha = std::exp(rng.uniform(-2.0, 5.0));
        double a = rng.uniform(0.0, 2.0);
        double b = a + rng.uniform(0.001, 3.0);
        auto f = [&](double t) { return std::pow(t, n) * std::exp(-alpha * t); };
        double ref = oracle::integrate(f, a, b, 1e-16);
        CHECK(exp_moment(n, alpha, a, b) ==
              doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("exp_moment2 returns the same values as two single calls") {
    double m1, m2;
    exp_moment2(1, 3, 2.5, 0.2, 1.7, m1, m2);
    CHECK(m1 == doctest::Approx(exp_moment(1, 2.5, 0.2, 1.7)).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(exp_moment(3, 2.5, 0.2, 1.7)).epsilon(1e-14));
}

TEST_CASE("integrate_panels handles smooth and kinked integrands") {
    PanelRule rule;
    double v = integrate_panels([](double x) { return std::sin(x); },
                                {0.0, 1.0, 3.0}, rule);
    CHECK(v == doctest::Approx(1.0 - std::cos(3.0)).epsilon(1e-12));
    // |x - 1| kink on a panel boundary stays spectrally accurate
    v = integrate_panels([](double x) { return std::abs(x - 1.0); },
                         {0.0, 1.0, 2.0}, rule);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("integrate_panels reports nonconvergence") {
    PanelRule rule;
    rule.max_refine = 1;
    rule.rel_tol = 1e-15;
    auto nasty = [](double x) { return std::sqrt(std::abs(x - 0.31)); };
    CHECK_THROWS_AS(integrate_panels(nasty, {0.0, 1.0}, rule), NumericalError);
}

TEST_CASE("integrate_panels_2d with the diagonal split") {
    PanelRule rule;
    // e^{-max(x,y)} over [0,2]^2 = 2 ∫∫_{y<x} e^{-x} = 2(1 - 3e^{-2})
    auto f = [](double x, double y) { return std::exp(-std::max(x, y)); };
    double v = integrate_panels_2d(f, {0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}, rule,
                                   true);
    CHECK(v == doctest::Approx(2.0 - 6.0 * std::exp(-2.0)).epsilon(1e-10));
    // smooth tensor case without the split
    v = integrate_panels_2d([](double x, double y) { return x * y; },
                            {0.0, 1.0}, {0.0, 2.0}, rule);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("merge_breakpoints and limit_panel_length") {
    auto pts = merge_breakpoints({0.5, 1.5}, {0.2, 1.5, 9.0}, 0.0, 2.0);
    REQUIRE(pts.size() == 5);
    CHECK(pts.front() == 0.0);
    CHECK(pts.back() == 2.0);
    CHECK(pts[1] == 0.2);
    CHECK(pts[2] == 0.5);
    CHECK(pts[3] == 1.5);

    auto lim = limit_panel_length({0.0, 1.0}, 0.3);
    CHECK(lim.size() == 5);
    CHECK(lim[1] == doctest::Approx(0.25));
}

TEST_CASE("rng determinism and distribution sanity") {
    Rng a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(42, 8);
    CHECK(c.next_u64() != Rng(42, 7).next_u64());

    Rng r(7);
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double x = r.normal();
        sum += x;
        sum2 += x * x;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));

    Rng u(9);
    for (int i = 0; i < 1000; ++i) {
        double x = u.uniform(2.0, 5.0);
        CHECK(x >= 2.0);
        CHECK(x < 5.0);
    }
}
