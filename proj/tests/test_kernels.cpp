#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "lti/kernels.hpp"
#include "lti/rng.hpp"

using namespace lti;

namespace {

KernelSpec exponential(double mass, double omega) {
    KernelSpec s;
    s.family = KernelFamily::exponential_mixture;
    s.atoms = {{mass, omega}};
    return s;
}

KernelSpec warped(WarpShape shape, int k, double omega) {
    KernelSpec s;
    s.family = KernelFamily::warped_mixture;
    s.base_shape = shape;
    s.warp_exponent = k;
    s.atoms = {{1.0, omega}};
    return s;
}

std::vector<KernelSpec> all_families() {
    std::vector<KernelSpec> specs;
    KernelSpec h;
    h.family = KernelFamily::heaviside;
    h.atoms = {{1.0, 0.0}};
    specs.push_back(h);
    specs.push_back(exponential(1.0, 1.0));
    KernelSpec multi = exponential(0.5, 1.0);
    multi.atoms.push_back({2.0, 7.0});
    specs.push_back(multi);
    for (int k : {0, 1, 2}) specs.push_back(warped(WarpShape::min, k, 3.0));
    specs.push_back(warped(WarpShape::cubic_spline, 0, 2.0));
    KernelSpec cosmix;
    cosmix.family = KernelFamily::translation_invariant;
    cosmix.ti_shape = TiShape::cosine_mixture;
    cosmix.atoms = {{0.7, 2.0}, {0.3, 5.0}};
    specs.push_back(cosmix);
    KernelSpec gauss;
    gauss.family = KernelFamily::translation_invariant;
    gauss.ti_shape = TiShape::gaussian;
    gauss.atoms = {{1.0, 1.5}};
    specs.push_back(gauss);
    return specs;
}

}  // namespace

TEST_CASE("kernel_eval closed-form spot values") {
    CHECK(kernel_eval(exponential(1.0, 1.0), -0.5, 0.3) == 0.0);
    CHECK(kernel_eval(exponential(1.0, 1.0), 0.0, 0.0) == 1.0);
    CHECK(kernel_eval(exponential(1.0, 1.0), 1.0, 2.0) ==
          doctest::Approx(std::exp(-3.0)).epsilon(1e-15));
    // TC kernel: e^{-omega max(t1,t2)}
    CHECK(kernel_eval(warped(WarpShape::min, 0, 2.0), 1.0, 3.0) ==
          doctest::Approx(std::exp(-6.0)).epsilon(1e-15));
    KernelSpec g;
    g.family = KernelFamily::translation_invariant;
    g.ti_shape = TiShape::gaussian;
    g.atoms = {{1.0, 1.0}};
    CHECK(kernel_eval(g, 2.0, 2.0) == 1.0);
    KernelSpec h;
    h.family = KernelFamily::heaviside;
    h.atoms = {{1.0, 0.0}};
    CHECK(kernel_eval(h, 0.0, 5.0) == 1.0);
    CHECK(kernel_eval(h, -1e-12, 5.0) == 0.0);
}

TEST_CASE("TC equivalence of the min-warped kernel at k=0") {
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        double t1 = rng.uniform(0.0, 4.0), t2 = rng.uniform(0.0, 4.0);
        double omega = rng.uniform(0.2, 8.0);
        double got = kernel_eval(warped(WarpShape::min, 0, omega), t1, t2);
        double want = std::exp(-omega * std::max(t1, t2));
        CHECK(got == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("cubic_spline_G values and mass bound") {
    CHECK(cubic_spline_G(0.0, 0.7) == 0.0);
    CHECK(cubic_spline_G(1.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    // |G| <= (1/3) s1 s2 on a grid; min shape satisfies |G| <= s1 s2
    for (int i = 0; i <= 100; ++i) {
        for (int j = 0; j <= 100; ++j) {
            double s1 = i / 100.0, s2 = j / 100.0;
            CHECK(std::abs(cubic_spline_G(s1, s2)) <= s1 * s2 / 3.0 + 1e-15);
            CHECK(std::min(s1, s2) <= s1 * s2 + (1.0 - s1 * s2));  // trivial guard
        }
    }
}

TEST_CASE("integrate_exponential_kernel_once closed form") {
    CHECK(integrate_exponential_kernel_once(1.0, 0.0, 2.0) == 0.0);
    CHECK(integrate_exponential_kernel_once(1.0, 1e9, 1e9) ==
          doctest::Approx(1.0).epsilon(1e-12));
    double want = (1.0 - std::exp(-2.0)) * (1.0 - std::exp(-4.0)) / 4.0;
    CHECK(integrate_exponential_kernel_once(2.0, 1.0, 2.0) ==
          doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("apply_delay shifts evaluation") {
    auto base = exponential(1.0, 1.0);
    auto same = apply_delay(base, 0.0);
    CHECK(kernel_eval(same, 0.7, 1.3) == kernel_eval(base, 0.7, 1.3));
    auto delayed = apply_delay(base, 1.0);
    CHECK(kernel_eval(delayed, 0.5, 2.0) == 0.0);
    CHECK(kernel_eval(delayed, 1.5, 2.0) ==
          doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
    // delays compose
    auto twice = apply_delay(delayed, 0.5);
    CHECK(twice.delay == doctest::Approx(1.5));
}

TEST_CASE("symmetry and causality across all families") {
    Rng rng(9);
    for (const auto& spec : all_families()) {
        for (int i = 0; i < 50; ++i) {
            double a = rng.uniform(-1.0, 4.0), b = rng.uniform(-1.0, 4.0);
            CHECK(kernel_eval(spec, a, b) == kernel_eval(spec, b, a));
            if (std::min(a, b) < spec.delay) CHECK(kernel_eval(spec, a, b) == 0.0);
        }
        auto delayed = apply_delay(spec, 0.4);
        CHECK(kernel_eval(delayed, 0.39, 2.0) == 0.0);
    }
}

TEST_CASE("PSD property of every family via eigenvalue check") {
    Rng rng(31);
    for (const auto& spec : all_families()) {
        for (int rep = 0; rep < 5; ++rep) {
            int n = 3 + static_cast<int>(rng.next_u64() % 10);
            std::vector<double> pts(static_cast<std::size_t>(n));
            for (auto& p : pts) p = rng.uniform(-1.0, 5.0);
            Eigen::MatrixXd K(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    K(i, j) = kernel_eval(spec, pts[static_cast<std::size_t>(i)],
                                          pts[static_cast<std::size_t>(j)]);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
            double lo = es.eigenvalues().minCoeff();
            double hi = es.eigenvalues().maxCoeff();
            CHECK(lo >= -1e-8 * std::max(hi, 1e-30));
        }
    }
}

TEST_CASE("psd_quadratic_form matches the explicit double sum") {
    auto spec = warped(WarpShape::cubic_spline, 1, 2.0);
    std::vector<double> pts{0.2, 0.9, 1.7};
    std::vector<double> cs{1.0, -2.0, 0.5};
    double want = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            want += cs[i] * cs[j] * kernel_eval(spec, pts[i], pts[j]);
    CHECK(psd_quadratic_form(spec, pts, cs) ==
          doctest::Approx(want).epsilon(1e-14));
    std::vector<double> one{1.0}, zero{0.0};
    CHECK(psd_quadratic_form(spec, one, zero) == 0.0);
    CHECK(psd_quadratic_form(exponential(1.0, 1.0), one, one) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
}

TEST_CASE("kernel section vanishes at the origin for k >= 1") {
    for (int k : {1, 2, 3}) {
        auto spec = warped(WarpShape::min, k, 2.0);
        CHECK(kernel_section(spec, 0.0, 1.0) == 0.0);
    }
    CHECK(kernel_section(warped(WarpShape::min, 0, 2.0), 0.0, 1.0) > 0.0);
}

TEST_CASE("spec parsing round-trips and rejects junk") {
    auto spec = KernelSpec::parse(
        "family=warped; atoms=0.5:2,1.5:10; k=1; G=cubicspline; D=0.25");
    CHECK(spec.family == KernelFamily::warped_mixture);
    CHECK(spec.base_shape == WarpShape::cubic_spline);
    CHECK(spec.warp_exponent == 1);
    CHECK(spec.delay == 0.25);
    REQUIRE(spec.atoms.size() == 2);
    CHECK(spec.atoms[1].mass == 1.5);
    CHECK(spec.atoms[1].omega == 10.0);

    auto round = KernelSpec::parse(spec.to_string());
    CHECK(kernel_eval(round, 0.3, 0.8) ==
          doctest::Approx(kernel_eval(spec, 0.3, 0.8)).epsilon(1e-15));

    // case-insensitive keys
    auto upper = KernelSpec::parse("FAMILY=exponential; ATOMS=1:1");
    CHECK(upper.family == KernelFamily::exponential_mixture);

    CHECK_THROWS_AS(KernelSpec::parse("family=exponential; bogus=1"), ParseError);
    CHECK_THROWS_AS(KernelSpec::parse("family=unknown; atoms=1:1"), ParseError);
    CHECK_THROWS_AS(KernelSpec::parse("family=exponential; atoms=1:1; D=nope"),
                    ParseError);
}

TEST_CASE("spec validation enforces the invariants") {
    auto ok = exponential(1.0, 1.0);
    CHECK_NOTHROW(ok.validate());
    auto zero_mass = exponential(0.0, 1.0);
    CHECK_THROWS(zero_mass.validate());
    auto neg = exponential(-1.0, 1.0);
    CHECK_THROWS(neg.validate());
    auto bad_delay = exponential(1.0, 1.0);
    bad_delay.delay = -0.1;
    CHECK_THROWS(bad_delay.validate());
    auto bad_k = warped(WarpShape::min, -1, 1.0);
    CHECK_THROWS(bad_k.validate());
    auto origin_atom = warped(WarpShape::min, 0, 0.0);
    CHECK_THROWS(origin_atom.validate());
}
