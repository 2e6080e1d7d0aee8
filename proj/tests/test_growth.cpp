#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "growthlab/geometry.hpp"
#include "growthlab/growth.hpp"

using namespace growthlab;

TEST_CASE("gaussian_ellipse_at closed forms") {
    const auto circle = growth::gaussian_ellipse_at(Complex(0, 0), 4.0);
    CHECK(circle.leading_coefficient() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(circle.laurent_data().u[1]) == 0.0);

    const auto m = growth::gaussian_ellipse_at(Complex(0.25, 0), 0.75);
    CHECK(m.leading_coefficient() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(m.laurent_data().u[1] - Complex(0.5, 0)) < 1e-14);

    CHECK_THROWS_AS(growth::gaussian_ellipse_at(Complex(0.5, 0), 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(growth::gaussian_ellipse_at(Complex(0.6, 0), 1.0),
                    std::domain_error);
}

TEST_CASE("gaussian ellipse boundary satisfies the reduced-curve equation") {
    const Complex t2(0.2, 0.0);
    const double t0 = 1.0;
    const auto map = growth::gaussian_ellipse_at(t2, t0);
    const double x = 4.0 * std::norm(t2);
    const double c = 2.0 / (1.0 + x);
    const double d = t0 * (1.0 - x) / (1.0 + x);
    CHECK(c == doctest::Approx(1.72413793103).epsilon(1e-9));
    CHECK(d == doctest::Approx(0.72413793103).epsilon(1e-9));
    for (const Complex& z : geometry::trace_boundary(map, 64)) {
        const double lhs = std::norm(z) -
                           c * (t2 * z * z + std::conj(t2 * z * z)).real() - d;
        CHECK(std::abs(lhs) < 1e-9);
    }
}

TEST_CASE("critical_area closed form and stationarity") {
    const auto c3 = growth::critical_area(3, Complex(1.0 / 6.0, 0.0));
    CHECK(c3.r_c == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c3.t_c == doctest::Approx(0.5).epsilon(1e-14));

    const auto c3b = growth::critical_area(3, Complex(1.0 / 12.0, 0.0));
    CHECK(c3b.r_c == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c3b.t_c == doctest::Approx(2.0).epsilon(1e-14));

    // dt0/d(r^2) vanishes at r_c for the sextic as well.
    const Complex t6(1.0 / 30.0, 0.0);
    const auto c6 = growth::critical_area(6, t6);
    CHECK(c6.r_c == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c6.t_c == doctest::Approx(0.8).epsilon(1e-12));
    const double cc = 5.0 * 36.0 * std::norm(t6);
    auto t0_of = [&](double s) { return s - cc * std::pow(s, 5.0); };
    const double s = c6.r_c * c6.r_c;
    const double deriv = (t0_of(s + 1e-6) - t0_of(s - 1e-6)) / 2e-6;
    CHECK(std::abs(deriv) < 1e-9);

    CHECK_THROWS_AS(growth::critical_area(3, Complex(0, 0)), std::invalid_argument);
}

TEST_CASE("monomial_growth physical branch") {
    const Complex t3(1.0 / 6.0, 0.0);
    const auto empty = growth::monomial_growth(3, t3, 0.0);
    CHECK(empty.leading_coefficient() == 0.0);

    const auto crit = growth::monomial_growth(3, t3, 0.5);
    CHECK(crit.leading_coefficient() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(crit.laurent_data().u[2] - Complex(0.5, 0)) < 1e-10);

    // Independent bisection oracle for the small root of s - s^2/2 = t0.
    const double t0 = 0.1;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid - 0.5 * mid * mid < t0 ? lo : hi) = mid;
    }
    const auto small = growth::monomial_growth(3, t3, t0);
    const double s = small.leading_coefficient() * small.leading_coefficient();
    CHECK(s == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
    CHECK(s == doctest::Approx(t0 + 0.5 * t0 * t0).epsilon(2e-2));

    CHECK_THROWS_AS(growth::monomial_growth(3, t3, 0.51), SupercriticalError);
}

TEST_CASE("monomial r(t0) is strictly increasing up to the critical area") {
    const Complex t3(1.0 / 6.0, 0.0);
    double prev = 0.0;
    for (int j = 1; j <= 20; ++j) {
        const double t0 = 0.5 * j / 20.0;
        const double r = growth::monomial_growth(3, t3, t0).leading_coefficient();
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("cusp count at criticality equals the monomial degree") {
    for (int n : {3, 4, 5, 6}) {
        const Complex tn(1.0 / (n * (n - 1)), 0.0);
        const auto cd = growth::critical_area(n, tn);
        const auto map = growth::monomial_growth(n, tn, cd.t_c);
        CHECK(geometry::find_cusps(map, 1e-6).size() ==
              static_cast<std::size_t>(n));
    }
}

TEST_CASE("joukowski_growth reproduces the log-potential moments") {
    const double alpha = -0.1, beta = 2.0;
    const auto map = growth::joukowski_growth(alpha, beta, 0.5);
    REQUIRE(geometry::check_univalent(map, 1024));
    const auto mv = geometry::moments(map, 4);
    CHECK(mv.t0 == doctest::Approx(0.5).epsilon(1e-10));
    for (int k = 1; k <= 4; ++k) {
        const double expected = alpha / (k * std::pow(beta, k));
        CHECK(std::abs(mv.t[k - 1] - Complex(expected, 0.0)) < 1e-7);
    }
}

TEST_CASE("joukowski_growth approaches a circle as alpha -> 0-") {
    const auto map = growth::joukowski_growth(-1e-6, 2.0, 0.4);
    const auto& m = map.rational_data();
    CHECK(m.r == doctest::Approx(std::sqrt(0.4)).epsilon(1e-4));
    CHECK(std::abs(m.u) < 1e-5);
}

TEST_CASE("grow_sequence conserves moments and the area ladder") {
    SUBCASE("gaussian") {
        const auto traj = growth::grow_sequence(
            growth::Potential::gaussian(Complex(0.25, 0), 0.1), 10);
        REQUIRE(traj.steps.size() == 10);
        CHECK_FALSE(traj.critical);
        CHECK_FALSE(traj.t_c.has_value());
        const auto first = geometry::moments(traj.steps[0].map, 5);
        for (const auto& step : traj.steps) {
            const auto mv = geometry::moments(step.map, 5);
            CHECK(std::abs(mv.t0 - step.t0) < 1e-10);
            for (int k = 0; k < 5; ++k)
                CHECK(std::abs(mv.t[k] - first.t[k]) < 1e-10);
        }
    }
    SUBCASE("monomial") {
        const auto traj = growth::grow_sequence(
            growth::Potential::monomial(3, Complex(1.0 / 6.0, 0), 0.05), 10);
        REQUIRE(traj.steps.size() == 10);
        CHECK(traj.critical);  // 10 * 0.05 reaches t_c
        CHECK(traj.t_c.value() == doctest::Approx(0.5).epsilon(1e-12));
        for (const auto& step : traj.steps) {
            const auto mv = geometry::moments(step.map, 6);
            CHECK(std::abs(mv.t0 - step.t0) < 1e-10);
            CHECK(std::abs(mv.t[2] - Complex(1.0 / 6.0, 0)) < 1e-8);
        }
    }
    SUBCASE("log") {
        const auto traj = growth::grow_sequence(
            growth::Potential::log_charge(-0.1, 2.0, 0.025), 20);
        REQUIRE(traj.steps.size() == 20);
        const auto first = geometry::moments(traj.steps[0].map, 6);
        for (const auto& step : traj.steps) {
            const auto mv = geometry::moments(step.map, 6);
            CHECK(std::abs(mv.t0 - step.t0) < 1e-9);
            for (int k = 0; k < 6; ++k)
                CHECK(std::abs(mv.t[k] - first.t[k]) < 1e-7);
        }
    }
}

TEST_CASE("gaussian growth is unbounded below criticality") {
    const auto traj = growth::grow_sequence(
        growth::Potential::gaussian(Complex(0.3, 0.1), 0.05), 100);
    CHECK(traj.steps.size() == 100);
    CHECK_FALSE(traj.critical);
}

TEST_CASE("grow_sequence rejects supercritical requests") {
    CHECK_THROWS_AS(growth::grow_sequence(
                        growth::Potential::monomial(3, Complex(1.0 / 6.0, 0), 0.1), 6),
                    SupercriticalError);
}

TEST_CASE("potential validation") {
    CHECK_THROWS_AS(growth::Potential::gaussian(Complex(0.51, 0), 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(growth::Potential::monomial(2, Complex(0.1, 0), 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(growth::Potential::log_charge(0.1, 2.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(growth::Potential::gaussian(Complex(0.2, 0), 0.0),
                    std::invalid_argument);
}
