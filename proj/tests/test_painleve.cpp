#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "growthlab/ode.hpp"
#include "growthlab/painleve.hpp"

using namespace growthlab;
using namespace growthlab::painleve;

namespace {

// Shared solve; the suite reuses one instance.
const PainleveSolution& solution() {
    static const PainleveSolution sol = solve_pole_free(-20.0, 1.0, 1e-12);
    return sol;
}

double series_residual(double nu, int order) {
    // Finite-difference the truncated series through the equation.
    const double h = 1e-4;
    const double um = asymptotic_u(nu - h, order).u;
    const double u0 = asymptotic_u(nu, order).u;
    const double up = asymptotic_u(nu + h, order).u;
    const double dd = (up - 2.0 * u0 + um) / (h * h);
    return std::abs(pi_residual(u0, dd, nu));
}

}  // namespace

TEST_CASE("pi_residual and the rescaling constants") {
    CHECK(pi_residual(std::sqrt(4.0), 0.0, -2.0) == doctest::Approx(0.0));
    CHECK(pi_residual(0.0, 0.0, 1.0) == doctest::Approx(-4.0));

    const auto rc = rescale_constants();
    CHECK(rc.c2 == doctest::Approx(4.0 * rc.c1 * rc.c1 * rc.c1).epsilon(1e-15));
    CHECK(8.0 * std::pow(rc.c1, 5.0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("asymptotic series: leading term and order-by-order improvement") {
    const auto a0 = asymptotic_u(-8.0, 0);
    CHECK(a0.u == doctest::Approx(4.0).epsilon(1e-15));

    // The nu^{-2} correction determined by substitution is -1/(16 nu^2).
    const auto a1 = asymptotic_u(-8.0, 1);
    CHECK(a1.u - a0.u == doctest::Approx(-1.0 / (16.0 * 64.0)).epsilon(1e-12));

    CHECK(series_residual(-8.0, 1) * 10.0 <= series_residual(-8.0, 0));
    CHECK(series_residual(-8.0, 2) * 5.0 <= series_residual(-8.0, 1));

    // u / sqrt(-2 nu) -> 1 far out.
    const auto far = asymptotic_u(-1e4, 2);
    CHECK(far.u / std::sqrt(2e4) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(asymptotic_u(-4.0, 1), std::domain_error);
}

TEST_CASE("solve_pole_free: residual, positivity, span") {
    const auto& sol = solution();
    CHECK(sol.residual_max <= 1e-6);
    REQUIRE(sol.nu0.has_value());
    // Pole-free branch stays positive left of the first zero.
    for (Eigen::Index i = 0; i < sol.grid.size(); ++i)
        if (sol.grid[i] < *sol.nu0 - 1e-9) CHECK(sol.u[i] > 0.0);
    // Grid spans the required window around the zero.
    CHECK(sol.grid[0] == doctest::Approx(-20.0));
    CHECK(sol.grid[sol.grid.size() - 1] >= *sol.nu0 + 0.25);
    CHECK(sol.shooting_gap <= 1e-12);
}

TEST_CASE("solve_pole_free input validation") {
    CHECK_THROWS_AS(solve_pole_free(-10.0, 1.0, 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(solve_pole_free(-20.0, -2.0, 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(solve_pole_free(-20.0, 1.0, 1e-13), std::invalid_argument);
}

TEST_CASE("asymptote attachment for nu <= -10") {
    const auto& sol = solution();
    for (double nu = -20.0; nu <= -10.0; nu += 0.5) {
        const double correction = std::abs(asymptotic_u(nu, 1).u - asymptotic_u(nu, 0).u);
        CHECK(std::abs(sol.u_at(nu) - std::sqrt(-2.0 * nu)) <= 2.0 * correction);
    }
}

TEST_CASE("first zero and slope, with restart consistency") {
    const auto& sol = solution();
    const auto zs = find_zero_and_slope(sol);
    CHECK(std::abs(sol.u_at(zs.nu0)) < 1e-9);
    CHECK(zs.alpha < 0.0);
    CHECK(zs.alpha == doctest::Approx(sol.u_dot_at(zs.nu0)).epsilon(1e-12));

    // Reintegrating from (nu0, 0, alpha) reproduces the stored branch.
    using Ode = Dop853<2>;
    Ode ode(
        [](double nu, const Ode::State& y, Ode::State& dy) {
            dy[0] = y[1];
            dy[1] = 2.0 * y[0] * y[0] + 4.0 * nu;
        },
        {.rtol = 1e-12, .atol = 1e-14});
    std::vector<Ode::Segment> rec;
    const auto res = ode.integrate(zs.nu0, zs.nu0 + 0.25,
                                   Ode::State(0.0, zs.alpha), nullptr, &rec);
    REQUIRE(res.status == Ode::Status::Done);
    for (double nu = zs.nu0; nu <= zs.nu0 + 0.25; nu += 0.01)
        CHECK(std::abs(dense_eval<2>(rec, nu)[0] - sol.u_at(nu)) < 1e-6);
}

TEST_CASE("paper comparison values are reported, not asserted") {
    const auto& sol = solution();
    const double paper_nu0 = -std::pow(2.0, 1.4);
    const double paper_alpha = -3.0 * std::pow(2.0, 0.4);
    MESSAGE("computed nu0 = ", *sol.nu0, " vs paper ", paper_nu0);
    MESSAGE("computed alpha = ", *sol.alpha, " vs paper ", paper_alpha);
    CHECK(std::isfinite(*sol.nu0));
    CHECK(std::isfinite(*sol.alpha));
}

TEST_CASE("local Taylor pattern at the first zero") {
    const auto& sol = solution();
    const auto zs = find_zero_and_slope(sol);
    const auto tc = taylor_check(sol);
    CHECK(tc.c1 == doctest::Approx(zs.alpha).epsilon(1e-6));
    CHECK(tc.c2 / zs.nu0 == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(tc.c3 == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
    CHECK(tc.c4 / (tc.c1 * tc.c1) == doctest::Approx(1.0 / 6.0).epsilon(1e-3));
}

TEST_CASE("rescale covariance against an independent standard-form solve") {
    const auto& sol = solution();
    const auto rc = rescale_constants();
    SolveOptions opt;
    opt.form = kStandardForm;
    // Standard form lives on a stretched axis; solve deep enough to cover
    // the mapped comparison window.
    const auto std_sol = solve_pole_free(-20.0, 1.0, 1e-12, opt);

    // u(nu) = c2 u_std(nu / c1).
    for (double nu = -10.0; nu <= *sol.nu0; nu += 0.05) {
        const double mapped = rc.c2 * std_sol.u_at(nu / rc.c1);
        CHECK(std::abs(mapped - sol.u_at(nu)) < 1e-6);
    }
    REQUIRE(std_sol.nu0.has_value());
    CHECK(std::abs(*std_sol.nu0 - *sol.nu0 / rc.c1) < 1e-6);
}

TEST_CASE("epsilon bracket is recorded") {
    const auto& sol = solution();
    MESSAGE("eps bracket [", sol.eps_lo, ", ", sol.eps_hi, "]");
    CHECK(sol.eps_hi >= sol.eps_lo);
    // Whether zero lies inside the bracket is recorded, not asserted: the
    // separatrix offset from the truncated series is what the shot measures.
    CHECK(std::abs(sol.eps) < 1e-3);
}
