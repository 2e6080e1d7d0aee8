#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "growthlab/geometry.hpp"
#include "growthlab/growth.hpp"

using namespace growthlab;
using geometry::ConformalMap;

namespace {

ConformalMap cubic_critical_map() {
    Eigen::VectorXcd u(3);
    u << Complex(0, 0), Complex(0, 0), Complex(0.5, 0);
    return ConformalMap::laurent(1.0, u);
}

// Independent oracle for the exterior harmonic moments: the area integral
// t_k = -1/(pi k) \int_{exterior} z^{-k} d^2 z over an annulus truncated at
// |z| = 50, in polar coordinates around the origin with the boundary radius
// taken from the map. The radial integral is done by Gauss-Legendre in
// log-radius, the angular one by the trapezoid rule in the w-parameter with
// the Jacobian d(theta)/d(phi).
Complex exterior_moment_oracle(const ConformalMap& map, int k, int n_theta = 4096,
                               int n_rad = 64) {
    const double big_r = 50.0;
    // 64-point Gauss-Legendre nodes on [0,1] built from Eigen's
    // tridiagonal eigen-solver (Golub-Welsch).
    Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(n_rad, n_rad);
    for (int i = 1; i < n_rad; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        jm(i, i - 1) = jm(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
    Eigen::VectorXd nodes = es.eigenvalues();
    Eigen::VectorXd weights(n_rad);
    for (int i = 0; i < n_rad; ++i)
        weights[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);

    Complex acc(0.0, 0.0);
    for (int j = 0; j < n_theta; ++j) {
        const double phi = 2.0 * kPi * j / n_theta;
        const Complex w(std::cos(phi), std::sin(phi));
        const Complex z = map(w);
        const double rho_b = std::abs(z);
        const double theta = std::arg(z);
        // dtheta/dphi = Im[z'(w) i w / z]
        const double jac = (map.derivative(w) * Complex(0, 1) * w / z).imag();
        // int_{rho_b}^{R} rho^{1-k} drho with rho = rho_b e^{s L}, L = log(R/rho_b)
        const double L = std::log(big_r / rho_b);
        double radial = 0.0;
        for (int q = 0; q < n_rad; ++q) {
            const double s = 0.5 * (nodes[q] + 1.0);
            const double rho = rho_b * std::exp(s * L);
            radial += 0.5 * weights[q] * L * std::pow(rho, 2.0 - k);
        }
        acc += std::exp(Complex(0.0, -k * theta)) * radial * jac;
    }
    acc *= 2.0 * kPi / n_theta;     // trapezoid in phi
    return -acc / (kPi * k);
}

}  // namespace

TEST_CASE("eval_map basics") {
    const auto ident = ConformalMap::laurent(1.0);
    CHECK(geometry::eval_map(ident, Complex(0, 1)) == Complex(0, 1));

    const auto cubic = cubic_critical_map();
    CHECK(geometry::eval_map(cubic, Complex(1, 0)).real() == doctest::Approx(1.5).epsilon(1e-15));
    const Complex w3 = std::polar(1.0, 2.0 * kPi / 3.0);
    const Complex z3 = geometry::eval_map(cubic, w3);
    CHECK(std::abs(z3 - 1.5 * w3) < 1e-14);

    CHECK_THROWS_AS(geometry::eval_map(ident, Complex(0.5, 0)), std::domain_error);
    // Points just outside the guard band evaluate fine.
    CHECK_NOTHROW(geometry::eval_map(ident, Complex(1.0 - 5e-13, 0)));
}

TEST_CASE("trace_boundary samples the image of the unit circle") {
    const auto circle = ConformalMap::laurent(1.0);
    const auto pts = geometry::trace_boundary(circle, 16);
    CHECK(std::abs(pts[0] - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(pts[4] - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(pts[8] - Complex(-1, 0)) < 1e-15);
    CHECK(std::abs(pts[12] - Complex(0, -1)) < 1e-15);

    Eigen::VectorXcd u(2);
    u << Complex(0, 0), Complex(0.3, 0);
    const auto ellipse = ConformalMap::laurent(1.0, u);
    const auto ep = geometry::trace_boundary(ellipse, 16);
    CHECK(std::abs(ep[0] - Complex(1.3, 0)) < 1e-15);
    CHECK(std::abs(ep[4] - Complex(0, 0.7)) < 1e-15);
    CHECK(std::abs(ep[8] - Complex(-1.3, 0)) < 1e-15);

    CHECK_THROWS_AS(geometry::trace_boundary(circle, 8), std::invalid_argument);

    // A power-of-two multiple of 3 hits the three cusp points exactly.
    const auto cusps = geometry::trace_boundary(cubic_critical_map(), 48);
    for (int j : {0, 16, 32}) {
        const Complex w = std::polar(1.0, 2.0 * kPi * j / 48.0);
        CHECK(std::abs(cusps[j] - 1.5 * w) < 1e-14);
    }
}

TEST_CASE("moments: circle and cubic-critical values") {
    const auto big_circle = ConformalMap::laurent(2.0);
    const auto mv = geometry::moments(big_circle, 6);
    CHECK(mv.t0 == doctest::Approx(4.0).epsilon(1e-14));
    for (int k = 0; k < 6; ++k) CHECK(std::abs(mv.t[k]) < 1e-13);

    const auto cubic = cubic_critical_map();
    const auto mc = geometry::moments(cubic, 6);
    CHECK(mc.t0 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(mc.t[2] - Complex(1.0 / 6.0, 0.0)) < 1e-12);
    for (int k : {1, 2, 4, 5, 6}) CHECK(std::abs(mc.t[k - 1]) < 1e-10);
}

TEST_CASE("moments against the 2-D exterior-integral oracle") {
    const auto cubic = cubic_critical_map();
    const Complex t3 = exterior_moment_oracle(cubic, 3);
    CHECK(std::abs(t3 - Complex(1.0 / 6.0, 0.0)) < 1e-8);
    const Complex t6 = exterior_moment_oracle(cubic, 6);
    CHECK(std::abs(t6) < 1e-8);

    // A generic two-coefficient map, contour quadrature vs area integral.
    Eigen::VectorXcd u(3);
    u << Complex(0.05, 0.02), Complex(0.12, -0.04), Complex(0.06, 0.03);
    const auto generic = ConformalMap::laurent(1.0, u);
    REQUIRE(geometry::check_univalent(generic, 1024));
    const auto mv = geometry::moments(generic, 4);
    for (int k = 3; k <= 4; ++k) {
        const Complex oracle = exterior_moment_oracle(generic, k);
        CHECK(std::abs(mv.t[k - 1] - oracle) < 1e-8);
    }
}

TEST_CASE("moments: closed-form t0 equals quadrature t0") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-0.05, 0.05);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXcd u(4);
        for (int k = 0; k < 4; ++k) u[k] = Complex(unif(rng), unif(rng));
        const auto map = ConformalMap::laurent(1.0 + 0.3 * trial / 10.0, u);
        const double closed = geometry::t0_closed_form(map);
        const double quad = geometry::t0_quadrature(map);
        CHECK(std::abs(closed - quad) <= 1e-9 * std::max(1.0, closed));
    }
    // Rational map: geometric-series closed form against quadrature.
    const auto rat = ConformalMap::rational(1.0, Complex(-0.02, 0), Complex(0.4, 0));
    CHECK(std::abs(geometry::t0_closed_form(rat) - geometry::t0_quadrature(rat)) < 1e-10);
    CHECK(geometry::moments(rat, 0).t0 ==
          doctest::Approx(geometry::t0_closed_form(rat)).epsilon(1e-9));
}

TEST_CASE("moment quadrature converges spectrally") {
    // The pole near the circle slows the Fourier decay enough that 512
    // nodes are not yet at rounding level.
    const auto map = ConformalMap::rational(1.0, Complex(5e-4, 0), Complex(0.96, 0));
    REQUIRE(geometry::check_univalent(map, 1024));
    const auto ref = geometry::moments(map, 4, 8192);
    const auto m512 = geometry::moments(map, 4, 512);
    const auto m1024 = geometry::moments(map, 4, 1024);
    double e512 = std::abs(m512.t0 - ref.t0);
    double e1024 = std::abs(m1024.t0 - ref.t0);
    for (int k = 0; k < 4; ++k) {
        e512 = std::max(e512, std::abs(m512.t[k] - ref.t[k]));
        e1024 = std::max(e1024, std::abs(m1024.t[k] - ref.t[k]));
    }
    // One doubling of the trapezoid must gain at least three orders.
    CHECK(e512 > 1e-12);
    CHECK(e512 >= 1e3 * std::max(e1024, 1e-16));
}

TEST_CASE("moments rejects a boundary through the origin") {
    // z(w) = w - 1 passes through the origin at w = 1.
    Eigen::VectorXcd u(1);
    u << Complex(-1.0, 0.0);
    const auto map = ConformalMap::laurent(1.0, u);
    CHECK_THROWS_AS(geometry::moments(map, 2), std::runtime_error);
}

TEST_CASE("poisson bracket: circle family, frozen family, ellipse family") {
    const auto circle_family = [](double t0) {
        return ConformalMap::laurent(std::sqrt(t0));
    };
    // Central differences of sqrt(t0) give 1 + delta^2/8 exactly.
    for (double delta : {1e-3, 1e-4, 1e-5}) {
        const double br =
            geometry::poisson_bracket_check(circle_family, 1.0, Complex(1, 0), delta);
        CHECK(std::abs(br - 1.0) <= 0.2 * delta * delta + 1e-12);
    }

    const auto frozen = [](double) {
        Eigen::VectorXcd u(2);
        u << Complex(0, 0), Complex(0.3, 0);
        return ConformalMap::laurent(1.2, u);
    };
    CHECK(std::abs(geometry::poisson_bracket_check(frozen, 1.0, Complex(0, 1), 1e-4)) <
          1e-12);

    const auto ellipse_family = [](double t0) {
        return growth::gaussian_ellipse_at(Complex(0.2, 0.0), t0);
    };
    const Complex w = std::polar(1.0, kPi / 5.0);
    const double br = geometry::poisson_bracket_check(ellipse_family, 1.0, w, 1e-4);
    CHECK(std::abs(br - 1.0) < 1e-6);
}

TEST_CASE("poisson bracket converges at second order in the t0 step") {
    const auto fam = [](double t0) {
        return growth::gaussian_ellipse_at(Complex(0.15, 0.1), t0);
    };
    const Complex w = std::polar(1.0, 0.7);
    const double e1 = std::abs(geometry::poisson_bracket_check(fam, 1.0, w, 2e-3) - 1.0);
    const double e2 = std::abs(geometry::poisson_bracket_check(fam, 1.0, w, 1e-3) - 1.0);
    CHECK(e2 * 2.5 < e1);   // ratio 4 expected
    CHECK(e1 < 1e-4);
}

TEST_CASE("find_cusps: ellipse has none, cubic-critical has three") {
    Eigen::VectorXcd u(2);
    u << Complex(0, 0), Complex(0.3, 0);
    const auto ellipse = ConformalMap::laurent(1.0, u);
    CHECK(geometry::find_cusps(ellipse, 0.05).empty());

    const auto cusps = geometry::find_cusps(cubic_critical_map(), 1e-8);
    REQUIRE(cusps.size() == 3);
    for (const auto& c : cusps) {
        CHECK(std::abs(std::pow(c.w, 3) - 1.0) < 1e-10);
        CHECK(std::abs(c.z - 1.5 * c.w) < 1e-10);
        CHECK(std::abs(std::abs(c.w) - 1.0) <= 1e-8);
    }

    // Sextic critical map carries six boundary cusps.
    const auto sextic = growth::monomial_growth(
        6, Complex(1.0 / 30.0, 0.0), growth::critical_area(6, Complex(1.0 / 30.0, 0.0)).t_c);
    CHECK(geometry::find_cusps(sextic, 1e-6).size() == 6);

    CHECK_THROWS_AS(geometry::find_cusps(ellipse, 0.5), std::invalid_argument);
}

TEST_CASE("find_cusps commutes with uniform scaling") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-0.1, 0.1);
    Eigen::VectorXcd u(4);
    for (int k = 0; k < 4; ++k) u[k] = Complex(unif(rng), unif(rng));
    u[3] += Complex(0.2, 0.0);
    const auto map = ConformalMap::laurent(1.0, u);
    const double tol = 0.09;
    const auto base = geometry::find_cusps(map, tol);
    const auto scaled = geometry::find_cusps(map.scaled(2.5), tol);
    REQUIRE(base.size() == scaled.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(std::abs(base[i].w - scaled[i].w) < 1e-10);
        CHECK(std::abs(2.5 * base[i].z - scaled[i].z) < 1e-10);
    }
}

TEST_CASE("univalence check accepts embeddings and rejects overlaps") {
    CHECK(geometry::check_univalent(cubic_critical_map()));
    const auto rat = ConformalMap::rational(1.0, Complex(-0.05, 0), Complex(0.3, 0));
    CHECK(geometry::check_univalent(rat));

    // Past the cubic critical coefficient the boundary develops three
    // self-intersecting loops.
    Eigen::VectorXcd u(3);
    u << Complex(0, 0), Complex(0, 0), Complex(0.7, 0);
    CHECK_FALSE(geometry::check_univalent(ConformalMap::laurent(1.0, u), 512));
}

TEST_CASE("map constructors validate their invariants") {
    CHECK_THROWS_AS(ConformalMap::rational(1.0, Complex(0.1, 0), Complex(1.2, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ConformalMap::rational(-1.0, Complex(0.1, 0), Complex(0.5, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ConformalMap::laurent(-0.5), std::invalid_argument);
}
