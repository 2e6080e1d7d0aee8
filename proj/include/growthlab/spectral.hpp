#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "growthlab/types.hpp"

namespace growthlab::spectral {

// Jet of the scaling function u at one nu, closed through the equation:
// u_ddot = 2 u^2 + 4 nu and u_dddot = 4 u u_dot + 4.
struct UJet {
    double nu = 0.0;
    double u = 0.0;
    double u_dot = 0.0;
    double u_ddot = 0.0;
    double u_dddot = 0.0;

    static UJet closed(double nu, double u, double u_dot) {
        return {nu, u, u_dot, 2.0 * u * u + 4.0 * nu, 4.0 * u * u_dot + 4.0};
    }
    static UJet raw(double nu, double u, double u_dot, double u_ddot,
                    double u_dddot) {
        return {nu, u, u_dot, u_ddot, u_dddot};
    }
};

// Elliptic-curve right-hand side
// (2z/3 - u/3)^2 (2z/3 + 2u/3) + (2z/3)(u_ddot/6) + (u_dot^2 - 2 u u_ddot)/36.
Complex lambda_squared(Complex zeta, const UJet& jet);
double lambda_squared(double zeta, const UJet& jet);

enum class CurveClass { OneReal, ThreeReal, Degenerate };

const char* to_string(CurveClass c);

struct CurveSample {
    double nu = 0.0;
    double p = 0.0;  // 2 nu / 3
    double q = 0.0;  // (u_dot/6)^2 - (u^2 + 6 nu) u / 27
    std::array<Complex, 3> mu_roots;
    std::array<Complex, 3> zeta_roots;  // 3 mu / 2
    double cardano = 0.0;               // (q/2)^2 + (p/3)^3
    CurveClass classification = CurveClass::OneReal;
};

// Branch points of the curve: mu^3 + p mu + q = 0 by companion-matrix
// eigenvalues with one Newton polish; roots sorted by real part.
CurveSample branch_points(const UJet& jet);

// Sign of (q/2)^2 + (p/3)^3: positive one real root, negative three real,
// zero (within 1e-12) degenerate.
CurveClass classify_cardano(double p, double q);

struct LaxPair {
    Eigen::Matrix2d lambda;
    Eigen::Matrix2d q;
};

// Lambda = [[udot/6, (2z-u)/3], [uddot/6 + 2(z+u)(2z-u)/9, -udot/6]],
// Q = [[0, 1], [2(z+u)/3, 0]].
LaxPair lax_matrices(double zeta, const UJet& jet);

// Max-abs entry of dLambda/dnu - dQ/dzeta - [Q, Lambda]; analytically
// |u_dddot - 4 u u_dot - 4| / 6 in the (2,1) slot and zero elsewhere.
double compatibility_residual(const UJet& jet, double zeta);

using JetSource = std::function<UJet(double nu)>;

struct WavefunctionPath {
    Eigen::VectorXd zeta;
    Eigen::Matrix2Xd psi;  // column j = Psi(zeta[j])
};

// Integrates Psi' = Lambda Psi in zeta at fixed nu.
WavefunctionPath integrate_wavefunction(const JetSource& jets, double nu,
                                        double zeta_a, double zeta_b,
                                        Eigen::Vector2d psi0,
                                        int samples = 101);

// Transports Psi around the closed rectangle
// (zeta, nu) -> (+side, .) -> (., +side) -> back, alternating the
// Lambda-flow in zeta and the Q-flow in nu; returns the final vector.
// Zero curvature makes it return to psi0.
Eigen::Vector2d rectangle_transport(const JetSource& jets, double nu,
                                    double zeta, double side,
                                    Eigen::Vector2d psi0);

}  // namespace growthlab::spectral
