#pragma once

#include <Eigen/Dense>
#include <vector>

#include "growthlab/painleve.hpp"
#include "growthlab/types.hpp"

namespace growthlab::lattice {

// Discrete string-equation solution {r_n^2, u_n} at fixed hbar.
struct LatticeState {
    enum class Kind { Gaussian, Cubic };
    Kind kind = Kind::Gaussian;
    double hbar = 1e-2;
    Complex t2{0.0, 0.0};
    Complex t3{0.0, 0.0};
    Eigen::VectorXd r_sq;      // index n = 0..N
    Eigen::VectorXcd u;        // u_n, same indexing; leading entries zero
    Eigen::VectorXd residual;  // per-site string-equation residual
};

// Two-term Gaussian recurrence in closed form:
// r_n^2 = n hbar / (1 - 4|t2|^2), u_{n+1} = 2 conj(t2) r_n.
LatticeState gaussian_recurrence(Complex t2, double hbar, int N);

// Complex curve det[L_n(z) - zbar] = 0 of the reduced 2x2 Lax matrix,
// expanded and normalized so the z zbar coefficient is 1. The zbar^2
// coefficient is conj(z2).
struct EllipseCurveCoeffs {
    Complex z2;
    double constant;
};
EllipseCurveCoeffs gaussian_lax_curve(Complex t2, double hbar, int n);

// Cubic string equation r_n^2 [1 - 9|t3|^2 (r_{n-1}^2 + r_{n+1}^2)] = n hbar
// solved as a two-point boundary value problem: r_0^2 = 0 and r_N^2 pinned
// to the scaling form 1 - hbar^{2/5} u(nu(N)) supplied by the Painleve
// solution; damped Newton on the full vector from the continuum-root seed.
// The pole-free transcendent only exists up to its first pole, so nu(N)
// must lie inside the range covered by `pi`.
LatticeState cubic_string_solve(Complex t3, double hbar, int N,
                                const painleve::PainleveSolution& pi);

struct ScalingSample {
    double nu;
    double u;
    int n;
};

// Scaling data nu = (n hbar - t_c) / hbar^{4/5}, u = (1 - r_n^2) / hbar^{2/5}
// for |nu| <= nu_window. Requires the 6|t3| = 1 normalization (t_c = 1/2).
std::vector<ScalingSample> scaling_extract(const LatticeState& state,
                                           double nu_window = 10.0);

}  // namespace growthlab::lattice
