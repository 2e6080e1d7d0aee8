#pragma once

#include <Eigen/Dense>
#include <optional>

#include "growthlab/types.hpp"

namespace growthlab::painleve {

// Coefficients of u'' = quad u^2 + lin nu. The working normalization is
// (2, 4); rescaling u -> c2 u, nu -> c1 nu with c2 = 4 c1^3, 8 c1^5 = 3
// carries it to the standard form (3, 1).
struct EquationForm {
    double quad = 2.0;
    double lin = 4.0;
};
inline constexpr EquationForm kWorkingForm{2.0, 4.0};
inline constexpr EquationForm kStandardForm{3.0, 1.0};

// u_ddot - 2 u^2 - 4 nu.
double pi_residual(double u, double u_ddot, double nu);

struct RescaleConstants {
    double c1;  // (3/8)^{1/5}
    double c2;  // 4 c1^3
};
RescaleConstants rescale_constants();

struct AsymptoticValue {
    double u;
    double u_dot;
};

// Series solution on the pole-free branch as nu -> -infinity,
// u = sqrt(-2 nu) - 1/(16 nu^2) + O(nu^{-9/2}) in the working form; the
// nu^{-2} coefficient comes from order-by-order substitution into the
// equation, for any form it is -1/(8 quad nu^2). Requires nu <= -5.
AsymptoticValue asymptotic_u(double nu, int order,
                             const EquationForm& form = kWorkingForm);

class PainleveSolution {
public:
    Eigen::VectorXd grid, u, u_dot;
    std::optional<double> nu0;    // first zero of u
    std::optional<double> alpha;  // u_dot at nu0
    double residual_max = 0.0;    // max 5-point FD residual on the grid
    double shooting_gap = 0.0;    // final width of the epsilon bracket
    double eps_lo = 0.0, eps_hi = 0.0, eps = 0.0;
    EquationForm form = kWorkingForm;

    bool covers(double nu) const;
    // Quintic Hermite interpolation closed through the equation
    // (u_ddot = quad u^2 + lin nu on the nodes).
    double u_at(double nu) const;
    double u_dot_at(double nu) const;
};

struct SolveOptions {
    double grid_step = 1e-3;
    double bisect_anchor = -6.0;  // shooting anchor; deeper start is reached
                                  // by backward integration, which contracts
                                  // onto the separatrix
    double rtol = 1e-11;
    EquationForm form = kWorkingForm;
};

// Pole-free solution on the negative axis by shooting: initial data from
// the asymptotic series perturbed by amplitude eps along the locally
// growing mode, with eps bisected between blow-up to +infinity and the
// dive into the oscillatory basin.
PainleveSolution solve_pole_free(double nu_start, double nu_end, double tol,
                                 const SolveOptions& opt = {});

struct ZeroSlope {
    double nu0;
    double alpha;
};

// Smallest grid-bracketed root of u(nu) = 0 refined on the dense output,
// with the slope there.
ZeroSlope find_zero_and_slope(const PainleveSolution& sol);

struct TaylorCoeffs {
    double c1, c2, c3, c4;
};

// Degree-4 least-squares fit of u about nu0 on [nu0 - 0.05, nu0 + 0.05].
TaylorCoeffs taylor_check(const PainleveSolution& sol);

}  // namespace growthlab::painleve
