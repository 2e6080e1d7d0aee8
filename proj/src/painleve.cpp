#include "growthlab/painleve.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>

#include "growthlab/ode.hpp"

namespace growthlab::painleve {

double pi_residual(double u, double u_ddot, double nu) {
    return u_ddot - 2.0 * u * u - 4.0 * nu;
}

RescaleConstants rescale_constants() {
    const double c1 = std::pow(3.0 / 8.0, 0.2);
    return {c1, 4.0 * c1 * c1 * c1};
}

AsymptoticValue asymptotic_u(double nu, int order, const EquationForm& form) {
    if (nu > -5.0)
        throw std::domain_error("asymptotic_u: series valid only for nu <= -5");
    const double A = form.quad, B = form.lin;
    const double K = std::sqrt(B / A);
    const double s = -nu;

    double u = K * std::sqrt(s);
    double ud = -0.5 * K / std::sqrt(s);
    if (order >= 1) {
        u += -1.0 / (8.0 * A * nu * nu);
        ud += 1.0 / (4.0 * A * nu * nu * nu);
    }
    if (order >= 2) {
        const double c = -49.0 / (128.0 * A * A * K);
        u += c / (nu * nu * nu * nu * std::sqrt(s));
        ud += c * (-4.0 / (nu * nu * nu * nu * nu * std::sqrt(s)) +
                   0.5 / (nu * nu * nu * nu * s * std::sqrt(s)));
    }
    return {u, ud};
}

bool PainleveSolution::covers(double nu) const {
    return grid.size() > 0 && nu >= grid[0] - 1e-12 &&
           nu <= grid[grid.size() - 1] + 1e-12;
}

namespace {

// Quintic Hermite on [0,1] from values, first and second derivatives at the
// ends (derivatives pre-scaled by h and h^2).
double quintic(double t, double f0, double m0, double s0, double f1, double m1,
               double s1) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    const double h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    const double h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    const double h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    const double h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    const double h21 = 0.5 * (t3 - 2.0 * t4 + t5);
    return f0 * h00 + m0 * h10 + s0 * h20 + f1 * h01 + m1 * h11 + s1 * h21;
}

}  // namespace

double PainleveSolution::u_at(double nu) const {
    if (!covers(nu)) throw std::domain_error("painleve solution: nu off the grid");
    const double h = grid[1] - grid[0];
    Eigen::Index i = static_cast<Eigen::Index>((nu - grid[0]) / h);
    i = std::min(std::max<Eigen::Index>(i, 0), grid.size() - 2);
    const double t = (nu - grid[i]) / h;
    auto acc = [&](Eigen::Index j) { return form.quad * u[j] * u[j] + form.lin * grid[j]; };
    return quintic(t, u[i], h * u_dot[i], h * h * acc(i), u[i + 1],
                   h * u_dot[i + 1], h * h * acc(i + 1));
}

double PainleveSolution::u_dot_at(double nu) const {
    if (!covers(nu)) throw std::domain_error("painleve solution: nu off the grid");
    const double h = grid[1] - grid[0];
    Eigen::Index i = static_cast<Eigen::Index>((nu - grid[0]) / h);
    i = std::min(std::max<Eigen::Index>(i, 0), grid.size() - 2);
    const double t = (nu - grid[i]) / h;
    auto acc = [&](Eigen::Index j) { return form.quad * u[j] * u[j] + form.lin * grid[j]; };
    auto jerk = [&](Eigen::Index j) {
        return 2.0 * form.quad * u[j] * u_dot[j] + form.lin;
    };
    return quintic(t, u_dot[i], h * acc(i), h * h * jerk(i), u_dot[i + 1],
                   h * acc(i + 1), h * h * jerk(i + 1));
}

namespace {

using Ode = Dop853<2>;
using State = Ode::State;

enum class Shot { Up, Down };

struct Shooter {
    EquationForm form;
    double anchor;
    double rtol;
    State base;  // series initial data at the anchor
    State dir;   // unit vector along the locally growing mode

    Ode::Rhs rhs() const {
        const double A = form.quad, B = form.lin;
        return [A, B](double nu, const State& y, State& dy) {
            dy[0] = y[1];
            dy[1] = A * y[0] * y[0] + B * nu;
        };
    }

    double saddle_branch(double nu) const {
        return nu < 0.0 ? std::sqrt(-form.lin * nu / form.quad) : 0.0;
    }

    State initial(double eps) const { return base + eps * dir; }

    // Forward classification: blow-up above the saddle branch versus dive
    // below the oscillatory branch.
    Shot classify(double eps) const {
        Ode ode(rhs(), {.rtol = rtol, .atol = 1e-13});
        Shot shot = Shot::Up;
        bool decided = false;
        auto cb = [&](const Ode::Segment&, double t, const State& y) {
            const double b = saddle_branch(t);
            if (y[0] > b + 3.0 || y[0] > 1e6) {
                shot = Shot::Up;
                decided = true;
                return true;
            }
            if (y[0] < -b - 3.0 || y[0] < -1e6 ||
                (y[1] > 0.0 && y[0] < -0.2)) {
                shot = Shot::Down;
                decided = true;
                return true;
            }
            return false;
        };
        const auto res = ode.integrate(anchor, 3.0, initial(eps), cb);
        if (!decided) shot = res.y[0] > 0.0 ? Shot::Up : Shot::Down;
        return shot;
    }
};

}  // namespace

PainleveSolution solve_pole_free(double nu_start, double nu_end, double tol,
                                 const SolveOptions& opt) {
    if (nu_start > -15.0)
        throw std::invalid_argument("solve_pole_free: nu_start <= -15 required");
    if (nu_end < -1.0)
        throw std::invalid_argument("solve_pole_free: nu_end >= -1 required");
    if (tol < 1e-12)
        throw std::invalid_argument("solve_pole_free: tol >= 1e-12 required");

    Shooter sh;
    sh.form = opt.form;
    sh.anchor = opt.bisect_anchor;
    sh.rtol = opt.rtol;
    const AsymptoticValue av = asymptotic_u(sh.anchor, 2, opt.form);
    sh.base = State(av.u, av.u_dot);
    const double omega = std::sqrt(2.0 * opt.form.quad * std::max(av.u, 1e-12));
    sh.dir = State(1.0, omega).normalized();

    // Initial sweep over [-1, 1]: the growing-mode amplitude must separate
    // the two behaviors.
    double lo = -1.0, hi = 1.0;
    if (sh.classify(lo) != Shot::Down || sh.classify(hi) != Shot::Up)
        throw std::runtime_error(
            "solve_pole_free: no sign change in the initial eps sweep [-1, 1]");

    // Bisect to the representable floor; this satisfies any requested tol.
    for (int it = 0; it < 140 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (hi + lo);
        if (mid == lo || mid == hi) break;
        (sh.classify(mid) == Shot::Up ? hi : lo) = mid;
    }
    const double eps = 0.5 * (hi + lo);

    Ode ode(sh.rhs(), {.rtol = opt.rtol, .atol = 1e-13});

    // Forward from the anchor until nu_end or departure from the
    // separatrix corridor. The forward-decaying mode makes this leg stable;
    // the bisection has removed the forward-growing one.
    std::vector<Ode::Segment> fwd;
    auto stop_cb = [&](const Ode::Segment&, double t, const State& y) {
        const double b = sh.saddle_branch(t);
        return std::abs(y[0]) > b + 3.0 || std::abs(y[0]) > 1e6;
    };
    const auto res_fwd =
        ode.integrate(sh.anchor, nu_end, sh.initial(eps), stop_cb, &fwd);
    if (res_fwd.status == Ode::Status::StepUnderflow)
        throw std::runtime_error("solve_pole_free: step underflow (pole hit)");
    const double reach = fwd.empty() ? sh.anchor : fwd.back().t_left + fwd.back().h;
    const double h = opt.grid_step;
    // Back off from a departure event; the solution steepens toward the
    // pole there and the stencil error would spoil the residual.
    const double right_edge = res_fwd.status == Ode::Status::Event
                                  ? reach - 0.25
                                  : std::min(nu_end, reach);
    if (right_edge < sh.anchor + 5.0 * h)
        throw std::runtime_error("solve_pole_free: forward leg too short");

    // The reported solution is a single global boundary value problem on a
    // uniform grid: the separatrix has a growing mode in each direction, so
    // no initial value integration can carry it across the whole range, but
    // the two-point problem is well conditioned. Left boundary data come
    // from the asymptotic series, right boundary data from the shot
    // trajectory; the fourth-order five-point stencil keeps the
    // finite-difference residual of the reported grid at rounding level.
    const auto n_pts =
        static_cast<Eigen::Index>(std::floor((right_edge - nu_start) / h + 1e-9)) + 1;

    PainleveSolution sol;
    sol.form = opt.form;
    sol.eps_lo = lo;
    sol.eps_hi = hi;
    sol.eps = eps;
    sol.shooting_gap = hi - lo;
    sol.grid.resize(n_pts);
    sol.u.resize(n_pts);
    sol.u_dot.resize(n_pts);
    for (Eigen::Index i = 0; i < n_pts; ++i) sol.grid[i] = nu_start + i * h;

    const AsymptoticValue left0 = asymptotic_u(sol.grid[0], 2, opt.form);
    const AsymptoticValue left1 = asymptotic_u(sol.grid[1], 2, opt.form);
    Eigen::VectorXd& ud = sol.u;
    for (Eigen::Index i = 0; i < n_pts; ++i) {
        const double nu = sol.grid[i];
        ud[i] = nu <= sh.anchor ? asymptotic_u(std::min(nu, -5.0), 2, opt.form).u
                                : dense_eval<2>(fwd, nu)[0];
    }
    ud[0] = left0.u;
    ud[1] = left1.u;

    {
        const Eigen::Index m = n_pts;
        const Eigen::Index n_unk = m - 4;  // interior nodes 2..m-3
        if (n_unk < 1)
            throw std::runtime_error("solve_pole_free: grid too short");
        const double ih2 = 1.0 / (12.0 * h * h);
        auto resid = [&](const Eigen::VectorXd& v, Eigen::VectorXd& r) {
            for (Eigen::Index i = 2; i <= m - 3; ++i)
                r[i - 2] = (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] +
                            16.0 * v[i + 1] - v[i + 2]) * ih2 -
                           opt.form.quad * v[i] * v[i] -
                           opt.form.lin * sol.grid[i];
        };
        Eigen::VectorXd r(n_unk);
        resid(ud, r);
        Eigen::SparseMatrix<double> jac(n_unk, n_unk);
        std::vector<Eigen::Triplet<double>> trip;
        // The residual bottoms out at the rounding floor of the divided
        // differences (~eps/h^2), so convergence is judged on the step.
        double step_norm = 1.0;
        for (int it = 0; it < 30 && step_norm > 1e-11; ++it) {
            trip.clear();
            for (Eigen::Index i = 2; i <= m - 3; ++i) {
                const Eigen::Index row = i - 2;
                for (Eigen::Index o = -2; o <= 2; ++o) {
                    const Eigen::Index col = i + o - 2;
                    if (col < 0 || col >= n_unk) continue;
                    const double val =
                        (o == 0) ? -30.0 * ih2 - 2.0 * opt.form.quad * ud[i]
                        : (o == 1 || o == -1) ? 16.0 * ih2
                                              : -ih2;
                    trip.emplace_back(row, col, val);
                }
            }
            jac.setFromTriplets(trip.begin(), trip.end());
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
            if (lu.info() != Eigen::Success)
                throw std::runtime_error(
                    "solve_pole_free: BVP factorization failed");
            const Eigen::VectorXd step = lu.solve(-r);
            ud.segment(2, n_unk) += step;
            resid(ud, r);
            step_norm = step.lpNorm<Eigen::Infinity>();
        }
        if (step_norm > 1e-8)
            throw NoConvergenceError("solve_pole_free: BVP Newton stalled",
                                     r.lpNorm<Eigen::Infinity>());
    }

    // Derivatives: five-point stencil in the interior, series values on the
    // left boundary pair, the shot trajectory on the right pair.
    sol.u_dot[0] = left0.u_dot;
    sol.u_dot[1] = left1.u_dot;
    for (Eigen::Index i = 2; i + 2 < n_pts; ++i)
        sol.u_dot[i] = (ud[i - 2] - 8.0 * ud[i - 1] + 8.0 * ud[i + 1] -
                        ud[i + 2]) / (12.0 * h);
    for (Eigen::Index i = n_pts - 2; i < n_pts; ++i)
        sol.u_dot[i] = dense_eval<2>(fwd, sol.grid[i])[1];

    // Residual with a five-point finite-difference second derivative.
    double rmax = 0.0;
    for (Eigen::Index i = 2; i + 2 < n_pts; ++i) {
        const double dd = (-sol.u[i - 2] + 16.0 * sol.u[i - 1] - 30.0 * sol.u[i] +
                           16.0 * sol.u[i + 1] - sol.u[i + 2]) /
                          (12.0 * h * h);
        rmax = std::max(rmax, std::abs(dd - opt.form.quad * sol.u[i] * sol.u[i] -
                                       opt.form.lin * sol.grid[i]));
    }
    sol.residual_max = rmax;

    // Record the first zero if the grid brackets one.
    for (Eigen::Index i = 0; i + 1 < n_pts; ++i) {
        if (sol.u[i] > 0.0 && sol.u[i + 1] <= 0.0) {
            double a = sol.grid[i], b = sol.grid[i + 1];
            for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
                const double m = 0.5 * (a + b);
                (sol.u_at(m) > 0.0 ? a : b) = m;
            }
            sol.nu0 = 0.5 * (a + b);
            sol.alpha = sol.u_dot_at(*sol.nu0);
            break;
        }
    }
    return sol;
}

ZeroSlope find_zero_and_slope(const PainleveSolution& sol) {
    if (!sol.nu0)
        throw std::runtime_error("find_zero_and_slope: u > 0 on the whole grid");
    return {*sol.nu0, *sol.alpha};
}

TaylorCoeffs taylor_check(const PainleveSolution& sol) {
    const ZeroSlope zs = find_zero_and_slope(sol);
    const double h = 0.05, step = 1e-3;
    const int m = static_cast<int>(std::round(2.0 * h / step)) + 1;
    Eigen::MatrixXd design(m, 5);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
        const double x = -h + i * step;
        double p = 1.0;
        for (int j = 0; j < 5; ++j) {
            design(i, j) = p;
            p *= x;
        }
        rhs[i] = sol.u_at(zs.nu0 + x);
    }
    const Eigen::VectorXd c = design.colPivHouseholderQr().solve(rhs);
    return {c[1], c[2], c[3], c[4]};
}

}  // namespace growthlab::painleve
