#include "growthlab/growth.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace growthlab::growth {

Potential Potential::gaussian(Complex t2, double hbar) {
    Potential p;
    p.kind = Kind::Gaussian;
    p.t2 = t2;
    p.hbar = hbar;
    p.validate();
    return p;
}

Potential Potential::monomial(int n, Complex tn, double hbar) {
    Potential p;
    p.kind = Kind::Monomial;
    p.n = n;
    p.tn = tn;
    p.hbar = hbar;
    p.validate();
    return p;
}

Potential Potential::log_charge(double alpha, double beta, double hbar) {
    Potential p;
    p.kind = Kind::Log;
    p.alpha = alpha;
    p.beta = beta;
    p.hbar = hbar;
    p.validate();
    return p;
}

void Potential::validate() const {
    if (!(hbar > 0.0)) throw std::invalid_argument("potential: hbar must be positive");
    switch (kind) {
        case Kind::Gaussian:
            if (2.0 * std::abs(t2) > 1.0)
                throw std::invalid_argument("potential: gaussian requires 2|t2| <= 1");
            break;
        case Kind::Monomial:
            if (n < 3) throw std::invalid_argument("potential: monomial degree n >= 3");
            break;
        case Kind::Log:
            if (!(alpha < 0.0))
                throw std::invalid_argument("potential: log charge requires alpha < 0");
            if (beta == 0.0)
                throw std::invalid_argument("potential: log charge requires beta != 0");
            break;
    }
}

geometry::ConformalMap gaussian_ellipse_at(Complex t2, double t0) {
    const double q = 1.0 - 4.0 * std::norm(t2);
    if (!(q > 0.0))
        throw std::domain_error("gaussian_ellipse_at: critical Gaussian, 2|t2| >= 1");
    if (!(t0 > 0.0)) throw std::invalid_argument("gaussian_ellipse_at: t0 > 0");
    const double r = std::sqrt(t0 / q);
    Eigen::VectorXcd u(2);
    u << Complex(0.0, 0.0), 2.0 * std::conj(t2) * r;
    return geometry::ConformalMap::laurent(r, std::move(u));
}

CriticalData critical_area(int n, Complex tn) {
    if (n < 3) throw std::invalid_argument("critical_area: n >= 3");
    const double tn2 = std::norm(tn);
    if (tn2 == 0.0) throw std::invalid_argument("critical_area: tn != 0");
    const double nn = static_cast<double>(n);
    // (n-1)^2 n^2 |tn|^2 r_c^{2n-4} = 1
    const double r_c =
        std::pow((nn - 1.0) * (nn - 1.0) * nn * nn * tn2, -1.0 / (2.0 * nn - 4.0));
    const double t_c = r_c * r_c -
                       (nn - 1.0) * nn * nn * tn2 * std::pow(r_c, 2.0 * nn - 2.0);
    return {t_c, r_c};
}

geometry::ConformalMap monomial_growth(int n, Complex tn, double t0) {
    if (n < 3) throw std::invalid_argument("monomial_growth: n >= 3");
    if (t0 < 0.0) throw std::invalid_argument("monomial_growth: t0 >= 0");
    const double nn = static_cast<double>(n);
    const double c = (nn - 1.0) * nn * nn * std::norm(tn);

    double s;  // s = r^2 on the physical branch
    if (c == 0.0) {
        s = t0;
    } else {
        const CriticalData crit = critical_area(n, tn);
        if (t0 > crit.t_c * (1.0 + 1e-12))
            throw SupercriticalError("monomial_growth: t0 exceeds the critical area");
        // g(s) = s - c s^{n-1} is increasing on [0, r_c^2]; bisect, then polish.
        double lo = 0.0, hi = crit.r_c * crit.r_c;
        auto g = [&](double x) { return x - c * std::pow(x, nn - 1.0) - t0; };
        if (g(hi) < 0.0) {
            s = hi;
        } else {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (g(mid) < 0.0 ? lo : hi) = mid;
            }
            s = 0.5 * (lo + hi);
            for (int it = 0; it < 3; ++it) {
                const double dg = 1.0 - c * (nn - 1.0) * std::pow(s, nn - 2.0);
                if (dg <= 0.0) break;
                s -= g(s) / dg;
            }
        }
    }

    const double r = std::sqrt(std::max(0.0, s));
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n);
    u[n - 1] = nn * std::conj(tn) * std::pow(r, nn - 1.0);
    return geometry::ConformalMap::laurent(r, std::move(u));
}

namespace {

// Residual of the Joukowski parameter system at x = (r, u, a).
Eigen::Vector3d joukowski_residual(const Eigen::Vector3d& x, double alpha,
                                   double beta, double t0) {
    const double r = x[0], u = x[1], a = x[2];
    const geometry::ConformalMap map =
        geometry::ConformalMap::rational(r, Complex(u, 0.0), Complex(a, 0.0));
    const auto mv = geometry::moments(map, 1);
    Eigen::Vector3d f;
    f[0] = r / a + u / (a * (1.0 - a * a)) - beta;
    f[1] = alpha + r * r - u * r / (a * a) - t0;
    f[2] = mv.t[0].real() - alpha / beta;
    return f;
}

// One damped-Newton solve at fixed t0 from the given seed.
Eigen::Vector3d joukowski_solve_at(Eigen::Vector3d x, double alpha, double beta,
                                   double t0) {
    auto admissible = [](const Eigen::Vector3d& v) {
        return v[0] > 0.0 && std::abs(v[2]) > 1e-14 && std::abs(v[2]) < 1.0;
    };
    Eigen::Vector3d f = joukowski_residual(x, alpha, beta, t0);
    double fn = f.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < 200; ++it) {
        if (fn <= 1e-12) return x;
        Eigen::Matrix3d jac;
        for (int j = 0; j < 3; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
            Eigen::Vector3d xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            jac.col(j) = (joukowski_residual(xp, alpha, beta, t0) -
                          joukowski_residual(xm, alpha, beta, t0)) /
                         (2.0 * h);
        }
        const Eigen::Vector3d step = jac.partialPivLu().solve(-f);
        double lambda = 1.0;
        bool moved = false;
        for (int k = 0; k < 40; ++k) {
            const Eigen::Vector3d xt = x + lambda * step;
            if (admissible(xt)) {
                const Eigen::Vector3d ft = joukowski_residual(xt, alpha, beta, t0);
                const double ftn = ft.lpNorm<Eigen::Infinity>();
                if (ftn < fn) {
                    x = xt;
                    f = ft;
                    fn = ftn;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!moved)
            throw NoConvergenceError(
                "joukowski_growth: Newton stalled at t0 = " + std::to_string(t0) +
                    ", residual = " + std::to_string(fn),
                fn);
    }
    throw NoConvergenceError(
        "joukowski_growth: no convergence at t0 = " + std::to_string(t0) +
            ", residual = " + std::to_string(fn),
        fn);
}

Eigen::Vector3d joukowski_seed(double alpha, double beta, double t0) {
    // Droplet nucleates at the stationary point z0 of the total potential,
    // the small root of z^2 - beta z + alpha = 0.
    const double disc = std::sqrt(beta * beta - 4.0 * alpha);
    const double z0 = 0.5 * (beta - (beta > 0 ? disc : -disc));
    const double r = std::sqrt(t0);
    const double a = r / (beta - z0);
    return {r, a * z0, a};
}

// The moment closure needs the droplet to enclose the origin, which a disk
// of area pi t0 about the nucleation point does once t0 exceeds z0^2.
double joukowski_seed_area(double alpha, double beta) {
    const double disc = std::sqrt(beta * beta - 4.0 * alpha);
    const double z0 = 0.5 * (beta - (beta > 0 ? disc : -disc));
    return std::max(4.0 * z0 * z0, 1e-3);
}

Eigen::Vector3d joukowski_continue(double alpha, double beta, double t0,
                                   bool check_cusps) {
    const double t_seed = std::min(joukowski_seed_area(alpha, beta), t0);
    Eigen::Vector3d x = joukowski_seed(alpha, beta, t_seed);
    x = joukowski_solve_at(x, alpha, beta, t_seed);
    const int steps = std::max(8, static_cast<int>(std::ceil(t0 / 0.05)));
    for (int j = 1; j <= steps; ++j) {
        const double tj = t_seed + (t0 - t_seed) * j / steps;
        x = joukowski_solve_at(x, alpha, beta, tj);
        if (check_cusps) {
            const auto map = geometry::ConformalMap::rational(
                x[0], Complex(x[1], 0.0), Complex(x[2], 0.0));
            if (!geometry::find_cusps(map, 1e-6).empty())
                throw SupercriticalError(
                    "joukowski_growth: boundary cusp before reaching t0");
        }
    }
    return x;
}

}  // namespace

geometry::ConformalMap joukowski_growth(double alpha, double beta, double t0) {
    if (!(alpha < 0.0)) throw std::invalid_argument("joukowski_growth: alpha < 0");
    if (!(t0 > 0.0)) throw std::invalid_argument("joukowski_growth: t0 > 0");
    const Eigen::Vector3d x = joukowski_continue(alpha, beta, t0, true);
    return geometry::ConformalMap::rational(x[0], Complex(x[1], 0.0),
                                            Complex(x[2], 0.0));
}

GrowthTrajectory grow_sequence(const Potential& pot, int n_max) {
    pot.validate();
    if (n_max < 1) throw std::invalid_argument("grow_sequence: n_max >= 1");
    GrowthTrajectory traj;
    traj.steps.reserve(n_max);

    switch (pot.kind) {
        case Potential::Kind::Gaussian: {
            for (int j = 1; j <= n_max; ++j) {
                const double t0 = j * pot.hbar;
                traj.steps.push_back({t0, gaussian_ellipse_at(pot.t2, t0)});
            }
            break;
        }
        case Potential::Kind::Monomial: {
            const CriticalData crit = critical_area(pot.n, pot.tn);
            traj.t_c = crit.t_c;
            if (n_max * pot.hbar > crit.t_c * (1.0 + 1e-12))
                throw SupercriticalError(
                    "grow_sequence: n_max * hbar exceeds the critical area");
            for (int j = 1; j <= n_max; ++j) {
                const double t0 = j * pot.hbar;
                traj.steps.push_back({t0, monomial_growth(pot.n, pot.tn, t0)});
            }
            traj.critical = n_max * pot.hbar >= crit.t_c * (1.0 - 1e-9);
            break;
        }
        case Potential::Kind::Log: {
            Eigen::Vector3d x =
                joukowski_continue(pot.alpha, pot.beta, pot.hbar, false);
            for (int j = 1; j <= n_max; ++j) {
                const double t0 = j * pot.hbar;
                if (j > 1) x = joukowski_solve_at(x, pot.alpha, pot.beta, t0);
                const auto map = geometry::ConformalMap::rational(
                    x[0], Complex(x[1], 0.0), Complex(x[2], 0.0));
                if (!geometry::find_cusps(map, 1e-6).empty()) {
                    throw SupercriticalError(
                        "grow_sequence: boundary cusp at step " + std::to_string(j));
                }
                traj.steps.push_back({t0, map});
            }
            const auto& last = traj.steps.back().map;
            traj.critical = !geometry::find_cusps(last, 1e-3).empty();
            break;
        }
    }
    return traj;
}

}  // namespace growthlab::growth
