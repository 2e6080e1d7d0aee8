#include "growthlab/lattice.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>

namespace growthlab::lattice {

LatticeState gaussian_recurrence(Complex t2, double hbar, int N) {
    if (!(hbar > 0.0)) throw std::invalid_argument("gaussian_recurrence: hbar > 0");
    if (N < 1) throw std::invalid_argument("gaussian_recurrence: N >= 1");
    const double q = 1.0 - 4.0 * std::norm(t2);
    if (!(q > 0.0))
        throw std::domain_error("gaussian_recurrence: critical Gaussian, 2|t2| >= 1");

    LatticeState st;
    st.kind = LatticeState::Kind::Gaussian;
    st.hbar = hbar;
    st.t2 = t2;
    st.r_sq.resize(N + 1);
    st.u = Eigen::VectorXcd::Zero(N + 1);
    st.residual = Eigen::VectorXd::Zero(N + 1);
    for (int n = 0; n <= N; ++n) st.r_sq[n] = n * hbar / q;
    for (int n = 1; n <= N; ++n)
        st.u[n] = 2.0 * std::conj(t2) * std::sqrt(st.r_sq[n - 1]);
    return st;
}

EllipseCurveCoeffs gaussian_lax_curve(Complex t2, double hbar, int n) {
    const double q = 1.0 - 4.0 * std::norm(t2);
    if (!(q > 0.0))
        throw std::domain_error("gaussian_lax_curve: critical Gaussian, 2|t2| >= 1");
    const double nh = n * hbar;
    if (std::abs(t2) < 1e-14) return {Complex(0.0, 0.0), -nh};

    const double rn = std::sqrt(nh / q);
    // L_n(z) = [[a11 z, a12], [a21, a22 z]] in the two-component reduction.
    const Complex a11 = 1.0 / (2.0 * std::conj(t2));
    const Complex a22 = 2.0 * t2;
    const Complex a12 = -rn * q / (2.0 * std::conj(t2));
    const Complex a21 = rn * q;
    // det[L_n(z) - zbar] = a11 a22 z^2 - (a11 + a22) z zbar + zbar^2
    //                      - a12 a21; normalize the z zbar coefficient.
    const Complex s = a11 + a22;
    return {-a11 * a22 / s, (a12 * a21 / s).real()};
}

LatticeState cubic_string_solve(Complex t3, double hbar, int N,
                                const painleve::PainleveSolution& pi) {
    if (!(hbar > 0.0)) throw std::invalid_argument("cubic_string_solve: hbar > 0");
    if (N < 2) throw std::invalid_argument("cubic_string_solve: N >= 2");
    const double t3a = std::abs(t3);
    if (t3a == 0.0) throw std::invalid_argument("cubic_string_solve: t3 != 0");

    // Normalize to r_c = 1: x = r^2 / r_c^2 turns the lattice equation into
    // x_n [1 - (x_{n-1} + x_{n+1})/4] = n hh with hh = hbar / r_c^2 and
    // critical area 1/2.
    const double r_c_sq = 1.0 / (36.0 * t3a * t3a);
    const double hh = hbar / r_c_sq;
    const double hh45 = std::pow(hh, 0.8);
    const double hh25 = std::pow(hh, 0.4);
    auto nu_of = [&](int n) { return (n * hh - 0.5) / hh45; };

    if (N * hh > 0.5 + 5.0 * hh45 + 1e-12)
        throw std::invalid_argument(
            "cubic_string_solve: N hbar beyond t_c + 5 hbar^{4/5}");
    if (!pi.covers(nu_of(N)))
        throw std::invalid_argument(
            "cubic_string_solve: painleve data absent for nu(N) = " +
            std::to_string(nu_of(N)));

    // Continuum root of x - x^2/2 = t on the physical branch.
    auto continuum = [](double t) { return 1.0 - std::sqrt(std::max(0.0, 1.0 - 2.0 * t)); };

    Eigen::VectorXd x(N + 1);
    x[0] = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double nu = nu_of(n);
        if (nu < -2.0 || !pi.covers(nu))
            x[n] = continuum(n * hh);
        else
            x[n] = 1.0 - hh25 * pi.u_at(nu);
    }
    x[N] = 1.0 - hh25 * pi.u_at(nu_of(N));

    const int m = N - 1;  // unknowns x_1..x_{N-1}
    auto resid = [&](const Eigen::VectorXd& v, Eigen::VectorXd& r) {
        for (int n = 1; n < N; ++n)
            r[n - 1] = v[n] * (1.0 - 0.25 * (v[n - 1] + v[n + 1])) - n * hh;
    };
    Eigen::VectorXd r(m), xt(N + 1);
    resid(x, r);
    double rn = r.lpNorm<Eigen::Infinity>();

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::SparseMatrix<double> jac(m, m);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        if (rn <= 1e-13) {
            converged = true;
            break;
        }
        trip.clear();
        for (int n = 1; n < N; ++n) {
            const int row = n - 1;
            trip.emplace_back(row, row, 1.0 - 0.25 * (x[n - 1] + x[n + 1]));
            if (n - 2 >= 0) trip.emplace_back(row, row - 1, -0.25 * x[n]);
            if (n + 1 <= N - 1) trip.emplace_back(row, row + 1, -0.25 * x[n]);
        }
        jac.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("cubic_string_solve: factorization failed");
        const Eigen::VectorXd step = lu.solve(-r);

        double lambda = 1.0;
        bool moved = false;
        for (int k = 0; k < 30; ++k) {
            xt = x;
            xt.segment(1, m) += lambda * step;
            Eigen::VectorXd rt(m);
            resid(xt, rt);
            const double rtn = rt.lpNorm<Eigen::Infinity>();
            if (rtn < rn) {
                x = xt;
                r = rt;
                rn = rtn;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!moved) break;
    }
    if (!converged && rn > 1e-10) {
        int worst = 0;
        r.cwiseAbs().maxCoeff(&worst);
        throw NoConvergenceError(
            "cubic_string_solve: Newton stalled, max residual " +
                std::to_string(rn) + " at site " + std::to_string(worst + 1),
            rn);
    }

    LatticeState st;
    st.kind = LatticeState::Kind::Cubic;
    st.hbar = hbar;
    st.t3 = t3;
    st.r_sq = r_c_sq * x;
    st.u = Eigen::VectorXcd::Zero(N + 1);
    for (int n = 2; n <= N; ++n)
        st.u[n] = 3.0 * std::conj(t3) * std::sqrt(st.r_sq[n - 2] * st.r_sq[n - 1]);
    st.residual = Eigen::VectorXd::Zero(N + 1);
    for (int n = 1; n < N; ++n)
        st.residual[n] =
            st.r_sq[n] * (1.0 - 9.0 * t3a * t3a * (st.r_sq[n - 1] + st.r_sq[n + 1])) -
            n * hbar;
    // Positivity of the physical branch.
    for (int n = 1; n <= N; ++n)
        if (!(st.r_sq[n] > 0.0))
            throw std::runtime_error("cubic_string_solve: nonpositive r_n^2");
    return st;
}

std::vector<ScalingSample> scaling_extract(const LatticeState& state,
                                           double nu_window) {
    if (state.kind != LatticeState::Kind::Cubic)
        throw std::invalid_argument("scaling_extract: cubic lattice required");
    if (std::abs(6.0 * std::abs(state.t3) - 1.0) > 1e-9)
        throw std::invalid_argument("scaling_extract: requires 6|t3| = 1");
    const double h45 = std::pow(state.hbar, 0.8);
    const double h25 = std::pow(state.hbar, 0.4);
    std::vector<ScalingSample> out;
    for (int n = 0; n < state.r_sq.size(); ++n) {
        const double nu = (n * state.hbar - 0.5) / h45;
        if (std::abs(nu) <= nu_window)
            out.push_back({nu, (1.0 - state.r_sq[n]) / h25, n});
    }
    return out;
}

}  // namespace growthlab::lattice
