#include "growthlab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "growthlab/ode.hpp"
#include "growthlab/polyroots.hpp"

namespace growthlab::spectral {

Complex lambda_squared(Complex zeta, const UJet& jet) {
    const Complex a = 2.0 * zeta / 3.0 - jet.u / 3.0;
    const Complex b = 2.0 * zeta / 3.0 + 2.0 * jet.u / 3.0;
    return a * a * b + (2.0 * zeta / 3.0) * (jet.u_ddot / 6.0) +
           (jet.u_dot * jet.u_dot - 2.0 * jet.u * jet.u_ddot) / 36.0;
}

double lambda_squared(double zeta, const UJet& jet) {
    return lambda_squared(Complex(zeta, 0.0), jet).real();
}

const char* to_string(CurveClass c) {
    switch (c) {
        case CurveClass::OneReal: return "ONE_REAL";
        case CurveClass::ThreeReal: return "THREE_REAL";
        default: return "DEGENERATE";
    }
}

CurveClass classify_cardano(double p, double q) {
    const double card = 0.25 * q * q + p * p * p / 27.0;
    if (std::abs(card) <= 1e-12) return CurveClass::Degenerate;
    return card > 0.0 ? CurveClass::OneReal : CurveClass::ThreeReal;
}

CurveSample branch_points(const UJet& jet) {
    CurveSample cs;
    cs.nu = jet.nu;
    cs.p = 2.0 * jet.nu / 3.0;
    cs.q = jet.u_dot * jet.u_dot / 36.0 -
           (jet.u * jet.u + 6.0 * jet.nu) * jet.u / 27.0;
    cs.cardano = 0.25 * cs.q * cs.q + cs.p * cs.p * cs.p / 27.0;
    cs.classification = classify_cardano(cs.p, cs.q);

    Eigen::VectorXcd coeffs(4);
    coeffs << Complex(cs.q, 0.0), Complex(cs.p, 0.0), Complex(0.0, 0.0),
        Complex(1.0, 0.0);
    auto roots = polynomial_roots(coeffs);
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    for (int i = 0; i < 3; ++i) {
        cs.mu_roots[i] = roots[i];
        cs.zeta_roots[i] = 1.5 * roots[i];
    }
    return cs;
}

LaxPair lax_matrices(double zeta, const UJet& jet) {
    LaxPair lp;
    lp.lambda << jet.u_dot / 6.0, (2.0 * zeta - jet.u) / 3.0,
        jet.u_ddot / 6.0 +
            2.0 * (zeta + jet.u) * (2.0 * zeta - jet.u) / 9.0,
        -jet.u_dot / 6.0;
    lp.q << 0.0, 1.0, 2.0 * (zeta + jet.u) / 3.0, 0.0;
    return lp;
}

double compatibility_residual(const UJet& jet, double zeta) {
    // dLambda/dnu at fixed zeta, using the jet for the u-derivatives.
    Eigen::Matrix2d dlam;
    dlam << jet.u_ddot / 6.0, -jet.u_dot / 3.0,
        jet.u_dddot / 6.0 + 2.0 * jet.u_dot * (zeta - 2.0 * jet.u) / 9.0,
        -jet.u_ddot / 6.0;
    Eigen::Matrix2d dq;
    dq << 0.0, 0.0, 2.0 / 3.0, 0.0;
    const LaxPair lp = lax_matrices(zeta, jet);
    const Eigen::Matrix2d comm = lp.q * lp.lambda - lp.lambda * lp.q;
    return (dlam - dq - comm).cwiseAbs().maxCoeff();
}

WavefunctionPath integrate_wavefunction(const JetSource& jets, double nu,
                                        double zeta_a, double zeta_b,
                                        Eigen::Vector2d psi0, int samples) {
    if (samples < 2)
        throw std::invalid_argument("integrate_wavefunction: samples >= 2");
    const UJet jet = jets(nu);
    using Ode = Dop853<2>;
    Ode ode(
        [&jet](double z, const Ode::State& y, Ode::State& dy) {
            const LaxPair lp = lax_matrices(z, jet);
            dy = lp.lambda * y;
        },
        {.rtol = 1e-10, .atol = 1e-12});

    std::vector<Ode::Segment> rec;
    const auto res = ode.integrate(zeta_a, zeta_b, psi0, nullptr, &rec);
    if (res.status != Ode::Status::Done)
        throw std::runtime_error("integrate_wavefunction: integration failed");

    WavefunctionPath path;
    path.zeta.resize(samples);
    path.psi.resize(2, samples);
    for (int j = 0; j < samples; ++j) {
        const double z = zeta_a + (zeta_b - zeta_a) * j / (samples - 1);
        path.zeta[j] = z;
        path.psi.col(j) = j == samples - 1 ? res.y : dense_eval<2>(rec, z);
    }
    return path;
}

Eigen::Vector2d rectangle_transport(const JetSource& jets, double nu,
                                    double zeta, double side,
                                    Eigen::Vector2d psi0) {
    using Ode = Dop853<2>;
    const Dop853<2>::Options opts{.rtol = 1e-11, .atol = 1e-13};

    auto zeta_flow = [&](double at_nu, double za, double zb,
                         Eigen::Vector2d y) {
        const UJet jet = jets(at_nu);
        Ode ode(
            [&jet](double z, const Ode::State& v, Ode::State& dv) {
                dv = lax_matrices(z, jet).lambda * v;
            },
            opts);
        const auto res = ode.integrate(za, zb, y);
        if (res.status != Ode::Status::Done)
            throw std::runtime_error("rectangle_transport: zeta leg failed");
        return res.y;
    };
    auto nu_flow = [&](double at_zeta, double na, double nb,
                       Eigen::Vector2d y) {
        Ode ode(
            [&](double n, const Ode::State& v, Ode::State& dv) {
                dv = lax_matrices(at_zeta, jets(n)).q * v;
            },
            opts);
        const auto res = ode.integrate(na, nb, y);
        if (res.status != Ode::Status::Done)
            throw std::runtime_error("rectangle_transport: nu leg failed");
        return res.y;
    };

    Eigen::Vector2d psi = zeta_flow(nu, zeta, zeta + side, psi0);
    psi = nu_flow(zeta + side, nu, nu + side, psi);
    psi = zeta_flow(nu + side, zeta + side, zeta, psi);
    psi = nu_flow(zeta, nu + side, nu, psi);
    return psi;
}

}  // namespace growthlab::spectral
