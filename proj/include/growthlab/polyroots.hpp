#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <vector>

#include "growthlab/types.hpp"

namespace growthlab {

// All roots of c[0] + c[1] w + ... + c[n] w^n with complex coefficients,
// computed as eigenvalues of the companion matrix of the monic polynomial,
// followed by one Newton polish per root. Near-zero leading coefficients
// (relative to the largest coefficient) are stripped before forming the
// companion matrix; a zero constant term deflates to roots at w = 0.
template <typename Scalar>
std::vector<std::complex<Scalar>> polynomial_roots(
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>& coeffs,
    bool polish = true) {
    using C = std::complex<Scalar>;
    using VecC = Eigen::Matrix<C, Eigen::Dynamic, 1>;

    std::vector<C> roots;
    if (coeffs.size() == 0) return roots;

    const Scalar cmax = coeffs.cwiseAbs().maxCoeff();
    if (cmax == Scalar(0)) return roots;
    const Scalar drop = cmax * Eigen::NumTraits<Scalar>::epsilon() * Scalar(64);

    Eigen::Index hi = coeffs.size() - 1;
    while (hi > 0 && std::abs(coeffs[hi]) <= drop) --hi;
    Eigen::Index lo = 0;
    while (lo < hi && std::abs(coeffs[lo]) <= drop) {
        roots.push_back(C(0));
        ++lo;
    }
    if (hi <= lo) return roots;

    const Eigen::Index deg = hi - lo;
    Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> companion(deg, deg);
    companion.setZero();
    for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = C(1);
    for (Eigen::Index i = 0; i < deg; ++i)
        companion(i, deg - 1) = -coeffs[lo + i] / coeffs[hi];

    Eigen::ComplexEigenSolver<decltype(companion)> es(companion, false);
    VecC poly = coeffs.segment(lo, deg + 1);
    for (Eigen::Index i = 0; i < deg; ++i) {
        C w = es.eigenvalues()[i];
        if (polish) {
            for (int it = 0; it < 2; ++it) {
                C p(0), dp(0);
                for (Eigen::Index k = deg; k >= 0; --k) {
                    dp = dp * w + p;
                    p = p * w + poly[k];
                }
                if (std::abs(dp) == Scalar(0)) break;
                C step = p / dp;
                if (!std::isfinite(std::abs(step))) break;
                w -= step;
            }
        }
        roots.push_back(w);
    }
    return roots;
}

inline std::vector<Complex> polynomial_roots(const Eigen::VectorXcd& coeffs,
                                             bool polish = true) {
    return polynomial_roots<double>(coeffs, polish);
}

}  // namespace growthlab
