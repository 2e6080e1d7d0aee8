#include "growthlab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "growthlab/polyroots.hpp"

namespace growthlab::geometry {

ConformalMap ConformalMap::laurent(double r, Eigen::VectorXcd u) {
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::invalid_argument("laurent map: r must be >= 0 and finite");
    return ConformalMap(LaurentMap{r, std::move(u)});
}

ConformalMap ConformalMap::rational(double r, Complex u, Complex a) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("rational map: r must be positive");
    const double am = std::abs(a);
    if (!(am > 0.0) || am >= 1.0)
        throw std::invalid_argument("rational map: pole must satisfy 0 < |a| < 1");
    return ConformalMap(RationalMap{r, u, a});
}

double ConformalMap::leading_coefficient() const {
    return is_laurent() ? laurent_data().r : rational_data().r;
}

Complex ConformalMap::operator()(Complex w) const {
    if (is_laurent()) {
        const auto& m = laurent_data();
        Complex z = m.r * w;
        if (m.u.size() > 0) {
            const Complex winv = 1.0 / w;
            Complex wp(1.0, 0.0);
            for (Eigen::Index k = 0; k < m.u.size(); ++k) {
                z += m.u[k] * wp;
                wp *= winv;
            }
        }
        return z;
    }
    const auto& m = rational_data();
    return w * (m.r + m.u / (m.a * (w - m.a)));
}

Complex ConformalMap::derivative(Complex w) const {
    if (is_laurent()) {
        const auto& m = laurent_data();
        Complex d = m.r;
        if (m.u.size() > 1) {
            const Complex winv = 1.0 / w;
            Complex wp = winv * winv;  // w^{-(k+1)} for k = 1
            for (Eigen::Index k = 1; k < m.u.size(); ++k) {
                d -= static_cast<double>(k) * m.u[k] * wp;
                wp *= winv;
            }
        }
        return d;
    }
    const auto& m = rational_data();
    const Complex wma = w - m.a;
    return m.r - m.u / (wma * wma);
}

ConformalMap ConformalMap::conjugate_coefficients() const {
    if (is_laurent()) {
        const auto& m = laurent_data();
        return ConformalMap(LaurentMap{m.r, m.u.conjugate()});
    }
    const auto& m = rational_data();
    return ConformalMap(RationalMap{m.r, std::conj(m.u), std::conj(m.a)});
}

ConformalMap ConformalMap::scaled(double s) const {
    if (is_laurent()) {
        const auto& m = laurent_data();
        return ConformalMap(LaurentMap{s * m.r, s * m.u});
    }
    const auto& m = rational_data();
    return ConformalMap(RationalMap{s * m.r, s * m.u, m.a});
}

Complex eval_map(const ConformalMap& map, Complex w) {
    if (std::abs(w) < 1.0 - 1e-12)
        throw std::domain_error("eval_map: w lies inside the unit disk");
    return map(w);
}

std::vector<Complex> trace_boundary(const ConformalMap& map, int point_count) {
    if (point_count < 16)
        throw std::invalid_argument("trace_boundary: need at least 16 points");
    std::vector<Complex> pts(point_count);
    for (int j = 0; j < point_count; ++j) {
        const double th = 2.0 * kPi * j / point_count;
        pts[j] = map(Complex(std::cos(th), std::sin(th)));
    }
    return pts;
}

namespace {

struct ContourData {
    std::vector<Complex> z;     // boundary samples
    std::vector<Complex> dzw;   // z'(w) * w at the samples
};

ContourData sample_contour(const ConformalMap& map, int nodes) {
    ContourData c;
    c.z.resize(nodes);
    c.dzw.resize(nodes);
    for (int j = 0; j < nodes; ++j) {
        const double th = 2.0 * kPi * j / nodes;
        const Complex w(std::cos(th), std::sin(th));
        c.z[j] = map(w);
        c.dzw[j] = map.derivative(w) * w;
    }
    return c;
}

}  // namespace

double t0_quadrature(const ConformalMap& map, int nodes) {
    const ContourData c = sample_contour(map, nodes);
    Complex acc(0.0, 0.0);
    for (int j = 0; j < nodes; ++j) acc += std::conj(c.z[j]) * c.dzw[j];
    return (acc / static_cast<double>(nodes)).real();
}

double t0_closed_form(const ConformalMap& map) {
    if (map.is_laurent()) {
        const auto& m = map.laurent_data();
        double s = m.r * m.r;
        for (Eigen::Index k = 1; k < m.u.size(); ++k)
            s -= static_cast<double>(k) * std::norm(m.u[k]);
        return s;
    }
    const auto& m = map.rational_data();
    const double q = 1.0 - std::norm(m.a);
    return m.r * m.r - std::norm(m.u) / (q * q);
}

MomentVector moments(const ConformalMap& map, int kmax, int nodes) {
    if (kmax < 0) throw std::invalid_argument("moments: kmax must be >= 0");
    MomentVector mv;
    mv.t = Eigen::VectorXcd::Zero(kmax);

    const ContourData c = sample_contour(map, nodes);

    if (map.is_laurent()) {
        mv.t0 = t0_closed_form(map);
    } else {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < nodes; ++j) acc += std::conj(c.z[j]) * c.dzw[j];
        mv.t0 = (acc / static_cast<double>(nodes)).real();
    }
    if (kmax == 0) return mv;

    const double scale = std::max(1.0, map.leading_coefficient());
    for (int j = 0; j < nodes; ++j)
        if (std::abs(c.z[j]) < 1e-12 * scale)
            throw std::runtime_error(
                "moments: boundary passes through the origin, contour "
                "quadrature for t_k diverges");

    std::vector<Complex> zinv_pow(nodes);
    for (int j = 0; j < nodes; ++j) zinv_pow[j] = 1.0 / c.z[j];
    for (int k = 1; k <= kmax; ++k) {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < nodes; ++j)
            acc += std::conj(c.z[j]) * zinv_pow[j] * c.dzw[j];
        mv.t[k - 1] = acc / static_cast<double>(k * nodes);
        if (k < kmax)
            for (int j = 0; j < nodes; ++j) zinv_pow[j] /= c.z[j];
    }
    return mv;
}

double poisson_bracket_check(const std::function<ConformalMap(double)>& map_fn,
                             double t0, Complex w, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("poisson_bracket_check: delta > 0");
    const ConformalMap m0 = map_fn(t0);
    const ConformalMap mp = map_fn(t0 + delta);
    const ConformalMap mm = map_fn(t0 - delta);

    const Complex dz_dw = m0.derivative(w);
    const Complex dz_dt = (mp(w) - mm(w)) / (2.0 * delta);
    // On |w| = 1, zbar(1/w) = conj(z(w)), so its t0-derivative is the
    // conjugated central difference.
    const Complex dzbar_dt = (std::conj(mp(w)) - std::conj(mm(w))) / (2.0 * delta);
    // d/dw [ zbar(1/w) ] = -w^{-2} zbar'(1/w), evaluated analytically.
    const ConformalMap conj0 = m0.conjugate_coefficients();
    const Complex dzbar_dw = -conj0.derivative(1.0 / w) / (w * w);

    const Complex bracket = w * (dz_dw * dzbar_dt - dz_dt * dzbar_dw);
    return bracket.real();
}

std::vector<Cusp> find_cusps(const ConformalMap& map, double tol) {
    if (!(tol > 0.0) || tol >= 0.1)
        throw std::invalid_argument("find_cusps: tol must lie in (0, 0.1)");

    Eigen::VectorXcd coeffs;
    if (map.is_laurent()) {
        const auto& m = map.laurent_data();
        const Eigen::Index kk = m.u.size() - 1;  // highest stored power K
        if (kk < 1) return {};
        // z'(w) w^{K+1} = r w^{K+1} - sum_{k=1..K} k u_k w^{K-k}
        coeffs = Eigen::VectorXcd::Zero(kk + 2);
        coeffs[kk + 1] = m.r;
        for (Eigen::Index k = 1; k <= kk; ++k)
            coeffs[kk - k] = -static_cast<double>(k) * m.u[k];
    } else {
        const auto& m = map.rational_data();
        // z'(w) (w-a)^2 = r (w-a)^2 - u
        coeffs = Eigen::VectorXcd::Zero(3);
        coeffs[2] = m.r;
        coeffs[1] = -2.0 * m.r * m.a;
        coeffs[0] = m.r * m.a * m.a - m.u;
    }

    std::vector<Cusp> cusps;
    for (const Complex& w : polynomial_roots(coeffs)) {
        if (std::abs(std::abs(w) - 1.0) <= tol)
            cusps.push_back(Cusp{w, map(w)});
    }
    std::sort(cusps.begin(), cusps.end(), [](const Cusp& a, const Cusp& b) {
        return std::arg(a.w) < std::arg(b.w);
    });
    return cusps;
}

namespace {

// Proper intersection test for segments p1-p2 and q1-q2 that share no
// endpoint.
bool segments_cross(Complex p1, Complex p2, Complex q1, Complex q2) {
    auto cross = [](Complex a, Complex b, Complex c) {
        return (b.real() - a.real()) * (c.imag() - a.imag()) -
               (b.imag() - a.imag()) * (c.real() - a.real());
    };
    const double d1 = cross(q1, q2, p1);
    const double d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1);
    const double d4 = cross(p1, p2, q2);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

bool check_univalent(const ConformalMap& map, int samples) {
    const std::vector<Complex> z = trace_boundary(map, samples);
    const double r = map.leading_coefficient();
    const double min_sep = 1e-9 * r;
    const int n = samples;

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(z[i] - z[j]) < min_sep) return false;
        }
    }
    // Closed polyline must be simple; adjacent segments share an endpoint
    // and are skipped.
    for (int i = 0; i < n; ++i) {
        const Complex a1 = z[i], a2 = z[(i + 1) % n];
        const double alo = std::min(a1.real(), a2.real());
        const double ahi = std::max(a1.real(), a2.real());
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const Complex b1 = z[j], b2 = z[(j + 1) % n];
            if (std::max(b1.real(), b2.real()) < alo ||
                std::min(b1.real(), b2.real()) > ahi)
                continue;
            if (segments_cross(a1, a2, b1, b2)) return false;
        }
    }
    return true;
}

}  // namespace growthlab::geometry
