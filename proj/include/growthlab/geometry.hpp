#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>
#include <vector>

#include "growthlab/types.hpp"

namespace growthlab::geometry {

// Exterior map z(w) = r w + sum_{k=0..K} u[k] w^{-k} from |w| >= 1.
struct LaurentMap {
    double r = 1.0;
    Eigen::VectorXcd u;  // u[k] multiplies w^{-k}; may be empty
};

// Exterior map z(w) = w [ r + u / (a (w - a)) ], pole at w = a inside the
// unit disk.
struct RationalMap {
    double r = 1.0;
    Complex u{0.0, 0.0};
    Complex a{0.5, 0.0};
};

// Conformal map of the droplet exterior, i.e. of |w| >= 1 onto the
// complement of the droplet. Immutable after construction.
class ConformalMap {
public:
    static ConformalMap laurent(double r, Eigen::VectorXcd u = {});
    static ConformalMap rational(double r, Complex u, Complex a);

    bool is_laurent() const { return std::holds_alternative<LaurentMap>(rep_); }
    const LaurentMap& laurent_data() const { return std::get<LaurentMap>(rep_); }
    const RationalMap& rational_data() const { return std::get<RationalMap>(rep_); }
    double leading_coefficient() const;

    // Unchecked evaluation and w-derivative, valid wherever the formula is.
    Complex operator()(Complex w) const;
    Complex derivative(Complex w) const;

    // Map with conjugated coefficients; on |w| = 1 it satisfies
    // zbar(1/w) = conj(z(w)).
    ConformalMap conjugate_coefficients() const;

    // Uniform scaling z -> s z.
    ConformalMap scaled(double s) const;

private:
    explicit ConformalMap(LaurentMap m) : rep_(std::move(m)) {}
    explicit ConformalMap(RationalMap m) : rep_(std::move(m)) {}
    std::variant<LaurentMap, RationalMap> rep_;
};

// Checked evaluation; requires |w| >= 1 - 1e-12.
Complex eval_map(const ConformalMap& map, Complex w);

// Boundary samples z(e^{2 pi i j / M}), j = 0..M-1. Requires M >= 16.
std::vector<Complex> trace_boundary(const ConformalMap& map, int point_count);

struct MomentVector {
    double t0 = 0.0;      // normalized area
    Eigen::VectorXcd t;   // t[k-1] = exterior harmonic moment t_k
};

// Normalized area t0 and exterior harmonic moments t_1..t_kmax. t0 uses the
// closed form r^2 - sum k |u_k|^2 for Laurent maps and the boundary contour
// integral otherwise; every t_k uses the contour quadrature
// t_k = 1/(2 pi i k) \oint zbar z^{-k} dz with a trapezoid rule.
MomentVector moments(const ConformalMap& map, int kmax, int nodes = 2048);

// t0 by contour quadrature regardless of map kind (cross-check route).
double t0_quadrature(const ConformalMap& map, int nodes = 2048);

// t0 by closed form: r^2 - sum_k k |u_k|^2, with the geometric tail summed
// exactly for rational maps.
double t0_closed_form(const ConformalMap& map);

// Finite-difference check of the Laplacian-growth bracket
// w [ dz/dw dzbar/dt0 - dz/dt0 dzbar/dw ] at |w| = 1; tends to 1 as
// delta -> 0 for a moment-conserving family. The w-derivatives are analytic,
// the t0-derivatives are central differences with step delta.
double poisson_bracket_check(const std::function<ConformalMap(double)>& map_fn,
                             double t0, Complex w, double delta);

struct Cusp {
    Complex w;  // root of z'(w) = 0 with | |w| - 1 | <= tol
    Complex z;  // image z(w)
};

// All roots of z'(w) = 0 via the companion-matrix problem of the cleared
// polynomial, filtered to an annulus of width tol about the unit circle.
std::vector<Cusp> find_cusps(const ConformalMap& map, double tol);

// Numerical univalence check: no two of `samples` boundary points closer
// than 1e-9 r, and the closed boundary polyline is simple.
bool check_univalent(const ConformalMap& map, int samples = 4096);

}  // namespace growthlab::geometry
