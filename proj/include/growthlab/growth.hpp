#pragma once

#include <optional>
#include <vector>

#include "growthlab/geometry.hpp"
#include "growthlab/types.hpp"

namespace growthlab::growth {

// Analytic data of an ensemble: potential coefficients plus the area
// quantum hbar.
struct Potential {
    enum class Kind { Gaussian, Monomial, Log };

    Kind kind = Kind::Gaussian;
    double hbar = 1e-2;
    Complex t2{0.0, 0.0};   // Gaussian V = t2 z^2, 2|t2| <= 1
    int n = 3;              // Monomial V = tn z^n, n >= 3
    Complex tn{0.0, 0.0};
    double alpha = -0.1;    // Log V = alpha log(beta/(beta-z)), alpha < 0
    double beta = 1.0;      // real-symmetric case

    static Potential gaussian(Complex t2, double hbar);
    static Potential monomial(int n, Complex tn, double hbar);
    static Potential log_charge(double alpha, double beta, double hbar);
    void validate() const;
};

// Ellipse boundary map for the Gaussian potential:
// r = sqrt(t0 / (1 - 4|t2|^2)), u_1 = 2 conj(t2) r.
geometry::ConformalMap gaussian_ellipse_at(Complex t2, double t0);

// Droplet map for V = tn z^n: r solves r^2 - (n-1) n^2 |tn|^2 r^{2n-2} = t0
// on the physical branch (r^2 increasing from 0), u_{n-1} = n conj(tn) r^{n-1}.
geometry::ConformalMap monomial_growth(int n, Complex tn, double t0);

struct CriticalData {
    double t_c = 0.0;
    double r_c = 0.0;
};

// Maximal area for the monomial potential: dt0/dr^2 = 0, i.e.
// (n-1)^2 n^2 |tn|^2 r_c^{2n-4} = 1.
CriticalData critical_area(int n, Complex tn);

// Droplet map for the logarithmic potential, real-symmetric case. The three
// unknowns (r, u, a) solve the pole relation for beta, the area relation for
// t0, and conservation of t_1 = alpha/beta (via contour quadrature), by
// damped-Newton continuation in t0 from a small-droplet seed.
geometry::ConformalMap joukowski_growth(double alpha, double beta, double t0);

struct TrajectoryStep {
    double t0;
    geometry::ConformalMap map;
};

struct GrowthTrajectory {
    std::vector<TrajectoryStep> steps;
    bool critical = false;
    std::optional<double> t_c;
};

// Maps at t0 = hbar, 2 hbar, ..., n_max hbar; conserves the exterior
// harmonic moments along the way.
GrowthTrajectory grow_sequence(const Potential& pot, int n_max);

}  // namespace growthlab::growth
