#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "growthlab/growth.hpp"
#include "growthlab/types.hpp"

namespace growthlab::mcmc {

// log of the unnormalized joint eigenvalue density:
// sum_{i<j} 2 log|z_i - z_j| + (1/hbar) sum_j W(z_j),
// W = -|z|^2 + V(z) + conj(V(z)). Returns -inf on coincident eigenvalues
// or a cutoff violation (r_cut > 0).
double log_weight(const Eigen::VectorXcd& z, const growth::Potential& pot,
                  double r_cut = 0.0);

struct EnsembleSample {
    Eigen::VectorXcd eigenvalues;
    growth::Potential potential;
    int sweep_count = 0;
    double acceptance_rate = 0.0;  // measurement phase only
    std::uint64_t seed = 0;
    double proposal_sigma = 0.0;
};

struct RunOptions {
    double r_cut = 0.0;            // 0 = default (3 r_c for monomial, none else)
    double burn_in_fraction = 0.2;
    int n_configs = 0;             // decorrelated snapshots to keep
};

// Single-eigenvalue Gaussian-proposal Metropolis chain. The proposal step
// is tuned to acceptance 0.3..0.5 during burn-in and then frozen;
// deterministic for a given seed.
EnsembleSample metropolis_run(const growth::Potential& pot, int N, int sweeps,
                              std::uint64_t seed, const RunOptions& opt = {});

struct SampleStream {
    EnsembleSample final_state;
    std::vector<Eigen::VectorXcd> configs;
};

// As metropolis_run, also storing n_configs evenly spaced post-burn-in
// configurations.
SampleStream metropolis_collect(const growth::Potential& pot, int N,
                                int sweeps, std::uint64_t seed, int n_configs,
                                RunOptions opt = {});

struct GridSpec {
    double x0, x1, y0, y1;
    int nx, ny;
};

struct DensityEstimate {
    GridSpec grid;
    Eigen::MatrixXd counts;  // (ny, nx), row = y bin
    std::vector<std::pair<double, double>> boundary_cells;
    double quadrupole_hat = 0.0;
    double support_threshold = 0.0;
};

// 2-D histogram with a support-boundary estimate (density threshold at 10%
// of the bulk median) and the empirical quadrupole 2|t2_hat| inverted from
// hbar <sum z^2> / t0 together with the area constraint. Needs at least 100
// configurations.
DensityEstimate density_support(const std::vector<Eigen::VectorXcd>& configs,
                                const GridSpec& grid, double hbar);

}  // namespace growthlab::mcmc
