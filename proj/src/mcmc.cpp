#include "growthlab/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace growthlab::mcmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Complex potential_v(const growth::Potential& pot, Complex z) {
    switch (pot.kind) {
        case growth::Potential::Kind::Gaussian:
            return pot.t2 * z * z;
        case growth::Potential::Kind::Monomial: {
            Complex p = z;
            for (int k = 1; k < pot.n; ++k) p *= z;
            return pot.tn * p;
        }
        case growth::Potential::Kind::Log:
            return pot.alpha * std::log(pot.beta / (pot.beta - z));
    }
    return {};
}

double confinement(const growth::Potential& pot, Complex z) {
    return -std::norm(z) + 2.0 * potential_v(pot, z).real();
}

double default_cutoff(const growth::Potential& pot) {
    if (pot.kind == growth::Potential::Kind::Monomial)
        return 3.0 * growth::critical_area(pot.n, pot.tn).r_c;
    return 0.0;
}

}  // namespace

double log_weight(const Eigen::VectorXcd& z, const growth::Potential& pot,
                  double r_cut) {
    const Eigen::Index n = z.size();
    double lw = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (r_cut > 0.0 && std::abs(z[i]) > r_cut) return kNegInf;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = std::norm(z[i] - z[j]);
            if (d2 == 0.0) return kNegInf;
            lw += std::log(d2);  // 2 log|z_i - z_j|
        }
        lw += confinement(pot, z[i]) / pot.hbar;
    }
    return lw;
}

SampleStream metropolis_collect(const growth::Potential& pot, int N,
                                int sweeps, std::uint64_t seed, int n_configs,
                                RunOptions opt) {
    pot.validate();
    if (N < 1) throw std::invalid_argument("metropolis: N >= 1");
    if (sweeps < 10) throw std::invalid_argument("metropolis: sweeps >= 10");
    if (opt.r_cut == 0.0) opt.r_cut = default_cutoff(pot);
    const double t0 = N * pot.hbar;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Start from a uniform disk of the classical area.
    Eigen::VectorXcd z(N);
    for (int i = 0; i < N; ++i) {
        const double rr = std::sqrt(t0 * unif(rng));
        const double th = 2.0 * kPi * unif(rng);
        z[i] = Complex(rr * std::cos(th), rr * std::sin(th));
    }

    // Start near the mean eigenvalue spacing; burn-in tuning refines it.
    double sigma = std::max(2.0 * std::sqrt(pot.hbar), 1e-3);
    const int burn_in = std::max(1, static_cast<int>(sweeps * opt.burn_in_fraction));

    long acc_meas = 0, prop_meas = 0;
    long acc_win = 0, prop_win = 0;
    const int tune_window = 25;

    std::vector<Eigen::VectorXcd> configs;
    configs.reserve(std::max(0, n_configs));
    const int meas_sweeps = sweeps - burn_in;
    const int snap_every =
        n_configs > 0 ? std::max(1, meas_sweeps / n_configs) : 0;

    for (int sweep = 1; sweep <= sweeps; ++sweep) {
        for (int j = 0; j < N; ++j) {
            const Complex zj = z[j];
            const Complex zp =
                zj + sigma * Complex(gauss(rng), gauss(rng));
            double dlw;
            if (opt.r_cut > 0.0 && std::abs(zp) > opt.r_cut) {
                dlw = kNegInf;
            } else {
                dlw = (confinement(pot, zp) - confinement(pot, zj)) / pot.hbar;
                bool coincident = false;
                for (int i = 0; i < N && !coincident; ++i) {
                    if (i == j) continue;
                    const double dn = std::norm(z[i] - zp);
                    if (dn == 0.0) coincident = true;
                    dlw += std::log(dn) - std::log(std::norm(z[i] - zj));
                }
                if (coincident) dlw = kNegInf;
            }
            // Acceptance probability exp(dlw) clipped to 1.
            const bool accept = dlw >= 0.0 || std::log(unif(rng)) < dlw;
            if (accept) z[j] = zp;
            if (sweep <= burn_in) {
                ++prop_win;
                if (accept) ++acc_win;
            } else {
                ++prop_meas;
                if (accept) ++acc_meas;
            }
        }
        if (sweep <= burn_in && sweep % tune_window == 0) {
            const double rate = static_cast<double>(acc_win) / prop_win;
            if (rate < 0.3) sigma *= 0.8;
            else if (rate > 0.5) sigma *= 1.25;
            acc_win = prop_win = 0;
        }
        if (snap_every > 0 && sweep > burn_in &&
            (sweep - burn_in) % snap_every == 0 &&
            static_cast<int>(configs.size()) < n_configs)
            configs.push_back(z);
    }

    SampleStream out;
    out.final_state.eigenvalues = z;
    out.final_state.potential = pot;
    out.final_state.sweep_count = sweeps;
    out.final_state.acceptance_rate =
        prop_meas > 0 ? static_cast<double>(acc_meas) / prop_meas : 0.0;
    out.final_state.seed = seed;
    out.final_state.proposal_sigma = sigma;
    out.configs = std::move(configs);
    return out;
}

EnsembleSample metropolis_run(const growth::Potential& pot, int N, int sweeps,
                              std::uint64_t seed, const RunOptions& opt) {
    return metropolis_collect(pot, N, sweeps, seed, 0, opt).final_state;
}

DensityEstimate density_support(const std::vector<Eigen::VectorXcd>& configs,
                                const GridSpec& grid, double hbar) {
    if (configs.size() < 100)
        throw std::invalid_argument(
            "density_support: need at least 100 decorrelated configurations");
    if (grid.nx < 4 || grid.ny < 4 || grid.x1 <= grid.x0 || grid.y1 <= grid.y0)
        throw std::invalid_argument("density_support: bad grid");

    DensityEstimate de;
    de.grid = grid;
    de.counts = Eigen::MatrixXd::Zero(grid.ny, grid.nx);
    const double dx = (grid.x1 - grid.x0) / grid.nx;
    const double dy = (grid.y1 - grid.y0) / grid.ny;

    Complex sum_z2_mean(0.0, 0.0);
    const Eigen::Index N = configs.front().size();
    for (const auto& cfg : configs) {
        Complex s2(0.0, 0.0);
        for (Eigen::Index i = 0; i < cfg.size(); ++i) {
            const Complex z = cfg[i];
            s2 += z * z;
            const int ix = static_cast<int>((z.real() - grid.x0) / dx);
            const int iy = static_cast<int>((z.imag() - grid.y0) / dy);
            if (ix >= 0 && ix < grid.nx && iy >= 0 && iy < grid.ny)
                de.counts(iy, ix) += 1.0;
        }
        sum_z2_mean += s2;
    }
    sum_z2_mean /= static_cast<double>(configs.size());

    // Empirical quadrupole: with hbar <sum z^2> / t0 = r u and
    // r^2 - u^2 = t0, the ellipse shape ratio u/r equals 2|t2|.
    const double t0 = static_cast<double>(N) * hbar;
    const double P = hbar * std::abs(sum_z2_mean) / t0;
    de.quadrupole_hat = 2.0 * P / (t0 + std::sqrt(t0 * t0 + 4.0 * P * P));

    // Bulk median over well-populated cells, then the 10% threshold.
    const double cmax = de.counts.maxCoeff();
    std::vector<double> bulk;
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            if (de.counts(iy, ix) >= 0.25 * cmax)
                bulk.push_back(de.counts(iy, ix));
    if (bulk.empty()) throw std::runtime_error("density_support: empty histogram");
    std::nth_element(bulk.begin(), bulk.begin() + bulk.size() / 2, bulk.end());
    const double median = bulk[bulk.size() / 2];
    de.support_threshold = 0.1 * median;

    auto supported = [&](int iy, int ix) {
        return iy >= 0 && iy < grid.ny && ix >= 0 && ix < grid.nx &&
               de.counts(iy, ix) >= de.support_threshold;
    };
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            if (!supported(iy, ix)) continue;
            const bool edge = !supported(iy - 1, ix) || !supported(iy + 1, ix) ||
                              !supported(iy, ix - 1) || !supported(iy, ix + 1);
            if (edge)
                de.boundary_cells.emplace_back(grid.x0 + (ix + 0.5) * dx,
                                               grid.y0 + (iy + 0.5) * dy);
        }
    }
    return de;
}

}  // namespace growthlab::mcmc
