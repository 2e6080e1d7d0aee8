#pragma once

#include <cstdint>
#include <string>

#include "growthlab/types.hpp"

namespace growthlab::scenario {

// One run of the tool: a scenario name plus its potential and numeric
// parameters. Populated from the command line and/or a flat key = value
// config file (strict: unknown keys are rejected).
struct ScenarioConfig {
    std::string scenario;  // grow | lattice | painleve | curve | sample | report-all

    std::string potential = "gaussian";  // gaussian | monomial | log
    Complex t2{0.25, 0.0};
    int n = 3;
    Complex tn{1.0 / 6.0, 0.0};
    double alpha = -0.1;
    double beta = 2.0;
    double hbar = 0.01;

    int steps = 10;         // growth steps
    int sites = 0;          // lattice sites; 0 = up to t_c + hbar^{4/5}
    double nu_start = -20.0;
    double nu_end = 1.0;
    double nu_window = 10.0;
    double tol = 1e-12;
    int points = 2048;      // boundary / curve resolution
    int sweeps = 20000;
    int matrix_size = 64;
    int kmax = 6;
    std::uint64_t seed = 12345;
    std::string out = "growthlab-out";
};

// "a" or "a,b" -> complex.
Complex parse_complex(const std::string& text);

// Applies `key = value` lines (with # comments) to the config; throws on
// unknown keys or malformed lines.
void apply_config_file(ScenarioConfig& cfg, const std::string& path);

// Runs the scenario, writing its artifact set and manifest under cfg.out.
// Returns the process exit status (0 on success). Exceptions escape to the
// caller for error reporting.
int run_scenario(const ScenarioConfig& cfg);

}  // namespace growthlab::scenario
