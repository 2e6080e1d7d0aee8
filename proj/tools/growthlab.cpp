// Command-line front end: scenario dispatch, config file handling, and
// machine-readable error reporting.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "growthlab/io.hpp"
#include "growthlab/scenario.hpp"

namespace gs = growthlab::scenario;

namespace {

void add_common(CLI::App* sub, gs::ScenarioConfig& cfg, std::string& t2_text,
                std::string& tn_text) {
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--tol", cfg.tol, "solver tolerance");
    sub->add_option("--points", cfg.points, "boundary/curve resolution");
    sub->add_option("--hbar", cfg.hbar, "area quantum");
    sub->add_option("--potential", cfg.potential, "gaussian | monomial | log");
    sub->add_option("--t2", t2_text, "gaussian coefficient, re[,im]");
    sub->add_option("--n", cfg.n, "monomial degree");
    sub->add_option("--tn,--t3", tn_text, "monomial coefficient, re[,im]");
    sub->add_option("--alpha", cfg.alpha, "log-potential charge (negative)");
    sub->add_option("--beta", cfg.beta, "log-potential pole location");
}

}  // namespace

int main(int argc, char** argv) {
    gs::ScenarioConfig cfg;
    std::string t2_text, tn_text, config_path;

    // A config file provides defaults; explicit flags override it, so it is
    // applied before CLI11 parses the rest.
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    if (!config_path.empty()) {
        try {
            gs::apply_config_file(cfg, config_path);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "{\"error\": {\"type\": \"config\", \"message\": \"%s\"}}\n",
                         e.what());
            return 1;
        }
    }

    CLI::App app{"growthlab: droplet growth, discrete string equations, and "
                 "the Painleve regularization of the cusp"};
    app.require_subcommand(0, 1);
    std::string ignored;
    app.add_option("--config", ignored, "flat key = value config file");

    auto* grow = app.add_subcommand("grow", "evolve a droplet and export the trajectory");
    grow->add_option("--steps", cfg.steps, "number of area quanta");
    add_common(grow, cfg, t2_text, tn_text);

    auto* lat = app.add_subcommand("lattice", "solve the discrete string equation");
    lat->add_option("--sites", cfg.sites, "lattice size N (0 = auto)");
    lat->add_option("--nu-start", cfg.nu_start, "scaling window start");
    lat->add_option("--nu-end", cfg.nu_end, "scaling window end");
    lat->add_option("--nu-window", cfg.nu_window, "scaling export window");
    add_common(lat, cfg, t2_text, tn_text);

    auto* pain = app.add_subcommand("painleve", "pole-free Painleve I transcendent");
    pain->add_option("--nu-start", cfg.nu_start, "left end of the grid");
    pain->add_option("--nu-end", cfg.nu_end, "right end of the grid");
    add_common(pain, cfg, t2_text, tn_text);

    auto* curve = app.add_subcommand("curve", "spectral curve along the transcendent");
    curve->add_option("--nu-start", cfg.nu_start, "left end of the grid");
    curve->add_option("--nu-end", cfg.nu_end, "right end of the grid");
    add_common(curve, cfg, t2_text, tn_text);

    auto* sample = app.add_subcommand("sample", "Metropolis eigenvalue sampling");
    sample->add_option("--sweeps", cfg.sweeps, "Metropolis sweeps");
    sample->add_option("--matrix-size", cfg.matrix_size, "ensemble size N");
    add_common(sample, cfg, t2_text, tn_text);

    auto* report = app.add_subcommand("report-all", "reproduce the figure data set");
    report->add_option("--sweeps", cfg.sweeps, "Metropolis sweeps");
    add_common(report, cfg, t2_text, tn_text);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (app.get_subcommands().empty()) {
        std::fputs(app.help().c_str(), stdout);
        return 2;
    }
    cfg.scenario = app.get_subcommands().front()->get_name();

    try {
        if (!t2_text.empty()) cfg.t2 = gs::parse_complex(t2_text);
        if (!tn_text.empty()) cfg.tn = gs::parse_complex(tn_text);
        return gs::run_scenario(cfg);
    } catch (const std::exception& e) {
        growthlab::io::Json err;
        err["error"]["type"] = "runtime";
        err["error"]["scenario"] = cfg.scenario;
        err["error"]["message"] = e.what();
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return 1;
    }
}
