#include "growthlab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "growthlab/geometry.hpp"
#include "growthlab/growth.hpp"
#include "growthlab/io.hpp"
#include "growthlab/lattice.hpp"
#include "growthlab/mcmc.hpp"
#include "growthlab/painleve.hpp"
#include "growthlab/spectral.hpp"

namespace growthlab::scenario {

using io::ArtifactWriter;
using io::Json;

Complex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
    return Complex(std::stod(text.substr(0, comma)),
                   std::stod(text.substr(comma + 1)));
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

growth::Potential make_potential(const ScenarioConfig& cfg) {
    if (cfg.potential == "gaussian")
        return growth::Potential::gaussian(cfg.t2, cfg.hbar);
    if (cfg.potential == "monomial")
        return growth::Potential::monomial(cfg.n, cfg.tn, cfg.hbar);
    if (cfg.potential == "log")
        return growth::Potential::log_charge(cfg.alpha, cfg.beta, cfg.hbar);
    throw std::invalid_argument("unknown potential: " + cfg.potential);
}

Json config_echo(const ScenarioConfig& cfg) {
    Json j;
    j["scenario"] = cfg.scenario;
    j["potential"] = cfg.potential;
    j["t2"] = {cfg.t2.real(), cfg.t2.imag()};
    j["n"] = cfg.n;
    j["tn"] = {cfg.tn.real(), cfg.tn.imag()};
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["hbar"] = cfg.hbar;
    j["steps"] = cfg.steps;
    j["sites"] = cfg.sites;
    j["nu_start"] = cfg.nu_start;
    j["nu_end"] = cfg.nu_end;
    j["nu_window"] = cfg.nu_window;
    j["tol"] = cfg.tol;
    j["points"] = cfg.points;
    j["sweeps"] = cfg.sweeps;
    j["matrix_size"] = cfg.matrix_size;
    j["kmax"] = cfg.kmax;
    j["seed"] = cfg.seed;
    return j;
}

std::vector<std::array<double, 2>> as_xy(const std::vector<Complex>& zs,
                                         bool close = false) {
    std::vector<std::array<double, 2>> out;
    out.reserve(zs.size() + 1);
    for (const auto& z : zs) out.push_back({z.real(), z.imag()});
    if (close && !zs.empty()) out.push_back({zs[0].real(), zs[0].imag()});
    return out;
}

// Laurent tail of a map, for the trajectory CSV.
std::vector<Complex> laurent_tail(const geometry::ConformalMap& map, int kmax) {
    std::vector<Complex> u;
    if (map.is_laurent()) {
        const auto& m = map.laurent_data();
        for (int k = 0; k < std::max<int>(m.u.size(), 1); ++k)
            u.push_back(k < m.u.size() ? m.u[k] : Complex(0.0, 0.0));
    } else {
        const auto& m = map.rational_data();
        u.push_back(m.u / m.a);
        Complex ak(1.0, 0.0);
        for (int k = 1; k <= kmax; ++k) {
            u.push_back(m.u * ak);
            ak *= m.a;
        }
    }
    return u;
}

void write_moment_json(ArtifactWriter& w, const std::string& relpath,
                       const geometry::MomentVector& mv) {
    Json j;
    j["t0"] = mv.t0;
    Json t = Json::array();
    for (Eigen::Index k = 0; k < mv.t.size(); ++k)
        t.push_back({mv.t[k].real(), mv.t[k].imag()});
    j["t"] = t;
    w.write_json(relpath, j);
}

void run_grow(const ScenarioConfig& cfg, ArtifactWriter& w) {
    const growth::Potential pot = make_potential(cfg);
    const growth::GrowthTrajectory traj = growth::grow_sequence(pot, cfg.steps);

    std::vector<std::vector<double>> rows;
    for (std::size_t s = 0; s < traj.steps.size(); ++s) {
        const auto& step = traj.steps[s];
        const auto u = laurent_tail(step.map, cfg.kmax);
        for (std::size_t k = 0; k < u.size(); ++k)
            rows.push_back({static_cast<double>(s + 1), step.t0,
                            step.map.leading_coefficient(),
                            static_cast<double>(k), u[k].real(), u[k].imag()});
    }
    w.write_csv("trajectory.csv", "step,t0,r,coeff_index,re_u,im_u", rows);

    Json crit;
    crit["t_c"] = nullptr;
    crit["r_c"] = nullptr;
    crit["cusps"] = Json::array();
    if (pot.kind == growth::Potential::Kind::Monomial) {
        const auto cd = growth::critical_area(pot.n, pot.tn);
        crit["t_c"] = cd.t_c;
        crit["r_c"] = cd.r_c;
        const auto critical_map = growth::monomial_growth(pot.n, pot.tn, cd.t_c);
        for (const auto& c : geometry::find_cusps(critical_map, 1e-6))
            crit["cusps"].push_back({c.z.real(), c.z.imag()});
    } else if (traj.t_c) {
        crit["t_c"] = *traj.t_c;
    }
    if (!traj.steps.empty()) {
        for (const auto& c : geometry::find_cusps(traj.steps.back().map, 1e-3))
            if (!crit["cusps"].size())
                crit["cusps"].push_back({c.z.real(), c.z.imag()});
    }
    w.write_json("critical.json", crit);

    std::vector<io::Polyline> lines;
    for (const auto& step : traj.steps)
        lines.push_back(
            {as_xy(geometry::trace_boundary(step.map, cfg.points), true),
             "#1f77b4", 0.0, false});
    w.write_text("boundaries.svg", io::render_svg(lines));

    if (!traj.steps.empty())
        write_moment_json(w, "moments.json",
                          geometry::moments(traj.steps.back().map, cfg.kmax));

    std::vector<std::vector<double>> brows;
    const auto b = geometry::trace_boundary(traj.steps.back().map, cfg.points);
    for (std::size_t j = 0; j < b.size(); ++j)
        brows.push_back({2.0 * kPi * j / b.size(), b[j].real(), b[j].imag()});
    w.write_csv("boundary.csv", "theta,re_z,im_z", brows);
}

void run_lattice(const ScenarioConfig& cfg, ArtifactWriter& w) {
    if (cfg.potential == "gaussian") {
        const int N = cfg.sites > 0 ? cfg.sites : 100;
        const auto st = lattice::gaussian_recurrence(cfg.t2, cfg.hbar, N);
        std::vector<std::vector<double>> rows;
        for (int n = 0; n <= N; ++n)
            rows.push_back({static_cast<double>(n), n * cfg.hbar, st.r_sq[n],
                            st.residual[n]});
        w.write_csv("lattice.csv", "n,t0,r_sq,residual", rows);
        return;
    }
    if (cfg.potential != "monomial" || cfg.n != 3)
        throw std::invalid_argument(
            "lattice scenario requires a gaussian or cubic monomial potential");

    const double r_c_sq = 1.0 / (36.0 * std::norm(cfg.tn));
    const double hh = cfg.hbar / r_c_sq;
    const int N = cfg.sites > 0
                      ? cfg.sites
                      : static_cast<int>((0.5 + std::pow(hh, 0.8)) / hh);
    const auto pi = painleve::solve_pole_free(cfg.nu_start,
                                              std::max(cfg.nu_end, 1.5), cfg.tol);
    const auto st = lattice::cubic_string_solve(cfg.tn, cfg.hbar, N, pi);

    std::vector<std::vector<double>> rows;
    for (int n = 0; n <= N; ++n)
        rows.push_back({static_cast<double>(n), n * cfg.hbar, st.r_sq[n],
                        st.residual[n]});
    w.write_csv("lattice.csv", "n,t0,r_sq,residual", rows);

    if (std::abs(6.0 * std::abs(cfg.tn) - 1.0) <= 1e-9) {
        std::vector<std::vector<double>> srows;
        for (const auto& s : lattice::scaling_extract(st, cfg.nu_window))
            srows.push_back({s.nu, s.u});
        w.write_csv("scaling.csv", "nu,u", srows);
    }

    Json j;
    j["hbar"] = cfg.hbar;
    j["sites"] = N;
    j["max_residual"] = st.residual.cwiseAbs().maxCoeff();
    w.write_json("summary.json", j);
}

Json painleve_summary(const painleve::PainleveSolution& sol) {
    Json j;
    j["nu0"] = sol.nu0 ? Json(*sol.nu0) : Json(nullptr);
    j["alpha"] = sol.alpha ? Json(*sol.alpha) : Json(nullptr);
    j["paper_nu0"] = -std::pow(2.0, 1.4);
    j["paper_alpha"] = -3.0 * std::pow(2.0, 0.4);
    j["residual_max"] = sol.residual_max;
    j["shooting_gap"] = sol.shooting_gap;
    j["eps"] = sol.eps;
    j["grid_start"] = sol.grid[0];
    j["grid_end"] = sol.grid[sol.grid.size() - 1];
    return j;
}

void run_painleve(const ScenarioConfig& cfg, ArtifactWriter& w) {
    const auto sol = painleve::solve_pole_free(cfg.nu_start, cfg.nu_end, cfg.tol);
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < sol.grid.size(); ++i)
        rows.push_back({sol.grid[i], sol.u[i], sol.u_dot[i]});
    w.write_csv("solution.csv", "nu,u,u_dot", rows);
    w.write_json("summary.json", painleve_summary(sol));

    std::vector<std::array<double, 2>> pts;
    for (Eigen::Index i = 0; i < sol.grid.size(); i += 10)
        pts.push_back({sol.grid[i], sol.u[i]});
    w.write_text("solution.svg", io::render_svg({{pts, "#d62728", 0.0, false}}));
}

void run_curve(const ScenarioConfig& cfg, ArtifactWriter& w,
               const std::string& prefix = "") {
    const auto sol = painleve::solve_pole_free(cfg.nu_start, cfg.nu_end, cfg.tol);
    const double lo = sol.grid[0];
    const double hi = sol.grid[sol.grid.size() - 1];
    const int m = std::max(16, cfg.points / 8);

    std::vector<std::vector<double>> rows, frows;
    for (int i = 0; i < m; ++i) {
        const double nu = lo + (hi - lo) * i / (m - 1);
        const auto full = spectral::branch_points(
            spectral::UJet::closed(nu, sol.u_at(nu), sol.u_dot_at(nu)));
        std::vector<double> row{nu};
        for (const auto& z : full.zeta_roots) {
            row.push_back(z.real());
            row.push_back(z.imag());
        }
        row.push_back(full.cardano);
        row.push_back(static_cast<double>(full.classification));
        rows.push_back(row);

        // Degenerate companion: derivatives dropped, u on the classical
        // branch; singular reference: the critical curve with a triple
        // root at the origin.
        const double ub = nu < 0.0 ? std::sqrt(-2.0 * nu) : 0.0;
        const auto degen =
            spectral::branch_points(spectral::UJet::raw(nu, ub, 0.0, 0.0, 0.0));
        std::vector<double> frow{nu};
        for (const auto& z : full.zeta_roots) {
            frow.push_back(z.real());
            frow.push_back(z.imag());
        }
        for (const auto& z : degen.zeta_roots) {
            frow.push_back(z.real());
            frow.push_back(z.imag());
        }
        for (int k = 0; k < 3; ++k) {
            frow.push_back(0.0);
            frow.push_back(0.0);
        }
        frows.push_back(frow);
    }
    w.write_csv(prefix + "curve.csv",
                "nu,re_zeta1,im_zeta1,re_zeta2,im_zeta2,re_zeta3,im_zeta3,"
                "cardano,class",
                rows);
    w.write_csv(prefix + "curve_families.csv",
                "nu,full_re1,full_im1,full_re2,full_im2,full_re3,full_im3,"
                "degen_re1,degen_im1,degen_re2,degen_im2,degen_re3,degen_im3,"
                "sing_re1,sing_im1,sing_re2,sing_im2,sing_re3,sing_im3",
                frows);

    // Root trajectories against nu.
    std::vector<io::Polyline> lines;
    const std::array<std::string, 3> colors{"#1f77b4", "#2ca02c", "#d62728"};
    for (int root = 0; root < 3; ++root) {
        io::Polyline full_line, degen_line;
        full_line.stroke = colors[root];
        degen_line.stroke = "#999999";
        for (const auto& row : frows) {
            full_line.pts.push_back({row[0], row[1 + 2 * root]});
            degen_line.pts.push_back({row[0], row[7 + 2 * root]});
        }
        lines.push_back(degen_line);
        lines.push_back(full_line);
    }
    w.write_text(prefix + "curve.svg", io::render_svg(lines));
}

void run_sample(const ScenarioConfig& cfg, ArtifactWriter& w) {
    const growth::Potential pot = make_potential(cfg);
    const int n_configs = std::max(120, cfg.sweeps / 200);
    const auto stream = mcmc::metropolis_collect(pot, cfg.matrix_size,
                                                 cfg.sweeps, cfg.seed, n_configs);

    std::vector<std::vector<double>> rows;
    for (std::size_t c = 0; c < stream.configs.size(); ++c)
        for (Eigen::Index i = 0; i < stream.configs[c].size(); ++i)
            rows.push_back({static_cast<double>(c), static_cast<double>(i),
                            stream.configs[c][i].real(),
                            stream.configs[c][i].imag()});
    w.write_csv("samples.csv", "config_id,eig_index,re_z,im_z", rows);

    const double t0 = cfg.matrix_size * cfg.hbar;
    const double span = 2.5 * std::sqrt(std::max(t0, 1e-12));
    const mcmc::GridSpec grid{-span, span, -span, span, 60, 60};
    const auto de = mcmc::density_support(stream.configs, grid, cfg.hbar);

    Json hj;
    hj["grid"] = {{"x0", grid.x0}, {"x1", grid.x1}, {"y0", grid.y0},
                  {"y1", grid.y1}, {"nx", grid.nx}, {"ny", grid.ny}};
    hj["quadrupole_hat"] = de.quadrupole_hat;
    hj["support_threshold"] = de.support_threshold;
    hj["acceptance_rate"] = stream.final_state.acceptance_rate;
    hj["proposal_sigma"] = stream.final_state.proposal_sigma;
    hj["seed"] = cfg.seed;
    Json counts = Json::array();
    for (int iy = 0; iy < grid.ny; ++iy) {
        Json row = Json::array();
        for (int ix = 0; ix < grid.nx; ++ix) row.push_back(de.counts(iy, ix));
        counts.push_back(row);
    }
    hj["counts"] = counts;
    w.write_json("histogram.json", hj);

    std::vector<io::PointSet> pts(1);
    for (const auto& z : stream.configs.back())
        pts[0].pts.push_back({z.real(), z.imag()});
    std::vector<io::Polyline> lines;
    if (pot.kind == growth::Potential::Kind::Gaussian) {
        const auto map = growth::gaussian_ellipse_at(pot.t2, t0);
        lines.push_back({as_xy(geometry::trace_boundary(map, 512), true),
                         "#d62728", 0.0, false});
    }
    w.write_text("droplet.svg", io::render_svg(lines, pts));
}

void run_report_all(const ScenarioConfig& cfg, ArtifactWriter& w) {
    // Ginibre-Girko ellipse with sampled eigenvalues.
    {
        ScenarioConfig sub = cfg;
        sub.potential = "gaussian";
        sub.t2 = Complex(0.2, 0.0);
        sub.hbar = 1.0 / 64.0;
        sub.matrix_size = 64;
        sub.sweeps = std::min(cfg.sweeps, 8000);
        const growth::Potential pot = make_potential(sub);
        const auto stream =
            mcmc::metropolis_collect(pot, sub.matrix_size, sub.sweeps, sub.seed, 100);
        std::vector<std::vector<double>> rows;
        for (Eigen::Index i = 0; i < stream.final_state.eigenvalues.size(); ++i)
            rows.push_back({stream.final_state.eigenvalues[i].real(),
                            stream.final_state.eigenvalues[i].imag()});
        w.write_csv("fig_ellipse/eigenvalues.csv", "re_z,im_z", rows);
        const auto map = growth::gaussian_ellipse_at(sub.t2, 1.0);
        std::vector<io::PointSet> pts(1);
        for (const auto& z : stream.final_state.eigenvalues)
            pts[0].pts.push_back({z.real(), z.imag()});
        w.write_text("fig_ellipse/droplet.svg",
                     io::render_svg({{as_xy(geometry::trace_boundary(map, 512), true),
                                      "#d62728", 0.0, false}},
                                    pts));
    }
    // Nested ellipses of non-critical Gaussian growth.
    {
        const auto traj = growth::grow_sequence(
            growth::Potential::gaussian(Complex(0.2, 0.0), 0.1), 10);
        std::vector<io::Polyline> lines;
        std::vector<std::vector<double>> rows;
        for (const auto& s : traj.steps) {
            const auto b = geometry::trace_boundary(s.map, 512);
            lines.push_back({as_xy(b, true), "#1f77b4", 0.0, false});
            for (std::size_t j = 0; j < b.size(); ++j)
                rows.push_back({s.t0, 2.0 * kPi * j / b.size(), b[j].real(),
                                b[j].imag()});
        }
        w.write_csv("fig_ell/boundaries.csv", "t0,theta,re_z,im_z", rows);
        w.write_text("fig_ell/growth.svg", io::render_svg(lines));
    }
    // Cubic growth to the critical three-cusp boundary.
    {
        const Complex t3(1.0 / 6.0, 0.0);
        const auto cd = growth::critical_area(3, t3);
        std::vector<io::Polyline> lines;
        std::vector<std::vector<double>> rows;
        for (int j = 1; j <= 5; ++j) {
            const double t0 = cd.t_c * j / 5.0;
            const auto b =
                geometry::trace_boundary(growth::monomial_growth(3, t3, t0), 768);
            lines.push_back({as_xy(b, true),
                             j == 5 ? "#d62728" : "#1f77b4", 0.0, false});
            for (std::size_t k = 0; k < b.size(); ++k)
                rows.push_back({t0, 2.0 * kPi * k / b.size(), b[k].real(),
                                b[k].imag()});
        }
        w.write_csv("fig_hyp/boundaries.csv", "t0,theta,re_z,im_z", rows);
        w.write_text("fig_hyp/growth.svg", io::render_svg(lines));
    }
    // Sextic critical boundary.
    {
        const double t6 = 1.0 / 30.0;
        const auto cd = growth::critical_area(6, Complex(t6, 0.0));
        const auto b = geometry::trace_boundary(
            growth::monomial_growth(6, Complex(t6, 0.0), cd.t_c), 1536);
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < b.size(); ++k)
            rows.push_back({2.0 * kPi * k / b.size(), b[k].real(), b[k].imag()});
        w.write_csv("fig_six/boundary.csv", "theta,re_z,im_z", rows);
        w.write_text("fig_six/boundary.svg",
                     io::render_svg({{as_xy(b, true), "#d62728", 0.0, false}}));
    }
    // Pole-free transcendent and the curve evolution data.
    {
        const auto sol = painleve::solve_pole_free(-20.0, 1.0, 1e-12);
        std::vector<std::vector<double>> rows;
        for (Eigen::Index i = 0; i < sol.grid.size(); i += 5)
            rows.push_back({sol.grid[i], sol.u[i], sol.u_dot[i]});
        w.write_csv("fig_pain/solution.csv", "nu,u,u_dot", rows);
        std::vector<std::array<double, 2>> pts;
        for (const auto& r : rows) pts.push_back({r[0], r[1]});
        w.write_text("fig_pain/solution.svg",
                     io::render_svg({{pts, "#d62728", 0.0, false}}));
        w.write_json("fig_pain/summary.json", painleve_summary(sol));

        ScenarioConfig sub = cfg;
        sub.nu_start = -20.0;
        sub.nu_end = 1.0;
        run_curve(sub, w, "fig_last/");
    }
}

}  // namespace

void apply_config_file(ScenarioConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);

        if (key == "scenario") cfg.scenario = value;
        else if (key == "potential") cfg.potential = value;
        else if (key == "t2") cfg.t2 = parse_complex(value);
        else if (key == "n") cfg.n = std::stoi(value);
        else if (key == "tn" || key == "t3") cfg.tn = parse_complex(value);
        else if (key == "alpha") cfg.alpha = std::stod(value);
        else if (key == "beta") cfg.beta = std::stod(value);
        else if (key == "hbar") cfg.hbar = std::stod(value);
        else if (key == "steps") cfg.steps = std::stoi(value);
        else if (key == "sites") cfg.sites = std::stoi(value);
        else if (key == "nu-start") cfg.nu_start = std::stod(value);
        else if (key == "nu-end") cfg.nu_end = std::stod(value);
        else if (key == "nu-window") cfg.nu_window = std::stod(value);
        else if (key == "tol") cfg.tol = std::stod(value);
        else if (key == "points") cfg.points = std::stoi(value);
        else if (key == "sweeps") cfg.sweeps = std::stoi(value);
        else if (key == "matrix-size") cfg.matrix_size = std::stoi(value);
        else if (key == "kmax") cfg.kmax = std::stoi(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "out") cfg.out = value;
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
}

int run_scenario(const ScenarioConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (cfg.points < 16) throw std::invalid_argument("points must be >= 16");

    ArtifactWriter w(cfg.out);
    if (cfg.scenario == "grow") run_grow(cfg, w);
    else if (cfg.scenario == "lattice") run_lattice(cfg, w);
    else if (cfg.scenario == "painleve") run_painleve(cfg, w);
    else if (cfg.scenario == "curve") run_curve(cfg, w);
    else if (cfg.scenario == "sample") run_sample(cfg, w);
    else if (cfg.scenario == "report-all") run_report_all(cfg, w);
    else throw std::invalid_argument("unknown scenario: " + cfg.scenario);

    w.write_manifest(config_echo(cfg));
    return 0;
}

}  // namespace growthlab::scenario
