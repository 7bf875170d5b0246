// Command-line driver: single runs emit a JSON run record, sweeps emit CSV,
// verify runs the acceptance suite.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hmt/acceptance.hpp"
#include "hmt/blowup.hpp"
#include "hmt/error.hpp"
#include "hmt/functional.hpp"
#include "hmt/green.hpp"
#include "hmt/norms.hpp"
#include "hmt/record.hpp"
#include "hmt/solver.hpp"
#include "hmt/sweep.hpp"
#include "hmt/testfn.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_usage = 2;

struct Common {
    std::size_t n = 512;
    int origin_power = 8;
    int boundary_power = 4;
    std::string out;

    hmt::Grading grading() const { return {origin_power, boundary_power}; }
};

void add_grid_flags(CLI::App* cmd, Common& c, std::size_t default_n) {
    c.n = default_n;
    cmd->add_option("--n", c.n, "grid nodes")->capture_default_str();
    cmd->add_option("--origin-power", c.origin_power, "grading exponent at the origin")->capture_default_str();
    cmd->add_option("--boundary-power", c.boundary_power, "grading exponent at the boundary")->capture_default_str();
    cmd->add_option("--out", c.out, "write the JSON record here instead of stdout");
}

// alpha is given directly or as a fraction of lambda1 on the same grid.
struct AlphaChoice {
    double alpha = 0.0;
    std::optional<double> fraction;

    void add(CLI::App* cmd) {
        auto* a = cmd->add_option("--alpha", alpha, "perturbation alpha")->capture_default_str();
        auto* f = cmd->add_option("--alpha-fraction", fraction, "alpha as a multiple of lambda1");
        a->excludes(f);
    }

    double resolve(const hmt::GridPtr& grid, json& params) const {
        if (!fraction) {
            params["alpha"] = alpha;
            return alpha;
        }
        if (!(*fraction >= 0.0)) throw std::invalid_argument("--alpha-fraction must be >= 0");
        const double value = *fraction * hmt::first_eigenvalue(grid, hmt::EigenMode::hardy);
        params["alpha_fraction"] = *fraction;
        params["alpha"] = value;
        return value;
    }
};

json grid_params(const Common& c) {
    return {{"n", c.n}, {"origin_power", c.origin_power}, {"boundary_power", c.boundary_power}};
}

void emit(hmt::RunRecord rec, const std::string& started, const std::string& out) {
    rec.timestamps = hmt::Timestamps{started, hmt::utc_now()};
    if (out.empty()) {
        const json j = rec.to_json();
        const auto errors = hmt::validate_json(j, hmt::run_record_schema());
        if (!errors.empty()) throw std::runtime_error("run record violates schema: " + errors.front());
        std::cout << hmt::dump_record(j);
    } else {
        hmt::write_record(rec, out);
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments for the singular Moser-Trudinger functional on the unit disc"};
    app.require_subcommand(1);

    // solve
    Common solve_c;
    AlphaChoice solve_alpha;
    double solve_beta = 0.0;
    double solve_eps = 0.0;
    hmt::SolverConfig solve_cfg;
    bool solve_no_monotone = false;
    auto* solve = app.add_subcommand("solve", "maximize the subcritical functional");
    solve->add_option("--beta", solve_beta, "singularity exponent in [0, 1)")->required();
    solve->add_option("--eps", solve_eps, "subcritical gap, > 0")->required();
    solve_alpha.add(solve);
    solve->add_option("--tolerance", solve_cfg.tolerance, "Euler-Lagrange residual tolerance")->capture_default_str();
    solve->add_option("--max-iterations", solve_cfg.max_iterations)->capture_default_str();
    solve->add_flag("--no-monotone", solve_no_monotone, "skip the monotone projection");
    add_grid_flags(solve, solve_c, 512);

    // eigen
    Common eigen_c;
    std::string eigen_mode = "hardy";
    double eigen_beta = 0.0;
    auto* eigen = app.add_subcommand("eigen", "first eigenvalue");
    eigen->add_option("--mode", eigen_mode)->check(CLI::IsMember({"hardy", "laplacian", "beta"}))->capture_default_str();
    eigen->add_option("--beta", eigen_beta, "weight exponent for --mode beta")->capture_default_str();
    add_grid_flags(eigen, eigen_c, 512);

    // green
    Common green_c;
    AlphaChoice green_alpha;
    std::string green_mode = "hardy";
    double green_beta = 0.0;
    auto* green = app.add_subcommand("green", "Green function and its regular value a0");
    green->add_option("--mode", green_mode)->check(CLI::IsMember({"hardy", "laplacian"}))->capture_default_str();
    green->add_option("--beta", green_beta, "beta used for the reported upper bound")->capture_default_str();
    green_alpha.add(green);
    add_grid_flags(green, green_c, 1024);

    // bubble
    Common bubble_c;
    double bubble_beta = 0.0;
    double bubble_rmax = 1000.0;
    auto* bubble = app.add_subcommand("bubble", "mass and residual of the limiting profile");
    bubble->add_option("--beta", bubble_beta)->required();
    bubble->add_option("--rmax", bubble_rmax, "truncation radius")->capture_default_str();
    add_grid_flags(bubble, bubble_c, 1024);

    // testfn
    Common testfn_c;
    AlphaChoice testfn_alpha;
    double testfn_beta = 0.0;
    double testfn_eps = 0.0;
    auto* testfn = app.add_subcommand("testfn", "norm and functional of the glued test function");
    testfn->add_option("--beta", testfn_beta)->required();
    testfn->add_option("--eps", testfn_eps)->required();
    testfn_alpha.add(testfn);
    add_grid_flags(testfn, testfn_c, 1024);

    // sweep
    std::string sweep_config;
    std::string sweep_out;
    unsigned sweep_threads = 0;
    auto* sweep = app.add_subcommand("sweep", "run a parameter grid and write CSV");
    sweep->add_option("--config", sweep_config, "key = value file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", sweep_out, "CSV path (stdout when omitted)");
    sweep->add_option("--threads", sweep_threads, "worker cap (default HMT_THREADS or hardware)");

    // verify
    std::string verify_dir = "verify_out";
    std::vector<int> verify_only;
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--out-dir", verify_dir, "where acceptance.json and sweep.csv go")->capture_default_str();
    verify->add_option("--only", verify_only, "criterion ids to run")->check(CLI::Range(1, hmt::criterion_count));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        const std::string started = hmt::utc_now();

        if (*solve) {
            solve_cfg.n = solve_c.n;
            solve_cfg.grading = solve_c.grading();
            solve_cfg.monotone_projection = !solve_no_monotone;
            hmt::RunRecord rec{.command = "solve", .parameters = grid_params(solve_c)};
            const double alpha = solve_alpha.resolve(hmt::build_grid(solve_c.n, solve_c.grading()), rec.parameters);
            const hmt::ProblemParams p(solve_beta, alpha, solve_eps);
            rec.parameters.update({{"beta", solve_beta},
                                   {"eps", solve_eps},
                                   {"tolerance", solve_cfg.tolerance},
                                   {"max_iterations", solve_cfg.max_iterations},
                                   {"monotone_projection", solve_cfg.monotone_projection}});
            const hmt::MaximizerResult m = hmt::maximize_subcritical(p, solve_cfg);
            const hmt::ScaleRadius r = hmt::blowup_scale(m.c_eps, m.lambda_eps, p);
            rec.outputs = {{"F", m.f_value},
                           {"c_eps", m.c_eps},
                           {"lambda_eps", m.lambda_eps},
                           {"r_eps_log", r.log_value},
                           {"residual", m.residual},
                           {"iterations", m.iterations},
                           {"converged", m.converged},
                           {"constraint_error", std::abs(hmt::halpha_norm_sq(m.u_eps, alpha) - 1.0)},
                           {"upper_bound", hmt::concentration_bound(m.lambda_eps, m.c_eps, solve_beta)}};
            emit(rec, started, solve_c.out);
            if (!m.converged) {
                std::cerr << fmt::format("solve: residual {:.3e} above tolerance after {} iterations\n", m.residual,
                                         m.iterations);
                return exit_numerical;
            }
        } else if (*eigen) {
            const hmt::GridPtr grid = hmt::build_grid(eigen_c.n, eigen_c.grading());
            hmt::RunRecord rec{.command = "eigen", .parameters = grid_params(eigen_c)};
            rec.parameters["mode"] = eigen_mode;
            double value = 0.0;
            if (eigen_mode == "beta") {
                rec.parameters["beta"] = eigen_beta;
                value = hmt::first_eigenvalue_beta(eigen_beta, grid);
            } else {
                value = hmt::first_eigenvalue(
                    grid, eigen_mode == "hardy" ? hmt::EigenMode::hardy : hmt::EigenMode::laplacian);
            }
            rec.outputs = {{"lambda1", value}};
            emit(rec, started, eigen_c.out);
        } else if (*green) {
            const hmt::GridPtr grid = hmt::build_grid(green_c.n, green_c.grading());
            hmt::RunRecord rec{.command = "green", .parameters = grid_params(green_c)};
            rec.parameters["mode"] = green_mode;
            rec.parameters["beta"] = green_beta;
            const double alpha = green_alpha.resolve(grid, rec.parameters);
            const hmt::GreenFunction g = hmt::solve_green(
                alpha, grid, green_mode == "hardy" ? hmt::GreenMode::hardy : hmt::GreenMode::laplacian);
            const hmt::A0Extraction a0 = hmt::extract_a0(g);
            rec.outputs = {{"a0", g.a0},
                           {"a0_alternate", a0.alternate},
                           {"a0_spread", a0.spread},
                           {"G_half", g.value(0.5)},
                           {"flux_defect_half", hmt::green_flux_defect(g, 0.5)},
                           {"bound", hmt::explicit_upper_bound(green_beta, g.a0)}};
            emit(rec, started, green_c.out);
        } else if (*bubble) {
            hmt::RunRecord rec{.command = "bubble", .parameters = grid_params(bubble_c)};
            rec.parameters.update({{"beta", bubble_beta}, {"rmax", bubble_rmax}});
            const double mass = hmt::bubble_mass(bubble_beta, bubble_rmax, bubble_c.n);
            rec.outputs = {{"mass", mass}, {"tail_mass", hmt::bubble_tail_mass(bubble_beta, bubble_rmax)}};
            std::cout << fmt::format("mass = {:.12f}\n", mass);
            if (!bubble_c.out.empty()) emit(rec, started, bubble_c.out);
        } else if (*testfn) {
            const hmt::GridPtr grid = hmt::build_grid(testfn_c.n, testfn_c.grading());
            hmt::RunRecord rec{.command = "testfn", .parameters = grid_params(testfn_c)};
            rec.parameters.update({{"beta", testfn_beta}, {"eps", testfn_eps}});
            const double alpha = testfn_alpha.resolve(grid, rec.parameters);
            const hmt::GreenFunction g = hmt::solve_green(alpha, grid, hmt::GreenMode::hardy);
            const double bound = hmt::explicit_upper_bound(testfn_beta, g.a0);
            const hmt::TestFunction tf = hmt::build_test_function(testfn_eps, testfn_beta, alpha, g, grid);
            const hmt::Verdict v = hmt::evaluate_test_function(tf, bound);
            rec.outputs = {{"a0", g.a0},
                           {"c_sq", tf.params.c_sq},
                           {"R", tf.params.R},
                           {"norm", v.norm_value},
                           {"functional", v.functional_value},
                           {"bound", v.bound},
                           {"norm_margin", v.norm_margin},
                           {"functional_margin", v.functional_margin},
                           {"pass", v.pass}};
            if (v.normalized_functional) rec.outputs["normalized_functional"] = *v.normalized_functional;
            if (v.normalized_pass) rec.outputs["normalized_pass"] = *v.normalized_pass;
            emit(rec, started, testfn_c.out);
        } else if (*sweep) {
            const hmt::SweepConfig cfg = hmt::load_sweep_config(sweep_config);
            const std::string csv = hmt::format_csv(hmt::run_sweep(cfg, sweep_threads));
            if (sweep_out.empty())
                std::cout << csv;
            else
                write_text(sweep_out, csv);
        } else if (*verify) {
            const hmt::AcceptanceRun run = hmt::run_acceptance(verify_only);
            for (const auto& c : run.criteria) std::cout << hmt::format_line(c) << '\n';
            std::filesystem::create_directories(verify_dir);
            write_text(std::filesystem::path(verify_dir) / "acceptance.json", run.record);
            write_text(std::filesystem::path(verify_dir) / "sweep.csv", run.sweep_csv);
            if (!run.all_pass()) return exit_numerical;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_ok;
}
