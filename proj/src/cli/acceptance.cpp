#include "hmt/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>

#include <fmt/format.h>

#include "hmt/blowup.hpp"
#include "hmt/error.hpp"
#include "hmt/functional.hpp"
#include "hmt/green.hpp"
#include "hmt/norms.hpp"
#include "hmt/record.hpp"
#include "hmt/solver.hpp"
#include "hmt/sweep.hpp"
#include "hmt/testfn.hpp"

namespace hmt {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

// First zero of J0 by Newton from the standard bracket.
double bessel_j0_first_zero() {
    double x = 2.4;
    for (int i = 0; i < 50; ++i) {
        const double step = std::cyl_bessel_j(0.0, x) / -std::cyl_bessel_j(1.0, x);
        x -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return x;
}

// Doubles in [0, 1) from a 64-bit engine, independent of the standard
// library's distribution implementations.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Context {
    std::optional<std::vector<SweepRow>> sweep;

    const std::vector<SweepRow>& sweep_rows() {
        if (!sweep) {
            SweepConfig cfg;
            cfg.beta = {0.5};
            cfg.alpha = {0.0};
            cfg.eps = {0.4, 0.3, 0.2, 0.1};
            cfg.n = {512};
            sweep = run_sweep(cfg);
        }
        return *sweep;
    }
};

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

CriterionResult bubble_mass_check(Context&) {
    CriterionResult r{.id = 1, .title = "bubble mass"};
    bool ok = true;
    double worst_time = 0.0;
    std::string parts;
    for (double beta : {0.0, 0.25, 0.5, 0.75}) {
        const auto start = Clock::now();
        const double mass = bubble_mass(beta, 1000.0, 1024);
        const double t = elapsed(start);
        worst_time = std::max(worst_time, t);
        const double tol = beta == 0.75 ? 1e-3 : 1e-4;
        const double err = std::abs(mass - 1.0);
        ok = ok && err <= tol && t < 1.0;
        r.metrics["mass"][fmt::format("{}", beta)] = mass;
        parts += fmt::format(" beta={} |m-1|={:.2e}", beta, err);
    }
    r.pass = ok;
    r.summary = fmt::format("R=1000, n=1024:{}; slowest {:.3f} s", parts, worst_time);
    return r;
}

CriterionResult bubble_residual_check(Context&) {
    CriterionResult r{.id = 2, .title = "bubble equation residual"};
    bool ok = true;
    std::string parts;
    for (double beta : {0.0, 0.5}) {
        const double res = bubble_residual(beta, 0.1, 10.0, 1024);
        ok = ok && res < 1e-4;
        r.metrics["residual"][fmt::format("{}", beta)] = res;
        parts += fmt::format(" beta={} residual={:.2e}", beta, res);
    }
    r.pass = ok;
    r.summary = "r in [0.1, 10], n=1024:" + parts;
    return r;
}

CriterionResult eigen_check(Context&) {
    CriterionResult r{.id = 3, .title = "eigen-solver oracle"};
    const double j01 = bessel_j0_first_zero();
    const double lap = first_eigenvalue(build_grid(512), EigenMode::laplacian);
    const double lap_rel = std::abs(lap - j01 * j01) / (j01 * j01);
    const double h512 = first_eigenvalue(build_grid(512), EigenMode::hardy);
    const double h1024 = first_eigenvalue(build_grid(1024), EigenMode::hardy);
    const double drift = std::abs(h1024 - h512) / h1024;
    r.pass = lap_rel < 1e-3 && h512 > 0.0 && h1024 > 0.0 && drift < 0.01;
    r.metrics = {{"laplacian_512", lap},      {"j01_sq", j01 * j01},   {"laplacian_rel_error", lap_rel},
                 {"hardy_lambda1_512", h512}, {"hardy_lambda1_1024", h1024}, {"hardy_relative_drift", drift}};
    r.summary = fmt::format("laplacian {:.7f} vs j01^2 {:.7f} (rel {:.1e}); hardy lambda1 {:.7f} -> {:.7f} (drift {:.1e})",
                            lap, j01 * j01, lap_rel, h512, h1024, drift);
    return r;
}

CriterionResult green_check(Context&) {
    CriterionResult r{.id = 4, .title = "Green function oracle"};
    const GridPtr grid = build_grid(1024);
    const GreenFunction lap = solve_green(0.0, grid, GreenMode::laplacian);
    double max_err = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i)
        max_err = std::max(max_err, std::abs(lap.profile[i] + std::log(grid->node(i)) / (2.0 * pi)));

    const GridPtr coarse = build_grid(512);
    const double lam_coarse = first_eigenvalue(coarse, EigenMode::hardy);
    const double lam_fine = first_eigenvalue(grid, EigenMode::hardy);
    bool ok = max_err < 1e-5 && std::abs(lap.a0) < 1e-3;
    std::string parts;
    for (double fraction : {0.0, 0.5}) {
        const double a_coarse = solve_green(fraction * lam_coarse, coarse, GreenMode::hardy).a0;
        const double a_fine = solve_green(fraction * lam_fine, grid, GreenMode::hardy).a0;
        const double drift = std::abs(a_fine - a_coarse);
        ok = ok && drift < 1e-3;
        const std::string key = fmt::format("alpha_fraction_{}", fraction);
        r.metrics[key] = {{"a0_512", a_coarse}, {"a0_1024", a_fine}, {"drift", drift}};
        parts += fmt::format("; hardy a0(alpha={}*lambda1) {:.6f} -> {:.6f}", fraction, a_coarse, a_fine);
    }
    r.metrics["laplacian_max_node_error"] = max_err;
    r.metrics["laplacian_a0"] = lap.a0;
    r.pass = ok;
    r.summary = fmt::format("laplacian max error {:.1e}, a0 {:.1e}{}", max_err, lap.a0, parts);
    return r;
}

CriterionResult hardy_positivity_check(Context&) {
    CriterionResult r{.id = 5, .title = "Hardy positivity"};
    const GridPtr grid = build_grid(512);
    std::mt19937_64 rng(20240917);
    constexpr double support = 0.95;
    double worst_form = std::numeric_limits<double>::infinity();
    double worst_direct = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        double coef[5];
        for (double& c : coef) c = 2.0 * unit_draw(rng) - 1.0;
        const RadialFunction u = RadialFunction::sample(grid, [&](double x) {
            if (x >= support) return 0.0;
            const double s = x * x;
            const double cut = 1.0 - s / (support * support);
            double poly = 0.0;
            for (int k = 4; k >= 0; --k) poly = poly * s + coef[k];
            return poly * cut * cut * cut;
        });
        const NormReport rep = norm_report(u, 0.0, 0.0);
        // Direct difference with the continuous potential; the support keeps
        // the quadrature away from the boundary singularity.
        const double potential = integrate(*grid, [&](double x) {
            const double v = value_at(u, x);
            const double q = 1.0 - x * x;
            return v * v / (q * q);
        });
        const double direct = rep.dirichlet - potential;
        ok = ok && rep.hardy_sq >= -1e-8 * rep.dirichlet && direct >= -1e-8 * rep.dirichlet;
        worst_form = std::min(worst_form, rep.hardy_sq / rep.dirichlet);
        worst_direct = std::min(worst_direct, direct / rep.dirichlet);
    }
    r.pass = ok;
    r.metrics = {{"samples", 100}, {"min_hardy_over_dirichlet", worst_form}, {"min_direct_over_dirichlet", worst_direct}};
    r.summary = fmt::format("100 samples: min hardy/dirichlet {:.4f} (form), {:.4f} (direct quadrature)", worst_form,
                            worst_direct);
    return r;
}

// max of the functional over a (1 - r^2)^q (1 + s r^2) normalized to the unit sphere.
json parametric_oracle(const GridPtr& grid, const ProblemParams& p) {
    double best = -1.0;
    double best_q = 0.0;
    double best_s = 0.0;
    int skipped = 0;
    for (int iq = 0; iq < 20; ++iq) {
        const double q = 0.5 + 0.125 * iq;
        for (int is = 0; is < 10; ++is) {
            const double s = -0.5 + 0.25 * is;
            const RadialFunction shape =
                RadialFunction::sample(grid, [&](double x) { return std::pow(1.0 - x * x, q) * (1.0 + s * x * x); });
            const double scale = 1.0 / std::sqrt(halpha_norm_sq(shape, p.alpha()));
            std::vector<double> v(shape.values().begin(), shape.values().end());
            for (double& x : v) x *= scale;
            try {
                const double f = mt_functional(RadialFunction(grid, std::move(v)), p);
                if (f > best) {
                    best = f;
                    best_q = q;
                    best_s = s;
                }
            } catch (const ExponentOverflow&) {
                ++skipped;
            }
        }
    }
    return {{"best", best}, {"q", best_q}, {"s", best_s}, {"family_size", 200}, {"skipped", skipped}};
}

CriterionResult maximizer_check(Context&) {
    CriterionResult r{.id = 6, .title = "subcritical maximizer"};
    const auto start = Clock::now();
    const ProblemParams p(0.5, 0.0, 0.2);
    SolverConfig cfg;
    cfg.n = 512;
    const MaximizerResult m = maximize_subcritical(p, cfg);
    const double t = elapsed(start);

    const double constraint = std::abs(halpha_norm_sq(m.u_eps, p.alpha()) - 1.0);
    const double residual = el_residual(m.u_eps, m.lambda_eps, p);
    double rise = 0.0;
    const auto& u = m.u_eps.values();
    for (std::size_t i = 0; i + 1 < u.size(); ++i) rise = std::max(rise, u[i + 1] - u[i]);
    const json oracle = parametric_oracle(m.u_eps.grid_ptr(), p);
    const double best = oracle["best"].get<double>();

    r.pass = constraint <= 1e-8 && residual < 1e-6 && m.f_value > 2.0 * pi && rise <= 0.0 &&
             m.f_value >= best - 1e-6 && t < 60.0;
    r.metrics = {{"F", m.f_value},          {"c_eps", m.c_eps},         {"lambda_eps", m.lambda_eps},
                 {"constraint_error", constraint}, {"el_residual", residual}, {"max_rise", rise},
                 {"iterations", m.iterations},    {"parametric_oracle", oracle}};
    r.summary = fmt::format("F={:.10f} (> 2pi, oracle {:.10f}), constraint {:.1e}, residual {:.1e}, max rise {:.1e}, {:.2f} s",
                            m.f_value, best, constraint, residual, rise, t);
    return r;
}

CriterionResult monotonicity_check(Context& ctx) {
    CriterionResult r{.id = 7, .title = "eps-monotonicity"};
    const auto& rows = ctx.sweep_rows();
    bool ok = true;
    std::string parts;
    json values = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].result) {
            ok = false;
            parts += fmt::format(" eps={} failed ({})", rows[i].eps, rows[i].error);
            values.push_back(nullptr);
            continue;
        }
        const double f = rows[i].result->f_value;
        values.push_back(f);
        parts += fmt::format(" F({})={:.8f}", rows[i].eps, f);
        if (i > 0 && rows[i - 1].result && f < rows[i - 1].result->f_value - 1e-8) ok = false;
    }
    r.pass = ok;
    r.metrics = {{"eps", {0.4, 0.3, 0.2, 0.1}}, {"F", values}};
    r.summary = "beta=0.5, alpha=0:" + parts;
    return r;
}

CriterionResult concentration_bound_check(Context& ctx) {
    CriterionResult r{.id = 8, .title = "finite-eps upper-bound consistency"};
    bool ok = true;
    std::string parts;
    json points = json::array();
    for (const auto& row : ctx.sweep_rows()) {
        if (!row.result) {
            ok = false;
            continue;
        }
        const auto& m = *row.result;
        const double bound = concentration_bound(m.lambda_eps, m.c_eps, row.beta);
        const double ratio = m.f_value / bound;
        ok = ok && m.f_value <= 1.05 * bound;
        // e^t - 1 <= t e^t gives F <= pi/(1-beta) + kappa lambda at every eps;
        // reported alongside since it needs no concentration.
        const double kappa = ProblemParams(row.beta, row.alpha, row.eps).exponent();
        const double elementary = pi / (1.0 - row.beta) + kappa * m.lambda_eps;
        points.push_back({{"eps", row.eps},
                          {"F", m.f_value},
                          {"c_eps", m.c_eps},
                          {"bound", bound},
                          {"ratio", ratio},
                          {"elementary_bound", elementary},
                          {"elementary_holds", m.f_value <= elementary}});
        parts += fmt::format(" eps={}: F/bound={:.4f}", row.eps, ratio);
    }
    r.pass = ok;
    r.metrics = {{"points", points}, {"allowed_ratio", 1.05}};
    r.summary = "F <= 1.05 (pi/(1-beta) + lambda/c^2):" + parts;
    return r;
}

CriterionResult test_function_check(Context&) {
    CriterionResult r{.id = 9, .title = "test-function contradiction"};
    const auto start = Clock::now();
    constexpr double beta = 0.25;
    const GridPtr grid = build_grid(1024);
    const double lambda1 = first_eigenvalue(grid, EigenMode::hardy);
    const double alpha = 0.5 * lambda1;
    const GreenFunction g = solve_green(alpha, grid, GreenMode::hardy);
    const double bound = explicit_upper_bound(beta, g.a0);
    bool any = false;
    std::string parts;
    json points = json::array();
    for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
        const TestFunction tf = build_test_function(eps, beta, alpha, g, grid);
        const Verdict v = evaluate_test_function(tf, bound);
        any = any || v.pass;
        points.push_back({{"eps", eps},
                          {"norm", v.norm_value},
                          {"functional", v.functional_value},
                          {"norm_margin", v.norm_margin},
                          {"functional_margin", v.functional_margin},
                          {"pass", v.pass}});
        parts += fmt::format(" eps={:.0e}: norm {:.6f}, margin {:.2f}{}", eps, v.norm_value, v.functional_margin,
                             v.pass ? "" : " (no)");
    }
    const double t = elapsed(start);
    r.pass = any && t < 30.0;
    r.metrics = {{"lambda1", lambda1}, {"alpha", alpha}, {"a0", g.a0}, {"bound", bound}, {"points", points}};
    r.summary = fmt::format("a0={:.6f}, bound={:.4f};{}; {:.2f} s", g.a0, bound, parts, t);
    return r;
}

using CriterionFn = CriterionResult (*)(Context&);
constexpr CriterionFn criteria_table[] = {bubble_mass_check,      bubble_residual_check, eigen_check,
                                          green_check,            hardy_positivity_check, maximizer_check,
                                          monotonicity_check,     concentration_bound_check,           test_function_check};

CriterionResult run_guarded(int id, Context& ctx) {
    const auto start = Clock::now();
    CriterionResult r;
    try {
        r = criteria_table[id - 1](ctx);
    } catch (const std::exception& e) {
        r = CriterionResult{.id = id, .title = "criterion " + std::to_string(id)};
        r.pass = false;
        r.summary = std::string("threw: ") + e.what();
        r.metrics = {{"error", e.what()}};
    }
    r.seconds = elapsed(start);
    return r;
}

struct Artifacts {
    std::vector<CriterionResult> criteria;
    std::string record;
    std::string sweep_csv;
};

Artifacts run_numeric(const std::vector<int>& ids) {
    Context ctx;
    Artifacts a;
    for (int id : ids) a.criteria.push_back(run_guarded(id, ctx));
    a.sweep_csv = ctx.sweep ? format_csv(*ctx.sweep) : format_csv({});

    RunRecord rec;
    rec.command = "verify";
    json list = json::array();
    for (const auto& c : a.criteria)
        list.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"metrics", c.metrics}});
    rec.outputs["criteria"] = list;
    a.record = dump_record(rec.to_json());
    return a;
}

}  // namespace

bool AcceptanceRun::all_pass() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

AcceptanceRun run_acceptance(const std::vector<int>& selection) {
    std::vector<int> ids = selection;
    if (ids.empty())
        for (int i = 1; i <= criterion_count; ++i) ids.push_back(i);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id : ids)
        if (id < 1 || id > criterion_count) throw std::invalid_argument(fmt::format("no criterion {}", id));

    const bool determinism = ids.back() == criterion_count;
    std::vector<int> numeric(ids.begin(), determinism ? ids.end() - 1 : ids.end());
    if (determinism) {
        numeric.clear();
        for (int i = 1; i < criterion_count; ++i) numeric.push_back(i);
    }

    const auto start = Clock::now();
    Artifacts first = run_numeric(numeric);
    AcceptanceRun out;
    for (auto& c : first.criteria)
        if (std::find(ids.begin(), ids.end(), c.id) != ids.end()) out.criteria.push_back(std::move(c));

    if (determinism) {
        const Artifacts second = run_numeric(numeric);
        CriterionResult r{.id = criterion_count, .title = "determinism"};
        const bool same_record = first.record == second.record;
        const bool same_csv = first.sweep_csv == second.sweep_csv;
        r.pass = same_record && same_csv;
        r.metrics = {{"record_identical", same_record}, {"csv_identical", same_csv}, {"record_bytes", first.record.size()},
                     {"csv_bytes", first.sweep_csv.size()}};
        r.summary = fmt::format("two in-process runs: acceptance.json {} ({} bytes), sweep.csv {} ({} bytes)",
                                same_record ? "identical" : "DIFFERENT", first.record.size(),
                                same_csv ? "identical" : "DIFFERENT", first.sweep_csv.size());
        r.seconds = elapsed(start);
        out.criteria.push_back(std::move(r));
    }

    // The artifact lists what was run; criterion 10 is appended so the file
    // states the determinism verdict too.
    RunRecord rec;
    rec.command = "verify";
    json list = json::array();
    for (const auto& c : out.criteria)
        list.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"metrics", c.metrics}});
    rec.outputs["criteria"] = list;
    rec.outputs["all_pass"] = out.all_pass();
    out.record = dump_record(rec.to_json());
    out.sweep_csv = first.sweep_csv;
    return out;
}

std::string format_line(const CriterionResult& r) {
    return fmt::format("{}  {:>2}  {}: {}", r.pass ? "PASS" : "FAIL", r.id, r.title, r.summary);
}

}  // namespace hmt
