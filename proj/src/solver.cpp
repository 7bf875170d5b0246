#include "hmt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hmt/error.hpp"
#include "hmt/forms.hpp"
#include "hmt/norms.hpp"

namespace hmt {

void SolverConfig::validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("solver max_iterations must be >= 1");
    if (ascent_steps < 0 || max_backtracks < 0) throw std::invalid_argument("solver step counts must be >= 0");
    if (!(initial_power > 0.0)) throw std::invalid_argument("initial profile power must be positive");
}

std::vector<double> project_nonincreasing(std::span<const double> y, std::span<const double> weight) {
    // Pool-adjacent-violators on blocks of (mean, weight, length).
    struct Block {
        double mean, weight;
        std::size_t len;
    };
    std::vector<Block> blocks;
    blocks.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        blocks.push_back({y[i], weight[i], 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean < blocks.back().mean) {
            const Block b = blocks.back();
            blocks.pop_back();
            Block& a = blocks.back();
            const double w = a.weight + b.weight;
            a.mean = (a.mean * a.weight + b.mean * b.weight) / w;
            a.weight = w;
            a.len += b.len;
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (const Block& b : blocks) out.insert(out.end(), b.len, std::max(b.mean, 0.0));
    return out;
}

namespace {

class SphereProblem {
public:
    SphereProblem(const GridPtr& grid, const ProblemParams& p, bool project)
        : grid_(grid),
          p_(p),
          project_(project),
          A_(hardy_form(*grid, p.alpha())),
          factor_(A_),
          w_(ground_state(*grid)) {}

    RadialFunction to_u(std::span<const double> v) const {
        std::vector<double> u(v.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = w_[i] * v[i];
        return RadialFunction(grid_, std::move(u));
    }

    // Projects (if enabled) and rescales to the unit sphere.
    std::vector<double> admissible(std::vector<double> v) const {
        if (project_) {
            std::vector<double> u(v.size());
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = w_[i] * v[i];
            u = project_nonincreasing(u, grid_->weights());
            for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] / w_[i];
        }
        const double e = A_.energy(v);
        if (!(e > 0.0)) throw NumericalError("solver: iterate left the admissible set");
        const double s = 1.0 / std::sqrt(e);
        for (double& x : v) x *= s;
        return v;
    }

    bool is_monotone(std::span<const double> v) const {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (w_[i] * v[i] > w_[i - 1] * v[i - 1] + 1e-12 * std::abs(w_[0] * v[0])) return false;
        return true;
    }

    double functional(std::span<const double> v) const { return mt_functional(to_u(v), p_); }
    std::vector<double> load(std::span<const double> v) const { return el_load(to_u(v), p_); }
    std::vector<double> riesz(std::span<const double> b) const { return factor_.solve(b); }
    const RadialForm& form() const { return A_; }

private:
    GridPtr grid_;
    const ProblemParams& p_;
    bool project_;
    RadialForm A_;
    FormFactor factor_;
    std::vector<double> w_;
};

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

std::vector<double> initial_v(const GridPtr& grid, const SolverConfig& cfg, const RadialFunction* warm) {
    std::vector<double> v(grid->size());
    const auto w = ground_state(*grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        double u;
        if (warm && warm->size() == grid->size() && warm->grid().grading() == grid->grading())
            u = (*warm)[i];
        else if (warm)
            u = value_at(*warm, grid->node(i));
        else
            u = std::pow(grid->one_minus_r2(i), cfg.initial_power);
        v[i] = u / w[i];
    }
    return v;
}

// Riesz-gradient steps along the sphere with backtracking on the functional.
std::vector<double> projected_ascent(const SphereProblem& sp, std::vector<double> v, const SolverConfig& cfg) {
    double f = sp.functional(v);
    double step = 0.5;
    for (int s = 0; s < cfg.ascent_steps; ++s) {
        const auto b = sp.load(v);
        const double lambda = dot(v, b);
        auto d = sp.riesz(b);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= lambda * v[i];
        const double dn = std::sqrt(std::max(sp.form().energy(d), 0.0));
        if (!(dn > 1e-3 * lambda)) break;  // close to stationary, polishing takes over

        bool accepted = false;
        for (int k = 0; k <= cfg.max_backtracks; ++k, step *= 0.5) {
            std::vector<double> trial(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + (step / dn) * d[i];
            trial = sp.admissible(std::move(trial));
            const double ft = sp.functional(trial);
            if (ft > f) {
                v = std::move(trial);
                f = ft;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        step = std::min(2.0 * step, 1.0);
    }
    return v;
}

}  // namespace

MaximizerResult maximize_subcritical(const ProblemParams& p, const SolverConfig& cfg, const RadialFunction* warm_start) {
    cfg.validate();
    if (!(p.eps() > 0.0)) throw std::invalid_argument("maximize_subcritical: eps must be > 0");
    const GridPtr grid = build_grid(cfg.n, cfg.grading);
    const double lambda1 = first_eigenvalue(grid, EigenMode::hardy);
    if (!(p.alpha() < 0.98 * lambda1))
        throw std::invalid_argument("maximize_subcritical: alpha must stay below 0.98 lambda1 = " +
                                    std::to_string(0.98 * lambda1));

    const SphereProblem sp(grid, p, cfg.monotone_projection);
    auto v = sp.admissible(initial_v(grid, cfg, warm_start));
    v = projected_ascent(sp, std::move(v), cfg);

    MaximizerResult out{.u_eps = sp.to_u(v)};
    for (int it = 0;; ++it) {
        const RadialFunction u = sp.to_u(v);
        const double lambda = lambda_eps(u, p);
        const double res = el_residual(u, lambda, p);
        out.residual_trace.push_back(res);
        out.iterations = it;
        if (res < cfg.tolerance) {
            out.converged = true;
            break;
        }
        if (it == cfg.max_iterations) break;

        const auto b = sp.load(v);
        auto z = sp.riesz(b);
        const double s = 1.0 / std::sqrt(dot(z, b));
        for (double& x : z) x *= s;
        v = (cfg.monotone_projection && !sp.is_monotone(z)) ? sp.admissible(std::move(z)) : std::move(z);
    }

    out.u_eps = sp.to_u(v);
    out.c_eps = out.u_eps.origin_value();
    out.lambda_eps = lambda_eps(out.u_eps, p);
    out.f_value = mt_functional(out.u_eps, p);
    out.residual = out.residual_trace.back();
    return out;
}

std::vector<SweepPoint> sweep_epsilon(double beta, double alpha, std::span<const double> eps_list,
                                      const SolverConfig& cfg) {
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        (void)ProblemParams{beta, alpha, eps_list[i]};
        if (!(eps_list[i] > 0.0)) throw std::invalid_argument("sweep_epsilon: eps must be > 0");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("sweep_epsilon: eps list must be strictly decreasing");
    }
    std::vector<SweepPoint> out;
    out.reserve(eps_list.size());
    const RadialFunction* warm = nullptr;
    for (double eps : eps_list) {
        SweepPoint pt{.eps = eps};
        try {
            pt.result = maximize_subcritical(ProblemParams(beta, alpha, eps), cfg, warm);
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
        out.push_back(std::move(pt));
        if (out.back().result) warm = &out.back().result->u_eps;
    }
    return out;
}

}  // namespace hmt
