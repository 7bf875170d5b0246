#include "hmt/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hmt/error.hpp"
#include "hmt/forms.hpp"
#include "hmt/functional.hpp"
#include "hmt/norms.hpp"

namespace hmt {

namespace {

constexpr double pi = std::numbers::pi;

double bubble_coefficient(double beta) { return pi / (1.0 - beta); }

}  // namespace

double TestFunctionParams::c() const { return std::sqrt(c_sq); }

double inner_profile(const TestFunctionParams& tp, double r) {
    const double k = bubble_coefficient(tp.beta);
    const double s = k * std::pow(r / tp.eps, 2.0 - 2.0 * tp.beta);
    const double c = tp.c();
    return c + (-std::log1p(s) / (4.0 * pi * (1.0 - tp.beta)) + tp.b) / c;
}

double inner_slope(const TestFunctionParams& tp, double r) {
    const double k = bubble_coefficient(tp.beta);
    const double s = k * std::pow(r / tp.eps, 2.0 - 2.0 * tp.beta);
    // d/dr log(1 + s) = (2 - 2 beta) s / ((1 + s) r)
    return -s / ((1.0 + s) * r) / (2.0 * pi * tp.c());
}

TestFunction build_test_function(double eps, double beta, double alpha, const GreenFunction& g, const GridPtr& grid) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("build_test_function: eps must lie in (0, 1)");
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("build_test_function: beta must lie in [0, 1)");

    TestFunctionParams tp;
    tp.eps = eps;
    tp.beta = beta;
    tp.alpha = alpha;
    tp.a0 = g.a0;
    tp.R = std::pow(-std::log(eps), 1.0 / (1.0 - beta));
    if (!(tp.inner_radius() < 0.5))
        throw std::invalid_argument("build_test_function: R eps = " + std::to_string(tp.inner_radius()) +
                                    " must be below 0.5");
    tp.b = 1.0 / (4.0 * pi * (1.0 - beta));
    tp.c_sq = -std::log(eps) / (2.0 * pi) + tp.a0 + tp.b * std::log(bubble_coefficient(beta)) - tp.b;
    if (!(tp.c_sq > 0.0)) throw std::invalid_argument("build_test_function: c^2 <= 0, eps too large for a0");

    const double c = tp.c();
    const double edge = tp.inner_radius();
    tp.matching_residual = std::abs(inner_profile(tp, edge) - g.value(edge) / c);

    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = grid->node(i);
        v[i] = r <= edge ? inner_profile(tp, r) : g.value(r) / c;
    }
    return TestFunction{tp, RadialFunction(grid, std::move(v)), inner_profile(tp, edge), g.value(edge) / c};
}

TestFunction TestFunction::scaled(double t) const {
    std::vector<double> v(profile.values().begin(), profile.values().end());
    for (double& x : v) x *= t;
    return TestFunction{params, RadialFunction(profile.grid_ptr(), std::move(v)), t * inner_edge_value,
                        t * outer_edge_value};
}

double testfn_norm(const TestFunction& tf) {
    const TestFunctionParams& tp = tf.params;
    const RadialGrid& g = tf.profile.grid();
    const double full = halpha_norm_sq(tf.profile, tp.alpha);

    const auto nodes = g.nodes();
    const auto above = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), tp.inner_radius()) - nodes.begin());
    if (above == 0 || above == g.size()) return full;
    const std::size_t k = above - 1;

    const RadialForm A = hardy_form(g, tp.alpha);
    const double rho = tp.inner_radius();
    const double w_rho = std::sqrt((1.0 - rho) * (1.0 + rho));
    const double vk = tf.profile[k] / std::sqrt(g.one_minus_r2(k));
    const double vk1 = tf.profile[k + 1] / std::sqrt(g.one_minus_r2(k + 1));
    const double v_in = tf.inner_edge_value / w_rho;
    const double v_out = tf.outer_edge_value / w_rho;

    double broken = full - A.edge[k] * (vk1 - vk) * (vk1 - vk);
    if (g.node(k) < rho) broken += hardy_conductance(g.node(k), rho) * (v_in - vk) * (v_in - vk);
    broken += hardy_conductance(rho, g.node(k + 1)) * (vk1 - v_out) * (vk1 - v_out);
    return broken;
}

double inner_dirichlet_energy(const TestFunctionParams& tp, const RadialGrid& grid) {
    return integrate_disc(
        grid,
        [&](double r) {
            const double d = inner_slope(tp, r);
            return d * d;
        },
        tp.inner_radius());
}

double inner_dirichlet_energy_leading(const TestFunctionParams& tp) {
    const double k = bubble_coefficient(tp.beta);
    return (std::log(k) + (2.0 - 2.0 * tp.beta) * std::log(tp.R) - 1.0) / (4.0 * pi * (1.0 - tp.beta) * tp.c_sq);
}

FunctionalSplit testfn_functional(const TestFunction& tf) {
    const TestFunctionParams& tp = tf.params;
    const RadialGrid& g = tf.profile.grid();
    const double kappa = 4.0 * pi * (1.0 - tp.beta);
    FunctionalSplit out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        const double u = tf.profile[i];
        const double log_term = std::log(g.weight(i)) - 2.0 * tp.beta * std::log(r) + kappa * u * u;
        if (log_term > log_exponent_cap)
            throw ExponentOverflow("testfn_functional: exponent overflow at r = " + std::to_string(r), r);
        (r <= tp.inner_radius() ? out.inner : out.outer) += std::exp(log_term);
    }
    out.total = out.inner + out.outer;
    return out;
}

double inner_leading_term(const TestFunctionParams& tp) {
    return bubble_coefficient(tp.beta) * std::exp(1.0 + 4.0 * pi * (1.0 - tp.beta) * tp.a0);
}

double outer_leading_term(const TestFunctionParams& tp, const GreenFunction& g) {
    const RadialGrid& grid = g.profile.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        acc += grid.weight(i) * std::pow(grid.node(i), -2.0 * tp.beta) * g.profile[i] * g.profile[i];
    return bubble_coefficient(tp.beta) + 4.0 * pi * (1.0 - tp.beta) / tp.c_sq * acc;
}

Verdict contradiction_check(const TestFunctionParams&, double functional_value, double norm_value, double bound) {
    Verdict v;
    v.norm_value = norm_value;
    v.functional_value = functional_value;
    v.bound = bound;
    v.norm_margin = 1.0 + 1e-3 - norm_value;
    v.functional_margin = functional_value - bound;
    v.pass = norm_value <= 1.0 + 1e-3 && functional_value > bound;
    return v;
}

Verdict evaluate_test_function(const TestFunction& tf, double bound) {
    const double norm = testfn_norm(tf);
    Verdict v = contradiction_check(tf.params, testfn_functional(tf).total, norm, bound);
    if (norm > 1.0) {
        v.normalized_functional = testfn_functional(tf.scaled(1.0 / std::sqrt(norm))).total;
        v.normalized_pass = *v.normalized_functional > bound;
    }
    return v;
}

}  // namespace hmt
