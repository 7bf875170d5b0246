#include "hmt/green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hmt/error.hpp"
#include "hmt/forms.hpp"

namespace hmt {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double singular_part(double r) { return -std::log(r) / two_pi; }

RadialForm operator_form(const RadialGrid& g, GreenMode mode, double alpha) {
    return mode == GreenMode::hardy ? hardy_form(g, alpha) : dirichlet_form(g);
}

// Lagrange extrapolation to r = 0 from the nodes [first, first + count).
double extrapolate_to_origin(const RadialGrid& g, std::span<const double> values, std::size_t first,
                             std::size_t count) {
    std::vector<std::size_t> idx(count);
    for (std::size_t j = 0; j < count; ++j) idx[j] = first + j;
    const auto L = interpolation_weights(g, idx, 0.0);
    double acc = 0.0;
    for (std::size_t j = 0; j < count; ++j) acc += L[j] * values[idx[j]];
    return acc;
}

}  // namespace

double GreenFunction::value(double r) const {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("GreenFunction::value: radius outside (0, 1)");
    const double g = singular_part(r) + value_at(smooth_part, r);
    return mode == GreenMode::hardy ? std::sqrt((1.0 - r) * (1.0 + r)) * g : g;
}

double GreenFunction::derivative(double r) const {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("GreenFunction::derivative: radius outside (0, 1)");
    const double slope = -1.0 / (two_pi * r) + value_at(smooth_slope, r);
    if (mode == GreenMode::laplacian) return slope;
    const double w = std::sqrt((1.0 - r) * (1.0 + r));
    const double g = singular_part(r) + value_at(smooth_part, r);
    return -r / w * g + w * slope;
}

GreenFunction solve_green(double alpha, const GridPtr& grid, GreenMode mode) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("solve_green: alpha must be >= 0");
    const RadialGrid& g = *grid;
    const std::size_t n = g.size();
    const double shift = mode == GreenMode::hardy ? alpha : 0.0;
    const RadialForm A = operator_form(g, mode, shift);

    std::vector<double> S(n);
    for (std::size_t i = 0; i < n; ++i) S[i] = singular_part(g.node(i));

    // The point load sits on the innermost node; A S carries the same unit
    // flux, so the right-hand side for H is regular.
    auto rhs = A.apply(S);
    for (double& x : rhs) x = -x;
    rhs[0] += 1.0;
    auto H = FormFactor(A).solve(rhs);

    std::vector<double> G(n), Phi(n);
    const auto w = ground_state(g);
    for (std::size_t i = 0; i < n; ++i) G[i] = mode == GreenMode::hardy ? w[i] * (S[i] + H[i]) : S[i] + H[i];

    const double a0 = extrapolate_to_origin(g, H, 0, 6);
    for (std::size_t i = 0; i < n; ++i) Phi[i] = G[i] - S[i] - a0;

    RadialFunction smooth(grid, std::move(H));
    RadialFunction slope = differentiate(smooth);
    return GreenFunction{mode,
                         shift,
                         RadialFunction(grid, std::move(G)),
                         std::move(smooth),
                         std::move(slope),
                         a0,
                         RadialFunction(grid, std::move(Phi))};
}

A0Extraction extract_a0(const GreenFunction& g, double max_spread) {
    const RadialGrid& grid = g.profile.grid();
    std::vector<double> shifted(7);
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = g.profile[i] - singular_part(grid.node(i));
    A0Extraction out;
    out.value = extrapolate_to_origin(grid, shifted, 0, 6);
    out.alternate = extrapolate_to_origin(grid, shifted, 1, 4);
    out.spread = std::abs(out.value - out.alternate);
    if (!(out.spread <= max_spread))
        throw NumericalError("extract_a0: extrapolation unstable, stencils differ by " + std::to_string(out.spread));
    return out;
}

double explicit_upper_bound(double beta, double a0) {
    if (!(beta < 1.0)) throw std::invalid_argument("explicit_upper_bound: beta must be < 1");
    const double k = std::numbers::pi / (1.0 - beta);
    return k * (1.0 + std::exp(1.0 + 4.0 * std::numbers::pi * (1.0 - beta) * a0));
}

double green_flux_defect(const GreenFunction& g, double rho) {
    const double outward = -two_pi * rho * g.derivative(rho);
    double source = 1.0;
    if (g.mode == GreenMode::hardy) {
        const double alpha = g.alpha;
        source += integrate_disc(
            g.profile.grid(),
            [&](double r) {
                const double s = (1.0 - r) * (1.0 + r);
                return (1.0 / (s * s) + alpha) * g.value(r);
            },
            rho);
    }
    return std::abs(outward - source);
}

double green_weak_residual(const GreenFunction& g, double r_lo, double r_hi) {
    const RadialGrid& grid = g.profile.grid();
    const RadialForm A = operator_form(grid, g.mode, g.alpha);
    const std::size_t n = grid.size();
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = singular_part(grid.node(i)) + g.smooth_part[i];
    auto res = A.apply(u);
    res[0] -= 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.node(i);
        if (r < r_lo || r > r_hi) continue;
        double scale = std::abs(A.node[i] * u[i]);
        if (i > 0) scale += std::abs(A.edge[i - 1] * (u[i] - u[i - 1]));
        if (i + 1 < n) scale += std::abs(A.edge[i] * (u[i] - u[i + 1]));
        worst = std::max(worst, std::abs(res[i]) / scale);
    }
    return worst;
}

}  // namespace hmt
