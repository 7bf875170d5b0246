#include "hmt/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hmt/error.hpp"
#include "hmt/forms.hpp"

namespace hmt {

namespace {

void check_decay(const RadialFunction& u) {
    double peak = 0.0;
    for (double x : u.values()) peak = std::max(peak, std::abs(x));
    if (peak > 0.0 && std::abs(u.values().back()) > 1e-2 * peak)
        throw std::domain_error("hardy_norm_sq: u does not decay toward r = 1 (boundary integrand unbounded)");
}

std::vector<double> to_ground_state(const RadialFunction& u) {
    const auto w = ground_state(u.grid());
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] / w[i];
    return v;
}

void check_beta(double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0, 1)");
}

}  // namespace

double hardy_norm_sq(const RadialFunction& u, DecayCheck check) {
    if (check == DecayCheck::enforce) check_decay(u);
    return hardy_form(u.grid(), 0.0).energy(to_ground_state(u));
}

double l2_norm_sq(const RadialFunction& u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u.grid().weight(i) * u[i] * u[i];
    return acc;
}

double halpha_norm_sq(const RadialFunction& u, double alpha, DecayCheck check) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("halpha_norm_sq: alpha must be >= 0");
    if (check == DecayCheck::enforce) check_decay(u);
    return hardy_form(u.grid(), alpha).energy(to_ground_state(u));
}

double l2beta_norm_sq(const RadialFunction& u, double beta) {
    check_beta(beta);
    const auto m = weighted_mass(u.grid(), beta);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += m[i] * u[i] * u[i];
    return acc;
}

NormReport norm_report(const RadialFunction& u, double alpha, double beta) {
    NormReport r;
    r.hardy_sq = hardy_norm_sq(u);
    r.dirichlet = dirichlet_form(u.grid(), false).energy(u.values());
    r.boundary_potential = r.dirichlet - r.hardy_sq;
    r.l2_sq = l2_norm_sq(u);
    r.halpha_sq = halpha_norm_sq(u, alpha);
    r.l2beta_sq = l2beta_norm_sq(u, beta);
    return r;
}

namespace {

// Inverse iteration for A x = lambda M x with diagonal M.
EigenResult inverse_iteration(const GridPtr& grid, const RadialForm& A, const std::vector<double>& mass,
                              const std::vector<double>& to_u, EigenOptions opts) {
    const FormFactor factor(A);
    const std::size_t n = mass.size();
    std::vector<double> x(n, 1.0), mx(n);
    double lambda = 0.0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) mx[i] = mass[i] * x[i];
        x = factor.solve(mx);
        double m_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) m_norm += mass[i] * x[i] * x[i];
        const double scale = 1.0 / std::sqrt(m_norm);
        for (double& xi : x) xi *= scale;
        const double next = A.energy(x);
        if (it > 1 && std::abs(next - lambda) <= opts.tolerance * std::abs(next)) {
            std::vector<double> u(n);
            for (std::size_t i = 0; i < n; ++i) u[i] = to_u[i] * x[i];
            return EigenResult{next, RadialFunction(grid, std::move(u)), it};
        }
        lambda = next;
    }
    throw NumericalError("first eigenvalue: inverse iteration exceeded " + std::to_string(opts.max_iterations) +
                         " iterations");
}

}  // namespace

EigenResult first_eigenpair(const GridPtr& grid, EigenMode mode, EigenOptions opts) {
    if (mode == EigenMode::hardy)
        return inverse_iteration(grid, hardy_form(*grid, 0.0), hardy_mass(*grid), ground_state(*grid), opts);
    return inverse_iteration(grid, dirichlet_form(*grid), weighted_mass(*grid, 0.0),
                             std::vector<double>(grid->size(), 1.0), opts);
}

double first_eigenvalue(const GridPtr& grid, EigenMode mode, EigenOptions opts) {
    return first_eigenpair(grid, mode, opts).value;
}

double first_eigenvalue_beta(double beta, const GridPtr& grid, EigenOptions opts) {
    check_beta(beta);
    return inverse_iteration(grid, dirichlet_form(*grid), weighted_mass(*grid, beta),
                             std::vector<double>(grid->size(), 1.0), opts)
        .value;
}

}  // namespace hmt
