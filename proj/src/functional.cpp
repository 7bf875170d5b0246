#include "hmt/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hmt/error.hpp"
#include "hmt/forms.hpp"

namespace hmt {

ProblemParams::ProblemParams(double beta, double alpha, double eps)
    : beta_(beta), alpha_(alpha), eps_(eps), exponent_(4.0 * std::numbers::pi * (1.0 - beta - eps)) {
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0, 1)");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
    if (!(eps >= 0.0 && eps < 1.0 - beta)) throw std::invalid_argument("eps must lie in [0, 1 - beta)");
}

void ProblemParams::check_alpha(double lambda1) const {
    if (!(alpha_ < lambda1))
        throw std::invalid_argument("alpha = " + std::to_string(alpha_) + " is not below lambda1 = " +
                                    std::to_string(lambda1));
}

namespace {

// log(w_i r_i^(-2 beta)) + kappa u_i^2, with the cap enforced.
double log_integrand(const RadialGrid& g, std::size_t i, double u, const ProblemParams& p) {
    const double v = std::log(g.weight(i)) - 2.0 * p.beta() * std::log(g.node(i)) + p.exponent() * u * u;
    if (v > log_exponent_cap)
        throw ExponentOverflow("exponent overflow at r = " + std::to_string(g.node(i)) +
                                   " (refine the grid or increase eps)",
                               g.node(i));
    return v;
}

}  // namespace

double mt_functional(const RadialFunction& u, const ProblemParams& p) {
    const RadialGrid& g = u.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::exp(log_integrand(g, i, u[i], p));
    return acc;
}

double lambda_eps(const RadialFunction& u, const ProblemParams& p) {
    const RadialGrid& g = u.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::exp(log_integrand(g, i, u[i], p)) * u[i] * u[i];
    return acc;
}

std::vector<double> el_load(const RadialFunction& u, const ProblemParams& p) {
    const RadialGrid& g = u.grid();
    std::vector<double> b(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        b[i] = std::exp(log_integrand(g, i, u[i], p)) * std::sqrt(g.one_minus_r2(i)) * u[i];
    return b;
}

double el_residual(const RadialFunction& u, double lambda, const ProblemParams& p) {
    if (!(lambda > 0.0)) throw std::invalid_argument("el_residual: lambda must be positive");
    const RadialGrid& g = u.grid();
    const RadialForm A = hardy_form(g, p.alpha());
    const auto w = ground_state(g);
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] / w[i];

    auto res = A.apply(v);
    const auto b = el_load(u, p);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= b[i] / lambda;
    res.front() = 0.0;
    res.back() = 0.0;

    // ||res||_{A^-1}: the energy-norm size of the correction the residual induces.
    const auto z = FormFactor(A).solve(res);
    double acc = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) acc += res[i] * z[i];
    return std::sqrt(std::max(acc, 0.0));
}

}  // namespace hmt
