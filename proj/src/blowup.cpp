#include "hmt/blowup.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hmt/forms.hpp"
#include "hmt/norms.hpp"
#include "hmt/solver.hpp"

namespace hmt {

namespace {

constexpr double pi = std::numbers::pi;

double bubble_density(double rho, double beta) {
    const double k = pi / (1.0 - beta);
    const double s = 1.0 + k * std::pow(rho, 2.0 - 2.0 * beta);
    return std::pow(rho, -2.0 * beta) / (s * s);
}

}  // namespace

ScaleRadius blowup_scale(double c_eps, double lambda_eps, const ProblemParams& p) {
    if (!(c_eps > 0.0) || !(lambda_eps > 0.0))
        throw std::invalid_argument("blowup_scale: c and lambda must be positive");
    ScaleRadius s;
    s.log_value = 0.5 * std::log(lambda_eps) - std::log(c_eps) - 0.5 * p.exponent() * c_eps * c_eps;
    if (s.log_value < std::log(DBL_MIN)) {
        s.underflow = true;
    } else {
        s.value = std::exp(s.log_value);
    }
    return s;
}

RescaledProfiles rescaled_profiles(const RadialFunction& u, double c_eps, double r_eps, const ProblemParams& p,
                                   std::span<const double> window) {
    const double s = std::pow(r_eps, 1.0 / (1.0 - p.beta()));
    RescaledProfiles out;
    for (double x : window) {
        if (!(x >= 0.0) || !(s * x < 1.0)) throw std::domain_error("rescaled_profiles: window escapes the disc");
        const double uy = value_at(u, s * x);
        out.x.push_back(x);
        out.psi.push_back(uy / c_eps);
        out.phi.push_back(c_eps * (uy - c_eps));
    }
    return out;
}

double bubble_value(double x, double beta) {
    if (!(beta < 1.0)) throw std::invalid_argument("bubble_value: beta must be < 1");
    const double k = pi / (1.0 - beta);
    return -std::log1p(k * std::pow(x, 2.0 - 2.0 * beta)) / (4.0 * pi * (1.0 - beta));
}

double bubble_tail_mass(double beta, double r_trunc) {
    // Substituting t = r^(2-2 beta) gives an elementary primitive.
    const double k = pi / (1.0 - beta);
    return 1.0 / (1.0 + k * std::pow(r_trunc, 2.0 - 2.0 * beta));
}

double bubble_mass(double beta, double r_trunc, std::size_t n) {
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("bubble_mass: beta must lie in [0, 1)");
    if (!(r_trunc >= 10.0)) throw std::invalid_argument("bubble_mass: truncation radius must be >= 10");
    const GridPtr g = build_grid(n);
    const double inner = integrate_disc(*g, [beta](double rho) { return bubble_density(rho, beta); }, r_trunc);
    return inner + bubble_tail_mass(beta, r_trunc);
}

double bubble_residual(double beta, double r_lo, double r_hi, std::size_t n) {
    if (!(0.0 < r_lo && r_lo < r_hi)) throw std::invalid_argument("bubble_residual: need 0 < r_lo < r_hi");
    const GridPtr g = build_grid(n);
    const double radius = 2.0 * r_hi;
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = bubble_value(radius * g->node(i), beta);
    // Edge conductances 2 pi / log(r_{k+1}/r_k) do not change under scaling.
    const auto flux = dirichlet_form(*g, false).apply(phi);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = radius * g->node(i);
        if (rho < r_lo || rho > r_hi) continue;
        const double load = radius * radius * g->weight(i) * bubble_density(rho, beta);
        worst = std::max(worst, std::abs(flux[i] - load) / load);
    }
    return worst;
}

double truncation_energy(const RadialFunction& u, double c_eps, double tau, double alpha) {
    if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("truncation_energy: tau must lie in (0, 1]");
    std::vector<double> t(u.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::min(u[i], tau * c_eps);
    (void)hardy_norm_sq(u);  // the untruncated profile must pass the decay check
    return halpha_norm_sq(RadialFunction(u.grid_ptr(), std::move(t)), alpha, DecayCheck::skip);
}

double concentration_bound(double lambda_eps, double c_eps, double beta) {
    if (!(c_eps > 0.0)) throw std::invalid_argument("concentration_bound: c must be positive");
    return pi / (1.0 - beta) + lambda_eps / (c_eps * c_eps);
}

double dirac_pairing(const RadialFunction& u, double lambda_eps, const ProblemParams& p,
                     const std::function<double(double)>& phi) {
    if (!(lambda_eps > 0.0)) throw std::invalid_argument("dirac_pairing: lambda must be positive");
    const RadialGrid& g = u.grid();
    const double c = u.origin_value();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double f = phi(g.node(i));
        if (f == 0.0) continue;
        const double log_w = std::log(g.weight(i)) - 2.0 * p.beta() * std::log(g.node(i)) + p.exponent() * u[i] * u[i];
        acc += std::exp(log_w) * u[i] * f;
    }
    return c * acc / lambda_eps;
}

std::span<const double> default_taus() {
    static constexpr double taus[] = {0.25, 0.5, 0.75, 1.0};
    return taus;
}

BlowupReport blowup_report(const MaximizerResult& m, const ProblemParams& p, std::span<const double> taus) {
    BlowupReport rep;
    rep.c_eps = m.c_eps;
    rep.lambda_eps = m.lambda_eps;
    rep.f_value = m.f_value;
    rep.r_eps = blowup_scale(m.c_eps, m.lambda_eps, p);
    rep.concentration_bound_value = concentration_bound(m.lambda_eps, m.c_eps, p.beta());

    const double s = std::pow(rep.r_eps.value, 1.0 / (1.0 - p.beta()));
    std::vector<double> window;
    for (int j = 0; j <= 20; ++j) {
        const double x = 0.5 * j;
        if (s * x < 1.0) window.push_back(x);
    }
    rep.window_max = window.back();
    const auto prof = rescaled_profiles(m.u_eps, m.c_eps, rep.r_eps.value, p, window);
    for (std::size_t j = 0; j < prof.x.size(); ++j)
        rep.profile_distance = std::max(rep.profile_distance, std::abs(prof.phi[j] - bubble_value(prof.x[j], p.beta())));

    for (double tau : taus) rep.truncation_energies.emplace_back(tau, truncation_energy(m.u_eps, m.c_eps, tau, p.alpha()));

    rep.dirac_errors.emplace_back("one", std::abs(dirac_pairing(m.u_eps, m.lambda_eps, p, [](double) { return 1.0; }) - 1.0));
    rep.dirac_errors.emplace_back(
        "one_minus_r2", std::abs(dirac_pairing(m.u_eps, m.lambda_eps, p, [](double r) { return 1.0 - r * r; }) - 1.0));
    return rep;
}

}  // namespace hmt
