#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hmt/functional.hpp"
#include "hmt/grid.hpp"

namespace hmt {

struct MaximizerResult;

/// Concentration radius sqrt(lambda) c^-1 exp(-2 pi (1 - beta - eps) c^2).
struct ScaleRadius {
    double log_value = 0.0;
    double value = 0.0;      ///< 0 when underflow is set
    bool underflow = false;
};

/// Throws std::invalid_argument unless c > 0 and lambda > 0.
ScaleRadius blowup_scale(double c_eps, double lambda_eps, const ProblemParams& p);

struct RescaledProfiles {
    std::vector<double> x;
    std::vector<double> psi;  ///< u(s x) / c
    std::vector<double> phi;  ///< c (u(s x) - c)
};

/// Samples at |y| = r_eps^(1/(1-beta)) x.  Throws std::domain_error when the
/// window reaches outside the disc.
RescaledProfiles rescaled_profiles(const RadialFunction& u, double c_eps, double r_eps, const ProblemParams& p,
                                   std::span<const double> window);

/// -log(1 + pi/(1-beta) x^(2-2 beta)) / (4 pi (1-beta)).
double bubble_value(double x, double beta);

/// Mass of |x|^(-2 beta) (1 + pi/(1-beta) |x|^(2-2 beta))^(-2) beyond radius R, in closed form.
double bubble_tail_mass(double beta, double r_trunc);

/// Quadrature over the disc of radius r_trunc on an n-node grid plus the closed-form tail.
double bubble_mass(double beta, double r_trunc, std::size_t n);

/// Largest relative nodal defect of the finite-volume balance
///   -Delta phi0 = |x|^(-2 beta) exp(8 pi (1-beta) phi0)
/// over nodes in [r_lo, r_hi], on an n-node grid of radius 2 r_hi.
double bubble_residual(double beta, double r_lo, double r_hi, std::size_t n);

/// ||min(u, tau c)||_{H,alpha}^2.  Throws std::invalid_argument unless 0 < tau <= 1.
double truncation_energy(const RadialFunction& u, double c_eps, double tau, double alpha);

/// pi/(1-beta) + lambda/c^2.  Throws std::invalid_argument unless c > 0.
double concentration_bound(double lambda_eps, double c_eps, double beta);

/// lambda^-1 int |x|^(-2 beta) c u exp(kappa u^2) phi, with c = u(0).
double dirac_pairing(const RadialFunction& u, double lambda_eps, const ProblemParams& p,
                     const std::function<double(double)>& phi);

struct BlowupReport {
    double c_eps = 0.0;
    double lambda_eps = 0.0;
    ScaleRadius r_eps;
    double window_max = 0.0;        ///< effective end of the rescaled window, clipped to the disc
    double profile_distance = 0.0;  ///< sup |phi_eps - phi0| on the window
    std::vector<std::pair<double, double>> truncation_energies;  ///< (tau, energy)
    double concentration_bound_value = 0.0;
    double f_value = 0.0;
    std::vector<std::pair<std::string, double>> dirac_errors;  ///< (test function, |pairing - phi(0)|)
};

/// tau in {0.25, 0.5, 0.75, 1}.
std::span<const double> default_taus();

/// Diagnostics for one maximizer on the window |x| in [0, 10] (clipped to the disc).
BlowupReport blowup_report(const MaximizerResult& m, const ProblemParams& p,
                           std::span<const double> taus = default_taus());

}  // namespace hmt
