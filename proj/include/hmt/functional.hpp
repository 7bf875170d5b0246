#pragma once

#include "hmt/grid.hpp"

namespace hmt {

/// (beta, alpha, eps) of the subcritical problem.  eps = 0 is accepted so
/// the critical exponent can be evaluated; the solver requires eps > 0.
class ProblemParams {
public:
    ProblemParams(double beta, double alpha, double eps);

    double beta() const noexcept { return beta_; }
    double alpha() const noexcept { return alpha_; }
    double eps() const noexcept { return eps_; }
    /// 4 pi (1 - beta - eps).
    double exponent() const noexcept { return exponent_; }

    /// Throws std::invalid_argument unless alpha < lambda1.
    void check_alpha(double lambda1) const;

private:
    double beta_;
    double alpha_;
    double eps_;
    double exponent_;
};

/// Largest log-integrand accepted before reporting ExponentOverflow.
inline constexpr double log_exponent_cap = 700.0;

/// int |x|^(-2 beta) exp(kappa u^2), evaluated in log space.
double mt_functional(const RadialFunction& u, const ProblemParams& p);

/// int |x|^(-2 beta) u^2 exp(kappa u^2).
double lambda_eps(const RadialFunction& u, const ProblemParams& p);

/// Dual-norm residual of the Euler-Lagrange equation
///   L_alpha u = lambda^-1 |x|^(-2 beta) u exp(kappa u^2)
/// in ground-state variables, tested against all nodes except the first
/// and the last.  Throws std::invalid_argument for lambda <= 0.
double el_residual(const RadialFunction& u, double lambda, const ProblemParams& p);

/// Nodal right-hand side b_i = w_i r_i^(-2 beta) sqrt(1-r_i^2) u_i exp(kappa u_i^2),
/// the load vector of the Euler-Lagrange equation in ground-state variables.
std::vector<double> el_load(const RadialFunction& u, const ProblemParams& p);

}  // namespace hmt
