#pragma once

#include <optional>

#include "hmt/green.hpp"
#include "hmt/grid.hpp"

namespace hmt {

/// Constants of the glued profile: a bubble of scale eps inside B_{R eps}
/// and G / c outside, with R = (-log eps)^(1/(1-beta)).
struct TestFunctionParams {
    double eps = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
    double R = 0.0;
    double b = 0.0;      ///< 1 / (4 pi (1-beta)), remainder dropped
    double c_sq = 0.0;   ///< -log(eps)/(2 pi) + a0 + b log(pi/(1-beta)) - b, remainder dropped
    double a0 = 0.0;
    double matching_residual = 0.0;  ///< |inner(R eps) - G(R eps)/c|

    double c() const;
    double inner_radius() const { return R * eps; }
};

struct TestFunction {
    TestFunctionParams params;
    RadialFunction profile;
    double inner_edge_value = 0.0;  ///< inner piece at R eps
    double outer_edge_value = 0.0;  ///< G(R eps) / c

    /// The same function multiplied by t (profile and both traces).
    TestFunction scaled(double t) const;
};

/// Throws std::invalid_argument when R eps >= 0.5 or c^2 <= 0.
TestFunction build_test_function(double eps, double beta, double alpha, const GreenFunction& g, const GridPtr& grid);

/// Inner piece c + (-b log(1 + k (r/eps)^(2-2 beta)) + b) / c and its radial slope.
double inner_profile(const TestFunctionParams& tp, double r);
double inner_slope(const TestFunctionParams& tp, double r);

/// ||phi_eps||_{H,alpha}^2 as the sum of the inner and outer pieces.
///
/// With the remainders dropped the two pieces differ by about b / (S c) at
/// R eps (S = k R^(2-2 beta)), and a grid form across that jump would grow
/// linearly with n.  The edge straddling R eps is therefore split there and
/// each half uses its own piece's trace.
double testfn_norm(const TestFunction& tf);

/// int_{B_{R eps}} |grad phi_eps|^2 by quadrature of the exact slope.
double inner_dirichlet_energy(const TestFunctionParams& tp, const RadialGrid& grid);
/// (log k + log R^(2-2 beta) - 1) / (4 pi (1-beta) c^2).
double inner_dirichlet_energy_leading(const TestFunctionParams& tp);

struct FunctionalSplit {
    double inner = 0.0;  ///< nodes with r <= R eps
    double outer = 0.0;
    double total = 0.0;
};

/// int |x|^(-2 beta) exp(4 pi (1-beta) phi^2), in log space.
FunctionalSplit testfn_functional(const TestFunction& tf);

/// k e^(1 + 4 pi (1-beta) a0), the inner lower bound without remainder.
double inner_leading_term(const TestFunctionParams& tp);
/// k + (4 pi (1-beta) / c^2) int |x|^(-2 beta) G^2, the outer expansion without remainder.
double outer_leading_term(const TestFunctionParams& tp, const GreenFunction& g);

struct Verdict {
    bool pass = false;
    double norm_value = 0.0;
    double functional_value = 0.0;
    double bound = 0.0;
    double norm_margin = 0.0;        ///< 1 + 1e-3 - norm_value
    double functional_margin = 0.0;  ///< functional_value - bound
    /// Present when norm_value > 1: the profile rescaled onto the unit sphere.
    std::optional<double> normalized_functional;
    std::optional<bool> normalized_pass;
};

/// PASS iff norm_value <= 1 + 1e-3 and functional_value > bound.
Verdict contradiction_check(const TestFunctionParams& tp, double functional_value, double norm_value, double bound);

/// End to end: norm, functional, the normalized variant when needed.
Verdict evaluate_test_function(const TestFunction& tf, double bound);

}  // namespace hmt
