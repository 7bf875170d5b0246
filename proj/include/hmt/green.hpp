#pragma once

#include "hmt/grid.hpp"

namespace hmt {

enum class GreenMode { hardy, laplacian };

/// Solution of L_alpha G = delta_0, L_alpha = -Delta - (1-|x|^2)^-2 - alpha
/// (hardy mode) or -Delta with G(1) = 0 (laplacian mode).
///
/// Hardy mode works in v = G / sqrt(1 - r^2); laplacian mode works on G
/// directly.  In both the unknown is split as -(1/2 pi) log r + H with H
/// regular, and a0 = H(0).
struct GreenFunction {
    GreenMode mode = GreenMode::hardy;
    double alpha = 0.0;
    RadialFunction profile;       ///< G at the nodes
    RadialFunction smooth_part;   ///< H
    RadialFunction smooth_slope;  ///< dH/dr
    double a0 = 0.0;
    RadialFunction regular_part;  ///< G + (1/2 pi) log r - a0

    /// G(r) for r in (0, 1), with the logarithm evaluated exactly.
    double value(double r) const;
    /// dG/dr for r in (0, 1).
    double derivative(double r) const;
};

/// Throws NumericalError when the operator is not coercive (alpha >= lambda1).
GreenFunction solve_green(double alpha, const GridPtr& grid, GreenMode mode);

struct A0Extraction {
    double value = 0.0;      ///< quintic extrapolation from the six innermost nodes
    double alternate = 0.0;  ///< cubic extrapolation from nodes 2..5
    double spread = 0.0;     ///< |value - alternate|
};

/// Extrapolates G(r) + (1/2 pi) log r to r = 0.  Throws NumericalError when
/// the two stencils disagree by more than max_spread.
A0Extraction extract_a0(const GreenFunction& g, double max_spread = 1e-3);

/// (pi / (1-beta)) (1 + exp(1 + 4 pi (1-beta) a0)).
double explicit_upper_bound(double beta, double a0);

/// |-2 pi rho G'(rho) - 1 - int_{B_rho} (V + alpha) G| with V = (1-r^2)^-2 in
/// hardy mode and V + alpha = 0 in laplacian mode.
double green_flux_defect(const GreenFunction& g, double rho);

/// Largest relative nodal defect of the discrete equation for the assembled
/// unknown, over nodes in [r_lo, r_hi].
double green_weak_residual(const GreenFunction& g, double r_lo, double r_hi);

}  // namespace hmt
