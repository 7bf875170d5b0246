#pragma once

#include "hmt/grid.hpp"

namespace hmt {

struct NormReport {
    double dirichlet = 0.0;           ///< int |grad u|^2
    double boundary_potential = 0.0;  ///< int u^2 / (1 - r^2)^2, discrete realization
    double hardy_sq = 0.0;
    double l2_sq = 0.0;
    double halpha_sq = 0.0;
    double l2beta_sq = 0.0;
};

/// Whether to test the outermost value before evaluating the Hardy form.
/// `skip` is for callers whose input is in H by construction (for example a
/// truncation min(u, t) of a profile that already passed the check), where a
/// flat plateau can legitimately reach the last nodes.
enum class DecayCheck { enforce, skip };

/// ||u||_H^2 through the ground-state form.  Throws std::domain_error when u
/// does not decay toward r = 1 (|u(r_n)| > 1e-2 max |u|).
double hardy_norm_sq(const RadialFunction& u, DecayCheck check = DecayCheck::enforce);

/// ||u||_H^2 - alpha ||u||_2^2.  Throws std::invalid_argument for alpha < 0.
double halpha_norm_sq(const RadialFunction& u, double alpha, DecayCheck check = DecayCheck::enforce);

double l2_norm_sq(const RadialFunction& u);

/// int |x|^(-2 beta) u^2.  Throws std::invalid_argument unless 0 <= beta < 1.
double l2beta_norm_sq(const RadialFunction& u, double beta);

/// All norms at once.  boundary_potential is dirichlet - hardy_sq, which
/// equals the quadrature of u^2/(1-r^2)^2 for u vanishing near r = 1.
NormReport norm_report(const RadialFunction& u, double alpha, double beta);

enum class EigenMode { hardy, laplacian };

struct EigenOptions {
    int max_iterations = 500;
    double tolerance = 1e-14;
};

struct EigenResult {
    double value = 0.0;
    RadialFunction vector;  ///< u-space eigenfunction, positive, ||u||_2 = 1
    int iterations = 0;
};

/// Smallest eigenvalue of the (Hardy or Dirichlet, L^2) form pair by
/// inverse iteration from the constant start vector.
EigenResult first_eigenpair(const GridPtr& grid, EigenMode mode, EigenOptions opts = {});
double first_eigenvalue(const GridPtr& grid, EigenMode mode, EigenOptions opts = {});

/// Smallest eigenvalue of (Dirichlet form, |x|^(-2 beta) mass).
double first_eigenvalue_beta(double beta, const GridPtr& grid, EigenOptions opts = {});

}  // namespace hmt
