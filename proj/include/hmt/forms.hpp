#pragma once

#include <span>
#include <vector>

#include "hmt/grid.hpp"

namespace hmt {

/// Symmetric tridiagonal quadratic form in edge/node representation:
///   E(v) = sum_k edge[k] (v[k+1] - v[k])^2 + sum_i node[i] v[i]^2.
struct RadialForm {
    std::vector<double> edge;
    std::vector<double> node;

    std::size_t size() const noexcept { return node.size(); }
    double energy(std::span<const double> v) const;
    double bilinear(std::span<const double> a, std::span<const double> b) const;
    std::vector<double> apply(std::span<const double> v) const;
};

/// LDL^T factorization of a RadialForm.  Throws NumericalError when a pivot
/// is not positive, i.e. the form is not coercive.
class FormFactor {
public:
    explicit FormFactor(const RadialForm& form);
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    std::vector<double> pivot_;
    std::vector<double> lower_;
};

/// Hardy form minus alpha times L^2 mass, acting on v = u / sqrt(1 - r^2).
///
/// Uses ||u||_H^2 = int (1-r^2)|grad v|^2 + int v^2, so the boundary
/// singularity never appears.  Edge conductances are exact for the radial
/// solutions of div((1-r^2) grad v) = 0.  No condition is imposed at r = 1.
RadialForm hardy_form(const RadialGrid& grid, double alpha);

/// Conductance of hardy_form between two radii below 1/2.
double hardy_conductance(double r_lo, double r_hi);

/// Dirichlet energy on u with finite-volume conductances exact for log r.
/// With with_boundary the face to u(1) = 0 is included.
RadialForm dirichlet_form(const RadialGrid& grid, bool with_boundary = true);

/// sqrt(1 - r_i^2): maps v to u.
std::vector<double> ground_state(const RadialGrid& grid);

/// Diagonal masses: w_i (1 - r_i^2) for v, and w_i r_i^(-2 beta) for u.
std::vector<double> hardy_mass(const RadialGrid& grid);
std::vector<double> weighted_mass(const RadialGrid& grid, double beta);

}  // namespace hmt
