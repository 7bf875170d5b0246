#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace hmt {

/// Endpoint clustering of the radial map r(t), t in (0,1).
///
/// r is the regularized incomplete beta function I_t(p0, p1), so near the
/// origin r ~ t^p0 and near the boundary 1 - r ~ (1-t)^p1.  Both powers are
/// integers, which keeps r and 1 - r finite binomial sums that can be
/// evaluated without cancellation.
struct Grading {
    int origin_power = 8;
    int boundary_power = 4;

    bool operator==(const Grading&) const = default;
};

/// Nodes and weights of a trapezoid rule in t, mapped onto the unit disc.
///
/// weights()[i] integrates radial functions over the disc, so the 2*pi*r
/// Jacobian is already included and sum(weights) = pi.
class RadialGrid {
public:
    RadialGrid(std::size_t n, Grading grading);

    std::size_t size() const noexcept { return r_.size(); }
    const Grading& grading() const noexcept { return grading_; }

    std::span<const double> nodes() const noexcept { return r_; }
    /// 1 - r_i, computed directly rather than by subtraction.
    std::span<const double> gaps() const noexcept { return gap_; }
    std::span<const double> weights() const noexcept { return w_; }

    double node(std::size_t i) const { return r_[i]; }
    double gap(std::size_t i) const { return gap_[i]; }
    double weight(std::size_t i) const { return w_[i]; }
    /// 1 - r_i^2 without cancellation.
    double one_minus_r2(std::size_t i) const { return gap_[i] * (2.0 - gap_[i]); }

    /// r_i - r_j, accurate when both nodes sit close to the boundary.
    double node_difference(std::size_t i, std::size_t j) const;
    /// x - r_i for an arbitrary radius x in [0, 1).
    double offset_from_node(double x, std::size_t i) const;

private:
    Grading grading_;
    std::vector<double> r_;
    std::vector<double> gap_;
    std::vector<double> w_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Builds a grid with n interior nodes.  Throws std::invalid_argument for
/// n < 16 or powers outside [1, 16].
GridPtr build_grid(std::size_t n, Grading grading = {});

/// Grid values of a radial function.  Values are checked finite.
class RadialFunction {
public:
    RadialFunction(GridPtr grid, std::vector<double> values);

    template <class F>
    static RadialFunction sample(GridPtr grid, F&& f) {
        std::vector<double> v(grid->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->node(i));
        return RadialFunction(std::move(grid), std::move(v));
    }

    const RadialGrid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Cubic extrapolation to r = 0 from the four innermost nodes.
    double origin_value() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Fixed interpolation rule: cubic Lagrange on the four nodes surrounding r.
/// r = 0 returns origin_value().  Throws std::domain_error outside [0, 1).
double value_at(const RadialFunction& f, double r);

/// Derivative in r from five-point Lagrange stencils (exact for quartics).
RadialFunction differentiate(const RadialFunction& f);

/// Lagrange weights at x for the given node indices, cancellation-safe near r = 1.
std::vector<double> interpolation_weights(const RadialGrid& grid, std::span<const std::size_t> idx,
                                          double x);

/// sum_i w_i f_i in ascending node order.
double integrate(const RadialFunction& f);
double integrate(const RadialGrid& grid, std::span<const double> values);
double integrate(const RadialGrid& grid, const std::function<double(double)>& f);

/// The same rule scaled onto the disc of the given radius:
/// sum_i radius^2 w_i f(radius * r_i).
double integrate_disc(const RadialGrid& grid, const std::function<double(double)>& f,
                      double radius);

}  // namespace hmt
