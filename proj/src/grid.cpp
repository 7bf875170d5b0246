#include "hmt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hmt {

namespace {

double binomial(int n, int k) {
    double c = 1.0;
    for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    return c;
}

// Terms j in [lo, hi] of sum_j C(N,j) t^j s^(N-j).
double bernstein_sum(int N, int lo, int hi, double t, double s) {
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += binomial(N, j) * std::pow(t, j) * std::pow(s, N - j);
    return acc;
}

}  // namespace

RadialGrid::RadialGrid(std::size_t n, Grading grading) : grading_(grading) {
    if (n < 16) throw std::invalid_argument("build_grid: need at least 16 nodes, got " + std::to_string(n));
    const int p0 = grading.origin_power;
    const int p1 = grading.boundary_power;
    if (p0 < 1 || p0 > 16 || p1 < 1 || p1 > 16)
        throw std::invalid_argument("build_grid: grading powers must lie in [1, 16]");

    const int N = p0 + p1 - 1;
    const double inv_beta = N * binomial(N - 1, p0 - 1);
    const double h = 1.0 / static_cast<double>(n + 1);

    r_.resize(n);
    gap_.resize(n);
    w_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) * h;
        const double s = static_cast<double>(n - i) * h;
        r_[i] = bernstein_sum(N, p0, N, t, s);
        gap_[i] = bernstein_sum(N, 0, p0 - 1, t, s);
        const double dr = inv_beta * std::pow(t, p0 - 1) * std::pow(s, p1 - 1);
        w_[i] = 2.0 * std::numbers::pi * r_[i] * dr * h;
    }

    // Endpoint correction: the trapezoid error is dominated by the boundary
    // term proportional to f(1); putting the area defect on the last node
    // cancels it and makes the rule exact for constants.
    double total = 0.0;
    for (double w : w_) total += w;
    w_.back() += std::numbers::pi - total;

    for (std::size_t i = 1; i < n; ++i) {
        if (!(r_[i] > r_[i - 1]) || !(gap_[i] > 0.0))
            throw std::invalid_argument("build_grid: nodes not representable for this n and grading");
    }
    if (!(r_.front() > 0.0) || !(w_.back() > 0.0))
        throw std::invalid_argument("build_grid: degenerate weights for this n and grading");
}

double RadialGrid::node_difference(std::size_t i, std::size_t j) const {
    if (r_[i] < 0.5 || r_[j] < 0.5) return r_[i] - r_[j];
    return gap_[j] - gap_[i];
}

double RadialGrid::offset_from_node(double x, std::size_t i) const {
    if (x < 0.5 || r_[i] < 0.5) return x - r_[i];
    return gap_[i] - (1.0 - x);
}

GridPtr build_grid(std::size_t n, Grading grading) {
    return std::make_shared<const RadialGrid>(n, grading);
}

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("RadialFunction: null grid");
    if (values_.size() != grid_->size()) throw std::invalid_argument("RadialFunction: grid/function size mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw std::invalid_argument("RadialFunction: non-finite value at node " + std::to_string(i));
    }
}

std::vector<double> interpolation_weights(const RadialGrid& grid, std::span<const std::size_t> idx, double x) {
    std::vector<double> L(idx.size(), 1.0);
    for (std::size_t j = 0; j < idx.size(); ++j) {
        for (std::size_t m = 0; m < idx.size(); ++m) {
            if (m == j) continue;
            L[j] *= grid.offset_from_node(x, idx[m]) / grid.node_difference(idx[j], idx[m]);
        }
    }
    return L;
}

double RadialFunction::origin_value() const {
    const std::size_t idx[4] = {0, 1, 2, 3};
    const auto L = interpolation_weights(*grid_, idx, 0.0);
    double v = 0.0;
    for (std::size_t j = 0; j < 4; ++j) v += L[j] * values_[j];
    return v;
}

double value_at(const RadialFunction& f, double r) {
    if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("value_at: radius outside [0, 1)");
    if (r == 0.0) return f.origin_value();
    const auto nodes = f.grid().nodes();
    const auto n = static_cast<std::ptrdiff_t>(nodes.size());
    const auto k = std::upper_bound(nodes.begin(), nodes.end(), r) - nodes.begin();
    const auto start = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k - 2, 0, n - 4));
    const std::size_t idx[4] = {start, start + 1, start + 2, start + 3};
    const auto L = interpolation_weights(f.grid(), idx, r);
    double v = 0.0;
    for (std::size_t j = 0; j < 4; ++j) v += L[j] * f[idx[j]];
    return v;
}

RadialFunction differentiate(const RadialFunction& f) {
    const RadialGrid& g = f.grid();
    const std::size_t n = g.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t s = std::min(i < 2 ? 0 : i - 2, n - 5);
        // Differences against f[i] make constants exact and avoid cancellation
        // on the tightly clustered nodes near the origin.
        double acc = 0.0;
        for (std::size_t j = s; j < s + 5; ++j) {
            if (j == i) continue;
            // L_j'(r_i) = sum_{m != j} 1/(r_j - r_m) prod_{l != j,m} (r_i - r_l)/(r_j - r_l)
            double lj = 0.0;
            for (std::size_t m = s; m < s + 5; ++m) {
                if (m == j) continue;
                double term = 1.0 / g.node_difference(j, m);
                for (std::size_t l = s; l < s + 5; ++l) {
                    if (l == j || l == m) continue;
                    term *= g.node_difference(i, l) / g.node_difference(j, l);
                }
                lj += term;
            }
            acc += lj * (f[j] - f[i]);
        }
        d[i] = acc;
    }
    return RadialFunction(f.grid_ptr(), std::move(d));
}

double integrate(const RadialGrid& grid, std::span<const double> values) {
    if (values.size() != grid.size()) throw std::invalid_argument("integrate: grid/function size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += grid.weight(i) * values[i];
    return acc;
}

double integrate(const RadialFunction& f) { return integrate(f.grid(), f.values()); }

double integrate(const RadialGrid& grid, const std::function<double(double)>& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) acc += grid.weight(i) * f(grid.node(i));
    return acc;
}

double integrate_disc(const RadialGrid& grid, const std::function<double(double)>& f, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("integrate_disc: radius must be positive");
    const double scale = radius * radius;
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) acc += scale * grid.weight(i) * f(radius * grid.node(i));
    return acc;
}

}  // namespace hmt
