#include "hmt/forms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hmt/error.hpp"

namespace hmt {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_size(const RadialForm& f, std::size_t n) {
    if (n != f.size()) throw std::invalid_argument("RadialForm: vector size mismatch");
}

// log(r_{k+1} / r_k) without cancellation near r = 1.
double log_ratio(const RadialGrid& g, std::size_t k) {
    return std::log1p(g.node_difference(k + 1, k) / g.node(k));
}

// log(1 - r^2) at node i.
double log_one_minus_r2(const RadialGrid& g, std::size_t i) {
    return std::log(g.gap(i)) + std::log(2.0 - g.gap(i));
}

}  // namespace

double RadialForm::energy(std::span<const double> v) const { return bilinear(v, v); }

double RadialForm::bilinear(std::span<const double> a, std::span<const double> b) const {
    check_size(*this, a.size());
    check_size(*this, b.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < edge.size(); ++k) acc += edge[k] * (a[k + 1] - a[k]) * (b[k + 1] - b[k]);
    for (std::size_t i = 0; i < node.size(); ++i) acc += node[i] * a[i] * b[i];
    return acc;
}

std::vector<double> RadialForm::apply(std::span<const double> v) const {
    check_size(*this, v.size());
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = node[i] * v[i];
    for (std::size_t k = 0; k < edge.size(); ++k) {
        const double flux = edge[k] * (v[k] - v[k + 1]);
        out[k] += flux;
        out[k + 1] -= flux;
    }
    return out;
}

FormFactor::FormFactor(const RadialForm& form) {
    const std::size_t n = form.size();
    pivot_.resize(n);
    lower_.resize(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        double a = form.node[i];
        if (i > 0) a += form.edge[i - 1];
        if (i + 1 < n) a += form.edge[i];
        if (i > 0) {
            lower_[i - 1] = -form.edge[i - 1] / pivot_[i - 1];
            a -= form.edge[i - 1] * form.edge[i - 1] / pivot_[i - 1];
        }
        if (!(a > 0.0) || !std::isfinite(a))
            throw NumericalError("form is not coercive: pivot " + std::to_string(i) + " = " + std::to_string(a));
        pivot_[i] = a;
    }
}

std::vector<double> FormFactor::solve(std::span<const double> rhs) const {
    const std::size_t n = pivot_.size();
    if (rhs.size() != n) throw std::invalid_argument("FormFactor::solve: size mismatch");
    std::vector<double> x(rhs.begin(), rhs.end());
    for (std::size_t i = 1; i < n; ++i) x[i] -= lower_[i - 1] * x[i - 1];
    for (std::size_t i = 0; i < n; ++i) x[i] /= pivot_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= lower_[i] * x[i + 1];
    return x;
}

RadialForm hardy_form(const RadialGrid& g, double alpha) {
    const std::size_t n = g.size();
    RadialForm f;
    f.edge.resize(n - 1);
    f.node.resize(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        // P(r) = log r - log(1 - r^2)/2 solves the homogeneous flux equation.
        const double dP = log_ratio(g, k) - 0.5 * (log_one_minus_r2(g, k + 1) - log_one_minus_r2(g, k));
        f.edge[k] = two_pi / dP;
    }
    for (std::size_t i = 0; i < n; ++i) f.node[i] = g.weight(i) * (1.0 - alpha * g.one_minus_r2(i));
    return f;
}

double hardy_conductance(double r_lo, double r_hi) {
    const double dP = std::log(r_hi / r_lo) - 0.5 * (std::log1p(-r_hi * r_hi) - std::log1p(-r_lo * r_lo));
    return two_pi / dP;
}

RadialForm dirichlet_form(const RadialGrid& g, bool with_boundary) {
    const std::size_t n = g.size();
    RadialForm f;
    f.edge.resize(n - 1);
    f.node.assign(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) f.edge[k] = two_pi / log_ratio(g, k);
    if (with_boundary) f.node[n - 1] = two_pi / -std::log1p(-g.gap(n - 1));
    return f;
}

std::vector<double> ground_state(const RadialGrid& g) {
    std::vector<double> w(g.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sqrt(g.one_minus_r2(i));
    return w;
}

std::vector<double> hardy_mass(const RadialGrid& g) {
    std::vector<double> m(g.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.weight(i) * g.one_minus_r2(i);
    return m;
}

std::vector<double> weighted_mass(const RadialGrid& g, double beta) {
    std::vector<double> m(g.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.weight(i) * std::pow(g.node(i), -2.0 * beta);
    return m;
}

}  // namespace hmt
