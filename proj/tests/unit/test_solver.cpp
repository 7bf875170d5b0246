#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hmt/error.hpp"
#include "hmt/functional.hpp"
#include "hmt/norms.hpp"
#include "hmt/solver.hpp"

using namespace hmt;

namespace {
constexpr double pi = std::numbers::pi;

// Best functional value over a (1 - r^2)^q (1 + s r^2) on the unit sphere,
// q in 0.5..2.875 step 0.125, s in -0.5..1.75 step 0.25 (200 members).
double family_oracle(const GridPtr& g, const ProblemParams& p) {
    double best = 0.0;
    for (int iq = 0; iq < 20; ++iq) {
        for (int is = 0; is < 10; ++is) {
            const double q = 0.5 + 0.125 * iq;
            const double s = -0.5 + 0.25 * is;
            const RadialFunction shape =
                RadialFunction::sample(g, [&](double r) { return std::pow(1 - r * r, q) * (1 + s * r * r); });
            const double t = 1.0 / std::sqrt(halpha_norm_sq(shape, p.alpha()));
            std::vector<double> v(shape.values().begin(), shape.values().end());
            for (double& x : v) x *= t;
            try {
                best = std::max(best, mt_functional(RadialFunction(g, std::move(v)), p));
            } catch (const ExponentOverflow&) {
            }
        }
    }
    return best;
}

void check_invariants(const MaximizerResult& m, const ProblemParams& p) {
    CHECK(m.converged);
    CHECK(std::abs(halpha_norm_sq(m.u_eps, p.alpha()) - 1.0) <= 1e-8);
    CHECK(m.residual < 1e-6);
    CHECK(el_residual(m.u_eps, m.lambda_eps, p) == doctest::Approx(m.residual).epsilon(1e-12));
    CHECK(m.f_value >= pi / (1 - p.beta()));
    CHECK(m.c_eps == value_at(m.u_eps, 0.0));
    const auto& u = m.u_eps.values();
    CHECK(m.c_eps >= *std::max_element(u.begin(), u.end()) - 1e-12);
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(u[i] >= 0.0);
        if (i + 1 < u.size()) CHECK(u[i + 1] <= u[i] + 1e-10);
    }
    CHECK(lambda_eps(m.u_eps, p) == doctest::Approx(m.lambda_eps).epsilon(1e-12));
    CHECK(mt_functional(m.u_eps, p) == doctest::Approx(m.f_value).epsilon(1e-12));
}
}  // namespace

TEST_SUITE("solver") {
    TEST_CASE("configuration validation") {
        SolverConfig cfg;
        cfg.tolerance = 0.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = SolverConfig{};
        cfg.max_iterations = 0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        CHECK_THROWS_AS(maximize_subcritical(ProblemParams(0.5, 0.0, 0.0), SolverConfig{}), std::invalid_argument);
        CHECK_THROWS_AS(maximize_subcritical(ProblemParams(0.0, 1.9, 0.3), SolverConfig{}), std::invalid_argument);
    }

    TEST_CASE("maximizer at beta 0.5, eps 0.4") {
        const ProblemParams p(0.5, 0.0, 0.4);
        const MaximizerResult m = maximize_subcritical(p, SolverConfig{});
        check_invariants(m, p);
        CHECK(m.f_value > 2 * pi);
        CHECK(m.f_value >= family_oracle(m.u_eps.grid_ptr(), p) - 1e-6);
    }

    TEST_CASE("maximizer with a spectral shift") {
        const GridPtr g = build_grid(512);
        const double lambda1 = first_eigenvalue(g, EigenMode::hardy);
        const ProblemParams p(0.25, 0.5 * lambda1, 0.3);
        const MaximizerResult m = maximize_subcritical(p, SolverConfig{});
        check_invariants(m, p);
        CHECK(m.f_value >= family_oracle(g, p) - 1e-6);
    }

    TEST_CASE("multiplier normalization") {
        // Testing the equation against u itself: ||u||^2 = (1/lambda) int |x|^(-2 beta) u^2 e^(k u^2).
        const ProblemParams p(0.5, 0.0, 0.2);
        const MaximizerResult m = maximize_subcritical(p, SolverConfig{});
        const double mu = halpha_norm_sq(m.u_eps, p.alpha()) / lambda_eps(m.u_eps, p);
        CHECK(mu * m.lambda_eps == doctest::Approx(1.0).epsilon(1e-8));
    }

    TEST_CASE("residual decreases along the polishing iterations") {
        const MaximizerResult m = maximize_subcritical(ProblemParams(0.5, 0.0, 0.2), SolverConfig{});
        REQUIRE(m.residual_trace.size() >= 2);
        for (std::size_t i = 0; i + 1 < m.residual_trace.size(); ++i)
            CHECK(m.residual_trace[i + 1] < m.residual_trace[i]);
    }

    TEST_CASE("grid stability under doubling") {
        const ProblemParams p(0.5, 0.0, 0.2);
        SolverConfig fine;
        fine.n = 1024;
        const double f1 = maximize_subcritical(p, SolverConfig{}).f_value;
        const double f2 = maximize_subcritical(p, fine).f_value;
        CHECK(std::abs(f1 - f2) / f2 <= 1e-4);
    }

    TEST_CASE("bitwise reproducible") {
        const ProblemParams p(0.0, 0.0, 0.5);
        const MaximizerResult a = maximize_subcritical(p, SolverConfig{});
        const MaximizerResult b = maximize_subcritical(p, SolverConfig{});
        CHECK(a.f_value == b.f_value);
        CHECK(a.iterations == b.iterations);
        CHECK(std::equal(a.u_eps.values().begin(), a.u_eps.values().end(), b.u_eps.values().begin()));
    }

    TEST_CASE("eps sweep") {
        const std::vector<double> eps{0.4, 0.3, 0.2};
        const auto points = sweep_epsilon(0.5, 0.0, eps, SolverConfig{});
        REQUIRE(points.size() == 3);
        for (std::size_t i = 0; i < points.size(); ++i) {
            REQUIRE(points[i].result);
            check_invariants(*points[i].result, ProblemParams(0.5, 0.0, eps[i]));
            if (i > 0) CHECK(points[i].result->f_value >= points[i - 1].result->f_value - 1e-8);
        }
        MESSAGE("c_eps along the sweep: " << points[0].result->c_eps << ", " << points[1].result->c_eps << ", "
                                          << points[2].result->c_eps);

        const std::vector<double> single{0.3};
        const auto one = sweep_epsilon(0.5, 0.0, single, SolverConfig{});
        const MaximizerResult direct = maximize_subcritical(ProblemParams(0.5, 0.0, 0.3), SolverConfig{});
        REQUIRE(one[0].result);
        CHECK(one[0].result->f_value == direct.f_value);

        const std::vector<double> unsorted{0.2, 0.3};
        CHECK_THROWS_AS(sweep_epsilon(0.5, 0.0, unsorted, SolverConfig{}), std::invalid_argument);
    }

    TEST_CASE("monotone projection") {
        const std::vector<double> w(3, 1.0);
        const std::vector<double> y{1.0, 3.0, 2.0};
        const auto z = project_nonincreasing(y, w);
        for (double v : z) CHECK(v == doctest::Approx(2.0));

        const std::vector<double> w2{1.0, 3.0};
        const std::vector<double> y2{0.0, 4.0};
        const auto z2 = project_nonincreasing(y2, w2);
        CHECK(z2[0] == doctest::Approx(3.0));
        CHECK(z2[1] == doctest::Approx(3.0));

        const std::vector<double> w3(4, 1.0);
        const std::vector<double> y3{3.0, 1.0, -1.0, -2.0};
        const auto z3 = project_nonincreasing(y3, w3);
        CHECK(z3[0] == 3.0);
        CHECK(z3[1] == 1.0);
        CHECK(z3[2] == 0.0);
        CHECK(z3[3] == 0.0);
        CHECK(project_nonincreasing(z3, w3) == z3);
    }
}
