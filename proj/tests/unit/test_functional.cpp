#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hmt/error.hpp"
#include "hmt/functional.hpp"

using namespace hmt;

namespace {
constexpr double pi = std::numbers::pi;

// Composite Simpson rule on [a, b] with m (even) panels.
template <class F>
double simpson(F f, double a, double b, int m) {
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}
}  // namespace

TEST_SUITE("functional") {
    TEST_CASE("parameter validation") {
        CHECK_THROWS_AS(ProblemParams(1.0, 0.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(ProblemParams(-0.1, 0.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(ProblemParams(0.5, -1.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(ProblemParams(0.5, 0.0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(ProblemParams(0.5, NAN, 0.1), std::invalid_argument);
        const ProblemParams p(0.25, 1.0, 0.25);
        CHECK(p.exponent() == 4.0 * pi * (1.0 - 0.25 - 0.25));
        CHECK_THROWS_AS(p.check_alpha(0.5), std::invalid_argument);
        CHECK_NOTHROW(p.check_alpha(2.0));
    }

    TEST_CASE("zero profile gives the weight integral") {
        const GridPtr g = build_grid(1024);
        const RadialFunction zero = RadialFunction::sample(g, [](double) { return 0.0; });
        for (double beta : {0.0, 0.25, 0.5, 0.75}) {
            CAPTURE(beta);
            const double f = mt_functional(zero, ProblemParams(beta, 0.0, 0.1));
            CHECK(f == doctest::Approx(pi / (1 - beta)).epsilon(1e-9));
        }
        CHECK(mt_functional(zero, ProblemParams(0.5, 0.0, 0.1)) == doctest::Approx(2 * pi).epsilon(1e-12));
    }

    TEST_CASE("1 - r^2 at beta 0, eps 0.5") {
        // 2 pi int r exp(2 pi (1 - r^2)^2) dr = pi int_0^1 exp(2 pi t^2) dt
        const double exact = pi * simpson([](double t) { return std::exp(2 * pi * t * t); }, 0.0, 1.0, 200000);
        const ProblemParams p(0.0, 0.0, 0.5);
        auto value = [&](std::size_t n) {
            return mt_functional(RadialFunction::sample(build_grid(n), [](double r) { return 1 - r * r; }), p);
        };
        const double f512 = value(512);
        const double f1024 = value(1024);
        CHECK(std::abs(f512 - f1024) / f1024 <= 1e-6);
        CHECK(f1024 == doctest::Approx(exact).epsilon(1e-9));
    }

    TEST_CASE("lower bound and eps-monotonicity") {
        const GridPtr g = build_grid(512);
        for (double a : {0.3, 0.8, 1.2}) {
            const RadialFunction u = RadialFunction::sample(g, [&](double r) { return a * (1 - r * r) * std::exp(-r); });
            for (double beta : {0.0, 0.5}) {
                double prev = INFINITY;
                for (double eps : {0.05, 0.15, 0.3, 0.45}) {
                    const double f = mt_functional(u, ProblemParams(beta, 0.0, eps));
                    CHECK(f >= pi / (1 - beta) - 1e-8);
                    CHECK(f <= prev);
                    prev = f;
                }
            }
        }
    }

    TEST_CASE("multiplier integral") {
        const GridPtr g = build_grid(512);
        const ProblemParams p(0.0, 0.0, 0.3);
        CHECK(lambda_eps(RadialFunction::sample(g, [](double) { return 0.0; }), p) == 0.0);
        const double c = 0.7;
        const double lam = lambda_eps(RadialFunction::sample(g, [&](double) { return c; }), p);
        CHECK(lam == doctest::Approx(pi * c * c * std::exp(p.exponent() * c * c)).epsilon(1e-12));
        const RadialFunction u = RadialFunction::sample(g, [](double r) { return 1 - r * r; });
        const RadialFunction u2 = RadialFunction::sample(g, [](double r) { return 2 * (1 - r * r); });
        CHECK(lambda_eps(u2, ProblemParams(0.5, 0.0, 0.2)) > lambda_eps(u, ProblemParams(0.5, 0.0, 0.2)));
    }

    TEST_CASE("Euler-Lagrange residual") {
        const GridPtr g = build_grid(512);
        const ProblemParams p(0.5, 0.0, 0.2);
        CHECK(el_residual(RadialFunction::sample(g, [](double) { return 0.0; }), 1.0, p) == 0.0);
        const RadialFunction u = RadialFunction::sample(g, [](double r) { return 1 - r * r; });
        CHECK(el_residual(u, lambda_eps(u, p), p) > 0.0);
        CHECK_THROWS_AS(el_residual(u, 0.0, p), std::invalid_argument);
        CHECK_THROWS_AS(el_residual(u, -1.0, p), std::invalid_argument);
    }

    TEST_CASE("exponent overflow is reported with its radius") {
        const GridPtr g = build_grid(128);
        const RadialFunction big = RadialFunction::sample(g, [](double r) { return 20.0 * (1 - r * r); });
        try {
            (void)mt_functional(big, ProblemParams(0.0, 0.0, 0.1));
            FAIL("expected overflow");
        } catch (const ExponentOverflow& e) {
            CHECK(e.radius() > 0.0);
            CHECK(e.radius() < 1.0);
        }
    }
}
