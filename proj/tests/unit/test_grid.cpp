#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hmt/grid.hpp"

using namespace hmt;

namespace {
constexpr double pi = std::numbers::pi;

// sin^4 bump supported on (a, b).
double bump(double r, double a, double b) {
    if (r <= a || r >= b) return 0.0;
    const double s = std::sin(pi * (r - a) / (b - a));
    return s * s * s * s;
}
}  // namespace

TEST_SUITE("grid") {
    TEST_CASE("weights sum to the disc area") {
        const GridPtr g = build_grid(64);
        double sum = 0.0;
        for (double w : g->weights()) {
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(std::abs(sum - pi) <= 1e-10 * pi);
    }

    TEST_CASE("nodes are strictly increasing inside (0, 1)") {
        const GridPtr g = build_grid(256);
        CHECK(g->node(0) > 0.0);
        CHECK(g->node(g->size() - 1) < 1.0);
        for (std::size_t i = 0; i + 1 < g->size(); ++i) {
            CHECK(g->node(i) < g->node(i + 1));
            CHECK(g->gap(i) > g->gap(i + 1));
        }
    }

    TEST_CASE("closed-form integrals") {
        CHECK(integrate(*build_grid(64), [](double) { return 1.0; }) == doctest::Approx(pi).epsilon(1e-12));
        // 2 pi int_0^1 r^3 dr
        CHECK(integrate(*build_grid(128), [](double r) { return r * r; }) == doctest::Approx(pi / 2).epsilon(1e-12));
        // |x|^-1 integrates to pi / (1 - 1/2)
        CHECK(std::abs(integrate(*build_grid(512), [](double r) { return 1.0 / r; }) - 2.0 * pi) <= 1e-6);
    }

    TEST_CASE("boundary weight truncated at 0.9") {
        // 2 pi int_0^0.9 r (1 - r^2)^-2 dr = pi (1 / 0.19 - 1)
        const double exact = pi * (1.0 / 0.19 - 1.0);
        const double got = integrate_disc(*build_grid(512), [](double r) { return 1.0 / ((1 - r * r) * (1 - r * r)); }, 0.9);
        CHECK(got == doctest::Approx(exact).epsilon(1e-10));
        CHECK(exact == doctest::Approx(13.3931).epsilon(1e-4));
    }

    TEST_CASE("origin weight error does not grow under refinement") {
        for (double beta : {0.0, 0.25, 0.5, 0.75, 0.9}) {
            CAPTURE(beta);
            double prev = INFINITY;
            for (std::size_t n : {32, 64, 128, 256, 512, 1024}) {
                const double err =
                    std::abs(integrate(*build_grid(n), [&](double r) { return std::pow(r, -2 * beta); }) - pi / (1 - beta));
                CHECK((err <= prev || err <= 1e-14));
                prev = err;
            }
        }
    }

    TEST_CASE("quadrature converges against a refined-grid oracle") {
        for (double beta : {0.0, 0.25, 0.5, 0.75}) {
            CAPTURE(beta);
            auto f = [&](double r) { return std::pow(r, -2 * beta) / (1 + r); };
            const double reference = integrate(*build_grid(16384), f);
            double prev = INFINITY;
            for (std::size_t n : {32, 64, 128, 256}) {
                const double err = std::abs(integrate(*build_grid(n), f) - reference);
                CHECK((err < prev || err <= 1e-13));
                prev = err;
            }
        }
    }

    TEST_CASE("differentiation is exact on low-degree polynomials") {
        const GridPtr g = build_grid(256);
        const RadialFunction sq = RadialFunction::sample(g, [](double r) { return r * r; });
        CHECK(value_at(differentiate(sq), 0.5) == doctest::Approx(1.0).epsilon(1e-10));

        const RadialFunction c = RadialFunction::sample(g, [](double) { return 3.0; });
        const RadialFunction dc = differentiate(c);
        for (double d : dc.values()) CHECK(std::abs(d) <= 1e-9);

        const RadialFunction q = RadialFunction::sample(g, [](double r) { return 1 - r * r; });
        const RadialFunction dq = differentiate(q);
        for (std::size_t i = 0; i < g->size(); ++i) {
            if (g->node(i) > 0.99) break;  // stencils close to r = 1 lose digits to conditioning
            CHECK(dq[i] == doctest::Approx(-2 * g->node(i)).epsilon(1e-8));
        }
    }

    TEST_CASE("value_at interpolates and extrapolates") {
        const GridPtr g = build_grid(64);
        const RadialFunction sq = RadialFunction::sample(g, [](double r) { return r * r; });
        CHECK(value_at(sq, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(std::abs(value_at(sq, 0.0)) <= 1e-12);
        const RadialFunction q = RadialFunction::sample(g, [](double r) { return 1 - r * r; });
        CHECK(value_at(q, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK_THROWS_AS(value_at(q, 1.0), std::domain_error);
        CHECK_THROWS_AS(value_at(q, -0.1), std::domain_error);
    }

    TEST_CASE("discrete integration by parts") {
        double prev = INFINITY;
        for (std::size_t n : {256, 512, 1024}) {
            const GridPtr g = build_grid(n);
            const RadialFunction u = RadialFunction::sample(g, [](double r) { return bump(r, 0.2, 0.8); });
            const RadialFunction v = RadialFunction::sample(g, [](double r) { return bump(r, 0.1, 0.7) * (1 + r); });
            const RadialFunction du = differentiate(u);
            const RadialFunction dv = differentiate(v);
            const RadialFunction ddu = differentiate(du);
            double lhs = 0.0;
            double rhs = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                lhs += g->weight(i) * du[i] * dv[i];
                rhs += g->weight(i) * (ddu[i] + du[i] / g->node(i)) * v[i];
            }
            const double defect = std::abs(lhs + rhs);
            CAPTURE(n);
            CHECK(defect < prev);
            if (n >= 512) CHECK(defect <= 1e-4);
            prev = defect;
        }
    }

    TEST_CASE("construction is deterministic") {
        const GridPtr a = build_grid(300);
        const GridPtr b = build_grid(300);
        for (std::size_t i = 0; i < a->size(); ++i) {
            CHECK(a->node(i) == b->node(i));
            CHECK(a->weight(i) == b->weight(i));
        }
        auto f = [](double r) { return std::exp(-r) / std::sqrt(r); };
        CHECK(integrate(*a, f) == integrate(*b, f));
    }

    TEST_CASE("invalid input is rejected") {
        CHECK_THROWS_AS(build_grid(15), std::invalid_argument);
        CHECK_THROWS_AS(build_grid(64, Grading{0, 4}), std::invalid_argument);
        CHECK_THROWS_AS(build_grid(64, Grading{8, 17}), std::invalid_argument);
        const GridPtr g = build_grid(16);
        CHECK_THROWS(RadialFunction(g, std::vector<double>(15, 0.0)));
        std::vector<double> bad(16, 0.0);
        bad[3] = NAN;
        CHECK_THROWS(RadialFunction(g, bad));
    }
}
