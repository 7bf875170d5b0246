#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmt/functional.hpp"
#include "hmt/grid.hpp"

namespace hmt {

struct SolverConfig {
    std::size_t n = 512;
    Grading grading{};
    int max_iterations = 5000;      ///< cap on fixed-point polishing iterations
    double tolerance = 1e-10;       ///< on el_residual
    int ascent_steps = 25;          ///< projected-gradient steps before polishing
    int max_backtracks = 30;
    bool monotone_projection = true;
    double initial_power = 1.0;     ///< start from (1 - r^2)^q on the unit sphere

    void validate() const;
};

struct MaximizerResult {
    RadialFunction u_eps;
    double c_eps = 0.0;
    double lambda_eps = 0.0;
    double f_value = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_trace;  ///< el_residual at each polishing iterate
};

/// Maximizes mt_functional over radial non-increasing u with ||u||_{H,alpha} = 1.
///
/// Projected ascent on the constraint sphere (Riesz gradient, isotonic
/// projection, backtracking), then the fixed-point map of the Euler-Lagrange
/// equation v <- A^-1 b(v), renormalized.  The map increases the functional
/// monotonically because it is convex on the sphere.
///
/// Throws std::invalid_argument for eps = 0 or alpha >= 0.98 lambda1, and
/// ExponentOverflow when the grid cannot hold the iterate.  Hitting the
/// iteration cap returns the last iterate with converged = false.
MaximizerResult maximize_subcritical(const ProblemParams& p, const SolverConfig& cfg,
                                     const RadialFunction* warm_start = nullptr);

struct SweepPoint {
    double eps = 0.0;
    std::optional<MaximizerResult> result;
    std::string error;  ///< set when the solve threw
};

/// One solve per eps, each warm-started from the last successful maximizer.
/// eps_list must be strictly decreasing inside (0, 1 - beta).
std::vector<SweepPoint> sweep_epsilon(double beta, double alpha, std::span<const double> eps_list,
                                      const SolverConfig& cfg);

/// Weighted isotonic regression onto non-increasing, non-negative sequences.
std::vector<double> project_nonincreasing(std::span<const double> y, std::span<const double> weight);

}  // namespace hmt
