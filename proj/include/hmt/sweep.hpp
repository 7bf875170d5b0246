#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hmt/solver.hpp"

namespace hmt {

/// Parameter grid for a sweep.  Every (beta, alpha, n, eps) tuple is one row.
struct SweepConfig {
    std::vector<double> beta;
    std::vector<double> alpha{0.0};
    std::vector<double> eps;
    std::vector<std::size_t> n{512};
    SolverConfig solver;
};

/// Reads flat `key = value` text.  Lists are comma separated, `#` starts a
/// comment.  Keys: beta, alpha, eps, n (lists); tolerance, max_iterations,
/// origin_power, boundary_power, monotone_projection (scalars).  Throws
/// std::invalid_argument naming the line on unknown keys, bad values,
/// duplicate keys or duplicate list entries.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::string& path);

struct SweepRow {
    double beta = 0.0;
    double alpha = 0.0;
    double eps = 0.0;
    std::size_t n = 0;
    std::optional<MaximizerResult> result;
    double r_eps_log = 0.0;
    std::string error;
};

inline constexpr const char* sweep_csv_header =
    "beta,alpha,eps,n,F,c_eps,lambda_eps,r_eps_log,residual,iters,converged";

/// Runs the sweep on at most `threads` workers (0 means HMT_THREADS, else the
/// hardware concurrency).  Rows come back ordered by beta, alpha, n, then eps
/// in config order.  Within one (beta, alpha, n) group eps is solved from
/// largest to smallest with warm starts, so the numbers do not depend on the
/// worker count.  A failed tuple keeps its row with `error` set.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, unsigned threads = 0);

/// Worker count from HMT_THREADS, falling back to the hardware concurrency.
unsigned worker_limit();

std::string format_csv(const std::vector<SweepRow>& rows);

}  // namespace hmt
