#include "hmt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "hmt/blowup.hpp"

namespace hmt {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& where) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument(where + ": cannot parse '" + text + "'");
    return value;
}

template <class T>
std::vector<T> parse_list(const std::string& value, const std::string& where) {
    std::vector<T> out;
    std::set<T> seen;
    for (const auto& item : split_list(value)) {
        const T v = parse_number<T>(item, where);
        if (!seen.insert(v).second) throw std::invalid_argument(where + ": duplicate entry " + item);
        out.push_back(v);
    }
    return out;
}

bool parse_bool(const std::string& text, const std::string& where) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw std::invalid_argument(where + ": expected true or false, got '" + text + "'");
}

struct Group {
    double beta;
    double alpha;
    std::size_t n;
};

// Solves one (beta, alpha, n) group; rows[k] corresponds to cfg.eps[k].
std::vector<SweepRow> run_group(const Group& grp, const SweepConfig& cfg) {
    std::vector<SweepRow> rows(cfg.eps.size());
    std::vector<double> valid;
    for (std::size_t k = 0; k < cfg.eps.size(); ++k) {
        SweepRow& row = rows[k];
        row.beta = grp.beta;
        row.alpha = grp.alpha;
        row.eps = cfg.eps[k];
        row.n = grp.n;
        try {
            (void)ProblemParams{grp.beta, grp.alpha, row.eps};
            if (!(row.eps > 0.0)) throw std::invalid_argument("eps must be > 0");
            valid.push_back(row.eps);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }
    std::sort(valid.begin(), valid.end(), std::greater<>());

    SolverConfig solver = cfg.solver;
    solver.n = grp.n;
    std::vector<SweepPoint> points;
    std::string group_error;
    try {
        solver.validate();
        points = sweep_epsilon(grp.beta, grp.alpha, valid, solver);
    } catch (const std::exception& e) {
        group_error = e.what();
    }

    for (SweepRow& row : rows) {
        if (!row.error.empty()) continue;
        if (!group_error.empty()) {
            row.error = group_error;
            continue;
        }
        const auto it = std::find_if(points.begin(), points.end(), [&](const SweepPoint& p) { return p.eps == row.eps; });
        if (!it->result) {
            row.error = it->error;
            continue;
        }
        row.result = std::move(it->result);
        row.r_eps_log =
            blowup_scale(row.result->c_eps, row.result->lambda_eps, ProblemParams(row.beta, row.alpha, row.eps))
                .log_value;
    }
    return rows;
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::set<std::string> seen;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = fmt::format("line {}", lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument(where + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!seen.insert(key).second) throw std::invalid_argument(where + ": duplicate key " + key);
        const std::string at = where + " (" + key + ")";

        if (key == "beta") {
            cfg.beta = parse_list<double>(value, at);
        } else if (key == "alpha") {
            cfg.alpha = parse_list<double>(value, at);
        } else if (key == "eps") {
            cfg.eps = parse_list<double>(value, at);
        } else if (key == "n") {
            cfg.n = parse_list<std::size_t>(value, at);
        } else if (key == "tolerance") {
            cfg.solver.tolerance = parse_number<double>(value, at);
        } else if (key == "max_iterations") {
            cfg.solver.max_iterations = parse_number<int>(value, at);
        } else if (key == "origin_power") {
            cfg.solver.grading.origin_power = parse_number<int>(value, at);
        } else if (key == "boundary_power") {
            cfg.solver.grading.boundary_power = parse_number<int>(value, at);
        } else if (key == "monotone_projection") {
            cfg.solver.monotone_projection = parse_bool(value, at);
        } else {
            throw std::invalid_argument(where + ": unknown key " + key);
        }
    }
    cfg.solver.validate();
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    return parse_sweep_config(in);
}

unsigned worker_limit() {
    if (const char* env = std::getenv("HMT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, unsigned threads) {
    std::vector<Group> groups;
    for (double beta : cfg.beta)
        for (double alpha : cfg.alpha)
            for (std::size_t n : cfg.n) groups.push_back({beta, alpha, n});

    std::vector<std::vector<SweepRow>> results(groups.size());
    if (threads == 0) threads = worker_limit();
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(groups.size(), 1)));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t g; (g = next.fetch_add(1)) < groups.size();) results[g] = run_group(groups[g], cfg);
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    std::vector<SweepRow> rows;
    for (auto& group_rows : results)
        for (auto& row : group_rows) rows.push_back(std::move(row));
    return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
    std::string out = std::string(sweep_csv_header) + "\n";
    for (const auto& row : rows) {
        out += fmt::format("{},{},{},{},", row.beta, row.alpha, row.eps, row.n);
        if (row.result) {
            const auto& m = *row.result;
            out += fmt::format("{},{},{},{},{},{},{}\n", m.f_value, m.c_eps, m.lambda_eps, row.r_eps_log, m.residual,
                               m.iterations, m.converged ? "true" : "false");
        } else {
            out += ",,,,,,error\n";
        }
    }
    return out;
}

}  // namespace hmt
