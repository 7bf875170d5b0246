#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "hmt/record.hpp"
#include "hmt/sweep.hpp"

using namespace hmt;
using nlohmann::json;

namespace {
SweepConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_sweep_config(in);
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}
}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("config parsing") {
        const SweepConfig cfg = parse(
            "# comment\n"
            "beta = 0.5, 0.25\n"
            "eps = 0.4,0.3  # trailing\n"
            "n = 256\n"
            "tolerance = 1e-9\n"
            "monotone_projection = false\n");
        CHECK(cfg.beta == std::vector<double>{0.5, 0.25});
        CHECK(cfg.alpha == std::vector<double>{0.0});
        CHECK(cfg.eps == std::vector<double>{0.4, 0.3});
        CHECK(cfg.n == std::vector<std::size_t>{256});
        CHECK(cfg.solver.tolerance == 1e-9);
        CHECK_FALSE(cfg.solver.monotone_projection);

        CHECK_THROWS_AS(parse("bogus = 1\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse("beta = 0.5\nbeta = 0.2\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse("eps = 0.4, 0.4\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse("eps = 0.4x\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse("just text\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse("tolerance = 0\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse("monotone_projection = maybe\n"), std::invalid_argument);
    }

    TEST_CASE("empty eps list gives a header-only CSV") {
        const SweepConfig cfg = parse("beta = 0.5\neps =\n");
        const std::string csv = format_csv(run_sweep(cfg, 1));
        CHECK(csv == std::string(sweep_csv_header) + "\n");
        CHECK(std::string(sweep_csv_header) == "beta,alpha,eps,n,F,c_eps,lambda_eps,r_eps_log,residual,iters,converged");
    }

    TEST_CASE("three-point sweep") {
        const SweepConfig cfg = parse("beta = 0.5\nalpha = 0\neps = 0.4, 0.3, 0.2\n");
        const auto rows = run_sweep(cfg, 2);
        REQUIRE(rows.size() == 3);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            REQUIRE(rows[i].result);
            CHECK(rows[i].result->converged);
            if (i > 0) CHECK(rows[i].result->f_value >= rows[i - 1].result->f_value - 1e-8);
        }
        const std::string first = format_csv(rows);
        CHECK(lines(first).size() == 4);
        CHECK(format_csv(run_sweep(cfg, 1)) == first);
    }

    TEST_CASE("row order and failures are independent of the worker count") {
        const SweepConfig cfg = parse("beta = 0.5, 0.25\neps = 0.3, 0.6, 0.2\nn = 128, 256\n");
        const std::string one = format_csv(run_sweep(cfg, 1));
        const std::string many = format_csv(run_sweep(cfg, 4));
        CHECK(one == many);
        const auto l = lines(one);
        REQUIRE(l.size() == 1 + 2 * 2 * 3);
        CHECK(l[1].rfind("0.5,0,0.3,128,", 0) == 0);
        CHECK(l[2].rfind("0.5,0,0.6,128,,,,,,,error", 0) == 0);
        CHECK(l[3].rfind("0.5,0,0.2,128,", 0) == 0);
        CHECK(l[4].rfind("0.5,0,0.3,256,", 0) == 0);
        CHECK(l[7].rfind("0.25,0,0.3,128,", 0) == 0);
        // eps = 0.6 is admissible for beta = 0.25.
        CHECK(l[8].find("error") == std::string::npos);
    }

    TEST_CASE("run records validate against the embedded schema") {
        const json& schema = run_record_schema();
        CHECK(schema["$id"] == record_schema_id);

        RunRecord rec;
        rec.command = "solve";
        rec.parameters = {{"beta", 0.5}, {"alpha", 0.0}, {"eps", 0.2}, {"n", 512}};
        rec.outputs = {{"F", 20.5}, {"bad", NAN}};
        const json j = rec.to_json();
        CHECK(validate_json(j, schema).empty());
        CHECK(j["outputs"]["bad"].is_null());
        CHECK(j["timestamps"].is_null());

        RunRecord unknown = rec;
        unknown.parameters["colour"] = "blue";
        CHECK_FALSE(validate_json(unknown.to_json(), schema).empty());

        RunRecord bad_command = rec;
        bad_command.command = "launch";
        CHECK_FALSE(validate_json(bad_command.to_json(), schema).empty());

        RunRecord small_n = rec;
        small_n.parameters["n"] = 8;
        CHECK_FALSE(validate_json(small_n.to_json(), schema).empty());

        json missing = j;
        missing.erase("artifact_version");
        CHECK_FALSE(validate_json(missing, schema).empty());
    }

    TEST_CASE("serialization is stable") {
        RunRecord rec;
        rec.command = "eigen";
        rec.parameters = {{"n", 64}, {"mode", "hardy"}};
        rec.outputs = {{"lambda1", 1.9232110}};
        const std::string a = dump_record(rec.to_json());
        CHECK(a == dump_record(rec.to_json()));
        CHECK(a.back() == '\n');
        CHECK(json::parse(a)["outputs"]["lambda1"].get<double>() == 1.9232110);
    }

    TEST_CASE("timestamps honour SOURCE_DATE_EPOCH") {
        ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
        CHECK(utc_now() == "1970-01-02T00:00:00Z");
        ::unsetenv("SOURCE_DATE_EPOCH");
        CHECK(utc_now().size() == 20);
    }

    TEST_CASE("worker limit reads HMT_THREADS") {
        ::setenv("HMT_THREADS", "3", 1);
        CHECK(worker_limit() == 3);
        ::setenv("HMT_THREADS", "junk", 1);
        CHECK(worker_limit() >= 1);
        ::unsetenv("HMT_THREADS");
    }
}
