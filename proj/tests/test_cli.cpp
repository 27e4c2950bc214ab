#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "heightlab/cli.hpp"
#include "heightlab/parse.hpp"
#include "heightlab/sweep.hpp"

using namespace heightlab;
using nlohmann::json;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("height command emits the pinned JSON document") {
    CliRun r = run({"height", "--d", "2", "--lambda", "-2", "--point", "1"});
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["d"] == 2);
    CHECK(doc["lambda"] == "-2");
    CHECK(doc["point"] == "1");
    CHECK(std::fabs(doc["hhat"]["value"].get<double>()) <= 1e-6);
    CHECK(doc["hhat"]["error"].get<double>() <= 1e-6);
    REQUIRE(doc["places"].is_array());
    bool saw_arch = false;
    for (const auto& pl : doc["places"]) {
        CHECK(pl.contains("place"));
        CHECK(pl.contains("value"));
        CHECK(pl.contains("error"));
        CHECK(pl.contains("reason"));
        if (pl["place"] == "inf") {
            saw_arch = true;
            CHECK(pl["reason"] == "archimedean");
        }
    }
    CHECK(saw_arch);
}

TEST_CASE("height command edge cases") {
    CliRun inf = run({"height", "--d", "2", "--lambda", "1", "--point", "inf"});
    REQUIRE(inf.code == 0);
    json doc = json::parse(inf.out);
    CHECK(doc["hhat"]["value"] == 0.0);
    CHECK(doc["hhat"]["error"] == 0.0);

    CliRun bad = run({"height", "--d", "2", "--lambda", "0", "--point", "1"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("lambda must be nonzero") != std::string::npos);

    CliRun junk = run({"height", "--d", "2", "--lambda", "x", "--point", "1"});
    CHECK(junk.code == 2);

    CliRun usage = run({"height"});
    CHECK(usage.code == 2);
}

TEST_CASE("generic command") {
    CliRun r = run({"generic", "--d", "2", "--map", "t"});
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["hhat_generic"] == "1/2");
    CHECK(doc["deg_f1"] == 1);
    CHECK(doc["deg_f2"] == 2);
    CHECK(doc["coprime_check"] == true);

    CliRun c5 = run({"generic", "--d", "3", "--map", "5"});
    CHECK(json::parse(c5.out)["hhat_generic"] == "1/3");

    CliRun q = run({"generic", "--d", "2", "--map", "(t^2+1)/1"});
    CHECK(json::parse(q.out)["hhat_generic"] == "2");

    // a shared factor normalizes with a warning, or exits 4 under --strict
    CliRun warn = run({"generic", "--d", "2", "--map", "(t^2+t)/t"});
    CHECK(warn.code == 0);
    CHECK(warn.err.find("warning") != std::string::npos);
    CliRun strict =
        run({"generic", "--d", "2", "--map", "(t^2+t)/t", "--strict"});
    CHECK(strict.code == 4);

    CliRun bad = run({"generic", "--d", "2", "--map", "u+1"});
    CHECK(bad.code == 2);
}

TEST_CASE("sweep command: determinism and schema") {
    std::vector<std::string> args = {"sweep",      "--d",    "2",
                                     "--map",      "1",      "--hmax",
                                     "2.0",        "--samples", "40",
                                     "--seed",     "9",      "--eps",
                                     "1e-4"};
    CliRun a = run(args);
    REQUIRE(a.code == 0);
    CliRun b = run(args);
    CHECK(a.out == b.out); // byte-identical given the seed

    std::istringstream lines(a.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("# heightlab sweep seed=9", 0) == 0);
    std::getline(lines, line);
    CHECK(line == "lambda,h_lambda,hhat,hhat_err,predicted,gap");
    long rows = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 40);
    CHECK(a.err.find("max_gap=") != std::string::npos);
    CHECK(a.err.find("bound=") != std::string::npos); // constant map

    CliRun empty = run({"sweep", "--d", "2", "--map", "t", "--hmax", "1",
                        "--samples", "0"});
    REQUIRE(empty.code == 0);
    std::istringstream el(empty.out);
    std::getline(el, line);
    std::getline(el, line);
    CHECK(line == "lambda,h_lambda,hhat,hhat_err,predicted,gap");
    CHECK_FALSE(std::getline(el, line));
}

TEST_CASE("sweep serial and parallel kernels agree bitwise") {
    SweepConfig cfg;
    cfg.d = 2;
    cfg.map = parse_rational_map("t");
    cfg.hmax = 2.0;
    cfg.samples = 30;
    cfg.eps = 1e-4;
    cfg.seed = 123;
    SweepResult serial = run_sweep_serial(cfg);
    SweepResult parallel = run_sweep(cfg);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].lambda == parallel.rows[i].lambda);
        CHECK(serial.rows[i].hhat == parallel.rows[i].hhat);
        CHECK(serial.rows[i].hhat_err == parallel.rows[i].hhat_err);
        CHECK(serial.rows[i].predicted == parallel.rows[i].predicted);
        CHECK(serial.rows[i].gap == parallel.rows[i].gap);
    }
    CHECK(serial.max_gap == parallel.max_gap);
}

TEST_CASE("search command") {
    CliRun r = run({"search", "--d", "2", "--alpha", "1", "--cap", "1.1"});
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["alpha"] == "1");
    CHECK(doc["bound"].get<double>() == doctest::Approx(12.0));
    CHECK(doc["cap"].get<double>() == doctest::Approx(1.1));
    std::set<std::string> hits;
    for (const auto& h : doc["hits"])
        hits.insert(h["lambda"].get<std::string>());
    CHECK(hits.count("-1") == 1);
    CHECK(hits.count("-2") == 1);

    CliRun zero = run({"search", "--d", "2", "--alpha", "0", "--cap", "1"});
    CHECK(zero.code == 2);
    CHECK(zero.err.find("alpha=0 is preperiodic for every lambda") !=
          std::string::npos);

    CliRun big = run({"search", "--d", "2", "--alpha", "1", "--cap", "11.9"});
    CHECK(big.code == 5);
}

TEST_CASE("selftest command") {
    CliRun all = run({"selftest"});
    CHECK(all.code == 0);
    CHECK(all.out.find("conversion: PASS") != std::string::npos);
    CHECK(all.out.find("tailbound: PASS") != std::string::npos);
    CHECK(all.out.find("goodplace: PASS") != std::string::npos);
    CHECK(all.out.find("coprime: PASS") != std::string::npos);

    CliRun one = run({"selftest", "--suite", "tailbound"});
    CHECK(one.code == 0);
    CHECK(one.out.find("tailbound: PASS") != std::string::npos);
    CHECK(one.out.find("conversion") == std::string::npos);

    CliRun bad = run({"selftest", "--suite", "nope"});
    CHECK(bad.code == 2);
}

TEST_CASE("csv quoting") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("sweep output is byte-identical across thread counts") {
    std::vector<std::string> base = {"sweep", "--d", "2",    "--map",
                                     "t",     "--hmax", "2", "--samples",
                                     "25",    "--seed",  "5"};
    std::vector<std::string> serial = base;
    serial.push_back("--jobs");
    serial.push_back("1");
    std::vector<std::string> parallel = base;
    parallel.push_back("--jobs");
    parallel.push_back("2");
    CliRun a = run(serial);
    CliRun b = run(parallel);
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("bigint cap environment override") {
    setenv("HEIGHTLAB_BIGINT_CAP", "notanumber", 1);
    CliRun bad = run({"height", "--d", "2", "--lambda", "1", "--point", "1"});
    CHECK(bad.code == 2);
    setenv("HEIGHTLAB_BIGINT_CAP", "1048576", 1);
    CliRun ok = run({"height", "--d", "2", "--lambda", "1", "--point", "1"});
    CHECK(ok.code == 0);
    unsetenv("HEIGHTLAB_BIGINT_CAP");
}

TEST_CASE("format pinning") {
    CliRun bad = run({"height", "--d", "2", "--lambda", "1", "--point", "1",
                      "--format", "csv"});
    CHECK(bad.code == 2);
    CliRun ok = run({"height", "--d", "2", "--lambda", "1", "--point", "1",
                     "--format", "json"});
    CHECK(ok.code == 0);
}
