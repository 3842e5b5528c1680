#include <doctest.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "parrondo/cli.hpp"

using namespace parrondo;
using namespace parrondo::cli;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const RunSpec& spec) {
    std::ostringstream out, err;
    const int code = run_spec(spec, out, err);
    return {code, out.str(), err.str()};
}

RunSpec exact_spec() {
    RunSpec spec;
    spec.subcommand = "exact";
    spec.n = 4;
    spec.params = parse_params("1,0.6,0.6,0");
    spec.pattern = parse_pattern("1,1");
    return spec;
}

struct Exec {
    int code;
    std::string out;
};

Exec exec_cli(const std::string& args) {
    const std::string cmd = std::string(PARRONDO_CLI_BINARY) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("flag parsing helpers") {
    const Params p = parse_params("1,0.6,0.6,0");
    CHECK(p == Params{1.0, 0.6, 0.6, 0.0});
    CHECK_THROWS_AS(parse_params("1,0.6,0.6"), std::invalid_argument);
    CHECK_THROWS_AS(parse_params("1,0.6,0.6,x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_params("1,0.6,0.6,1.5"), std::invalid_argument);

    const Pattern pat = parse_pattern("2,3");
    CHECK(pat.r == 2);
    CHECK(pat.s == 3);
    CHECK_THROWS_AS(parse_pattern("0,3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern("2"), std::invalid_argument);

    CHECK(parse_range("6:14:2") == std::vector<int>{6, 8, 10, 12, 14});
    CHECK(parse_range("5") == std::vector<int>{5});
    CHECK(parse_range("3:4:2") == std::vector<int>{3});
    CHECK_THROWS_AS(parse_range("6:4:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_range("6:14:0"), std::invalid_argument);

    CHECK(parse_formula("mu3") == MuFormula::Mu3);
    CHECK_THROWS_AS(parse_formula("mu5"), std::invalid_argument);
}

TEST_CASE("exact emits the parrondo-effect pair") {
    const Run res = run(exact_spec());
    REQUIRE(res.code == kExitOk);
    const json doc = json::parse(res.out);
    CHECK(doc.at("command") == "exact");
    CHECK(doc.at("mu").get<double>() > 0.0);
    CHECK(std::abs(doc.at("mu_b").get<double>()) <= 1e-10);
    CHECK(doc.at("mode").at("type") == "pattern");
    CHECK(doc.at("per_formula").contains("mu4"));
    CHECK(doc.at("transient").at("case") == "f");
    CHECK(doc.at("transient").at("size") == 2);
    CHECK(doc.at("solver").contains("residual"));
}

TEST_CASE("exact validates its inputs") {
    RunSpec spec = exact_spec();
    spec.n = 20;
    CHECK(run(spec).code == kExitUsageError);

    spec = exact_spec();
    spec.gamma = 0.5;  // two modes at once
    CHECK(run(spec).code == kExitUsageError);

    spec = exact_spec();
    spec.pattern.reset();
    CHECK(run(spec).code == kExitUsageError);

    spec = exact_spec();
    spec.format = "csv";
    CHECK(run(spec).code == kExitUsageError);
}

TEST_CASE("exact reports solver failures as structured errors") {
    RunSpec spec;
    spec.subcommand = "exact";
    spec.n = 5;
    spec.params = parse_params("0,0,0,1");
    spec.pure_b = true;
    const Run res = run(spec);
    CHECK(res.code == kExitComputeError);
    const json doc = json::parse(res.out);
    CHECK(doc.at("error").at("type") == "non_uniqueness");
    CHECK(doc.at("error").contains("message"));
}

TEST_CASE("classify reports the transient set and the oracle agreement") {
    RunSpec spec;
    spec.subcommand = "classify";
    spec.n = 6;
    spec.params = parse_params("0,1,1,0");
    spec.verify = true;
    const Run res = run(spec);
    REQUIRE(res.code == kExitOk);
    const json doc = json::parse(res.out);
    CHECK(doc.at("transient").at("case") == "d");
    CHECK(doc.at("transient").at("exception") == true);
    CHECK(doc.at("transient").at("size") == 4);
    CHECK(doc.at("transient").at("states").size() == 4);
    // states sorted by mask; mask 9 has players 1 and 4 winning
    CHECK(doc.at("transient").at("states")[0] == 9);
    CHECK(doc.at("transient").at("states_binary")[0] == "100100");
    CHECK(doc.at("oracle").at("agrees") == true);
    CHECK(doc.at("spin_ergodicity").contains("pbar"));
}

TEST_CASE("classify case-a example with spin predicates") {
    RunSpec spec;
    spec.subcommand = "classify";
    spec.n = 5;
    spec.params = parse_params("0.3,0.4,0.5,0.6");
    const Run res = run(spec);
    REQUIRE(res.code == kExitOk);
    const json doc = json::parse(res.out);
    CHECK(doc.at("transient").at("case") == "a");
    CHECK(doc.at("transient").at("size") == 0);
    // |0.3-0.4| vs |0.5-0.6| -> 0.1; |0.3-0.5| vs |0.4-0.6| -> 0.2; sum < 1
    CHECK(doc.at("spin_ergodicity").at("condition_a") == true);
}

TEST_CASE("simulate is byte-identical for identical specs") {
    RunSpec spec;
    spec.subcommand = "simulate";
    spec.n = 3;
    spec.params = parse_params("1,0.6,0.6,0");
    spec.pattern = parse_pattern("1,1");
    spec.turns = 50'000;
    spec.seed = 42;
    spec.replicas = 4;
    spec.checkpoints = 8;
    const Run a = run(spec);
    const Run b = run(spec);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    const json doc = json::parse(a.out);
    CHECK(doc.at("mean").is_number());
    CHECK(doc.at("std_error").get<double>() > 0.0);
    CHECK(doc.at("replica_means").size() == 4);
    CHECK(doc.at("running_means").size() >= 8);
    CHECK(doc.at("burn_in") == 10'000);
}

TEST_CASE("spin emits a normalized marginal") {
    RunSpec spec;
    spec.subcommand = "spin";
    spec.params = parse_params("0.1,0.6,0.6,0.75");
    spec.gamma = 0.5;
    spec.ring = 64;
    spec.sweeps = 300;
    spec.burn_in_sweeps = 50;
    spec.seed = 1;
    spec.replicas = 4;
    const Run res = run(spec);
    REQUIRE(res.code == kExitOk);
    const json doc = json::parse(res.out);
    const auto& marg = doc.at("marginal_13");
    const double sum = marg.at("00").get<double>() + marg.at("01").get<double>() +
                       marg.at("10").get<double>() + marg.at("11").get<double>();
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(doc.at("gamma") == 0.5);
    CHECK(doc.at("run_params").at("p0") == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("convergence emits the pinned CSV schema") {
    RunSpec spec;
    spec.subcommand = "convergence";
    spec.params = parse_params("0.5,0.5,0.5,0.5");
    spec.pattern = parse_pattern("2,3");
    spec.n_values = parse_range("4:8:2");
    const Run res = run(spec);
    REQUIRE(res.code == kExitOk);
    std::istringstream lines(res.out);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "N,mu_pattern,mu_mixed,gap");
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.substr(0, 1) != ",");
        ++rows;
        CHECK(line.find(",0,") != std::string::npos);  // all-zero columns
    }
    CHECK(rows == 3);
}

TEST_CASE("convergence appends the ring footer on request") {
    RunSpec spec;
    spec.subcommand = "convergence";
    spec.params = parse_params("0.1,0.6,0.6,0.75");
    spec.pattern = parse_pattern("1,1");
    spec.n_values = {4};
    spec.with_ring = true;
    spec.ring = 64;
    spec.sweeps = 200;
    spec.burn_in_sweeps = 20;
    spec.seed = 7;
    spec.replicas = 4;
    const Run res = run(spec);
    REQUIRE(res.code == kExitOk);
    CHECK(res.out.find("\nring_estimate,") != std::string::npos);
    CHECK(res.out.find(",ring_se,") != std::string::npos);
}

TEST_CASE("documents round-trip through the JSON parser") {
    const Run res = run(exact_spec());
    const json doc = json::parse(res.out);
    const json again = json::parse(doc.dump());
    CHECK(doc == again);
    // float fields keep full precision
    CHECK(doc.at("mu").get<double>() == again.at("mu").get<double>());
}

TEST_CASE("the built binary honors the exit-code contract") {
    const Exec ok = exec_cli("exact --n 4 --p 1,0.6,0.6,0 --pattern 1,1 --format json");
    CHECK(ok.code == 0);
    const json doc = json::parse(ok.out);
    CHECK(doc.at("mu").get<double>() > 0.0);

    const Exec usage = exec_cli("exact --n 20 --p 1,0.6,0.6,0 --pattern 1,1");
    CHECK(usage.code == 2);

    const Exec missing = exec_cli("exact --n 4");
    CHECK(missing.code == 2);

    const Exec solver = exec_cli("exact --n 5 --p 0,0,0,1 --pure-b");
    CHECK(solver.code == 1);

    const Exec simple = exec_cli("exact --n 3 --p 0.5,0.5,0.5,0.5 --pure-b");
    CHECK(simple.code == 0);
    CHECK(std::abs(json::parse(simple.out).at("mu").get<double>()) <= 1e-13);

    const Exec sim1 = exec_cli("simulate --n 3 --p 1,0.6,0.6,0 --pattern 1,1 "
                               "--turns 40000 --seed 42 --replicas 2");
    const Exec sim2 = exec_cli("simulate --n 3 --p 1,0.6,0.6,0 --pattern 1,1 "
                               "--turns 40000 --seed 42 --replicas 2");
    CHECK(sim1.code == 0);
    CHECK(sim1.out == sim2.out);
}
