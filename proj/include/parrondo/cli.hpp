#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "parrondo/params.hpp"
#include "parrondo/profit.hpp"

namespace parrondo::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitComputeError = 1;
inline constexpr int kExitUsageError = 2;

// "p0,p1,p2,p3" as comma-separated decimals
Params parse_params(const std::string&);
// "r,s"
Pattern parse_pattern(const std::string&);
// "start:stop:step" inclusive; also accepts a single value "n"
std::vector<int> parse_range(const std::string&);
// "mu1" | "mu2" | "mu3" | "mu4" | "all"
MuFormula parse_formula(const std::string&);

// A fully parsed invocation.  Exactly one of pattern / gamma / pure_b must be
// active for the subcommands that take a game mode.
struct RunSpec {
    std::string subcommand;  // exact | simulate | classify | convergence | spin

    Params params;
    int n = 0;
    std::vector<int> n_values;  // convergence

    std::optional<Pattern> pattern;
    std::optional<double> gamma;
    bool pure_b = false;

    MuFormula formula = MuFormula::All;
    std::string format;      // defaulted per subcommand: json, csv for convergence
    std::string out_path;    // empty = stdout
    bool verify = false;     // classify: run the brute-force oracle too

    std::int64_t turns = 1'000'000;
    std::int64_t burn_in = -1;
    std::uint64_t seed = 0;
    int replicas = 8;
    int checkpoints = 0;

    int ring = 512;
    std::int64_t sweeps = 20'000;
    std::int64_t burn_in_sweeps = -1;
    bool with_ring = false;
};

// Executes the run and writes the report document (JSON, or CSV for
// convergence) to `out`.  Returns the process exit code; computational
// failures produce a structured JSON error object on `out` and code 1.
int run_spec(const RunSpec&, std::ostream& out, std::ostream& err);

}  // namespace parrondo::cli
