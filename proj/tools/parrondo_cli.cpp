#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "parrondo/cli.hpp"

namespace {

using parrondo::cli::RunSpec;

struct RawArgs {
    std::string params;
    std::string pattern;
    std::string n_range;
    std::string formula = "all";
};

void add_params_flag(CLI::App* cmd, RawArgs& raw) {
    cmd->add_option("--p", raw.params, "game-B parameters p0,p1,p2,p3")->required();
}

void add_mode_flags(CLI::App* cmd, RawArgs& raw, RunSpec& spec) {
    cmd->add_option("--pattern", raw.pattern, "periodic schedule r,s");
    cmd->add_option("--gamma", [&spec](const CLI::results_t& res) {
        spec.gamma = std::stod(res[0]);
        return true;
    }, "random-mixture weight of game A");
    cmd->add_flag("--pure-b", spec.pure_b, "play game B only");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact and Monte Carlo engine for cooperative Parrondo games with "
                 "one-dimensional spatial dependence"};
    app.require_subcommand(1);

    RunSpec spec;
    RawArgs raw;

    auto* exact = app.add_subcommand("exact", "stationary-distribution profit values");
    exact->add_option("--n", spec.n, "ring size")->required();
    add_params_flag(exact, raw);
    add_mode_flags(exact, raw, spec);
    exact->add_option("--formula", raw.formula, "mu1|mu2|mu3|mu4|all");
    exact->add_option("--format", spec.format, "output format (json)");
    exact->add_option("--out", spec.out_path, "write the document to a file");

    auto* classify = app.add_subcommand("classify", "transient set and ergodicity predicates");
    classify->add_option("--n", spec.n, "ring size")->required();
    add_params_flag(classify, raw);
    classify->add_option("--pattern", raw.pattern, "pattern for --verify (default 1,1)");
    classify->add_flag("--verify", spec.verify, "run the brute-force oracle (n <= 12)");
    classify->add_option("--format", spec.format, "output format (json)");
    classify->add_option("--out", spec.out_path, "write the document to a file");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo profit estimate");
    simulate->add_option("--n", spec.n, "ring size")->required();
    add_params_flag(simulate, raw);
    add_mode_flags(simulate, raw, spec);
    simulate->add_option("--turns", spec.turns, "games per replica, including burn-in");
    simulate->add_option("--burn-in", spec.burn_in, "games discarded (default max(1e4,100N))");
    simulate->add_option("--seed", spec.seed, "RNG seed")->required();
    simulate->add_option("--replicas", spec.replicas, "independent replicas");
    simulate->add_option("--checkpoints", spec.checkpoints, "running-mean trace points");
    simulate->add_option("--format", spec.format, "output format (json)");
    simulate->add_option("--out", spec.out_path, "write the document to a file");

    auto* convergence = app.add_subcommand("convergence", "mu_[r,s]^N vs mu_(gamma,1-gamma)^N");
    add_params_flag(convergence, raw);
    convergence->add_option("--pattern", raw.pattern, "periodic schedule r,s")->required();
    convergence->add_option("--n", raw.n_range, "ring sizes start:stop:step")->required();
    convergence->add_flag("--with-ring", spec.with_ring, "append the ring-estimate footer");
    convergence->add_option("--ring", spec.ring, "ring size for the footer estimate");
    convergence->add_option("--sweeps", spec.sweeps, "measurement sweeps for the footer");
    convergence->add_option("--burn-in-sweeps", spec.burn_in_sweeps,
                            "discarded sweeps (default sweeps/10)");
    convergence->add_option("--seed", spec.seed, "RNG seed for the footer");
    convergence->add_option("--replicas", spec.replicas, "replicas for the footer");
    convergence->add_option("--format", spec.format, "output format (csv)");
    convergence->add_option("--out", spec.out_path, "write the table to a file");

    auto* spin = app.add_subcommand("spin", "large-ring estimate of the spin-system limit");
    add_params_flag(spin, raw);
    add_mode_flags(spin, raw, spec);
    spin->add_option("--ring", spec.ring, "ring size L >= 64");
    spin->add_option("--sweeps", spec.sweeps, "measurement sweeps");
    spin->add_option("--burn-in-sweeps", spec.burn_in_sweeps,
                     "discarded sweeps (default sweeps/10)");
    spin->add_option("--seed", spec.seed, "RNG seed")->required();
    spin->add_option("--replicas", spec.replicas, "independent replicas");
    spin->add_option("--format", spec.format, "output format (json)");
    spin->add_option("--out", spec.out_path, "write the document to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return parrondo::cli::kExitUsageError;
    }

    try {
        spec.subcommand = app.get_subcommands().front()->get_name();
        spec.params = parrondo::cli::parse_params(raw.params);
        if (!raw.pattern.empty()) spec.pattern = parrondo::cli::parse_pattern(raw.pattern);
        if (!raw.n_range.empty()) spec.n_values = parrondo::cli::parse_range(raw.n_range);
        spec.formula = parrondo::cli::parse_formula(raw.formula);
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return parrondo::cli::kExitUsageError;
    }

    return parrondo::cli::run_spec(spec, std::cout, std::cerr);
}
