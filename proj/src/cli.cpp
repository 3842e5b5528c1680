#include "parrondo/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "parrondo/ergodicity.hpp"
#include "parrondo/errors.hpp"
#include "parrondo/montecarlo.hpp"
#include "parrondo/profit.hpp"

namespace parrondo::cli {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json params_json(const Params& p) {
    return json{{"p0", p.p0}, {"p1", p.p1}, {"p2", p.p2}, {"p3", p.p3}};
}

json solver_json(const SolverDiagnostics& d) {
    return json{{"method", d.method}, {"iterations", d.iterations}, {"residual", d.residual}};
}

json transient_json(const TransientSet& t, int n, bool full) {
    json doc{{"case", std::string(1, t.case_label)},
             {"exception", t.exception},
             {"size", t.states.size()}};
    if (full) {
        json masks = json::array();
        json strings = json::array();
        for (StateIndex x : t.states) {
            masks.push_back(x);
            strings.push_back(to_binary(x, n));
        }
        doc["states"] = std::move(masks);
        doc["states_binary"] = std::move(strings);
    }
    return doc;
}

GameMode resolve_mode(const RunSpec& spec) {
    const int active = (spec.pattern.has_value() ? 1 : 0) + (spec.gamma.has_value() ? 1 : 0) +
                       (spec.pure_b ? 1 : 0);
    if (active != 1) {
        throw std::invalid_argument(
            "exactly one of --pattern, --gamma, --pure-b must be given");
    }
    if (spec.pattern) return PatternMode{*spec.pattern};
    if (spec.gamma) return MixedMode{*spec.gamma};
    return PureBMode{};
}

json mode_json(const GameMode& mode) {
    if (const auto* pm = std::get_if<PatternMode>(&mode)) {
        return json{{"type", "pattern"}, {"r", pm->pattern.r}, {"s", pm->pattern.s}};
    }
    if (const auto* mm = std::get_if<MixedMode>(&mode)) {
        return json{{"type", "mixed"}, {"gamma", mm->gamma}};
    }
    return json{{"type", "pure_b"}};
}

void require_format(const RunSpec& spec, const std::string& expected) {
    if (!spec.format.empty() && spec.format != expected) {
        throw std::invalid_argument("subcommand '" + spec.subcommand + "' only emits " +
                                    expected);
    }
}

json cmd_exact(const RunSpec& spec) {
    require_format(spec, "json");
    const GameMode mode = resolve_mode(spec);
    validate_ring(spec.n);
    validate(spec.params);

    json doc{{"command", "exact"},
             {"n", spec.n},
             {"params", params_json(spec.params)},
             {"mode", mode_json(mode)}};

    ProfitReport rep;
    Params classify_params = spec.params;
    if (const auto* pm = std::get_if<PatternMode>(&mode)) {
        rep = mu_pattern(spec.n, spec.params, pm->pattern, spec.formula);
    } else if (const auto* mm = std::get_if<MixedMode>(&mode)) {
        rep = mu_mixed(spec.n, spec.params, mm->gamma);
        classify_params = mixed_params(spec.params, mm->gamma);
    } else {
        rep = mu_b(spec.n, spec.params);
    }
    doc["mu"] = rep.mu;
    doc["per_formula"] = json(rep.per_formula);
    doc["solver"] = solver_json(rep.solver);
    doc["transient"] = transient_json(classify_transient(spec.n, classify_params), spec.n,
                                      /*full=*/false);

    // reference value of game B alone, for reading off the Parrondo effect
    if (std::holds_alternative<PureBMode>(mode)) {
        doc["mu_b"] = rep.mu;
    } else {
        try {
            doc["mu_b"] = mu_b(spec.n, spec.params).mu;
        } catch (const std::exception& e) {
            doc["mu_b"] = nullptr;
            doc["mu_b_error"] = e.what();
        }
    }
    return doc;
}

json cmd_classify(const RunSpec& spec) {
    require_format(spec, "json");
    validate_ring(spec.n);
    validate(spec.params);
    if (spec.gamma || spec.pure_b) {
        throw std::invalid_argument("classify takes no game mode; pass --pattern only "
                                    "to steer --verify");
    }

    const TransientSet t = classify_transient(spec.n, spec.params);
    json doc{{"command", "classify"},
             {"n", spec.n},
             {"params", params_json(spec.params)},
             {"transient", transient_json(t, spec.n, /*full=*/true)}};

    const SpinErgodicityReport spin = check_spin_ergodicity(spec.params);
    doc["spin_ergodicity"] = json{{"condition_a", spin.condition_a},
                                  {"condition_b", spin.condition_b},
                                  {"condition_c", spin.condition_c},
                                  {"condition_d", spin.condition_d},
                                  {"pbar", spin.pbar},
                                  {"any", spin.any()}};

    if (spec.verify) {
        if (spec.n > 12) throw std::invalid_argument("--verify requires n <= 12");
        const Pattern pat = spec.pattern.value_or(Pattern{1, 1});
        const std::vector<StateIndex> brute = brute_force_transient(spec.n, spec.params, pat);
        doc["oracle"] = json{{"pattern", json{{"r", pat.r}, {"s", pat.s}}},
                             {"agrees", brute == t.states}};
    }
    return doc;
}

json cmd_simulate(const RunSpec& spec) {
    require_format(spec, "json");
    SimConfig cfg;
    cfg.n = spec.n;
    cfg.params = spec.params;
    cfg.mode = resolve_mode(spec);
    cfg.turns = spec.turns;
    cfg.burn_in = spec.burn_in;
    cfg.seed = spec.seed;
    cfg.replicas = spec.replicas;
    cfg.checkpoints = spec.checkpoints;
    validate(cfg);

    const SimResult res = simulate_pattern(cfg);
    json doc{{"command", "simulate"},
             {"n", cfg.n},
             {"params", params_json(cfg.params)},
             {"mode", mode_json(cfg.mode)},
             {"turns", cfg.turns},
             {"burn_in", effective_burn_in(cfg)},
             {"seed", cfg.seed},
             {"replicas", cfg.replicas},
             {"mean", res.mean},
             {"std_error", res.std_error},
             {"n_effective", res.n_effective},
             {"a_turns", res.a_turns},
             {"replica_means", res.replica_means}};
    if (cfg.checkpoints > 0) {
        json trace = json::array();
        for (const Checkpoint& c : res.running_means) {
            trace.push_back(json{{"games", c.games}, {"mean", c.running_mean}});
        }
        doc["running_means"] = std::move(trace);
    }
    return doc;
}

json cmd_spin(const RunSpec& spec) {
    require_format(spec, "json");
    validate(spec.params);

    Params run_params = spec.params;
    std::optional<double> gamma;
    if (spec.pattern && (spec.gamma || spec.pure_b)) {
        throw std::invalid_argument("give at most one of --pattern, --gamma, --pure-b");
    }
    if (spec.gamma && spec.pure_b) {
        throw std::invalid_argument("give at most one of --pattern, --gamma, --pure-b");
    }
    if (spec.pattern) gamma = spec.pattern->gamma();
    if (spec.gamma) gamma = *spec.gamma;
    if (gamma) run_params = mixed_params(spec.params, *gamma);

    const RingEstimate est = simulate_ring_spin(run_params, spec.ring, spec.sweeps,
                                                spec.burn_in_sweeps, spec.seed, spec.replicas);
    json doc{{"command", "spin"},
             {"params", params_json(spec.params)},
             {"run_params", params_json(run_params)},
             {"ring", est.ring},
             {"sweeps", spec.sweeps},
             {"seed", spec.seed},
             {"replicas", spec.replicas},
             {"marginal_13",
              json{{"00", est.marginal_13[0]},
                   {"01", est.marginal_13[1]},
                   {"10", est.marginal_13[2]},
                   {"11", est.marginal_13[3]}}},
             {"mu_limit", est.mu_limit},
             {"std_error", est.std_error}};
    if (gamma) doc["gamma"] = *gamma;
    return doc;
}

std::pair<int, std::string> cmd_convergence(const RunSpec& spec) {
    if (!spec.format.empty() && spec.format != "csv") {
        throw std::invalid_argument("convergence emits csv");
    }
    if (!spec.pattern || spec.gamma || spec.pure_b) {
        throw std::invalid_argument("convergence requires --pattern");
    }
    if (spec.n_values.empty()) throw std::invalid_argument("convergence requires --n range");
    for (int n : spec.n_values) validate_ring(n);

    ConvergenceOptions opt;
    opt.with_ring = spec.with_ring;
    opt.ring = spec.ring;
    opt.sweeps = spec.sweeps;
    opt.burn_in_sweeps = spec.burn_in_sweeps;
    opt.seed = spec.seed;
    opt.replicas = spec.replicas;

    const ConvergenceTable table =
        convergence_table(spec.params, *spec.pattern, spec.n_values, opt);

    std::ostringstream out;
    out << "N,mu_pattern,mu_mixed,gap\n";
    for (const ConvergenceRow& row : table.rows) {
        out << row.n << ',' << fmt17(row.mu_pattern) << ',' << fmt17(row.mu_mixed) << ','
            << fmt17(row.gap) << '\n';
    }
    if (table.ring) {
        out << "ring_estimate," << fmt17(table.ring->estimate) << ",ring_se,"
            << fmt17(table.ring->std_error) << '\n';
    }
    return {table.all_ok() ? kExitOk : kExitComputeError, out.str()};
}

int write_output(const RunSpec& spec, const std::string& text, std::ostream& out,
                 std::ostream& err) {
    if (spec.out_path.empty()) {
        out << text;
        return kExitOk;
    }
    std::ofstream file(spec.out_path);
    if (!file) {
        err << "cannot open output file: " << spec.out_path << "\n";
        return kExitUsageError;
    }
    file << text;
    return kExitOk;
}

const char* error_type(const std::exception& e) {
    if (dynamic_cast<const NonUniquenessError*>(&e)) return "non_uniqueness";
    if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
    if (dynamic_cast<const StructureError*>(&e)) return "structure";
    if (dynamic_cast<const ConsistencyError*>(&e)) return "consistency";
    return "internal";
}

}  // namespace

Params parse_params(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4) {
        throw std::invalid_argument("expected p0,p1,p2,p3, got '" + text + "'");
    }
    Params p{parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2]),
             parse_double(parts[3])};
    validate(p);
    return p;
}

Pattern parse_pattern(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw std::invalid_argument("expected r,s, got '" + text + "'");
    Pattern pat{parse_int(parts[0]), parse_int(parts[1])};
    validate(pat);
    return pat;
}

std::vector<int> parse_range(const std::string& text) {
    const auto parts = split(text, ':');
    std::vector<int> values;
    if (parts.size() == 1) {
        values.push_back(parse_int(parts[0]));
        return values;
    }
    if (parts.size() != 3) {
        throw std::invalid_argument("expected start:stop:step, got '" + text + "'");
    }
    const int start = parse_int(parts[0]);
    const int stop = parse_int(parts[1]);
    const int step = parse_int(parts[2]);
    if (step <= 0) throw std::invalid_argument("range step must be positive");
    if (stop < start) throw std::invalid_argument("range stop must be >= start");
    for (int v = start; v <= stop; v += step) values.push_back(v);
    return values;
}

MuFormula parse_formula(const std::string& text) {
    if (text == "mu1") return MuFormula::Mu1;
    if (text == "mu2") return MuFormula::Mu2;
    if (text == "mu3") return MuFormula::Mu3;
    if (text == "mu4") return MuFormula::Mu4;
    if (text == "all") return MuFormula::All;
    throw std::invalid_argument("formula must be one of mu1,mu2,mu3,mu4,all");
}

int run_spec(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    try {
        if (spec.subcommand == "convergence") {
            const auto [code, text] = cmd_convergence(spec);
            const int io = write_output(spec, text, out, err);
            return io != kExitOk ? io : code;
        }
        json doc;
        if (spec.subcommand == "exact") {
            doc = cmd_exact(spec);
        } else if (spec.subcommand == "classify") {
            doc = cmd_classify(spec);
        } else if (spec.subcommand == "simulate") {
            doc = cmd_simulate(spec);
        } else if (spec.subcommand == "spin") {
            doc = cmd_spin(spec);
        } else {
            throw std::invalid_argument("unknown subcommand '" + spec.subcommand + "'");
        }
        return write_output(spec, doc.dump(2) + "\n", out, err);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const std::exception& e) {
        const json doc{{"error", {{"type", error_type(e)}, {"message", e.what()}}}};
        out << doc.dump(2) << "\n";
        return kExitComputeError;
    }
}

}  // namespace parrondo::cli
