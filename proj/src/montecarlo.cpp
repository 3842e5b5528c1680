#include "parrondo/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "parrondo/rng.hpp"
#include "parrondo/threads.hpp"

namespace parrondo {

namespace {

struct ReplicaOutcome {
    double mean = 0.0;
    std::int64_t a_turns = 0;
    std::vector<Checkpoint> trace;
};

ReplicaOutcome run_replica(const SimConfig& cfg, int replica, std::int64_t burn_in,
                           int checkpoints) {
    Xoshiro256pp rng = replica_stream(cfg.seed, replica);
    const int n = cfg.n;
    StateIndex x = cfg.initial_state;

    const bool is_pattern = std::holds_alternative<PatternMode>(cfg.mode);
    const bool is_mixed = std::holds_alternative<MixedMode>(cfg.mode);
    int r = 0, period = 1;
    double gamma = 0.0;
    if (is_pattern) {
        const Pattern pat = std::get<PatternMode>(cfg.mode).pattern;
        r = pat.r;
        period = pat.length();
    } else if (is_mixed) {
        gamma = std::get<MixedMode>(cfg.mode).gamma;
    }

    const double p_table[4] = {cfg.params.p0, cfg.params.p1, cfg.params.p2, cfg.params.p3};
    const std::int64_t counted_total = cfg.turns - burn_in;
    const std::int64_t trace_stride =
        checkpoints > 0 ? std::max<std::int64_t>(1, counted_total / checkpoints) : 0;

    ReplicaOutcome out;
    std::int64_t sum = 0;
    std::int64_t counted = 0;
    int phase = 0;
    for (std::int64_t t = 0; t < cfg.turns; ++t) {
        bool game_a;
        if (is_pattern) {
            game_a = phase < r;
            if (++phase == period) phase = 0;
        } else if (is_mixed) {
            game_a = rng.uniform() < gamma;
        } else {
            game_a = false;
        }
        const int site = rng.uniform_int(n);  // player site+1
        double coin;
        if (game_a) {
            coin = 0.5;
        } else {
            const int prev = static_cast<int>((x >> ((site + n - 1) % n)) & 1u);
            const int next = static_cast<int>((x >> ((site + 1) % n)) & 1u);
            coin = p_table[2 * prev + next];
        }
        const bool win = rng.uniform() < coin;
        if (win) {
            x |= StateIndex{1} << site;
        } else {
            x &= ~(StateIndex{1} << site);
        }
        if (t >= burn_in) {
            sum += win ? 1 : -1;
            ++counted;
            if (game_a) ++out.a_turns;
            if (trace_stride > 0 && replica == 0 &&
                (counted % trace_stride == 0 || counted == counted_total)) {
                out.trace.push_back(
                    {counted, static_cast<double>(sum) / static_cast<double>(counted)});
            }
        }
    }
    out.mean = static_cast<double>(sum) / static_cast<double>(counted);
    return out;
}

double replica_standard_error(const std::vector<double>& means, double grand) {
    const std::size_t r = means.size();
    if (r < 2) return 0.0;
    double ss = 0.0;
    for (double m : means) ss += (m - grand) * (m - grand);
    return std::sqrt(ss / static_cast<double>(r - 1) / static_cast<double>(r));
}

}  // namespace

std::int64_t effective_burn_in(const SimConfig& cfg) {
    if (cfg.burn_in >= 0) return cfg.burn_in;
    return std::max<std::int64_t>(10'000, 100 * cfg.n);
}

void validate(const SimConfig& cfg) {
    validate_ring(cfg.n);
    validate(cfg.params);
    if (const auto* pm = std::get_if<PatternMode>(&cfg.mode)) validate(pm->pattern);
    if (const auto* mm = std::get_if<MixedMode>(&cfg.mode)) {
        if (!(mm->gamma > 0.0 && mm->gamma < 1.0)) {
            throw std::invalid_argument("gamma must lie in (0,1)");
        }
    }
    if (cfg.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
    if (cfg.turns <= 0) throw std::invalid_argument("turns must be positive");
    const std::int64_t burn = effective_burn_in(cfg);
    if (cfg.turns <= burn) {
        throw std::invalid_argument("turns (" + std::to_string(cfg.turns) +
                                    ") must exceed burn-in (" + std::to_string(burn) + ")");
    }
    if (cfg.initial_state >= state_count(cfg.n)) {
        throw std::invalid_argument("initial state out of range");
    }
    if (cfg.checkpoints < 0) throw std::invalid_argument("checkpoints must be >= 0");
}

SimResult simulate_pattern(const SimConfig& cfg) {
    validate(cfg);
    const std::int64_t burn = effective_burn_in(cfg);

    std::vector<ReplicaOutcome> outcomes(static_cast<std::size_t>(cfg.replicas));
    const int workers = std::min(cfg.replicas, thread_count());
    if (workers <= 1) {
        for (int k = 0; k < cfg.replicas; ++k) {
            outcomes[static_cast<std::size_t>(k)] = run_replica(cfg, k, burn, cfg.checkpoints);
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (int k = next.fetch_add(1); k < cfg.replicas; k = next.fetch_add(1)) {
                    outcomes[static_cast<std::size_t>(k)] =
                        run_replica(cfg, k, burn, cfg.checkpoints);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    SimResult res;
    res.replica_means.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        res.replica_means.push_back(o.mean);
        res.a_turns += o.a_turns;
    }
    res.n_effective = (cfg.turns - burn) * cfg.replicas;
    double grand = 0.0;
    for (double m : res.replica_means) grand += m;
    grand /= static_cast<double>(cfg.replicas);
    res.mean = grand;
    res.std_error = replica_standard_error(res.replica_means, grand);
    res.running_means = std::move(outcomes.front().trace);
    return res;
}

RingEstimate simulate_ring_spin(const Params& gamma_params, int ring, std::int64_t sweeps,
                                std::int64_t burn_in_sweeps, std::uint64_t seed, int replicas) {
    validate(gamma_params);
    if (ring < 64) throw std::invalid_argument("ring size must be >= 64");
    if (sweeps <= 0) throw std::invalid_argument("sweeps must be positive");
    if (burn_in_sweeps < 0) burn_in_sweeps = std::max<std::int64_t>(100, sweeps / 10);
    if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");

    const double p_table[4] = {gamma_params.p0, gamma_params.p1, gamma_params.p2,
                               gamma_params.p3};

    RingEstimate est;
    est.ring = ring;
    est.replica_marginals.assign(static_cast<std::size_t>(replicas), {});

    const auto run_one = [&](int k) {
        Xoshiro256pp rng = replica_stream(seed, k);
        std::vector<std::uint8_t> x(static_cast<std::size_t>(ring), 0);
        std::array<std::int64_t, 4> counts{};
        for (std::int64_t sweep = 0; sweep < burn_in_sweeps + sweeps; ++sweep) {
            for (int u = 0; u < ring; ++u) {
                const int i = rng.uniform_int(ring);
                const int prev = x[static_cast<std::size_t>((i + ring - 1) % ring)];
                const int next = x[static_cast<std::size_t>((i + 1) % ring)];
                x[static_cast<std::size_t>(i)] =
                    rng.uniform() < p_table[2 * prev + next] ? 1 : 0;
            }
            if (sweep >= burn_in_sweeps) {
                for (int i = 0; i < ring; ++i) {
                    const int prev = x[static_cast<std::size_t>((i + ring - 1) % ring)];
                    const int next = x[static_cast<std::size_t>((i + 1) % ring)];
                    ++counts[static_cast<std::size_t>(2 * prev + next)];
                }
            }
        }
        std::array<double, 4> marg{};
        const double total = static_cast<double>(ring) * static_cast<double>(sweeps);
        for (int m = 0; m < 4; ++m) marg[static_cast<std::size_t>(m)] =
            static_cast<double>(counts[static_cast<std::size_t>(m)]) / total;
        est.replica_marginals[static_cast<std::size_t>(k)] = marg;
    };

    const int workers = std::min(replicas, thread_count());
    if (workers <= 1) {
        for (int k = 0; k < replicas; ++k) run_one(k);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (int k = next.fetch_add(1); k < replicas; k = next.fetch_add(1)) run_one(k);
            });
        }
        for (auto& th : pool) th.join();
    }

    est.replica_mu.reserve(static_cast<std::size_t>(replicas));
    for (const auto& marg : est.replica_marginals) {
        double mu = 0.0;
        for (int m = 0; m < 4; ++m) {
            mu += marg[static_cast<std::size_t>(m)] * (2.0 * p_table[m] - 1.0);
        }
        est.replica_mu.push_back(mu);
        for (int m = 0; m < 4; ++m) {
            est.marginal_13[static_cast<std::size_t>(m)] +=
                marg[static_cast<std::size_t>(m)] / static_cast<double>(replicas);
        }
    }
    double grand = 0.0;
    for (double mu : est.replica_mu) grand += mu;
    grand /= static_cast<double>(replicas);
    est.mu_limit = grand;
    est.std_error = replica_standard_error(est.replica_mu, grand);
    return est;
}

bool ConvergenceTable::all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const ConvergenceRow& r) { return r.ok; });
}

ConvergenceTable convergence_table(const Params& p, const Pattern& pat,
                                   const std::vector<int>& n_values,
                                   const ConvergenceOptions& opt) {
    validate(p);
    validate(pat);
    const double gamma = pat.gamma();

    ConvergenceTable table;
    table.rows.reserve(n_values.size());
    for (int n : n_values) {
        ConvergenceRow row;
        row.n = n;
        try {
            validate_ring(n);
            const ProfitReport pattern_rep = mu_pattern(n, p, pat, MuFormula::All, opt.solve);
            const ProfitReport mixed_rep = mu_mixed(n, p, gamma, opt.solve);
            row.mu_pattern = pattern_rep.mu;
            row.mu_mixed = mixed_rep.mu;
            row.gap = std::abs(row.mu_pattern - row.mu_mixed);
            row.ok = true;
        } catch (const std::exception& e) {
            row.mu_pattern = std::numeric_limits<double>::quiet_NaN();
            row.mu_mixed = std::numeric_limits<double>::quiet_NaN();
            row.gap = std::numeric_limits<double>::quiet_NaN();
            row.ok = false;
            row.error = e.what();
        }
        table.rows.push_back(std::move(row));
    }

    if (opt.with_ring) {
        const RingEstimate est =
            simulate_ring_spin(mixed_params(p, gamma), opt.ring, opt.sweeps,
                               opt.burn_in_sweeps, opt.seed, opt.replicas);
        table.ring = RingFooter{est.mu_limit, est.std_error};
    }
    return table;
}

}  // namespace parrondo
