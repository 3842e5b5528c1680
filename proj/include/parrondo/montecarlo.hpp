#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "parrondo/params.hpp"
#include "parrondo/profit.hpp"
#include "parrondo/state.hpp"

namespace parrondo {

// Which schedule of games the simulator plays.
struct PatternMode {
    Pattern pattern;
};
struct MixedMode {
    double gamma;  // per-turn coin: A with probability gamma, else B
};
struct PureBMode {};
using GameMode = std::variant<PatternMode, MixedMode, PureBMode>;

struct SimConfig {
    int n = 3;
    Params params;
    GameMode mode = PureBMode{};
    std::int64_t turns = 1'000'000;   // per replica, including burn-in
    std::int64_t burn_in = -1;        // -1 selects max(10^4, 100*n)
    std::uint64_t seed = 0;
    int replicas = 8;
    StateIndex initial_state = 0;
    int checkpoints = 0;              // running-mean trace points (replica 0)
};

std::int64_t effective_burn_in(const SimConfig&);
void validate(const SimConfig&);

struct Checkpoint {
    std::int64_t games;    // counted games so far
    double running_mean;   // S_n / n at that point
};

struct SimResult {
    double mean = 0.0;
    double std_error = 0.0;            // replica standard error
    std::int64_t n_effective = 0;      // counted games across replicas
    std::int64_t a_turns = 0;          // counted turns that were game A
    std::vector<double> replica_means;
    std::vector<Checkpoint> running_means;
};

// Simulates the per-turn dynamics at the (configuration, next player) level:
// each turn one player is chosen uniformly, tosses the coin of the scheduled
// game, and his status becomes the outcome; payoff is +1 for heads, -1 for
// tails.  Deterministic given the full config, including across platforms.
SimResult simulate_pattern(const SimConfig&);

// Finite-ring estimate of the spin-system stationary quantities.
struct RingEstimate {
    int ring = 0;
    std::array<double, 4> marginal_13{};  // translation-averaged law of (x_{i-1}, x_{i+1})
    double mu_limit = 0.0;
    double std_error = 0.0;               // replica standard error of mu_limit
    std::vector<double> replica_mu;
    std::vector<std::array<double, 4>> replica_marginals;
};

// Runs the single-site game-B dynamics at the given parameters on a ring of
// L >= 64 sites (one sweep = L uniform single-site updates), accumulating the
// two-site neighbor law over sites and sweeps after burn-in.  mu_limit is the
// marginal contracted against the payoff weights of the same parameters; for
// mapped parameters p(gamma) that equals the limiting mixed-game profit.
RingEstimate simulate_ring_spin(const Params& gamma_params, int ring, std::int64_t sweeps,
                                std::int64_t burn_in_sweeps, std::uint64_t seed,
                                int replicas);

struct ConvergenceRow {
    int n = 0;
    double mu_pattern = 0.0;
    double mu_mixed = 0.0;
    double gap = 0.0;
    bool ok = false;
    std::string error;
};

struct RingFooter {
    double estimate = 0.0;
    double std_error = 0.0;
};

struct ConvergenceOptions {
    bool with_ring = false;
    int ring = 512;
    std::int64_t sweeps = 20'000;
    std::int64_t burn_in_sweeps = -1;  // -1 selects sweeps/10
    std::uint64_t seed = 1;
    int replicas = 8;
    SolveOptions solve;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::optional<RingFooter> ring;

    bool all_ok() const;
};

// Exact mu_[r,s]^N and mu_(gamma,1-gamma)^N per N with gamma = r/(r+s), plus
// the gap between them; optionally appends the ring estimate of the common
// limit.  Rows whose solve fails carry ok = false and NaN values.
ConvergenceTable convergence_table(const Params&, const Pattern&,
                                   const std::vector<int>& n_values,
                                   const ConvergenceOptions& = {});

}  // namespace parrondo
