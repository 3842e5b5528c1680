#pragma once

#include <vector>

#include "parrondo/dist.hpp"
#include "parrondo/params.hpp"
#include "parrondo/state.hpp"

namespace parrondo {

enum class Game { A, B };

// One factor of a composed transition operator, applied `count` times.
// Game A is game B at (1/2,1/2,1/2,1/2); the params of an A stage are fixed
// to that vector.
struct Stage {
    Game game = Game::A;
    Params params = params_a();
    int count = 1;
};

struct Transition {
    StateIndex to;
    double prob;
};

// Sparse row of the one-step matrix at state x: the N flip transitions
// (i = 1..N, zero-probability entries omitted) followed by the diagonal
// entry when it is positive.
std::vector<Transition> row_b(int n, const Params&, StateIndex x);
std::vector<Transition> row_a(int n, StateIndex x);

// Row-stochastic operator on the 2^N states of the N-player ring.  Rows are
// generated on demand; the operator is never materialized densely here.
// Compositions keep (stage, multiplicity) pairs so staged intermediate
// distributions fall out of repeated single-step application.
class Kernel {
public:
    static Kernel game_a(int n);
    static Kernel game_b(int n, const Params&);
    static Kernel pattern(int n, const Params&, const Pattern&);  // A^r then B^s
    static Kernel compose(int n, std::vector<Stage> stages);

    int n() const { return n_; }
    std::size_t states() const { return state_count(n_); }
    const std::vector<Stage>& stages() const { return stages_; }
    bool single_stage() const;
    // total single-game steps in one application (r+s for a pattern)
    int steps_per_application() const;

    // d * K with the row-vector convention; stages apply left to right, so a
    // pattern kernel performs r game-A turns followed by s game-B turns.
    Dist apply(const Dist& d) const;

private:
    Kernel(int n, std::vector<Stage> stages);

    int n_;
    std::vector<Stage> stages_;
};

// One game turn: d * P_B(params).  Building block for staged distributions.
Dist apply_game(int n, const Params&, const Dist& d);

}  // namespace parrondo
