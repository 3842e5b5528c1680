#pragma once

#include <vector>

#include "parrondo/kernel.hpp"
#include "parrondo/params.hpp"
#include "parrondo/state.hpp"

namespace parrondo {

// The transient states of the pattern chain A^r B^s.  The set is the same
// for every r,s >= 1, so it is classified from (N, params) alone.
struct TransientSet {
    char case_label = 'a';               // 'a'..'g'
    bool exception = false;              // one of the divisibility/parity exceptions
    std::vector<StateIndex> states;      // sorted ascending; possibly empty

    bool contains(StateIndex x) const;
    std::size_t size() const { return states.size(); }
};

TransientSet classify_transient(int n, const Params&);

// Exhaustive oracle for the classification: builds the exact support digraph
// of A^r B^s over all 2^n states (a transition exists iff its probability is
// positive in exact arithmetic), finds the strongly connected components, and
// returns the states outside the unique closed recurrent class.  Also checks
// that the recurrent class is aperiodic.  Guarded to n <= 12.
//
// Throws StructureError if the closed class is not unique or is periodic.
std::vector<StateIndex> brute_force_transient(int n, const Params&, const Pattern&);

struct CyclicErgodicityReport {
    bool ergodic = false;
    std::vector<StateIndex> recurrent;   // sorted; the unique closed class
};

// Analyzes the `which`-th cyclic permutation of A^r B^s (which in 1..r+s).
// Permutations 1..r end in a game-A step and must be irreducible and
// aperiodic on the full space; permutations r+1..r+s end in a game-B step
// and must have recurrent class exactly the complement of the transient set.
// Violations throw StructureError (they would mean an implementation bug).
// Guarded to n <= 12.
CyclicErgodicityReport check_cyclic_ergodicity(int n, const Params&, const Pattern&,
                                               int which);

// The four sufficient conditions for ergodicity of the infinite-lattice spin
// system with game-B flip rates, evaluated exactly as displayed.
struct SpinErgodicityReport {
    bool condition_a = false;   // basic estimate
    bool condition_b = false;   // attractiveness or repulsiveness
    bool condition_c = false;   // coalescing duality
    bool condition_d = false;   // annihilating duality
    double pbar = 0.0;          // (p0+p1+p2+p3)/4

    bool any() const { return condition_a || condition_b || condition_c || condition_d; }
};

SpinErgodicityReport check_spin_ergodicity(const Params&);

// Support analysis of the single-step game-B chain (used by the stationary
// solvers): number of closed recurrent classes, and the lowest-index state of
// the first one.
struct SingleStepSupport {
    int closed_classes = 0;
    StateIndex recurrent_state = 0;
};

SingleStepSupport analyze_game_b_support(int n, const Params&);

// The closed recurrent classes themselves, each sorted, ordered by their
// smallest state.
std::vector<std::vector<StateIndex>> game_b_closed_classes(int n, const Params&);

}  // namespace parrondo
