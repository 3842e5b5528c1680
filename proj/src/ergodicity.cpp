#include "parrondo/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "parrondo/errors.hpp"

namespace parrondo {

namespace {

bool interior(double v) { return v > 0.0 && v < 1.0; }

// mask of x_1 = a, x_2 = b, x_3 = c repeated around the ring (needs 3 | n)
StateIndex periodic3(int a, int b, int c, int n) {
    const int pat[3] = {a, b, c};
    StateIndex x = 0;
    for (int i = 1; i <= n; ++i) {
        if (pat[(i - 1) % 3]) x |= StateIndex{1} << (i - 1);
    }
    return x;
}

void add_rotations(std::set<StateIndex>& into, StateIndex x, int n) {
    StateIndex y = x;
    for (int k = 0; k < n; ++k) {
        y = rotate_players(y, n);
        into.insert(y);
    }
}

// cyclic run-length test: every 0-run has length 1 and every 1-run length <= 2
bool zeros_single_ones_at_most_pairs(StateIndex x, int n) {
    const StateIndex all_ones = static_cast<StateIndex>(state_count(n) - 1);
    if (x == 0 || x == all_ones) return false;
    auto bit = [&](int j) { return static_cast<int>((x >> (j % n)) & 1u); };
    int start = 0;
    while (bit(start) == bit(start + n - 1)) ++start;  // x is mixed, so this terminates
    int val = bit(start);
    int len = 0;
    for (int k = 0; k < n; ++k) {
        const int b = bit(start + k);
        if (b == val) {
            ++len;
        } else {
            if (val == 0 ? len != 1 : len > 2) return false;
            val = b;
            len = 1;
        }
    }
    return val == 0 ? len == 1 : len <= 2;
}

// --- support graphs -------------------------------------------------------

// successor states of one game-B step with positive probability (exact zero
// tests on the parameters; game A is the all-1/2 case, where every flip and
// the diagonal are positive)
void step_successors(int n, const Params& p, StateIndex x, std::vector<StateIndex>& out) {
    out.clear();
    double diag = 0.0;
    for (int i = 1; i <= n; ++i) {
        const int m = neighbor_code(x, i, n);
        if (player_bit(x, i, n) == 0) {
            if (p.p(m) > 0.0) out.push_back(flip_player(x, i, n));
            diag += p.q(m);
        } else {
            if (p.q(m) > 0.0) out.push_back(flip_player(x, i, n));
            diag += p.p(m);
        }
    }
    if (diag > 0.0) out.push_back(x);
}

// adjacency of the composed support relation: successors after applying the
// stage sequence left to right
std::vector<std::vector<StateIndex>> support_adjacency(int n, const std::vector<Stage>& stages) {
    const std::size_t size = state_count(n);
    std::vector<std::vector<StateIndex>> adj(size);
    std::vector<StateIndex> cur, nxt, step;
    std::vector<std::uint8_t> mark(size, 0);
    for (StateIndex x = 0; x < size; ++x) {
        cur.assign(1, x);
        for (const auto& st : stages) {
            for (int k = 0; k < st.count; ++k) {
                nxt.clear();
                for (StateIndex y : cur) {
                    step_successors(n, st.params, y, step);
                    for (StateIndex z : step) {
                        if (!mark[z]) {
                            mark[z] = 1;
                            nxt.push_back(z);
                        }
                    }
                }
                for (StateIndex z : nxt) mark[z] = 0;
                cur = nxt;
            }
        }
        std::sort(cur.begin(), cur.end());
        adj[x] = cur;
    }
    return adj;
}

// --- SCC / recurrence analysis -------------------------------------------

struct SupportAnalysis {
    std::vector<std::vector<StateIndex>> sccs;  // in Tarjan (reverse topological) order
    std::vector<int> comp_of;
    std::vector<int> closed;                    // indices of closed (no-exit) components
};

SupportAnalysis analyze_components(const std::vector<std::vector<StateIndex>>& adj) {
    const int size = static_cast<int>(adj.size());
    SupportAnalysis res;
    res.comp_of.assign(adj.size(), -1);

    // iterative Tarjan
    std::vector<int> index(adj.size(), -1), low(adj.size(), 0);
    std::vector<std::uint8_t> on_stack(adj.size(), 0);
    std::vector<StateIndex> stack;
    std::vector<std::pair<StateIndex, std::size_t>> call;  // (node, next edge)
    int counter = 0;
    for (int root = 0; root < size; ++root) {
        if (index[root] != -1) continue;
        call.emplace_back(static_cast<StateIndex>(root), 0);
        index[root] = low[root] = counter++;
        stack.push_back(static_cast<StateIndex>(root));
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            if (edge < adj[v].size()) {
                const StateIndex w = adj[v][edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                const StateIndex v_done = v;
                call.pop_back();
                if (!call.empty()) {
                    const StateIndex parent = call.back().first;
                    low[parent] = std::min(low[parent], low[v_done]);
                }
                if (low[v_done] == index[v_done]) {
                    std::vector<StateIndex> comp;
                    while (true) {
                        const StateIndex w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp.push_back(w);
                        res.comp_of[w] = static_cast<int>(res.sccs.size());
                        if (w == v_done) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    res.sccs.push_back(std::move(comp));
                }
            }
        }
    }

    for (std::size_t c = 0; c < res.sccs.size(); ++c) {
        bool closed = true;
        for (StateIndex v : res.sccs[c]) {
            for (StateIndex w : adj[v]) {
                if (res.comp_of[w] != static_cast<int>(c)) {
                    closed = false;
                    break;
                }
            }
            if (!closed) break;
        }
        if (closed) res.closed.push_back(static_cast<int>(c));
    }
    return res;
}

// period (gcd of cycle lengths) of a closed class; 1 means aperiodic
int class_period(const std::vector<std::vector<StateIndex>>& adj,
                 const std::vector<StateIndex>& cls, const std::vector<int>& comp_of) {
    for (StateIndex v : cls) {
        if (std::binary_search(adj[v].begin(), adj[v].end(), v)) return 1;  // self-loop
    }
    // BFS levels from one root; gcd over level[u] + 1 - level[w] on class edges
    const int cid = comp_of[cls.front()];
    std::vector<long> level(adj.size(), -1);
    std::vector<StateIndex> queue{cls.front()};
    level[cls.front()] = 0;
    int g = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const StateIndex u = queue[head];
        for (StateIndex w : adj[u]) {
            if (comp_of[w] != cid) continue;
            if (level[w] == -1) {
                level[w] = level[u] + 1;
                queue.push_back(w);
            } else {
                g = std::gcd(g, static_cast<int>(std::abs(level[u] + 1 - level[w])));
                if (g == 1) return 1;
            }
        }
    }
    return g == 0 ? 0 : g;
}

std::vector<StateIndex> recurrent_class_checked(int n,
                                                const std::vector<std::vector<StateIndex>>& adj,
                                                const char* what) {
    const auto analysis = analyze_components(adj);
    if (analysis.closed.size() != 1) {
        throw StructureError(std::string(what) + ": expected one closed recurrent class, found " +
                             std::to_string(analysis.closed.size()) + " (n=" +
                             std::to_string(n) + ")");
    }
    const auto& cls = analysis.sccs[static_cast<std::size_t>(analysis.closed.front())];
    const int period = class_period(adj, cls, analysis.comp_of);
    if (period != 1) {
        throw StructureError(std::string(what) + ": recurrent class has period " +
                             std::to_string(period));
    }
    return cls;
}

constexpr int kBruteForceMaxRing = 12;

void validate_brute_force_ring(int n) {
    validate_ring(n);
    if (n > kBruteForceMaxRing) {
        throw std::invalid_argument("support-graph analysis is guarded to n <= " +
                                    std::to_string(kBruteForceMaxRing));
    }
}

}  // namespace

bool TransientSet::contains(StateIndex x) const {
    return std::binary_search(states.begin(), states.end(), x);
}

TransientSet classify_transient(int n, const Params& pr) {
    validate_ring(n);
    validate(pr);
    const double p0 = pr.p0, p1 = pr.p1, p2 = pr.p2, p3 = pr.p3;
    const StateIndex all_ones = static_cast<StateIndex>(state_count(n) - 1);
    const bool div3 = (n % 3 == 0);

    TransientSet t;
    std::set<StateIndex> s;
    if (interior(p0) && interior(p3)) {
        t.case_label = 'a';
    } else if (p0 == 1.0 && p3 == 0.0) {
        t.case_label = 'f';
        s = {StateIndex{0}, all_ones};
    } else if (p0 == 1.0) {  // p3 in (0,1]
        t.case_label = 'b';
        s = {StateIndex{0}};
        if (div3 && p1 == 0.0 && p2 == 0.0 && p3 == 1.0) {
            t.exception = true;
            add_rotations(s, periodic3(0, 1, 1, n), n);
        }
    } else if (p0 == 0.0 && interior(p3)) {
        t.case_label = 'c';
        if (div3 && p1 == 1.0 && p2 == 1.0) {
            t.exception = true;
            add_rotations(s, periodic3(0, 0, 1, n), n);
        }
    } else if (p3 == 0.0) {  // p0 in [0,1)
        t.case_label = 'd';
        s = {all_ones};
        if (div3 && p0 == 0.0 && p1 == 1.0 && p2 == 1.0) {
            t.exception = true;
            add_rotations(s, periodic3(0, 0, 1, n), n);
        }
    } else if (interior(p0) && p3 == 1.0) {
        t.case_label = 'e';
        if (div3 && p1 == 0.0 && p2 == 0.0) {
            t.exception = true;
            add_rotations(s, periodic3(0, 1, 1, n), n);
        }
    } else {  // p0 == 0 && p3 == 1
        t.case_label = 'g';
        if (p1 == 0.0 && p2 == 0.0) {
            t.exception = true;
            for (StateIndex x = 0; x <= all_ones; ++x) {
                if (zeros_single_ones_at_most_pairs(x, n)) s.insert(x);
            }
        } else if (p1 == 1.0 && p2 == 1.0) {
            t.exception = true;
            for (StateIndex x = 0; x <= all_ones; ++x) {
                if (zeros_single_ones_at_most_pairs(x ^ all_ones, n)) s.insert(x);
            }
        } else if (n % 2 == 0) {
            StateIndex odd_sites = 0;  // x_2 = x_4 = ... = 1, i.e. 0101...01
            for (int j = 1; j < n; j += 2) odd_sites |= StateIndex{1} << j;
            s = {odd_sites, static_cast<StateIndex>(odd_sites ^ all_ones)};
        }
    }
    t.states.assign(s.begin(), s.end());
    return t;
}

std::vector<StateIndex> brute_force_transient(int n, const Params& p, const Pattern& pat) {
    validate_brute_force_ring(n);
    validate(p);
    validate(pat);
    const std::vector<Stage> stages{Stage{Game::A, params_a(), pat.r}, Stage{Game::B, p, pat.s}};
    const auto adj = support_adjacency(n, stages);
    const auto recurrent = recurrent_class_checked(n, adj, "pattern chain");
    std::vector<StateIndex> transient;
    transient.reserve(state_count(n) - recurrent.size());
    std::size_t pos = 0;
    for (StateIndex x = 0; x < state_count(n); ++x) {
        if (pos < recurrent.size() && recurrent[pos] == x) {
            ++pos;
        } else {
            transient.push_back(x);
        }
    }
    return transient;
}

CyclicErgodicityReport check_cyclic_ergodicity(int n, const Params& p, const Pattern& pat,
                                               int which) {
    validate_brute_force_ring(n);
    validate(p);
    validate(pat);
    if (which < 1 || which > pat.length()) {
        throw std::invalid_argument("cyclic index must be in [1, r+s]");
    }

    std::vector<Stage> stages;
    const bool ends_in_a = which <= pat.r;
    if (ends_in_a) {
        // A^{r-k} B^s A^k
        const int k = which;
        if (pat.r - k > 0) stages.push_back(Stage{Game::A, params_a(), pat.r - k});
        stages.push_back(Stage{Game::B, p, pat.s});
        stages.push_back(Stage{Game::A, params_a(), k});
    } else {
        // B^{s-j} A^r B^j
        const int j = which - pat.r;
        if (pat.s - j > 0) stages.push_back(Stage{Game::B, p, pat.s - j});
        stages.push_back(Stage{Game::A, params_a(), pat.r});
        stages.push_back(Stage{Game::B, p, j});
    }

    const auto adj = support_adjacency(n, stages);
    const auto recurrent = recurrent_class_checked(n, adj, "cyclic permutation");

    if (ends_in_a) {
        if (recurrent.size() != state_count(n)) {
            throw StructureError("cyclic permutation ending in game A must be irreducible on "
                                 "the full space");
        }
    } else {
        const TransientSet t = classify_transient(n, p);
        if (recurrent.size() + t.size() != state_count(n)) {
            throw StructureError("recurrent class does not match the classified transient set");
        }
        for (StateIndex x : recurrent) {
            if (t.contains(x)) {
                throw StructureError("classified transient state found in recurrent class");
            }
        }
    }
    return CyclicErgodicityReport{true, recurrent};
}

SpinErgodicityReport check_spin_ergodicity(const Params& p) {
    validate(p);
    SpinErgodicityReport rep;
    rep.pbar = p.pbar();

    const double p0 = p.p0, p1 = p.p1, p2 = p.p2, p3 = p.p3;
    rep.condition_a = std::max(std::abs(p0 - p1), std::abs(p2 - p3)) +
                          std::max(std::abs(p0 - p2), std::abs(p1 - p3)) <
                      1.0;

    const double lo = std::min(p0, p3), hi = std::max(p0, p3);
    rep.condition_b = 0.0 < lo && lo <= std::min(p1, p2) && std::max(p1, p2) <= hi && hi < 1.0;

    const double band = std::min(std::min(p1, p2), std::min(p3, p1 + p2 - p3));
    const double cap = std::max(std::max(p1, p2), std::max(p3, p1 + p2 - p3));
    rep.condition_c = cap - p3 < p0 / 2.0 && p0 / 2.0 < band;

    rep.condition_d = true;
    for (int m = 0; m < 4; ++m) {
        const double v = p.p(m);
        if (!(v > 2.0 * rep.pbar - 1.0 && v < 2.0 * rep.pbar && v > 0.0 && v < 1.0)) {
            rep.condition_d = false;
            break;
        }
    }
    return rep;
}

SingleStepSupport analyze_game_b_support(int n, const Params& p) {
    validate_ring(n);
    validate(p);
    const std::vector<Stage> stages{Stage{Game::B, p, 1}};
    const auto adj = support_adjacency(n, stages);
    const auto analysis = analyze_components(adj);
    SingleStepSupport rep;
    rep.closed_classes = static_cast<int>(analysis.closed.size());
    StateIndex best = static_cast<StateIndex>(state_count(n));  // one past the end
    for (int c : analysis.closed) {
        best = std::min(best, analysis.sccs[static_cast<std::size_t>(c)].front());
    }
    rep.recurrent_state = best;
    return rep;
}

std::vector<std::vector<StateIndex>> game_b_closed_classes(int n, const Params& p) {
    validate_ring(n);
    validate(p);
    const std::vector<Stage> stages{Stage{Game::B, p, 1}};
    const auto adj = support_adjacency(n, stages);
    const auto analysis = analyze_components(adj);
    std::vector<std::vector<StateIndex>> classes;
    classes.reserve(analysis.closed.size());
    for (int c : analysis.closed) classes.push_back(analysis.sccs[static_cast<std::size_t>(c)]);
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return classes;
}

}  // namespace parrondo
