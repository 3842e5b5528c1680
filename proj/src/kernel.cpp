#include "parrondo/kernel.hpp"

#include <cstdint>
#include <stdexcept>
#include <thread>
#include <utility>

#include "parrondo/threads.hpp"

namespace parrondo {

namespace {

// The per-site weight of staying put is (x_i ? p_m : q_m)/N with
// m = 2*x_{i-1} + x_{i+1}, indexed below by the 3-bit window
// c = 4*x_{i-1} + 2*x_i + x_{i+1}.
void stay_weights(int n, const Params& params, double table[8]) {
    for (int c = 0; c < 8; ++c) {
        const int m = ((c >> 2) << 1) | (c & 1);
        table[c] = ((c & 2) != 0 ? params.p(m) : params.q(m)) / n;
    }
}

// P_B(x,x), accumulated over window counts in a canonical order so that the
// value is bit-identical across ring rotations, and across reflections when
// p1 = p2 (reflection swaps windows 1<->4 and 3<->6, whose weights coincide
// exactly in that case).
double diagonal_weight(int n, const Params& params, StateIndex x) {
    int cnt[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    const std::uint64_t ext = (static_cast<std::uint64_t>(x) << n) | x;
    for (int j = 0; j < n; ++j) {
        const int c = static_cast<int>(((ext >> (j + n - 1)) & 1) << 2 |
                                       ((ext >> j) & 1) << 1 | ((ext >> (j + 1)) & 1));
        ++cnt[c];
    }
    double t[8];
    stay_weights(n, params, t);
    if (params.p1 == params.p2) {
        return cnt[0] * t[0] + (cnt[1] + cnt[4]) * t[1] + cnt[2] * t[2] +
               (cnt[3] + cnt[6]) * t[3] + cnt[5] * t[5] + cnt[7] * t[7];
    }
    double acc = 0.0;
    for (int c = 0; c < 8; ++c) acc += cnt[c] * t[c];
    return acc;
}

}  // namespace

std::vector<Transition> row_b(int n, const Params& params, StateIndex x) {
    validate_ring(n);
    validate(params);
    const double inv_n = 1.0 / n;
    std::vector<Transition> row;
    row.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        const int m = neighbor_code(x, i, n);
        if (player_bit(x, i, n) == 0) {
            if (params.p(m) > 0.0) row.push_back({flip_player(x, i, n), params.p(m) * inv_n});
        } else {
            if (params.q(m) > 0.0) row.push_back({flip_player(x, i, n), params.q(m) * inv_n});
        }
    }
    const double diag = diagonal_weight(n, params, x);
    if (diag > 0.0) row.push_back({x, diag});
    return row;
}

std::vector<Transition> row_a(int n, StateIndex x) { return row_b(n, params_a(), x); }

namespace {

// One gather pass of d * P_B(params).  P(y^i, y) and the site-i diagonal term
// of P(y, y) are the same number: the probability that a resampled site i
// lands on the value y_i, namely p_m/N when y_i = 1 and q_m/N when y_i = 0,
// with m = 2*y_{i-1} + y_{i+1}.  Indexing the 3-bit window (y_{i-1}, y_i,
// y_{i+1}) gives an 8-entry weight table and
//   out[y] = sum_i T[window_i(y)] * (d[y] + d[y^i]).
void gather_range(const Params& params, const std::vector<double>& in,
                  std::vector<double>& out, int n, StateIndex lo, StateIndex hi) {
    double table[8];
    for (int c = 0; c < 8; ++c) {
        const int m = ((c >> 2) << 1) | (c & 1);  // 2*prev + next
        const bool self = (c & 2) != 0;
        table[c] = (self ? params.p(m) : params.q(m)) / n;
    }
    for (StateIndex y = lo; y < hi; ++y) {
        const std::uint64_t ext = (static_cast<std::uint64_t>(y) << n) | y;
        const double dy = in[y];
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const int c = static_cast<int>(((ext >> (j + n - 1)) & 1) << 2 |
                                           ((ext >> j) & 1) << 1 | ((ext >> (j + 1)) & 1));
            acc += table[c] * (dy + in[y ^ (StateIndex{1} << j)]);
        }
        out[y] = acc;
    }
}

}  // namespace

Dist apply_game(int n, const Params& params, const Dist& d) {
    if (d.n != n) throw std::invalid_argument("distribution ring size mismatch");
    validate(params);
    Dist out;
    out.n = n;
    out.w.resize(d.w.size());
    const StateIndex size = static_cast<StateIndex>(d.w.size());
    const int workers = (n >= 13) ? thread_count() : 1;
    if (workers <= 1) {
        gather_range(params, d.w, out.w, n, 0, size);
    } else {
        // disjoint destination ranges; each out[y] is a fixed-order sum, so
        // the result does not depend on the partition
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const StateIndex chunk = size / static_cast<StateIndex>(workers) + 1;
        for (int t = 0; t < workers; ++t) {
            const StateIndex lo = std::min<StateIndex>(size, chunk * static_cast<StateIndex>(t));
            const StateIndex hi = std::min<StateIndex>(size, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] { gather_range(params, d.w, out.w, n, lo, hi); });
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

Kernel::Kernel(int n, std::vector<Stage> stages) : n_(n), stages_(std::move(stages)) {}

Kernel Kernel::game_a(int n) {
    validate_ring(n);
    return Kernel(n, {Stage{Game::A, params_a(), 1}});
}

Kernel Kernel::game_b(int n, const Params& p) {
    validate_ring(n);
    validate(p);
    return Kernel(n, {Stage{Game::B, p, 1}});
}

Kernel Kernel::pattern(int n, const Params& p, const Pattern& pat) {
    validate_ring(n);
    validate(p);
    validate(pat);
    return Kernel(n, {Stage{Game::A, params_a(), pat.r}, Stage{Game::B, p, pat.s}});
}

Kernel Kernel::compose(int n, std::vector<Stage> stages) {
    validate_ring(n);
    if (stages.empty()) throw std::invalid_argument("composition needs at least one stage");
    for (auto& st : stages) {
        if (st.count < 1) throw std::invalid_argument("stage count must be >= 1");
        if (st.game == Game::A) {
            st.params = params_a();
        } else {
            validate(st.params);
        }
    }
    return Kernel(n, std::move(stages));
}

bool Kernel::single_stage() const { return stages_.size() == 1 && stages_[0].count == 1; }

int Kernel::steps_per_application() const {
    int total = 0;
    for (const auto& st : stages_) total += st.count;
    return total;
}

Dist Kernel::apply(const Dist& d) const {
    if (d.n != n_) throw std::invalid_argument("distribution ring size mismatch");
    Dist cur = d;
    for (const auto& st : stages_) {
        for (int k = 0; k < st.count; ++k) cur = apply_game(n_, st.params, cur);
    }
    return cur;
}

}  // namespace parrondo
