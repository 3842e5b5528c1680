#pragma once

#include <cstdint>
#include <string>

namespace parrondo {

// One configuration of the N players' win/loss statuses.  Player i (1-based)
// occupies bit i-1; the ring is cyclic, so player 0 means player N and player
// N+1 means player 1.
using StateIndex = std::uint32_t;

inline constexpr int kMinRing = 3;
inline constexpr int kMaxRing = 18;

void validate_ring(int n);               // throws outside [kMinRing, kMaxRing]
void validate_player(int i, int n);      // throws unless 1 <= i <= n

inline std::size_t state_count(int n) { return std::size_t{1} << n; }

// Status bit of player i, with cyclic wrap for i = 0, -1, n+1, ...
inline int player_bit(StateIndex x, int i, int n) {
    int j = (i - 1) % n;
    if (j < 0) j += n;
    return static_cast<int>((x >> j) & 1u);
}

// m_i(x) = 2*x_{i-1} + x_{i+1}
int neighbor_code(StateIndex x, int i, int n);

// x with the status of player i toggled; an involution
StateIndex flip_player(StateIndex x, int i, int n);

// Relabels player i as player i+1 (one rotation step of the ring).
StateIndex rotate_players(StateIndex x, int n);

// Order-reversing relabeling: player i becomes player n+1-i.
StateIndex reflect_players(StateIndex x, int n);

// "x_1 x_2 ... x_N" rendered left to right, e.g. 001001 for n=6
std::string to_binary(StateIndex x, int n);
StateIndex from_binary(const std::string&, int n);

}  // namespace parrondo
