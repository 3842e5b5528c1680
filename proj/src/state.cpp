#include "parrondo/state.hpp"

#include <stdexcept>
#include <string>

namespace parrondo {

void validate_ring(int n) {
    if (n < kMinRing || n > kMaxRing) {
        throw std::invalid_argument("ring size must be in [" + std::to_string(kMinRing) +
                                    ", " + std::to_string(kMaxRing) + "], got " +
                                    std::to_string(n));
    }
}

void validate_player(int i, int n) {
    if (i < 1 || i > n) {
        throw std::invalid_argument("player index must be in [1, " + std::to_string(n) +
                                    "], got " + std::to_string(i));
    }
}

int neighbor_code(StateIndex x, int i, int n) {
    validate_player(i, n);
    return 2 * player_bit(x, i - 1, n) + player_bit(x, i + 1, n);
}

StateIndex flip_player(StateIndex x, int i, int n) {
    validate_player(i, n);
    return x ^ (StateIndex{1} << (i - 1));
}

StateIndex rotate_players(StateIndex x, int n) {
    // new player i carries the old status of player i+1
    return (x >> 1) | ((x & 1u) << (n - 1));
}

StateIndex reflect_players(StateIndex x, int n) {
    StateIndex y = 0;
    for (int j = 0; j < n; ++j) {
        if (x & (StateIndex{1} << j)) y |= StateIndex{1} << (n - 1 - j);
    }
    return y;
}

std::string to_binary(StateIndex x, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int j = 0; j < n; ++j) {
        if (x & (StateIndex{1} << j)) s[static_cast<std::size_t>(j)] = '1';
    }
    return s;
}

StateIndex from_binary(const std::string& s, int n) {
    if (static_cast<int>(s.size()) != n) {
        throw std::invalid_argument("state string must have length " + std::to_string(n));
    }
    StateIndex x = 0;
    for (int j = 0; j < n; ++j) {
        char c = s[static_cast<std::size_t>(j)];
        if (c == '1') {
            x |= StateIndex{1} << j;
        } else if (c != '0') {
            throw std::invalid_argument("state string must be over {0,1}");
        }
    }
    return x;
}

}  // namespace parrondo
