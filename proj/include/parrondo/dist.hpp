#pragma once

#include <array>
#include <utility>
#include <vector>

#include "parrondo/state.hpp"

namespace parrondo {

// Probability vector over the 2^N ring states.
struct Dist {
    int n = 0;
    std::vector<double> w;

    static Dist uniform(int n);
    static Dist point_mass(int n, StateIndex x);

    std::size_t size() const { return w.size(); }
    double sum() const;
};

double l1_distance(const Dist&, const Dist&);

// Joint law of (x_1, x_3) under a distribution; at(w, z) = P(x_1 = w, x_3 = z).
struct Marginal13 {
    std::array<double, 4> v{};

    double at(int w, int z) const { return v[2 * w + z]; }
    double sum() const { return v[0] + v[1] + v[2] + v[3]; }
};

// (mass at 0, mass at 1) of the given player's status
std::pair<double, double> marginal_1(const Dist&, int site);

Marginal13 marginal_13(const Dist&);

}  // namespace parrondo
