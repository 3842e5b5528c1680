#include "parrondo/dist.hpp"

#include <cmath>
#include <stdexcept>

namespace parrondo {

Dist Dist::uniform(int n) {
    validate_ring(n);
    Dist d;
    d.n = n;
    d.w.assign(state_count(n), 1.0 / static_cast<double>(state_count(n)));
    return d;
}

Dist Dist::point_mass(int n, StateIndex x) {
    validate_ring(n);
    if (x >= state_count(n)) throw std::invalid_argument("state out of range");
    Dist d;
    d.n = n;
    d.w.assign(state_count(n), 0.0);
    d.w[x] = 1.0;
    return d;
}

double Dist::sum() const {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
}

double l1_distance(const Dist& a, const Dist& b) {
    if (a.n != b.n) throw std::invalid_argument("distribution sizes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.w.size(); ++i) s += std::abs(a.w[i] - b.w[i]);
    return s;
}

std::pair<double, double> marginal_1(const Dist& d, int site) {
    validate_player(site, d.n);
    const StateIndex mask = StateIndex{1} << (site - 1);
    double m0 = 0.0, m1 = 0.0;
    for (StateIndex x = 0; x < d.w.size(); ++x) {
        if (x & mask) {
            m1 += d.w[x];
        } else {
            m0 += d.w[x];
        }
    }
    return {m0, m1};
}

Marginal13 marginal_13(const Dist& d) {
    validate_ring(d.n);  // needs n >= 3 so that sites 1 and 3 are distinct
    Marginal13 t;
    for (StateIndex x = 0; x < d.w.size(); ++x) {
        int w1 = static_cast<int>(x & 1u);
        int z3 = static_cast<int>((x >> 2) & 1u);
        t.v[static_cast<std::size_t>(2 * w1 + z3)] += d.w[x];
    }
    return t;
}

}  // namespace parrondo
