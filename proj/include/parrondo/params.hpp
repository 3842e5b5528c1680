#pragma once

#include <stdexcept>
#include <string>

namespace parrondo {

// Probability vector (p0,p1,p2,p3) defining game B.  The coin bias used by
// player i is p_m with neighbor code m = 2*x_{i-1} + x_{i+1}; q_m = 1 - p_m
// is always derived, never stored.
struct Params {
    double p0 = 0.5;
    double p1 = 0.5;
    double p2 = 0.5;
    double p3 = 0.5;

    double p(int m) const {
        switch (m) {
            case 0: return p0;
            case 1: return p1;
            case 2: return p2;
            case 3: return p3;
        }
        throw std::invalid_argument("neighbor code must be in {0,1,2,3}, got " +
                                    std::to_string(m));
    }
    double q(int m) const { return 1.0 - p(m); }
    // p_m - q_m, the expected payoff of one game played at neighbor code m
    double payoff(int m) const { return 2.0 * p(m) - 1.0; }
    double pbar() const { return (p0 + p1 + p2 + p3) / 4.0; }

    bool operator==(const Params&) const = default;
};

inline Params params_a() { return Params{0.5, 0.5, 0.5, 0.5}; }

void validate(const Params&);  // throws std::invalid_argument outside [0,1]^4

// (p0,p1,p2,p3) -> (q3,q2,q1,q0); an involution
Params lambda_map(const Params&);

// p_m(gamma) = gamma/2 + (1-gamma) p_m; the random mixture gamma*A + (1-gamma)*B
// played as game B at these parameters.  Requires 0 < gamma < 1.
Params mixed_params(const Params&, double gamma);

// The nonrandom periodic schedule: r plays of game A, then s of game B.
struct Pattern {
    int r = 1;
    int s = 1;

    double gamma() const { return static_cast<double>(r) / (r + s); }
    int length() const { return r + s; }
    bool operator==(const Pattern&) const = default;
};

void validate(const Pattern&);  // throws unless r >= 1 and s >= 1

}  // namespace parrondo
