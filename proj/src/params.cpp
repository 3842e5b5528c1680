#include "parrondo/params.hpp"

#include <cmath>

namespace parrondo {

void validate(const Params& p) {
    for (int m = 0; m < 4; ++m) {
        double v = p.p(m);
        if (!(v >= 0.0 && v <= 1.0)) {  // also rejects NaN
            throw std::invalid_argument("p" + std::to_string(m) +
                                        " must lie in [0,1], got " + std::to_string(v));
        }
    }
}

Params lambda_map(const Params& p) {
    return Params{1.0 - p.p3, 1.0 - p.p2, 1.0 - p.p1, 1.0 - p.p0};
}

Params mixed_params(const Params& p, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie in (0,1), got " + std::to_string(gamma));
    }
    auto map = [&](double pm) { return gamma * 0.5 + (1.0 - gamma) * pm; };
    return Params{map(p.p0), map(p.p1), map(p.p2), map(p.p3)};
}

void validate(const Pattern& pat) {
    if (pat.r < 1 || pat.s < 1) {
        throw std::invalid_argument("pattern requires r >= 1 and s >= 1, got r=" +
                                    std::to_string(pat.r) + " s=" + std::to_string(pat.s));
    }
}

}  // namespace parrondo
