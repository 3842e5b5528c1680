#include "parrondo/profit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "parrondo/ergodicity.hpp"
#include "parrondo/errors.hpp"

namespace parrondo {

namespace {

constexpr int kMaxDirectRing = 12;
constexpr double kFormulaAgreeTol = 1e-10;

void renormalize(Dist& d) {
    const double s = d.sum();
    for (double& v : d.w) v /= s;
}

// clamp solver noise on (exactly zero) transient-state entries
void clamp_negatives(Dist& d, double floor) {
    for (double& v : d.w) {
        if (v < 0.0) {
            if (v < -floor) {
                throw ConvergenceError("stationary solve produced weight " + std::to_string(v));
            }
            v = 0.0;
        }
    }
}

// lowest-index state in the (unique) closed recurrent class of the kernel
StateIndex recurrent_start(const Kernel& k) {
    const Params* b_params = nullptr;
    for (const auto& st : k.stages()) {
        if (st.game == Game::B) {
            b_params = &st.params;
            break;
        }
    }
    if (b_params == nullptr) return 0;  // pure game A is irreducible
    if (k.single_stage()) {
        const auto support = analyze_game_b_support(k.n(), *b_params);
        if (support.closed_classes != 1) {
            throw NonUniquenessError("game-B chain has " +
                                     std::to_string(support.closed_classes) +
                                     " closed recurrent classes");
        }
        return support.recurrent_state;
    }
    // pattern chains: the recurrent class is the complement of the transient set
    const TransientSet t = classify_transient(k.n(), *b_params);
    for (StateIndex x = 0; x < k.states(); ++x) {
        if (!t.contains(x)) return x;
    }
    throw StructureError("transient set covers the whole space");
}

StationarySolution solve_direct(const Kernel& k, const SolveOptions& opt) {
    const int n = k.n();
    if (n > kMaxDirectRing) {
        throw std::invalid_argument("direct stationary solve is limited to n <= " +
                                    std::to_string(kMaxDirectRing));
    }
    if (k.single_stage() && k.stages()[0].game == Game::B) {
        const auto support = analyze_game_b_support(n, k.stages()[0].params);
        if (support.closed_classes != 1) {
            throw NonUniquenessError("game-B chain has " +
                                     std::to_string(support.closed_classes) +
                                     " closed recurrent classes");
        }
    }

    // pi K = pi with sum(pi) = 1 is the unique solution of
    // (I - K^T + ones) x = 1 when the unit eigenvalue is simple.
    const auto size = static_cast<Eigen::Index>(k.states());
    Eigen::MatrixXd m(size, size);
    m.setOnes();
    m.diagonal().array() += 1.0;
    for (StateIndex x = 0; x < k.states(); ++x) {
        const Dist row = k.apply(Dist::point_mass(n, x));
        for (StateIndex y = 0; y < k.states(); ++y) {
            m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) -= row.w[y];
        }
    }
    Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>> lu(m);  // decompose in place
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(size);
    Eigen::VectorXd sol = lu.solve(b);

    // The factorization overwrote m, but M x = x - (x K) + sum(x) * 1, so the
    // refinement residual comes from one kernel application.
    const auto apply_m = [&](const Eigen::VectorXd& x) {
        Dist dx;
        dx.n = n;
        dx.w.assign(x.data(), x.data() + size);
        const Dist ax = k.apply(dx);
        Eigen::VectorXd r(size);
        const double s = x.sum();
        for (Eigen::Index y = 0; y < size; ++y) {
            r(y) = x(y) - ax.w[static_cast<std::size_t>(y)] + s;
        }
        return r;
    };
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd resid = b - apply_m(sol);
        sol += lu.solve(resid);
    }

    StationarySolution out;
    out.pi.n = n;
    out.pi.w.assign(sol.data(), sol.data() + size);
    clamp_negatives(out.pi, 1e-10);
    renormalize(out.pi);
    out.diag.method = "direct";
    out.diag.iterations = 0;
    out.diag.residual = l1_distance(k.apply(out.pi), out.pi);
    if (!(out.diag.residual <= opt.residual_tol)) {
        throw NonUniquenessError("direct stationary solve residual " +
                                 std::to_string(out.diag.residual) +
                                 "; the chain appears not to be ergodic");
    }
    return out;
}

StationarySolution solve_power(const Kernel& k, const SolveOptions& opt) {
    Dist d1 = Dist::uniform(k.n());
    Dist d2 = Dist::point_mass(k.n(), recurrent_start(k));

    long iterations = 0;
    while (true) {
        if (iterations >= opt.max_iterations) {
            throw ConvergenceError("power iteration exceeded " +
                                   std::to_string(opt.max_iterations) + " applications");
        }
        Dist n1 = k.apply(d1);
        Dist n2 = k.apply(d2);
        ++iterations;
        const double s1 = l1_distance(n1, d1);
        const double s2 = l1_distance(n2, d2);
        d1 = std::move(n1);
        d2 = std::move(n2);
        if (iterations % 256 == 0) {
            renormalize(d1);
            renormalize(d2);
        }
        if (s1 < opt.step_tol && s2 < opt.step_tol) {
            const double cross = l1_distance(d1, d2);
            if (cross >= opt.split_tol) {
                throw NonUniquenessError(
                    "power iteration limits disagree by " + std::to_string(cross) +
                    "; the stationary distribution is not unique");
            }
            if (cross < opt.agree_tol) break;
        }
    }

    StationarySolution out;
    out.pi.n = k.n();
    out.pi.w.resize(d1.w.size());
    for (std::size_t i = 0; i < d1.w.size(); ++i) out.pi.w[i] = 0.5 * (d1.w[i] + d2.w[i]);
    renormalize(out.pi);
    out.diag.method = "power";
    out.diag.iterations = iterations;
    out.diag.residual = l1_distance(k.apply(out.pi), out.pi);
    if (!(out.diag.residual <= opt.residual_tol)) {
        throw ConvergenceError("power iteration stalled at residual " +
                               std::to_string(out.diag.residual));
    }
    return out;
}

double marginal_diff(const Dist& d) {
    const auto [m0, m1] = marginal_1(d, 1);
    return m1 - m0;
}

// stationary distribution supported on one closed recurrent class, embedded
// into the full state space
Dist restricted_stationary(const Kernel& k, const std::vector<StateIndex>& cls) {
    Dist pi;
    pi.n = k.n();
    pi.w.assign(k.states(), 0.0);
    if (cls.size() == 1) {
        pi.w[cls.front()] = 1.0;
        return pi;
    }
    if (cls.size() > (std::size_t{1} << kMaxDirectRing)) {
        throw NonUniquenessError("closed recurrent class too large for a restricted solve");
    }
    const auto size = static_cast<Eigen::Index>(cls.size());
    Eigen::MatrixXd m(size, size);
    m.setOnes();
    m.diagonal().array() += 1.0;
    for (Eigen::Index ix = 0; ix < size; ++ix) {
        const Dist row = k.apply(Dist::point_mass(k.n(), cls[static_cast<std::size_t>(ix)]));
        for (Eigen::Index iy = 0; iy < size; ++iy) {
            m(iy, ix) -= row.w[cls[static_cast<std::size_t>(iy)]];
        }
    }
    const Eigen::VectorXd sol =
        Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>>(m).solve(Eigen::VectorXd::Ones(size));
    for (Eigen::Index ix = 0; ix < size; ++ix) {
        pi.w[cls[static_cast<std::size_t>(ix)]] = std::max(0.0, sol(ix));
    }
    renormalize(pi);
    return pi;
}

// pi P_A^u for u = 0..r and pi P_A^r P_B^v for v = 0..s-1
struct StagedDists {
    std::vector<Dist> after_a;
    std::vector<Dist> after_b;
};

StagedDists stage_distributions(int n, const Params& p, const Pattern& pat, const Dist& pi) {
    StagedDists st;
    st.after_a.reserve(static_cast<std::size_t>(pat.r) + 1);
    st.after_a.push_back(pi);
    for (int u = 0; u < pat.r; ++u) {
        st.after_a.push_back(apply_game(n, params_a(), st.after_a.back()));
    }
    st.after_b.reserve(static_cast<std::size_t>(pat.s));
    st.after_b.push_back(st.after_a.back());
    for (int v = 1; v < pat.s; ++v) {
        st.after_b.push_back(apply_game(n, p, st.after_b.back()));
    }
    return st;
}

double marginal13_payoff(const Params& p, const Dist& d) {
    const Marginal13 t = marginal_13(d);
    double acc = 0.0;
    for (int m = 0; m < 4; ++m) acc += t.v[static_cast<std::size_t>(m)] * p.payoff(m);
    return acc;
}

void check_agreement(const std::map<std::string, double>& values) {
    for (auto it = values.begin(); it != values.end(); ++it) {
        for (auto jt = std::next(it); jt != values.end(); ++jt) {
            if (std::abs(it->second - jt->second) > kFormulaAgreeTol) {
                throw ConsistencyError(it->first + "=" + std::to_string(it->second) + " and " +
                                       jt->first + "=" + std::to_string(jt->second) +
                                       " disagree beyond " + std::to_string(kFormulaAgreeTol));
            }
        }
    }
}

}  // namespace

StationarySolution stationary(const Kernel& k, const SolveOptions& opt) {
    switch (opt.method) {
        case SolveMethod::Direct:
            return solve_direct(k, opt);
        case SolveMethod::Power:
            return solve_power(k, opt);
        case SolveMethod::Auto:
            return k.n() <= kMaxDirectRing ? solve_direct(k, opt) : solve_power(k, opt);
    }
    throw std::invalid_argument("unknown solve method");
}

double payoff_average(const Params& p, const Dist& d) {
    validate(p);
    const int n = d.n;
    validate_ring(n);
    double weights[8];
    for (int c = 0; c < 8; ++c) {
        const int m = ((c >> 2) << 1) | (c & 1);
        weights[c] = p.payoff(m) / n;
    }
    double acc = 0.0;
    for (StateIndex x = 0; x < d.w.size(); ++x) {
        const std::uint64_t ext = (static_cast<std::uint64_t>(x) << n) | x;
        double f = 0.0;
        for (int j = 0; j < n; ++j) {
            const int c = static_cast<int>(((ext >> (j + n - 1)) & 1) << 2 |
                                           ((ext >> j) & 1) << 1 | ((ext >> (j + 1)) & 1));
            f += weights[c];
        }
        acc += d.w[x] * f;
    }
    return acc;
}

namespace {

// When game B has several closed recurrent classes, the long-run profit is
// still well defined provided every class yields the same mean payoff (the
// time average then does not depend on where the chain gets absorbed; the
// p0=1, p3=0 family at even N is the prominent example, with two absorbing
// checkerboards both worth 0 per turn).  The reported distribution is the
// equal-weight mixture of the class stationary distributions, which inherits
// the rotation invariance of the kernel.
ProfitReport mu_b_class_average(int n, const Params& p) {
    const auto classes = game_b_closed_classes(n, p);
    const Kernel k = Kernel::game_b(n, p);
    Dist mixture;
    mixture.n = n;
    mixture.w.assign(k.states(), 0.0);
    double first_mu = 0.0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const Dist pi_c = restricted_stationary(k, classes[c]);
        const double mu_c = payoff_average(p, pi_c);
        if (c == 0) {
            first_mu = mu_c;
        } else if (std::abs(mu_c - first_mu) > kFormulaAgreeTol) {
            throw NonUniquenessError(
                "stationary distribution is not unique and the closed classes yield "
                "different mean payoffs (" +
                std::to_string(first_mu) + " vs " + std::to_string(mu_c) + ")");
        }
        for (std::size_t i = 0; i < mixture.w.size(); ++i) {
            mixture.w[i] += pi_c.w[i] / static_cast<double>(classes.size());
        }
    }
    ProfitReport rep;
    rep.solver.method = "class_average";
    rep.solver.iterations = 0;
    rep.solver.residual = l1_distance(k.apply(mixture), mixture);
    rep.per_formula["mu1"] = payoff_average(p, mixture);
    rep.per_formula["mu2"] = marginal13_payoff(p, mixture);
    check_agreement(rep.per_formula);
    rep.mu = rep.per_formula["mu1"];
    return rep;
}

}  // namespace

ProfitReport mu_b(int n, const Params& p, const SolveOptions& opt) {
    validate_ring(n);
    validate(p);
    try {
        const auto sol = stationary(Kernel::game_b(n, p), opt);
        ProfitReport rep;
        rep.solver = sol.diag;
        rep.per_formula["mu1"] = payoff_average(p, sol.pi);
        rep.per_formula["mu2"] = marginal13_payoff(p, sol.pi);
        check_agreement(rep.per_formula);
        rep.mu = rep.per_formula["mu1"];
        return rep;
    } catch (const NonUniquenessError&) {
        return mu_b_class_average(n, p);
    }
}

ProfitReport mu_mixed(int n, const Params& p, double gamma, const SolveOptions& opt) {
    return mu_b(n, mixed_params(p, gamma), opt);
}

ProfitReport mu_pattern(int n, const Params& p, const Pattern& pat, MuFormula formula,
                        const SolveOptions& opt) {
    validate_ring(n);
    validate(p);
    validate(pat);
    if (formula == MuFormula::Mu4 && pat.s != 1) {
        throw std::invalid_argument("mu4 requires s = 1");
    }

    const auto sol = stationary(Kernel::pattern(n, p, pat), opt);
    const StagedDists st = stage_distributions(n, p, pat, sol.pi);
    const double len = pat.length();

    ProfitReport rep;
    rep.solver = sol.diag;

    const bool all = formula == MuFormula::All;
    if (all || formula == MuFormula::Mu1) {
        double acc = 0.0;
        for (const Dist& d : st.after_b) acc += payoff_average(p, d);
        rep.per_formula["mu1"] = acc / len;
    }
    if (all || formula == MuFormula::Mu2) {
        double acc = 0.0;
        for (const Dist& d : st.after_b) acc += marginal13_payoff(p, d);
        rep.per_formula["mu2"] = acc / len;
    }
    if (all || formula == MuFormula::Mu3) {
        double acc = 0.0;
        for (int u = 0; u < pat.r; ++u) acc += marginal_diff(st.after_a[static_cast<std::size_t>(u)]);
        for (const Dist& d : st.after_b) acc += marginal_diff(d);
        rep.per_formula["mu3"] = acc / len;
    }
    if ((all && pat.s == 1) || formula == MuFormula::Mu4) {
        const double frac = 1.0 - 1.0 / n;
        const double prefactor = n * (1.0 - std::pow(frac, pat.r + 1)) /
                                 ((pat.r + 1) * std::pow(frac, pat.r));
        rep.per_formula["mu4"] = prefactor * marginal_diff(st.after_a.back());
    }
    check_agreement(rep.per_formula);
    rep.mu = rep.per_formula.begin()->second;
    return rep;
}

double mu_r1_closed_form(int n, const Params& p, int r, const SolveOptions& opt) {
    validate_ring(n);
    validate(p);
    if (r < 1) throw std::invalid_argument("r must be >= 1");
    if (!(p.p0 == 1.0 && p.p3 == 0.0 && p.p1 == p.p2)) {
        throw std::invalid_argument("closed form requires p0=1, p1=p2, p3=0");
    }
    const auto sol = stationary(Kernel::pattern(n, p, Pattern{r, 1}), opt);
    Dist d = sol.pi;
    for (int u = 0; u < r; ++u) d = apply_game(n, params_a(), d);
    const Marginal13 t = marginal_13(d);
    const double frac = 1.0 - 1.0 / n;
    const double correction = std::pow(frac, r) / (n * (1.0 - std::pow(frac, r + 1)));
    return 2.0 * (2.0 * p.p1 - 1.0) / (r + 1) / (1.0 + correction) * t.at(0, 1);
}

}  // namespace parrondo
