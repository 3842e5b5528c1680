#pragma once

#include <map>
#include <string>

#include "parrondo/dist.hpp"
#include "parrondo/kernel.hpp"
#include "parrondo/params.hpp"

namespace parrondo {

enum class SolveMethod { Auto, Direct, Power };

struct SolveOptions {
    SolveMethod method = SolveMethod::Auto;  // Auto: direct for n<=12, power above
    long max_iterations = 10'000'000;
    double step_tol = 1e-13;    // successive-iterate L1 distance
    double agree_tol = 1e-11;   // required agreement of the two power starts
    double split_tol = 1e-9;    // stable disagreement beyond this => not unique
    double residual_tol = 1e-12;
};

struct SolverDiagnostics {
    std::string method;     // "direct" or "power"
    long iterations = 0;
    double residual = 0.0;  // ||pi K - pi||_1 of the returned distribution
};

struct StationarySolution {
    Dist pi;
    SolverDiagnostics diag;
};

// The unique stationary distribution of the kernel.
//
// Direct method (n <= 12): dense solve of the balance equations with the
// normalization constraint folded in; for single-step kernels the uniqueness
// of the closed recurrent class is verified on the support graph first.
// Power method: iterates d <- d*K from the uniform distribution and from a
// point mass at a recurrent state until both stall (successive L1 < step_tol)
// and agree within agree_tol; stable disagreement >= split_tol throws
// NonUniquenessError, exceeding max_iterations throws ConvergenceError.
StationarySolution stationary(const Kernel&, const SolveOptions& = {});

struct ProfitReport {
    double mu = 0.0;                             // units won per game played
    std::map<std::string, double> per_formula;   // "mu1","mu2","mu3","mu4"
    SolverDiagnostics solver;
};

enum class MuFormula { Mu1, Mu2, Mu3, Mu4, All };

// sum_x d(x) * (1/N) sum_i (p_{m_i(x)} - q_{m_i(x)})
double payoff_average(const Params&, const Dist&);

// Mean profit per turn when all games are game B.
ProfitReport mu_b(int n, const Params&, const SolveOptions& = {});

// Mean profit per turn of the random mixture gamma*A + (1-gamma)*B, computed
// via game B at the mapped parameters p_m(gamma).
ProfitReport mu_mixed(int n, const Params&, double gamma, const SolveOptions& = {});

// Mean profit per turn of the periodic pattern A^r B^s.  Mu4 requires s = 1.
// With MuFormula::All every applicable formula is computed and they must
// agree within 1e-10 (else ConsistencyError).
ProfitReport mu_pattern(int n, const Params&, const Pattern&, MuFormula = MuFormula::All,
                        const SolveOptions& = {});

// Closed form for the [r,1] pattern at p0=1, p1=p2, p3=0 (throws
// std::invalid_argument off that family).
double mu_r1_closed_form(int n, const Params&, int r, const SolveOptions& = {});

}  // namespace parrondo
