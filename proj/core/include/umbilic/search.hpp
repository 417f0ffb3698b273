#ifndef UMBILIC_SEARCH_HPP
#define UMBILIC_SEARCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "umbilic/expr.hpp"
#include "umbilic/nogo.hpp"
#include "umbilic/surfaces.hpp"

namespace umbilic {

/// Basis of real harmonic polynomials {1, Re z, Im z, ..., Re z^d, Im z^d},
/// z = u + iv, as expression trees (2d+1 of them). Degree is capped at 8 for
/// conditioning. Every instance of the span is harmonic by construction.
std::vector<ExprPtr> harmonic_basis(int degree);

inline constexpr int kMaxHarmonicDegree = 8;

/// E = sum_k coeffs[k] * basis_k. coeffs[0] multiplies the constant, then
/// alternating Re/Im coefficients per degree.
struct HarmonicAnsatz {
    int degree = 0;
    std::vector<double> coeffs;  // size 2*degree + 1
};

struct SearchConfig {
    int degree = 2;
    GridSpec grid{};
    Domain domain = kDefaultDomain;
    int restarts = 20;
    std::uint64_t seed = 42;
    double eps_pos = 0.5;          // positivity floor on E
    double eps_c = 0.1;            // floor on |c|; keeps the search away from c = 0
    double penalty_weight = 1000.0;
    int max_iterations = 500;      // per restart
    double init_damping = 1e-3;

    bool operator==(const SearchConfig&) const = default;
};

struct RestartTrace {
    int restart_index = 0;
    double initial_cost = 0;
    double final_cost = 0;
    double final_objective = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> accepted_costs;  // non-increasing by the LM acceptance rule

    bool operator==(const RestartTrace&) const = default;
};

struct SearchResult {
    SearchConfig config;
    std::vector<double> best_coeffs;
    double best_c = 0;
    double best_objective = 0;
    int best_restart = 0;
    int total_iterations = 0;
    std::vector<RestartTrace> restarts;

    bool operator==(const SearchResult&) const = default;
};

/// Normalized residual floor for a candidate (E, c):
///   max over grid of |2c^2 E^3 - |grad E|^2| / (1 + 2c^2 E^3 + |grad E|^2)
/// plus quadratic hinge penalties for E < eps_pos and |c| < eps_c. The floors
/// make the falsification quantitative: without them the search collapses to
/// the trivial c -> 0 branch.
double search_objective(const HarmonicAnsatz& ansatz, double c, const GridSpec& grid,
                        const Domain& domain, double eps_pos, double eps_c,
                        double penalty_weight);

/// Multi-restart Levenberg-Marquardt descent on the residual vector (one
/// normalized r8 row per grid point plus penalty rows). Jacobians are exact:
/// E is linear in the coefficients, with basis values and gradients supplied
/// by the jet machinery. Deterministic for a fixed (config, seed).
SearchResult falsify(const SearchConfig& config);

/// The candidate's conformal factor as a field (no positivity gate; the
/// certifier reports violations itself).
MetricField ansatz_metric_field(const HarmonicAnsatz& ansatz, const Domain& domain,
                                const GridSpec& grid, std::string name);

}  // namespace umbilic

#endif
