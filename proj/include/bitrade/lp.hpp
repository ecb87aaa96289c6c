#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitrade/core.hpp"
#include "bitrade/families.hpp"
#include "bitrade/mechanisms.hpp"
#include "bitrade/rational.hpp"
#include "bitrade/simplex.hpp"

namespace bitrade {

enum class SolveMode { exact_rational, float_with_tolerance };

inline std::string to_string(SolveMode m) {
    return m == SolveMode::exact_rational ? "exact" : "float";
}

/// Linear program over one outcome distribution per chain profile plus a
/// scalar ratio variable alpha. Columns p*(M+1)+i hold r_i of profile p;
/// the last column is alpha. Rows: a simplex equality per profile, a ratio
/// constraint per profile (expected total gain >= alpha * OPT), and one
/// inequality per deviation edge (the deviating side's truthful expected
/// utility, at its true vector, is at least what the edge's misreport earns
/// it). Nonnegativity of all columns, alpha included, is built into the
/// solver. The no-trade assignment with alpha = 0 always satisfies every
/// row, so the program is feasible by construction.
struct BoundLp {
    DeviationChain chain;
    LpProblem<Rat> problem;
    std::size_t vars_per_profile = 0;
    std::size_t alpha_index = 0;
    std::vector<Rat> opt_values;  // OPT per profile, in profile order
};

/// Bound certificate data. `theoretical_bound` is 1/M for the general family
/// and 1/H_M for the submodular family; `slack_budget` = 2*eps + M/L covers
/// the eps slack of the induction plus the finite-scaling slack.
struct BoundReport {
    ChainFamily family = ChainFamily::general;
    int M = 0;
    Rat eps;
    Rat L;
    SolveMode mode = SolveMode::exact_rational;
    Rat alpha_star;
    Rat theoretical_bound;
    Rat slack_budget;
    bool pass = false;
    std::vector<OutcomeDistribution> assignment;  // exact mode only
    std::size_t pivots = 0;
};

inline Rat theoretical_bound(ChainFamily family, int M) {
    return family == ChainFamily::general ? Rat(1, M) : Rat(1) / harmonic(M);
}

inline Rat slack_budget(int M, const Rat& eps, const Rat& L) {
    return 2 * eps + Rat(M) / L;
}

inline BoundLp build_lp(const DeviationChain& chain) {
    validate_chain(chain);
    BoundLp lp;
    lp.chain = chain;
    lp.vars_per_profile = static_cast<std::size_t>(chain.M) + 1;
    const std::size_t P = chain.profiles.size();
    lp.alpha_index = P * lp.vars_per_profile;
    lp.problem.num_vars = lp.alpha_index + 1;
    lp.problem.objective.assign(lp.problem.num_vars, Rat(0));
    lp.problem.objective[lp.alpha_index] = 1;

    const auto var = [&](std::size_t profile, int option) {
        return profile * lp.vars_per_profile + static_cast<std::size_t>(option);
    };

    for (std::size_t p = 0; p < P; ++p) {
        const Instance& inst = chain.profiles[p].instance;

        std::vector<Rat> simplex_row(lp.problem.num_vars, Rat(0));
        for (int i = 0; i <= chain.M; ++i) simplex_row[var(p, i)] = 1;
        lp.problem.add_row(std::move(simplex_row), Relation::eq, Rat(1));

        const Rat opt = opt_gain(inst).value;
        lp.opt_values.push_back(opt);
        std::vector<Rat> ratio_row(lp.problem.num_vars, Rat(0));
        for (int i = 1; i <= chain.M; ++i)
            ratio_row[var(p, i)] =
                inst.buyer[static_cast<std::size_t>(i - 1)] + inst.seller[static_cast<std::size_t>(i - 1)];
        ratio_row[lp.alpha_index] = -opt;
        lp.problem.add_row(std::move(ratio_row), Relation::ge, Rat(0));
    }

    const auto add_edge_row = [&](const DeviationEdge& e, bool buyer) {
        const Instance& truth = chain.profiles[e.truth].instance;
        const auto& v = buyer ? truth.buyer : truth.seller;
        std::vector<Rat> row(lp.problem.num_vars, Rat(0));
        for (int i = 1; i <= chain.M; ++i) {
            row[var(e.truth, i)] += v[static_cast<std::size_t>(i - 1)];
            row[var(e.report, i)] -= v[static_cast<std::size_t>(i - 1)];
        }
        lp.problem.add_row(std::move(row), Relation::ge, Rat(0));
    };
    for (const auto& e : chain.buyer_edges) add_edge_row(e, true);
    for (const auto& e : chain.seller_edges) add_edge_row(e, false);

    return lp;
}

/// True iff the given per-profile distributions together with `alpha`
/// satisfy every LP row exactly.
inline bool lp_assignment_feasible(const BoundLp& lp, const std::vector<OutcomeDistribution>& assignment,
                                   const Rat& alpha) {
    if (assignment.size() != lp.chain.profiles.size()) return false;
    std::vector<Rat> x(lp.problem.num_vars, Rat(0));
    for (std::size_t p = 0; p < assignment.size(); ++p) {
        if (assignment[p].options() != lp.chain.M) return false;
        for (int i = 0; i <= lp.chain.M; ++i)
            x[p * lp.vars_per_profile + static_cast<std::size_t>(i)] =
                assignment[p].probs[static_cast<std::size_t>(i)];
    }
    x[lp.alpha_index] = alpha;
    for (const auto& row : lp.problem.rows) {
        Rat lhs(0);
        for (std::size_t j = 0; j < x.size(); ++j)
            if (row.coeffs[j] != 0 && x[j] != 0) lhs += row.coeffs[j] * x[j];
        switch (row.rel) {
            case Relation::eq:
                if (lhs != row.rhs) return false;
                break;
            case Relation::ge:
                if (lhs < row.rhs) return false;
                break;
            case Relation::le:
                if (lhs > row.rhs) return false;
                break;
        }
    }
    return true;
}

/// Evaluates a mechanism on every chain profile, giving a candidate LP
/// assignment.
inline std::vector<OutcomeDistribution> mechanism_assignment(const Mechanism& mech,
                                                             const DeviationChain& chain) {
    std::vector<OutcomeDistribution> out;
    out.reserve(chain.profiles.size());
    for (const auto& p : chain.profiles) out.push_back(mech(p.instance));
    return out;
}

namespace detail {

inline LpProblem<double> to_float_problem(const LpProblem<Rat>& exact) {
    LpProblem<double> out;
    out.num_vars = exact.num_vars;
    out.objective.reserve(exact.objective.size());
    for (const auto& c : exact.objective) out.objective.push_back(static_cast<double>(c));
    for (const auto& row : exact.rows) {
        std::vector<double> coeffs(row.coeffs.size());
        double scale = 0.0;
        for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
            coeffs[j] = static_cast<double>(row.coeffs[j]);
            scale = std::max(scale, std::abs(coeffs[j]));
        }
        // Row equilibration keeps the pivot tolerance meaningful across the
        // wide magnitude range of chain coefficients.
        if (scale > 0.0)
            for (auto& c : coeffs) c /= scale;
        const double rhs = scale > 0.0 ? static_cast<double>(row.rhs) / scale
                                       : static_cast<double>(row.rhs);
        out.add_row(std::move(coeffs), row.rel, rhs);
    }
    return out;
}

}  // namespace detail

/// Maximizes alpha over the chain LP. Exact mode returns the exact rational
/// optimum together with a maximizing assignment; float mode is a cross-check
/// within solver tolerance and reports alpha only.
inline BoundReport solve_lp(const BoundLp& lp, SolveMode mode = SolveMode::exact_rational) {
    BoundReport report;
    report.family = lp.chain.family;
    report.M = lp.chain.M;
    report.eps = lp.chain.eps;
    report.L = lp.chain.L;
    report.mode = mode;
    report.theoretical_bound = theoretical_bound(lp.chain.family, lp.chain.M);
    report.slack_budget = slack_budget(lp.chain.M, lp.chain.eps, lp.chain.L);

    if (mode == SolveMode::exact_rational) {
        const auto solution = solve_simplex(lp.problem, ExactPolicy{});
        if (solution.status != LpStatus::optimal)
            throw std::logic_error("bound LP must have a finite optimum (it is feasible and alpha <= 1)");
        report.alpha_star = solution.x[lp.alpha_index];
        report.pivots = solution.pivots;
        for (std::size_t p = 0; p < lp.chain.profiles.size(); ++p) {
            std::vector<Rat> probs(lp.vars_per_profile);
            for (std::size_t i = 0; i < lp.vars_per_profile; ++i)
                probs[i] = solution.x[p * lp.vars_per_profile + i];
            report.assignment.emplace_back(std::move(probs));
        }
    } else {
        // Pivot in doubles on row-equilibrated data, then certify the final
        // basis in exact arithmetic. Chain coefficients span many orders of
        // magnitude, so an uncertified floating answer would be worthless.
        const auto fail = [] {
            return std::runtime_error(
                "float-mode LP solve failed numerically; rerun in exact-rational mode");
        };
        const auto float_problem = detail::to_float_problem(lp.problem);
        const FloatPolicy policy{1e-12};
        SimplexSolver<double, FloatPolicy> solver(standardize(float_problem, policy), policy, 200000);
        const auto solution = solver.solve(float_problem.objective);
        if (solution.status != LpStatus::optimal || solution.rows_dropped) throw fail();
        const auto certified =
            evaluate_basis_exact(standardize(lp.problem, ExactPolicy{}), lp.problem.objective,
                                 solution.basis);
        if (!certified) throw fail();
        report.alpha_star = certified->x[lp.alpha_index];
        report.pivots = solution.pivots;
    }
    report.pass = report.alpha_star >= report.theoretical_bound &&
                  report.alpha_star <= report.theoretical_bound + report.slack_budget;
    return report;
}

/// Builds the family's chain, asserts the mechanism-side feasibility floor
/// (the uniform rule on the general chain, the decreasing rule on the
/// submodular chain, each IR-vetoed, satisfies every constraint at its own
/// guarantee), then solves and brackets alpha*.
inline BoundReport verify_upper_bound(int M, const Rat& eps, const Rat& L, ChainFamily family,
                                      SolveMode mode = SolveMode::exact_rational) {
    const DeviationChain chain = family == ChainFamily::general ? general_chain(M, eps, L)
                                                                : submodular_chain(M, eps, L);
    const BoundLp lp = build_lp(chain);

    const Mechanism floor_mech =
        family == ChainFamily::general ? uniform_random(M) : decreasing_random(M);
    const Rat bound = theoretical_bound(family, M);
    if (!lp_assignment_feasible(lp, mechanism_assignment(floor_mech, chain), bound))
        throw std::logic_error("feasibility floor violated: " + floor_mech.name +
                               " does not satisfy its own chain LP at alpha = " +
                               format_rational(bound));

    return solve_lp(lp, mode);
}

}  // namespace bitrade
