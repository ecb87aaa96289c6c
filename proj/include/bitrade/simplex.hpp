#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bitrade/rational.hpp"

namespace bitrade {

enum class Relation { eq, ge, le };
enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

/// maximize objective . x  subject to the rows, x >= 0.
template <class T>
struct LpProblem {
    std::size_t num_vars = 0;
    std::vector<T> objective;

    struct Row {
        std::vector<T> coeffs;
        Relation rel;
        T rhs;
    };
    std::vector<Row> rows;

    void add_row(std::vector<T> coeffs, Relation rel, T rhs) {
        if (coeffs.size() != num_vars) throw std::invalid_argument("lp row: wrong width");
        rows.push_back({std::move(coeffs), rel, std::move(rhs)});
    }
};

template <class T>
struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    T value{};
    std::vector<T> x;
    std::vector<std::size_t> basis;  // standard-form column per remaining row
    bool rows_dropped = false;       // redundant equalities removed in phase 1
    std::size_t pivots = 0;
};

/// Sign tests for exact scalars.
struct ExactPolicy {
    bool pos(const Rat& v) const { return v > 0; }
    bool neg(const Rat& v) const { return v < 0; }
    bool zero(const Rat& v) const { return v == 0; }
};

/// Sign tests with an absolute tolerance, for floating-point pivoting.
struct FloatPolicy {
    double tol = 1e-12;
    bool pos(double v) const { return v > tol; }
    bool neg(double v) const { return v < -tol; }
    bool zero(double v) const { return std::abs(v) <= tol; }
};

/// Equality form A x = b, x >= 0 with slack/surplus columns appended and
/// artificial columns last. Produced deterministically from an LpProblem, so
/// exact and floating instantiations of the same problem share the column
/// layout.
template <class T>
struct StandardForm {
    std::size_t structural = 0;        // original variable count
    std::size_t cols = 0;              // structural + slack/surplus + artificial
    std::size_t first_artificial = 0;  // == cols when no artificials
    std::vector<std::vector<T>> rows;
    std::vector<T> rhs;                // nonnegative
    std::vector<std::size_t> initial_basis;
};

template <class T, class Policy>
StandardForm<T> standardize(const LpProblem<T>& problem, Policy policy) {
    const std::size_t n = problem.num_vars;
    struct Prepared {
        std::vector<T> coeffs;
        T rhs;
        Relation rel;
    };
    std::vector<Prepared> prep;
    prep.reserve(problem.rows.size());
    for (const auto& row : problem.rows) {
        Prepared p{row.coeffs, row.rhs, row.rel};
        if (policy.neg(p.rhs) || (p.rel == Relation::ge && policy.zero(p.rhs))) {
            for (auto& c : p.coeffs) c = -c;
            p.rhs = -p.rhs;
            if (p.rel == Relation::ge) p.rel = Relation::le;
            else if (p.rel == Relation::le) p.rel = Relation::ge;
        }
        prep.push_back(std::move(p));
    }

    std::size_t slack_count = 0, artificial_count = 0;
    for (const auto& p : prep) {
        if (p.rel != Relation::eq) ++slack_count;
        if (p.rel != Relation::le) ++artificial_count;
    }

    StandardForm<T> sf;
    sf.structural = n;
    sf.first_artificial = n + slack_count;
    sf.cols = sf.first_artificial + artificial_count;
    std::size_t slack = n;
    std::size_t artificial = sf.first_artificial;
    for (const auto& p : prep) {
        std::vector<T> row(sf.cols, T(0));
        for (std::size_t j = 0; j < n; ++j) row[j] = p.coeffs[j];
        switch (p.rel) {
            case Relation::le:
                row[slack] = T(1);
                sf.initial_basis.push_back(slack++);
                break;
            case Relation::ge:
                row[slack++] = T(-1);
                row[artificial] = T(1);
                sf.initial_basis.push_back(artificial++);
                break;
            case Relation::eq:
                row[artificial] = T(1);
                sf.initial_basis.push_back(artificial++);
                break;
        }
        sf.rows.push_back(std::move(row));
        sf.rhs.push_back(p.rhs);
    }
    return sf;
}

/// Dense two-phase primal simplex on a standard form. The entering rule is
/// steepest reduced cost; after a run of degenerate pivots it switches to
/// Bland's rule, which cannot cycle, so termination is guaranteed in exact
/// arithmetic.
template <class T, class Policy>
class SimplexSolver {
public:
    SimplexSolver(const StandardForm<T>& sf, Policy policy, std::size_t max_pivots = 100000)
        : policy_(policy), max_pivots_(max_pivots), structural_(sf.structural),
          cols_(sf.cols), first_artificial_(sf.first_artificial), basis_(sf.initial_basis) {
        rows_ = sf.rows.size();
        tab_.assign(rows_, std::vector<T>(cols_ + 1, T(0)));
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t j = 0; j < cols_; ++j) tab_[r][j] = sf.rows[r][j];
            tab_[r][cols_] = sf.rhs[r];
        }
    }

    LpSolution<T> solve(const std::vector<T>& structural_objective) {
        LpSolution<T> result;
        if (first_artificial_ < cols_) {
            std::vector<T> phase1(cols_, T(0));
            for (std::size_t j = first_artificial_; j < cols_; ++j) phase1[j] = T(-1);
            in_phase1_ = true;
            if (!run_phase(phase1, result)) return result;
            if (!policy_.zero(objective_value(phase1))) {
                result.status = LpStatus::infeasible;
                return result;
            }
            result.rows_dropped = evict_artificials();
        }
        in_phase1_ = false;
        std::vector<T> objective(cols_, T(0));
        for (std::size_t j = 0; j < structural_; ++j) objective[j] = structural_objective[j];
        if (!run_phase(objective, result)) return result;
        result.status = LpStatus::optimal;
        result.value = objective_value(objective);
        result.x.assign(structural_, T(0));
        for (std::size_t r = 0; r < rows_; ++r)
            if (basis_[r] < structural_) result.x[basis_[r]] = tab_[r][cols_];
        result.basis = basis_;
        result.pivots = pivots_;
        return result;
    }

private:
    /// Reduced cost of column j for a maximization objective.
    T reduced_cost(const std::vector<T>& objective, std::size_t j) const {
        T z(0);
        for (std::size_t r = 0; r < rows_; ++r) {
            const T& c = objective[basis_[r]];
            if (!policy_.zero(c)) z += c * tab_[r][j];
        }
        return objective[j] - z;
    }

    T objective_value(const std::vector<T>& objective) const {
        T v(0);
        for (std::size_t r = 0; r < rows_; ++r) {
            const T& c = objective[basis_[r]];
            if (!policy_.zero(c)) v += c * tab_[r][cols_];
        }
        return v;
    }

    /// Returns false when the phase ends without an optimum (status set).
    bool run_phase(const std::vector<T>& objective, LpSolution<T>& result) {
        std::size_t degenerate_run = 0;
        bool bland = false;
        while (true) {
            if (pivots_ >= max_pivots_) {
                result.status = LpStatus::iteration_limit;
                return false;
            }
            std::size_t enter = cols_;
            T best_cost(0);
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!in_phase1_ && j >= first_artificial_) break;
                T cost = reduced_cost(objective, j);
                if (!policy_.pos(cost)) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (enter == cols_ || cost > best_cost) {
                    enter = j;
                    best_cost = std::move(cost);
                }
            }
            if (enter == cols_) return true;  // optimal for this phase

            std::size_t leave = rows_;
            T best_ratio(0);
            for (std::size_t r = 0; r < rows_; ++r) {
                if (!policy_.pos(tab_[r][enter])) continue;
                T ratio = tab_[r][cols_] / tab_[r][enter];
                if (leave == rows_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[r] < basis_[leave])) {
                    leave = r;
                    best_ratio = std::move(ratio);
                }
            }
            if (leave == rows_) {
                result.status = LpStatus::unbounded;
                return false;
            }

            const bool degenerate = policy_.zero(tab_[leave][cols_]);
            pivot(leave, enter);
            if (degenerate) {
                if (++degenerate_run >= 40) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        ++pivots_;
        auto& pivot_row = tab_[row];
        const T inv = T(1) / pivot_row[col];
        for (auto& v : pivot_row) v *= inv;
        pivot_row[col] = T(1);
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == row) continue;
            const T factor = tab_[r][col];
            if (policy_.zero(factor)) continue;
            auto& target = tab_[r];
            for (std::size_t j = 0; j <= cols_; ++j) target[j] -= factor * pivot_row[j];
            target[col] = T(0);
        }
        basis_[row] = col;
    }

    /// Pivot basic artificials out on any structural/slack column, or drop
    /// the (redundant) row. Returns true if any row was dropped.
    bool evict_artificials() {
        bool dropped = false;
        for (std::size_t r = 0; r < rows_;) {
            if (basis_[r] < first_artificial_) {
                ++r;
                continue;
            }
            std::size_t col = cols_;
            for (std::size_t j = 0; j < first_artificial_; ++j)
                if (!policy_.zero(tab_[r][j])) {
                    col = j;
                    break;
                }
            if (col != cols_) {
                pivot(r, col);
                ++r;
            } else {
                tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(r));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
                --rows_;
                dropped = true;
            }
        }
        return dropped;
    }

    Policy policy_;
    std::size_t max_pivots_;
    std::size_t rows_ = 0;
    std::size_t structural_ = 0;
    std::size_t cols_ = 0;
    std::size_t first_artificial_ = 0;
    bool in_phase1_ = false;
    std::vector<std::vector<T>> tab_;
    std::vector<std::size_t> basis_;
    std::size_t pivots_ = 0;
};

template <class T, class Policy>
LpSolution<T> solve_simplex(const LpProblem<T>& problem, Policy policy,
                            std::size_t max_pivots = 100000) {
    SimplexSolver<T, Policy> solver(standardize(problem, policy), policy, max_pivots);
    return solver.solve(problem.objective);
}

namespace detail {

/// Exact Gaussian solve of square system A x = b. Returns false if singular.
inline bool gauss_solve(std::vector<std::vector<Rat>> a, std::vector<Rat> b, std::vector<Rat>& x) {
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) return false;
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (std::size_t r = k + 1; r < n; ++r) {
            if (a[r][k] == 0) continue;
            const Rat f = a[r][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[r][j] -= f * a[k][j];
            b[r] -= f * b[k];
        }
    }
    x.assign(n, Rat(0));
    for (std::size_t k = n; k-- > 0;) {
        Rat acc = b[k];
        for (std::size_t j = k + 1; j < n; ++j) acc -= a[k][j] * x[j];
        x[k] = acc / a[k][k];
    }
    return true;
}

}  // namespace detail

/// Exact evaluation of a candidate basis (for example one found by floating
/// pivoting): solves for the basic point, checks primal feasibility and dual
/// optimality in rational arithmetic, and returns the certified solution.
/// Empty when the basis is singular, infeasible, suboptimal, or touches an
/// artificial column.
inline std::optional<LpSolution<Rat>> evaluate_basis_exact(const StandardForm<Rat>& sf,
                                                           const std::vector<Rat>& structural_objective,
                                                           const std::vector<std::size_t>& basis) {
    const std::size_t m = sf.rows.size();
    if (basis.size() != m) return std::nullopt;
    for (const auto col : basis)
        if (col >= sf.first_artificial) return std::nullopt;

    std::vector<Rat> objective(sf.cols, Rat(0));
    for (std::size_t j = 0; j < sf.structural; ++j) objective[j] = structural_objective[j];

    std::vector<std::vector<Rat>> B(m, std::vector<Rat>(m));
    std::vector<std::vector<Rat>> Bt(m, std::vector<Rat>(m));
    std::vector<Rat> cb(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t k = 0; k < m; ++k) {
            B[r][k] = sf.rows[r][basis[k]];
            Bt[k][r] = B[r][k];
        }
        cb[r] = objective[basis[r]];
    }

    std::vector<Rat> xb, duals;
    if (!detail::gauss_solve(B, sf.rhs, xb)) return std::nullopt;
    for (const auto& v : xb)
        if (v < 0) return std::nullopt;
    if (!detail::gauss_solve(Bt, cb, duals)) return std::nullopt;

    // dual feasibility: no column prices out positive (maximization)
    for (std::size_t j = 0; j < sf.first_artificial; ++j) {
        Rat reduced = objective[j];
        for (std::size_t r = 0; r < m; ++r)
            if (sf.rows[r][j] != 0) reduced -= duals[r] * sf.rows[r][j];
        if (reduced > 0) return std::nullopt;
    }

    LpSolution<Rat> out;
    out.status = LpStatus::optimal;
    out.x.assign(sf.structural, Rat(0));
    out.value = 0;
    for (std::size_t k = 0; k < m; ++k) {
        if (basis[k] < sf.structural) out.x[basis[k]] = xb[k];
        out.value += cb[k] * xb[k];
    }
    out.basis = basis;
    return out;
}

}  // namespace bitrade
