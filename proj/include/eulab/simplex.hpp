#ifndef EULAB_SIMPLEX_HPP
#define EULAB_SIMPLEX_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "eulab/rational.hpp"

namespace eulab {

// ============================================================================
// Exact rational linear programming:
//
//   minimize c.x   subject to   A x = b,  x >= 0
//
// Dense two-phase tableau simplex with Bland's anti-cycling rule throughout,
// so termination is unconditional and every reported number is exact. Sized
// for the small gauge and cutting-plane programs in this project (tens of
// rows and columns), not for bulk work.
// ============================================================================

struct LinearProgram {
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    std::vector<Rat> c;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::optimal;
    Rat value;
    std::vector<Rat> x;
};

namespace detail {

class SimplexTableau {
public:
    // rows: constraints with artificial basis; columns: n structural vars,
    // then m artificials, then the rhs.
    SimplexTableau(const LinearProgram& lp)
        : m_(lp.A.size()), n_(lp.c.size()), rows_(lp.A), rhs_(lp.b) {
        for (std::size_t i = 0; i < m_; ++i) {
            if (rows_[i].size() != n_)
                throw std::invalid_argument("ragged constraint matrix");
            if (rhs_[i] < 0) {
                for (Rat& v : rows_[i]) v = -v;
                rhs_[i] = -rhs_[i];
            }
        }
        for (std::size_t i = 0; i < m_; ++i) {
            rows_[i].resize(n_ + m_, Rat(0));
            rows_[i][n_ + i] = 1;
            basis_.push_back(n_ + i);
        }
        alive_.assign(m_, true);
    }

    // Bland's rule over the allowed columns; returns false when optimal.
    bool pivot_once(std::vector<Rat>& obj, Rat& objRhs, std::size_t allowedCols, bool& unbounded) {
        std::size_t enter = allowedCols;
        for (std::size_t j = 0; j < allowedCols; ++j)
            if (obj[j] < 0) {
                enter = j;
                break;
            }
        if (enter == allowedCols) return false;

        std::size_t leave = m_;
        for (std::size_t i = 0; i < m_; ++i) {
            if (!alive_[i] || rows_[i][enter] <= 0) continue;
            if (leave == m_) {
                leave = i;
                continue;
            }
            const Rat cand = rhs_[i] / rows_[i][enter];
            const Rat best = rhs_[leave] / rows_[leave][enter];
            if (cand < best || (cand == best && basis_[i] < basis_[leave])) leave = i;
        }
        if (leave == m_) {
            unbounded = true;
            return false;
        }
        pivot(leave, enter, obj, objRhs);
        return true;
    }

    void pivot(std::size_t leave, std::size_t enter, std::vector<Rat>& obj, Rat& objRhs) {
        const Rat p = rows_[leave][enter];
        for (Rat& v : rows_[leave]) v /= p;
        rhs_[leave] /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == leave || !alive_[i]) continue;
            const Rat f = rows_[i][enter];
            if (f == 0) continue;
            for (std::size_t j = 0; j < rows_[i].size(); ++j) rows_[i][j] -= f * rows_[leave][j];
            rhs_[i] -= f * rhs_[leave];
        }
        const Rat f = obj[enter];
        if (f != 0) {
            for (std::size_t j = 0; j < obj.size(); ++j) obj[j] -= f * rows_[leave][j];
            objRhs -= f * rhs_[leave];
        }
        basis_[leave] = enter;
    }

    LpResult solve(const std::vector<Rat>& cost) {
        // ---- phase one: minimize the artificial mass ----
        std::vector<Rat> obj(n_ + m_, Rat(0));
        Rat objRhs(0);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) obj[j] -= rows_[i][j];
            objRhs -= rhs_[i];
        }
        bool unbounded = false;
        while (pivot_once(obj, objRhs, n_, unbounded)) {
        }
        if (unbounded) throw std::logic_error("phase one cannot be unbounded");
        if (objRhs != 0) return {LpStatus::infeasible, Rat(0), {}};

        // Drive leftover artificials out of the basis; rows that cannot be
        // repaired are redundant and retire.
        for (std::size_t i = 0; i < m_; ++i) {
            if (!alive_[i] || basis_[i] < n_) continue;
            std::size_t enter = n_;
            for (std::size_t j = 0; j < n_; ++j)
                if (rows_[i][j] != 0) {
                    enter = j;
                    break;
                }
            if (enter == n_) {
                alive_[i] = false;
                continue;
            }
            pivot(i, enter, obj, objRhs);
        }

        // ---- phase two: the real objective over the feasible basis ----
        std::vector<Rat> obj2(n_ + m_, Rat(0));
        Rat objRhs2(0);
        for (std::size_t j = 0; j < n_; ++j) obj2[j] = cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
            if (!alive_[i] || basis_[i] >= n_) continue;
            const Rat cb = cost[basis_[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j < n_ + m_; ++j) obj2[j] -= cb * rows_[i][j];
            objRhs2 -= cb * rhs_[i];
        }
        while (pivot_once(obj2, objRhs2, n_, unbounded)) {
        }
        if (unbounded) return {LpStatus::unbounded, Rat(0), {}};

        LpResult res;
        res.status = LpStatus::optimal;
        res.x.assign(n_, Rat(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (alive_[i] && basis_[i] < n_) res.x[basis_[i]] = rhs_[i];
        res.value = -objRhs2;
        return res;
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<std::vector<Rat>> rows_;
    std::vector<Rat> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<bool> alive_;
};

} // namespace detail

inline LpResult solve_lp(const LinearProgram& lp) {
    if (lp.A.size() != lp.b.size()) throw std::invalid_argument("row count mismatch");
    if (lp.A.empty()) {
        // No constraints: optimal at the origin unless some cost is negative.
        for (const Rat& cj : lp.c)
            if (cj < 0) return {LpStatus::unbounded, Rat(0), {}};
        return {LpStatus::optimal, Rat(0), std::vector<Rat>(lp.c.size(), Rat(0))};
    }
    return detail::SimplexTableau(lp).solve(lp.c);
}

// Convenience wrapper for  min c.x  s.t.  A x <= b,  x >= 0  via slacks.
inline LpResult solve_lp_leq(const LinearProgram& lp) {
    if (lp.A.size() != lp.b.size()) throw std::invalid_argument("row count mismatch");
    LinearProgram eq;
    const std::size_t m = lp.A.size();
    const std::size_t n = lp.c.size();
    eq.b = lp.b;
    eq.c = lp.c;
    eq.c.resize(n + m, Rat(0));
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<Rat> row = lp.A[i];
        row.resize(n + m, Rat(0));
        row[n + i] = 1;
        eq.A.push_back(std::move(row));
    }
    LpResult res = solve_lp(eq);
    if (res.status == LpStatus::optimal) res.x.resize(n);
    return res;
}

} // namespace eulab

#endif
