#ifndef EULAB_TSIRELSON_HPP
#define EULAB_TSIRELSON_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eulab/errors.hpp"
#include "eulab/rational.hpp"
#include "eulab/tree_vector.hpp"

namespace eulab {

// ============================================================================
// The recursive norm on finitely supported sequences over indices 1,2,3,...
//
//   |x| = max( max_k |x_k| , 1/2 * sup { sum_j |E_j x| } )
//
// with the sup over admissible interval systems E_1 < ... < E_n: successive
// integer intervals whose count n does not exceed the left endpoint of E_1.
// Values are exact rationals; for integer coefficients the denominator is a
// power of two.
// ============================================================================

struct IndexInterval {
    int lo = 1;
    int hi = 1;
    friend bool operator==(const IndexInterval&, const IndexInterval&) = default;
};

struct IntervalSystem {
    std::vector<IndexInterval> intervals;
};

// Admissible: nonempty list of well-formed successive intervals, count bounded
// by the first interval's left endpoint.
inline bool is_admissible(const IntervalSystem& s) {
    if (s.intervals.empty()) return false;
    for (std::size_t i = 0; i < s.intervals.size(); ++i) {
        const auto& iv = s.intervals[i];
        if (iv.lo < 1 || iv.hi < iv.lo) return false;
        if (i > 0 && s.intervals[i - 1].hi >= iv.lo) return false;
    }
    return static_cast<int>(s.intervals.size()) <= s.intervals.front().lo;
}

// ----------------------------------------------------------------------------
// Certificates: explicit functionals of dual norm <= 1 that attain the
// computed value. A leaf is +-(coordinate k); a split carries an admissible
// interval system and weights its children by 1/2. Soundness on every vector
// follows by induction from admissibility.
// ----------------------------------------------------------------------------

struct NormCertificate {
    enum class Kind { leaf, split };
    Kind kind = Kind::leaf;
    // leaf
    int index = 1;
    int sign = 1;
    // split
    std::vector<IndexInterval> blocks;
    std::vector<NormCertificate> children;

    static NormCertificate make_leaf(int index, int sign) {
        NormCertificate c;
        c.kind = Kind::leaf;
        c.index = index;
        c.sign = sign;
        return c;
    }
    static NormCertificate make_split(std::vector<IndexInterval> blocks,
                                      std::vector<NormCertificate> children) {
        NormCertificate c;
        c.kind = Kind::split;
        c.blocks = std::move(blocks);
        c.children = std::move(children);
        return c;
    }
};

inline Rat evaluate(const NormCertificate& c, const NatVector& x) {
    if (c.kind == NormCertificate::Kind::leaf) return Rat(c.sign) * x.get(c.index);
    Rat s(0);
    for (const auto& child : c.children) s += evaluate(child, x);
    return s / 2;
}

namespace detail {
inline bool certificate_span(const NormCertificate& c, int& lo, int& hi) {
    if (c.kind == NormCertificate::Kind::leaf) {
        lo = hi = c.index;
        return c.index >= 1 && (c.sign == 1 || c.sign == -1);
    }
    if (c.blocks.empty() || c.blocks.size() != c.children.size()) return false;
    IntervalSystem sys{c.blocks};
    if (!is_admissible(sys)) return false;
    for (std::size_t i = 0; i < c.children.size(); ++i) {
        int clo = 0, chi = 0;
        if (!certificate_span(c.children[i], clo, chi)) return false;
        if (clo < c.blocks[i].lo || chi > c.blocks[i].hi) return false;
    }
    lo = c.blocks.front().lo;
    hi = c.blocks.back().hi;
    return true;
}
} // namespace detail

// Structural validity: every split is admissible and every child lives inside
// its block. Valid certificates are functionals of dual norm <= 1.
inline bool certificate_is_valid(const NormCertificate& c) {
    int lo = 0, hi = 0;
    return detail::certificate_span(c, lo, hi);
}

namespace detail {
inline void accumulate_weights(const NormCertificate& c, const Rat& mult, NatVector& out) {
    if (c.kind == NormCertificate::Kind::leaf) {
        out.add(c.index, mult * c.sign);
        return;
    }
    const Rat half = mult / 2;
    for (const auto& child : c.children) accumulate_weights(child, half, out);
}
} // namespace detail

// The certificate as an explicit linear functional: evaluate(c, x) equals the
// coordinate pairing of these weights with x.
inline NatVector certificate_weights(const NormCertificate& c) {
    NatVector w;
    detail::accumulate_weights(c, Rat(1), w);
    return w;
}

inline nlohmann::json certificate_to_json(const NormCertificate& c) {
    if (c.kind == NormCertificate::Kind::leaf)
        return nlohmann::json{{"kind", "leaf"}, {"index", c.index}, {"sign", c.sign}};
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : c.blocks) blocks.push_back({b.lo, b.hi});
    nlohmann::json children = nlohmann::json::array();
    for (const auto& ch : c.children) children.push_back(certificate_to_json(ch));
    return nlohmann::json{
        {"kind", "split"}, {"blocks", std::move(blocks)}, {"children", std::move(children)}};
}

inline NormCertificate certificate_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) throw parse_error("certificate: missing kind");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "leaf") {
        if (!j.contains("index") || !j.contains("sign"))
            throw parse_error("certificate leaf: missing index/sign");
        return NormCertificate::make_leaf(j["index"].get<int>(), j["sign"].get<int>());
    }
    if (kind != "split") throw parse_error("certificate: unknown kind '" + kind + "'");
    std::vector<IndexInterval> blocks;
    for (const auto& b : j.at("blocks")) blocks.push_back({b.at(0).get<int>(), b.at(1).get<int>()});
    std::vector<NormCertificate> children;
    for (const auto& ch : j.at("children")) children.push_back(certificate_from_json(ch));
    return NormCertificate::make_split(std::move(blocks), std::move(children));
}

// ----------------------------------------------------------------------------
// Engine: dynamic programming over support subintervals, iterated in rounds
// until stationary. Round r+1 applies one step of the defining equation to the
// round-r values; cells are monotone nondecreasing and stabilize after at most
// (support size) rounds because every contributing block is a strict
// subinterval. Systems with a single interval are skipped throughout: the
// restriction to one interval never has larger norm than the vector itself, so
// (1/2)|E_1 x| can never win the max.
// ----------------------------------------------------------------------------

struct TsirelsonOptions {
    std::size_t support_cap = 16;
};

namespace detail {

struct TsirelsonDp {
    std::vector<int> idx;   // support indices, ascending
    std::vector<Rat> coef;  // matching signed coefficients
    std::vector<Rat> absc;  // |coef|
    int m = 0;
    // f[i][j]: current value for the restriction to support positions [i..j].
    std::vector<std::vector<Rat>> f;
    // M[j][k][t]: best sum of f over at most t disjoint blocks within
    // positions [k..j] (blocks may skip positions). Rebuilt each round.
    std::vector<std::vector<std::vector<Rat>>> M;

    explicit TsirelsonDp(const NatVector& x) {
        for (const auto& [k, v] : x.entries()) {
            idx.push_back(k);
            coef.push_back(v);
            absc.push_back(rat_abs(v));
        }
        m = static_cast<int>(idx.size());
        f.assign(m, std::vector<Rat>(m, Rat(0)));
        for (int i = 0; i < m; ++i) {
            Rat best(0);
            for (int j = i; j < m; ++j) {
                best = std::max(best, absc[j]);
                f[i][j] = best;
            }
        }
    }

    // Count cap for extra blocks after the first, given the first block starts
    // at position i0 and the last usable position is j.
    int extra_cap(int i0, int j0, int j) const {
        long long byIndex = static_cast<long long>(idx[i0]) - 1;
        long long byRoom = j - j0;
        return static_cast<int>(std::min<long long>(std::min(byIndex, byRoom), m));
    }

    void rebuild_M() {
        M.assign(m, {});
        for (int j = 0; j < m; ++j) {
            auto& Mj = M[j];
            Mj.assign(j + 2, std::vector<Rat>(m + 1, Rat(0)));
            for (int k = j; k >= 0; --k) {
                for (int t = 1; t <= m; ++t) {
                    Rat best = Mj[k + 1][t]; // skip position k
                    for (int e = k; e <= j; ++e) {
                        Rat cand = f[k][e] + (e + 1 <= j ? Mj[e + 1][t - 1] : Rat(0));
                        best = std::max(best, cand);
                    }
                    Mj[k][t] = best;
                }
            }
        }
    }

    // Best sum_j f(E_j) over admissible systems with >= 2 blocks inside
    // positions [i..j], using the current f (callers snapshot before update).
    Rat best_split(int i, int j) const {
        Rat best(-1);
        for (int i0 = i; i0 < j; ++i0) {
            if (idx[i0] < 2) continue;
            for (int j0 = i0; j0 < j; ++j0) {
                int t = extra_cap(i0, j0, j);
                if (t < 1) continue;
                Rat cand = f[i0][j0] + M[j][j0 + 1][t];
                best = std::max(best, cand);
            }
        }
        return best;
    }

    // Runs rounds until stationary; returns the number of rounds taken.
    int run() {
        if (m == 0) return 0;
        const int guard = 2 * m + 4;
        for (int round = 0; round < guard; ++round) {
            rebuild_M();
            auto next = f;
            bool changed = false;
            for (int i = 0; i < m; ++i) {
                for (int j = i; j < m; ++j) {
                    Rat bs = best_split(i, j);
                    if (bs > 0) {
                        Rat cand = bs / 2;
                        if (cand > next[i][j]) {
                            next[i][j] = cand;
                            changed = true;
                        }
                    }
                }
            }
            f.swap(next);
            if (!changed) return round + 1;
        }
        throw std::logic_error("round iteration failed to stabilize");
    }

    // --- certificate reconstruction on the stationary table ---

    // Unwinds M[j][k][t] == needed into concrete blocks.
    void unwind_blocks(int j, int k, int t, const Rat& needed,
                       std::vector<std::pair<int, int>>& out) const {
        if (needed == 0) return;
        int kk = k, tt = t;
        Rat left = needed;
        while (left > 0) {
            bool took = false;
            if (kk <= j && tt >= 1) {
                for (int e = kk; e <= j && !took; ++e) {
                    Rat rest = (e + 1 <= j ? M[j][e + 1][tt - 1] : Rat(0));
                    if (f[kk][e] + rest == left) {
                        out.push_back({kk, e});
                        left -= f[kk][e];
                        kk = e + 1;
                        --tt;
                        took = true;
                    }
                }
            }
            if (!took) {
                if (kk > j) throw std::logic_error("certificate unwind ran past the support");
                ++kk; // skipped position
            }
        }
    }

    NormCertificate build(int i, int j) const {
        const Rat& V = f[i][j];
        // Prefer a split when one attains the value (ties included).
        for (int i0 = i; i0 < j; ++i0) {
            if (idx[i0] < 2) continue;
            for (int j0 = i0; j0 < j; ++j0) {
                int t = extra_cap(i0, j0, j);
                if (t < 1) continue;
                Rat rest = M[j][j0 + 1][t];
                if (f[i0][j0] + rest == 2 * V) {
                    std::vector<std::pair<int, int>> positions{{i0, j0}};
                    unwind_blocks(j, j0 + 1, t, rest, positions);
                    std::vector<IndexInterval> blocks;
                    std::vector<NormCertificate> children;
                    for (auto [lo, hi] : positions) {
                        blocks.push_back({idx[lo], idx[hi]});
                        children.push_back(build(lo, hi));
                    }
                    return NormCertificate::make_split(std::move(blocks), std::move(children));
                }
            }
        }
        for (int k = i; k <= j; ++k)
            if (absc[k] == V) return NormCertificate::make_leaf(idx[k], rat_sign(coef[k]));
        throw std::logic_error("stationary value attained by no branch");
    }
};

inline void check_support_cap(const NatVector& x, std::size_t cap, const char* who) {
    if (x.support_size() > cap)
        throw cap_error(std::string(who) + ": support of " + std::to_string(x.support_size()) +
                        " exceeds cap " + std::to_string(cap));
}

} // namespace detail

inline Rat tsirelson_norm(const NatVector& x, const TsirelsonOptions& opts = {}) {
    detail::check_support_cap(x, opts.support_cap, "tsirelson_norm");
    if (x.empty()) return Rat(0);
    detail::TsirelsonDp dp(x);
    dp.run();
    return dp.f[0][dp.m - 1];
}

struct TsirelsonResult {
    Rat value;
    NormCertificate certificate;
};

inline TsirelsonResult tsirelson_norm_with_certificate(const NatVector& x,
                                                       const TsirelsonOptions& opts = {}) {
    detail::check_support_cap(x, opts.support_cap, "tsirelson_norm");
    if (x.empty()) return {Rat(0), NormCertificate::make_leaf(1, 1)};
    detail::TsirelsonDp dp(x);
    dp.run();
    dp.rebuild_M(); // M tables at the fixed point, for reconstruction
    return {dp.f[0][dp.m - 1], dp.build(0, dp.m - 1)};
}

// ----------------------------------------------------------------------------
// Brute-force oracle: exhaustive, memoization-free recursion over admissible
// systems enumerated as raw integer intervals on the support's convex hull.
// Deliberately structured unlike the engine; used to validate it.
// ----------------------------------------------------------------------------

namespace detail {

using Support = std::vector<std::pair<int, Rat>>;

inline Support restrict_support(const Support& s, int lo, int hi) {
    Support out;
    for (const auto& e : s)
        if (e.first >= lo && e.first <= hi) out.push_back(e);
    return out;
}

inline Rat bruteforce_value(const Support& s) {
    if (s.empty()) return Rat(0);
    Rat best(0);
    for (const auto& e : s) best = std::max(best, rat_abs(e.second));
    const int lo = s.front().first;
    const int hi = s.back().first;

    // DFS over systems of successive intervals with nonempty restrictions.
    // Three dominated families are skipped: intervals with empty restriction
    // (dropping one frees a count slot and can only move the first left
    // endpoint right), single-interval systems (half the restriction's value
    // never beats the value itself), and intervals swallowing the whole
    // support (no sibling interval could then be nonempty, so they feed only
    // single-interval systems). The last skip also keeps the recursion on
    // strictly smaller supports.
    std::vector<std::pair<int, int>> current;
    std::vector<Rat> partSums;
    auto pointsInside = [&](int a, int b) {
        std::size_t n = 0;
        for (const auto& e : s)
            if (e.first >= a && e.first <= b) ++n;
        return n;
    };
    std::function<void(int)> rec = [&](int from) {
        if (!current.empty() &&
            static_cast<int>(current.size()) >= current.front().first)
            return; // count already at the admissible limit
        for (int a = from; a <= hi; ++a) {
            for (int b = a; b <= hi; ++b) {
                const std::size_t inside = pointsInside(a, b);
                if (inside == 0 || inside == s.size()) continue;
                current.push_back({a, b});
                partSums.push_back(bruteforce_value(restrict_support(s, a, b)));
                if (current.size() >= 2 &&
                    static_cast<int>(current.size()) <= current.front().first) {
                    Rat sum(0);
                    for (const Rat& p : partSums) sum += p;
                    best = std::max(best, Rat(sum / 2));
                }
                rec(b + 1);
                current.pop_back();
                partSums.pop_back();
            }
        }
    };
    rec(lo);
    return best;
}

} // namespace detail

inline Rat tsirelson_norm_bruteforce(const NatVector& x, std::size_t cap = 10) {
    detail::check_support_cap(x, cap, "tsirelson_norm_bruteforce");
    detail::Support s;
    for (const auto& [k, v] : x.entries()) s.push_back({k, v});
    return detail::bruteforce_value(s);
}

// ----------------------------------------------------------------------------
// Residual of the defining equation, evaluated by recomputing the right-hand
// side with engine values on every restriction. Exactly zero at a fixed point.
// ----------------------------------------------------------------------------

inline Rat fixed_point_residual(const NatVector& x, const TsirelsonOptions& opts = {}) {
    if (x.empty()) return Rat(0);
    const Rat lhs = tsirelson_norm(x, opts);
    Rat rhs = x.linf_norm();

    std::vector<int> idx;
    for (const auto& [k, v] : x.entries()) idx.push_back(k);
    const int lo = idx.front(), hi = idx.back();

    auto restrict_vec = [&](int a, int b) {
        NatVector out;
        for (const auto& [k, v] : x.entries())
            if (k >= a && k <= b) out.set(k, v);
        return out;
    };

    // Same single-interval omission as the engine (dominated terms).
    std::vector<std::pair<int, int>> current;
    Rat runningSum(0);
    std::function<void(int)> rec = [&](int from) {
        if (!current.empty() && static_cast<int>(current.size()) >= current.front().first) return;
        for (int a = from; a <= hi; ++a) {
            for (int b = a; b <= hi; ++b) {
                NatVector part = restrict_vec(a, b);
                if (part.empty()) continue;
                Rat partNorm = tsirelson_norm(part, opts);
                current.push_back({a, b});
                runningSum += partNorm;
                if (current.size() >= 2 &&
                    static_cast<int>(current.size()) <= current.front().first)
                    rhs = std::max(rhs, Rat(runningSum / 2));
                rec(b + 1);
                runningSum -= partNorm;
                current.pop_back();
            }
        }
    };
    rec(lo);
    return rhs - lhs;
}

} // namespace eulab

#endif
