#ifndef EULAB_GAUGES_HPP
#define EULAB_GAUGES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eulab/convex.hpp"
#include "eulab/errors.hpp"
#include "eulab/rational.hpp"
#include "eulab/simplex.hpp"
#include "eulab/tree_vector.hpp"
#include "eulab/treespace.hpp"

namespace eulab {

// ============================================================================
// Interpolation gauges over the symmetric body W = co(K ∪ -K).
//
// The building blocks, from cheap to expensive:
//   * gauge_w        -- exact Minkowski gauge of W itself (rational linear
//                       feasibility over the signed vertex list);
//   * distance_to_scaled_w -- min over w in W of ||y - c·w|| in the tree norm,
//                       solved by a projection-free descent warm start plus an
//                       exact cutting-plane stage, both driven by the norm
//                       engine's dual certificates;
//   * gauge_n        -- Minkowski gauge of 2^n W + 2^-n B, by bisection over
//                       the exact distance predicate, with a reconstruction
//                       certificate y = t (2^n w + 2^-n b), ||b|| <= 1;
//   * triple_norm    -- sqrt of the sum of squared gauges for n = 1..N, with
//                       a rigorous tail bound whenever gauge_w is finite.
//
// Everything is deterministic for fixed inputs; values carry exact rational
// brackets and certificates rather than bare floating-point estimates.
// ============================================================================

namespace detail {

// The 2^{d+1} signed vertices of W at depth d: the path vertices in leaf
// level-lex order, then their negatives in the same order.
inline std::vector<TreeVector> signed_w_vertices(unsigned depth) {
    std::vector<TreeVector> out = k_vertices(depth);
    const std::size_t m = out.size();
    out.reserve(2 * m);
    for (std::size_t i = 0; i < m; ++i) out.push_back(Rat(-1) * out[i]);
    return out;
}

inline void check_support_depth(const TreeVector& y, unsigned depth, const char* where) {
    if (!y.empty() && y.max_level() > depth)
        throw std::invalid_argument(std::string(where) +
                                    ": support reaches level " + std::to_string(y.max_level()) +
                                    " beyond depth " + std::to_string(depth));
}

} // namespace detail

// ----------------------------------------------------------------------------
// Exact gauge of W: least t >= 0 with y in tW, as the value of the linear
// program  min sum(a_i + b_i)  s.t.  sum (a_i - b_i) v_i = y,  a, b >= 0,
// over the depth-d path vertices v_i. Returns nullopt when y is not in the
// span of W at this depth (the program is infeasible), which happens exactly
// when y violates a flow identity y(alpha) = y(alpha0) + y(alpha1).
// ----------------------------------------------------------------------------

namespace detail {

// Gauge plus an optimal decomposition: weights over the signed vertex list
// (first the +v_i block, then the -v_i block) summing to the gauge value.
inline std::optional<std::pair<Rat, std::vector<Rat>>> gauge_w_decomposition(const TreeVector& y,
                                                                             unsigned depth) {
    check_support_depth(y, depth, "gauge_w");
    const std::vector<TreeVector> vertices = k_vertices(depth);
    const std::size_t m = vertices.size();
    const std::vector<Node> nodes = all_nodes_to_depth(depth);

    LinearProgram lp;
    lp.A.assign(nodes.size(), std::vector<Rat>(2 * m, Rat(0)));
    lp.b.assign(nodes.size(), Rat(0));
    lp.c.assign(2 * m, Rat(1));
    for (std::size_t r = 0; r < nodes.size(); ++r) {
        for (std::size_t i = 0; i < m; ++i) {
            const Rat coef = vertices[i].get(nodes[r]);
            lp.A[r][i] = coef;
            lp.A[r][m + i] = -coef;
        }
        lp.b[r] = y.get(nodes[r]);
    }
    const LpResult res = solve_lp(lp);
    if (res.status == LpStatus::infeasible) return std::nullopt;
    if (res.status != LpStatus::optimal)
        throw std::logic_error("gauge_w: feasibility program cannot be unbounded");
    std::vector<Rat> weights(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(2 * m));
    return std::make_pair(res.value, std::move(weights));
}

} // namespace detail

inline std::optional<Rat> gauge_w(const TreeVector& y, unsigned depth) {
    auto dec = detail::gauge_w_decomposition(y, depth);
    if (!dec) return std::nullopt;
    return dec->first;
}

// ----------------------------------------------------------------------------
// Distance from y to c·W in the tree norm.
//
// Stage A is a projection-free descent over the vertex simplex: at the current
// point the norm engine's certificate yields a dual functional that both
// scores the linear-minimization oracle and produces a certified global lower
// bound; steps use the 2/(t+2) schedule and stop when the surrogate gap drops
// below tol/2 or progress stalls. Stage B is a cutting-plane loop: minimize
// an auxiliary bound t over the collected dual functionals (an exact rational
// linear program), then separate with a fresh certificate at the candidate
// weights. Because every functional is feasible for the dual unit ball, the
// program value is always a true lower bound, and the loop terminates exactly
// when the candidate's true norm meets it. The pool of functionals may be
// shared across calls: cuts are globally valid, not instance-specific.
// ----------------------------------------------------------------------------

struct CutPool {
    std::vector<TreeVector> phis;
    std::vector<std::vector<Rat>> vertex_pairings;  // phis[r].pair(vertex j)

    // Returns false when an equal functional is already present.
    bool add(const TreeVector& phi, const std::vector<TreeVector>& vertices) {
        for (const TreeVector& p : phis)
            if (p == phi) return false;
        std::vector<Rat> row;
        row.reserve(vertices.size());
        for (const TreeVector& v : vertices) row.push_back(phi.pair(v));
        phis.push_back(phi);
        vertex_pairings.push_back(std::move(row));
        return true;
    }

    // Drops the oldest cuts, keeping at most `keep`; clears entirely when the
    // cached pairings were built against a different vertex list.
    void reconcile(std::size_t vertexCount, std::size_t keep) {
        if (!vertex_pairings.empty() && vertex_pairings.front().size() != vertexCount) {
            phis.clear();
            vertex_pairings.clear();
            return;
        }
        if (phis.size() > keep) {
            const auto drop = static_cast<std::ptrdiff_t>(phis.size() - keep);
            phis.erase(phis.begin(), phis.begin() + drop);
            vertex_pairings.erase(vertex_pairings.begin(), vertex_pairings.begin() + drop);
        }
    }

    std::size_t size() const { return phis.size(); }
};

struct DistanceResult {
    Rat dist;                  // exact minimum when `exact`, else the best upper bound
    Rat lower;                 // certified lower bound (== dist when exact)
    std::vector<Rat> weights;  // convex weights over the signed vertex list
    bool exact = false;
    unsigned iterations = 0;   // cutting-plane rounds
};

namespace detail {

// Shared solver core. When `threshold` is set the loop may exit early as soon
// as the predicate dist <= threshold is decided either way; `decided` then
// reports +1 (feasible: weights attain upper <= threshold) or -1 (infeasible:
// lower > threshold). Without a threshold the loop runs to exact optimality.
struct DistanceQuery {
    std::optional<Rat> threshold;
    int decided = 0;
};

inline DistanceResult distance_core(const TreeVector& y, const Rat& c, unsigned depth,
                                    const Rat& tol, CutPool& pool, DistanceQuery& query) {
    if (c <= 0) throw std::invalid_argument("distance_to_scaled_w: scale must be positive");
    check_support_depth(y, depth, "distance_to_scaled_w");
    const std::vector<TreeVector> vertices = signed_w_vertices(depth);
    const std::size_t nv = vertices.size();
    const std::size_t m = nv / 2;
    const EuNormOptions eopts = eu_options_for_depth(depth);
    pool.reconcile(nv, 32);  // carried-over cuts stay useful, the program stays small

    // Start at the canonical representation of 0 in W.
    std::vector<Rat> mu(nv, Rat(0));
    mu[0] = Rat(1) / 2;
    mu[m] = Rat(1) / 2;
    TreeVector w;  // = sum mu_j vertices[j], maintained incrementally

    Rat upper(-1);  // sentinel: unset
    Rat lower(0);
    std::vector<Rat> bestMu = mu;

    const auto settle = [&](bool exact, unsigned iters) {
        DistanceResult out;
        out.dist = upper;
        out.lower = exact ? upper : lower;
        out.weights = bestMu;
        out.exact = exact;
        out.iterations = iters;
        return out;
    };

    // --- Stage A: projection-free descent with the 2/(t+2) schedule. ---
    constexpr unsigned kDescentCap = 24;
    unsigned stall = 0;
    for (unsigned t = 0; t < kDescentCap; ++t) {
        const TreeVector z = y - c * w;
        const EuNormResult en = eu_norm_with_certificate(z, eopts);
        if (upper < 0 || en.value < upper) {
            upper = en.value;
            bestMu = mu;
            stall = 0;
        } else {
            ++stall;
        }
        if (query.threshold && upper <= *query.threshold) {
            query.decided = 1;
            return settle(false, 0);
        }
        const TreeVector phi =
            z.empty() ? TreeVector() : antichain_functional(en.witness, en.certificate);
        std::size_t best = 0;
        if (!z.empty()) {
            pool.add(phi, vertices);
            Rat bestScore = phi.pair(vertices[0]);
            for (std::size_t j = 1; j < nv; ++j) {
                Rat s = phi.pair(vertices[j]);
                if (s > bestScore) {
                    bestScore = s;
                    best = j;
                }
            }
            lower = std::max(lower, Rat(phi.pair(y) - c * bestScore));
            if (query.threshold && lower > *query.threshold) {
                query.decided = -1;
                return settle(false, 0);
            }
        }
        if (upper == 0) return settle(true, 0);              // exact: distance is zero
        if (upper - lower <= tol / 2) break;                 // surrogate gap closed
        if (stall >= 6) break;                               // hand over to stage B
        const Rat gamma = Rat(2) / Rat(t + 2);
        for (Rat& g : mu) g *= (1 - gamma);
        mu[best] += gamma;
        w = (1 - gamma) * w + gamma * vertices[best];
    }

    // --- Stage B: exact cutting-plane refinement. ---
    constexpr unsigned kCutCap = 400;
    for (unsigned round = 1; round <= kCutCap; ++round) {
        // LP over (mu, tau): minimize tau subject to phi(y - c·V mu) <= tau
        // for every pooled phi, with mu a convex combination. Each phi alone
        // underestimates the norm, so the value is a true lower bound; the
        // negated functional enters the pool by separation whenever it
        // matters, so one-sided rows suffice.
        const std::size_t R = pool.size();
        LinearProgram lp;
        lp.A.assign(R + 2, std::vector<Rat>(nv + 1, Rat(0)));
        lp.b.assign(R + 2, Rat(0));
        lp.c.assign(nv + 1, Rat(0));
        lp.c[nv] = Rat(1);
        for (std::size_t r = 0; r < R; ++r) {
            for (std::size_t j = 0; j < nv; ++j)
                lp.A[r][j] = -c * pool.vertex_pairings[r][j];
            lp.A[r][nv] = Rat(-1);
            lp.b[r] = -pool.phis[r].pair(y);
        }
        for (std::size_t j = 0; j < nv; ++j) {
            lp.A[R][j] = Rat(1);
            lp.A[R + 1][j] = Rat(-1);
        }
        lp.b[R] = Rat(1);
        lp.b[R + 1] = Rat(-1);
        const LpResult res = solve_lp_leq(lp);
        if (res.status != LpStatus::optimal)
            throw std::logic_error("distance solver: relaxation must stay solvable");
        lower = std::max(lower, res.value);
        if (query.threshold && lower > *query.threshold) {
            query.decided = -1;
            return settle(false, round);
        }

        std::vector<Rat> cand(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(nv));
        TreeVector wc;
        for (std::size_t j = 0; j < nv; ++j)
            if (cand[j] != 0) wc += cand[j] * vertices[j];
        const TreeVector z = y - c * wc;
        const EuNormResult en = eu_norm_with_certificate(z, eopts);
        if (upper < 0 || en.value < upper) {
            upper = en.value;
            bestMu = cand;
        }
        if (query.threshold && upper <= *query.threshold) {
            query.decided = 1;
            return settle(false, round);
        }
        if (en.value == res.value) {  // candidate meets the certified lower bound
            upper = en.value;
            bestMu = cand;
            if (query.threshold) query.decided = (upper <= *query.threshold) ? 1 : -1;
            return settle(true, round);
        }
        if (!z.empty()) {
            const TreeVector phi = antichain_functional(en.witness, en.certificate);
            if (!pool.add(phi, vertices))
                throw std::logic_error("distance solver: separation repeated a cut");
        }
    }
    throw std::runtime_error("distance solver: no convergence within the iteration cap; best bracket [" +
                             rat_to_string(lower) + ", " + rat_to_string(upper) + "]");
}

// Exact threshold predicate: is dist(y, cW) <= theta? Returns the attaining
// weights on a feasible verdict.
inline std::pair<bool, std::vector<Rat>> distance_threshold(const TreeVector& y, const Rat& c,
                                                            unsigned depth, const Rat& theta,
                                                            CutPool& pool) {
    DistanceQuery query;
    query.threshold = theta;
    Rat tol = theta > 0 ? Rat(theta / 1024) : Rat(1, 1024);
    DistanceResult res = distance_core(y, c, depth, tol, pool, query);
    if (query.decided == 0) query.decided = (res.dist <= theta) ? 1 : -1;
    return {query.decided > 0, std::move(res.weights)};
}

} // namespace detail

inline DistanceResult distance_to_scaled_w(const TreeVector& y, const Rat& c, unsigned depth,
                                           double tol = 1e-9, CutPool* shared = nullptr) {
    if (!(tol > 0)) throw std::invalid_argument("distance_to_scaled_w: tolerance must be positive");
    CutPool local;
    CutPool& pool = shared ? *shared : local;
    detail::DistanceQuery query;  // no threshold: run to exact optimality
    return detail::distance_core(y, c, depth, rat_from_double(tol), pool, query);
}

// Restricted-support oracle for cross-checks: exhaustive minimum of
// ||y - c(λ V_i + (1-λ) V_j)|| over all signed vertex pairs and all weights
// λ = k/resolution. An upper bound on the true distance by construction, and
// exact whenever some optimum uses at most two vertices on the grid.
inline Rat coarse_distance_oracle(const TreeVector& y, const Rat& c, unsigned depth,
                                  unsigned resolution = 24) {
    if (resolution == 0) throw std::invalid_argument("coarse_distance_oracle: resolution must be positive");
    detail::check_support_depth(y, depth, "coarse_distance_oracle");
    const std::vector<TreeVector> vertices = detail::signed_w_vertices(depth);
    const EuNormOptions eopts = detail::eu_options_for_depth(depth);
    std::optional<Rat> best;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (std::size_t j = i; j < vertices.size(); ++j) {
            for (unsigned k = 0; k <= resolution; ++k) {
                const Rat lam = Rat(static_cast<int>(k)) / static_cast<int>(resolution);
                const TreeVector w = lam * vertices[i] + (1 - lam) * vertices[j];
                const Rat v = eu_norm(y - c * w, eopts);
                if (!best || v < *best) best = v;
            }
        }
    }
    return *best;
}

// ----------------------------------------------------------------------------
// gauge_n: the Minkowski gauge of 2^n W + 2^-n B at depth d, by bisection on
// the exact feasibility predicate dist(y/t, 2^n W) <= 2^-n. The initial
// bracket is [ ||y|| / (2^n + 2^-n), 2^n ||y|| ], both ends certified; when
// gauge_w(y) = g is finite the upper end improves to 2^-n g with a pure-W
// certificate. The returned interval [lo, hi] always contains the true gauge,
// hi carries a full reconstruction certificate, and hi - lo <= tol.
// ----------------------------------------------------------------------------

struct GaugeResult {
    unsigned n = 0;
    unsigned depth = 0;
    Rat lo, hi;                // true gauge in [lo, hi]; hi is feasible
    double value = 0;          // midpoint of the bracket
    double tolerance = 0;      // half-width of the bracket
    Rat feasible_t;            // == hi; the scale of the certificate below
    std::vector<Rat> weights;  // convex weights over the signed vertex list
    TreeVector b;              // remainder term with eu_norm(b) <= 1
    Rat b_norm;                // exact eu_norm(b)
    Rat residual;              // exact eu_norm(y - feasible_t (2^n w + 2^-n b))
};

inline GaugeResult gauge_n(const TreeVector& y, unsigned n, unsigned depth, double tol = 1e-6,
                           CutPool* shared = nullptr) {
    if (n < 1) throw std::invalid_argument("gauge_n: level must be at least 1");
    if (!(tol > 0)) throw std::invalid_argument("gauge_n: tolerance must be positive");
    detail::check_support_depth(y, depth, "gauge_n");

    const std::size_t nv = std::size_t{2} << depth;
    GaugeResult out;
    out.n = n;
    out.depth = depth;
    out.weights.assign(nv, Rat(0));

    if (y.empty()) {  // gauge of the zero vector: 0, certified by 0 in W
        out.weights[0] = Rat(1) / 2;
        out.weights[nv / 2] = Rat(1) / 2;
        return out;
    }

    const Rat p2n = rat_pow2(static_cast<int>(n));
    const Rat p2mn = rat_pow2(-static_cast<int>(n));
    const EuNormOptions eopts = detail::eu_options_for_depth(depth);
    const Rat normY = eu_norm(y, eopts);

    CutPool local;
    CutPool& pool = shared ? *shared : local;

    // Bracket with certified endpoints: hi = 2^n ||y|| is feasible via w = 0,
    // b = y/||y||; a finite W-gauge g improves it to 2^-n g via w = y/g, b = 0.
    Rat lo = normY / (p2n + p2mn);
    Rat hi = p2n * normY;
    std::vector<Rat> hiWeights(nv, Rat(0));
    hiWeights[0] = Rat(1) / 2;
    hiWeights[nv / 2] = Rat(1) / 2;
    const auto dec = detail::gauge_w_decomposition(y, depth);
    if (dec) {
        const Rat g = dec->first;
        const Rat pureW = p2mn * g;
        if (g > 0 && pureW < hi) {
            hi = pureW;
            for (std::size_t j = 0; j < nv; ++j) hiWeights[j] = dec->second[j] / g;
        }
    }

    const Rat tolR = rat_from_double(tol);
    while (hi - lo > tolR) {
        const Rat mid = (lo + hi) / 2;
        auto [feasible, weights] =
            detail::distance_threshold((1 / mid) * y, p2n, depth, p2mn, pool);
        if (feasible) {
            hi = mid;
            hiWeights = std::move(weights);
        } else {
            lo = mid;
        }
    }

    // Reconstruction certificate at the feasible end.
    const std::vector<TreeVector> vertices = detail::signed_w_vertices(depth);
    TreeVector w;
    for (std::size_t j = 0; j < nv; ++j)
        if (hiWeights[j] != 0) w += hiWeights[j] * vertices[j];
    const TreeVector b = p2n * ((1 / hi) * y - p2n * w);
    out.lo = lo;
    out.hi = hi;
    out.value = rat_to_double((lo + hi) / 2);
    out.tolerance = rat_to_double((hi - lo) / 2);
    out.feasible_t = hi;
    out.weights = std::move(hiWeights);
    out.b = b;
    out.b_norm = eu_norm(b, eopts);
    out.residual = eu_norm(y - hi * (p2n * w + p2mn * b), eopts);
    return out;
}

// ----------------------------------------------------------------------------
// triple_norm: sqrt(sum_{n=1..N} gauge_n(y)^2), reported with the exact
// rational bracket [sq_lo, sq_hi] for the truncated sum of squares. When
// gauge_w(y) = g is finite, the tail beyond N is bounded by g^2 4^{-N}/3
// (from gauge_n <= 2^-n g) and reported separately; otherwise the result is
// flagged as a truncation.
// ----------------------------------------------------------------------------

struct TripleNormResult {
    double value = 0;      // sqrt of the bracket midpoint for the truncated sum
    double tolerance = 0;  // half-width of the sqrt bracket
    unsigned levels = 0;   // N
    unsigned depth = 0;
    std::vector<GaugeResult> gauges;  // n = 1..N
    Rat sq_lo, sq_hi;                 // bracket for sum of squared gauges
    std::optional<Rat> tail_bound;    // bound on the tail beyond N, when finite
    bool truncated = true;            // no finite tail bound available
};

inline TripleNormResult triple_norm(const TreeVector& y, unsigned levels, unsigned depth,
                                    double tol = 1e-6) {
    if (levels < 1) throw std::invalid_argument("triple_norm: need at least one level");
    detail::check_support_depth(y, depth, "triple_norm");
    TripleNormResult out;
    out.levels = levels;
    out.depth = depth;
    out.sq_lo = Rat(0);
    out.sq_hi = Rat(0);
    CutPool pool;  // shared across levels: dual cuts are globally valid
    for (unsigned n = 1; n <= levels; ++n) {
        GaugeResult g = gauge_n(y, n, depth, tol, &pool);
        out.sq_lo += g.lo * g.lo;
        out.sq_hi += g.hi * g.hi;
        out.gauges.push_back(std::move(g));
    }
    const auto g = gauge_w(y, depth);
    if (g) {
        out.tail_bound = (*g) * (*g) * rat_pow2(-2 * static_cast<int>(levels)) / 3;
        out.truncated = false;
    }
    const double slo = std::sqrt(rat_to_double(out.sq_lo));
    const double shi = std::sqrt(rat_to_double(out.sq_hi));
    out.value = (slo + shi) / 2;
    out.tolerance = (shi - slo) / 2;
    return out;
}

// ----------------------------------------------------------------------------
// JSON views. Weights serialize sparsely as (leaf, sign, weight) triples in
// the canonical vertex order.
// ----------------------------------------------------------------------------

inline nlohmann::json gauge_weights_to_json(const std::vector<Rat>& weights, unsigned depth) {
    const std::vector<Node> leaves = leaves_at_depth(depth);
    const std::size_t m = leaves.size();
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] == 0) continue;
        arr.push_back(nlohmann::json{{"leaf", node_to_string(leaves[j % m])},
                                     {"sign", j < m ? 1 : -1},
                                     {"weight", rat_to_string(weights[j])}});
    }
    return arr;
}

inline nlohmann::json gauge_result_to_json(const GaugeResult& r) {
    return nlohmann::json{{"n", r.n},
                          {"depth", r.depth},
                          {"value", r.value},
                          {"tolerance", r.tolerance},
                          {"lo", rat_to_string(r.lo)},
                          {"hi", rat_to_string(r.hi)},
                          {"feasible_t", rat_to_string(r.feasible_t)},
                          {"weights", gauge_weights_to_json(r.weights, r.depth)},
                          {"b", tree_vector_to_json(r.b)},
                          {"b_norm", rat_to_string(r.b_norm)},
                          {"residual", rat_to_string(r.residual)}};
}

inline nlohmann::json triple_norm_result_to_json(const TripleNormResult& r) {
    nlohmann::json gauges = nlohmann::json::array();
    for (const GaugeResult& g : r.gauges) gauges.push_back(gauge_result_to_json(g));
    nlohmann::json j{{"value", r.value},
                     {"tolerance", r.tolerance},
                     {"levels", r.levels},
                     {"depth", r.depth},
                     {"sq_lo", rat_to_string(r.sq_lo)},
                     {"sq_hi", rat_to_string(r.sq_hi)},
                     {"truncated", r.truncated},
                     {"gauges", std::move(gauges)}};
    if (r.tail_bound) j["tail_bound"] = rat_to_string(*r.tail_bound);
    return j;
}

} // namespace eulab

#endif
