#ifndef EULAB_TREESPACE_HPP
#define EULAB_TREESPACE_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "eulab/antichain.hpp"
#include "eulab/errors.hpp"
#include "eulab/node.hpp"
#include "eulab/rational.hpp"
#include "eulab/tree_vector.hpp"
#include "eulab/tsirelson.hpp"

namespace eulab {

// ============================================================================
// The norm on finitely supported vectors over the dyadic tree:
//
//   |x| = sup over antichains (a_1, ..., a_r) of  |pullback(x, a)|
//
// where the pullback places x(a_i) at integer index |a_i| + 1 and the outer
// norm is the recursive one. Antichains have pairwise incomparable nodes with
// strictly increasing levels, so the pullback indices are strictly increasing.
// ============================================================================

inline NatVector pullback(const TreeVector& x, const Antichain& a) {
    NatVector out;
    for (const Node& n : a) out.set(static_cast<int>(n.len) + 1, x.get(n));
    return out;
}

inline unsigned min_level(const TreeVector& x) {
    if (x.empty()) throw std::invalid_argument("min_level of empty vector");
    unsigned best = Node::kMaxLen + 1;
    for (const auto& [n, v] : x.entries()) best = std::min(best, n.len);
    return best;
}

// Deepest common ancestor of two nodes.
inline Node common_ancestor(Node a, const Node& b) {
    while (!is_prefix_of(a, b)) a = a.parent();
    return a;
}

inline Node common_ancestor(const std::vector<Node>& nodes) {
    if (nodes.empty()) throw std::invalid_argument("common ancestor of nothing");
    Node p = nodes.front();
    for (const Node& n : nodes) p = common_ancestor(p, n);
    return p;
}

struct EuNormOptions {
    std::size_t support_cap = kAntichainSupportCap;
};

struct EuNormResult {
    Rat value;
    Antichain witness;           // first antichain in canonical order attaining the value
    NormCertificate certificate; // dual certificate for the pullback at the witness
};

// Branch-and-bound over the canonical antichain walk. A subtree of extensions
// is pruned when the best imaginable completion (current picks, the candidate,
// plus one node per deeper level at that level's maximum) cannot beat the best
// value seen. The completion is scored by max(sup, l1/2), which dominates the
// recursive norm: leaf certificates yield at most the largest coefficient, and
// any split evaluates to half a sum of child values, each at most the child's
// l1 mass. Pruning uses <=, so pruned antichains can never strictly beat the
// recorded best, and the reported witness stays the first attainer in the
// canonical emission order.
inline EuNormResult eu_norm_with_certificate(const TreeVector& x, const EuNormOptions& opts = {}) {
    if (x.empty()) return {Rat(0), {}, NormCertificate::make_leaf(1, 1)};

    std::vector<Node> support = x.support();
    if (support.size() > opts.support_cap)
        throw cap_error("tree norm support of " + std::to_string(support.size()) +
                        " nodes exceeds cap " + std::to_string(opts.support_cap));

    const unsigned top = x.max_level();
    std::vector<Rat> levelMax(top + 1, Rat(0));
    for (const auto& [n, v] : x.entries())
        levelMax[n.len] = std::max(levelMax[n.len], rat_abs(v));
    std::vector<Rat> tailAfter(top + 2, Rat(0));  // sum of per-level maxima below
    std::vector<Rat> tailPeak(top + 2, Rat(0));   // largest per-level maximum below
    for (int l = static_cast<int>(top) - 1; l >= 0; --l) {
        const auto u = static_cast<std::size_t>(l);
        tailAfter[u] = tailAfter[u + 1] + levelMax[u + 1];
        tailPeak[u] = std::max(tailPeak[u + 1], levelMax[u + 1]);
    }

    TsirelsonOptions topt;
    topt.support_cap = std::max<std::size_t>(topt.support_cap, opts.support_cap);

    Rat best(0);
    Antichain witness;
    detail::walk_antichains(
        support,
        [&](const Antichain& a) {
            Rat v = tsirelson_norm(pullback(x, a), topt);
            if (v > best) {
                best = v;
                witness = a;
            }
        },
        [&](const Antichain& current, std::size_t i) {
            Rat cand = rat_abs(x.get(support[i]));
            Rat l1 = cand + tailAfter[support[i].len];
            Rat peak = std::max(cand, tailPeak[support[i].len]);
            for (const Node& n : current) {
                Rat c = rat_abs(x.get(n));
                l1 += c;
                peak = std::max(peak, c);
            }
            return std::max(peak, Rat(l1 / 2)) <= best;
        });

    auto [value, cert] = tsirelson_norm_with_certificate(pullback(x, witness), topt);
    return {value, witness, cert};
}

inline Rat eu_norm(const TreeVector& x, const EuNormOptions& opts = {}) {
    return eu_norm_with_certificate(x, opts).value;
}

namespace detail {

// Tree-norm options wide enough for vectors supported on the whole depth-d
// tree (2^{d+1} - 1 nodes).
inline EuNormOptions eu_options_for_depth(unsigned depth) {
    EuNormOptions opts;
    opts.support_cap = std::max(opts.support_cap, (std::size_t{2} << depth) - 1);
    return opts;
}

} // namespace detail

// Materializes the dual functional behind a witness/certificate pair as a
// vector over the same tree: its coordinate pairing with any y equals the
// certificate applied to y's pullback at the witness, so its absolute value
// is bounded by the tree norm of y.
inline TreeVector antichain_functional(const Antichain& witness, const NormCertificate& cert) {
    const NatVector w = certificate_weights(cert);
    TreeVector f;
    for (const Node& n : witness) f.set(n, w.get(static_cast<int>(n.len) + 1));
    return f;
}

// ----------------------------------------------------------------------------
// Superadditivity of disjointly rooted, level-separated parts:
//
//   |x_1 + ... + x_r|  >=  (1/2) (|x_1| + ... + |x_r|)
//
// provided the parts sit under pairwise incomparable nodes, occupy strictly
// increasing level bands, and r <= k <= (lowest support level). The proof is
// constructive and the checker replays it: concatenating per-part witnesses
// is again an antichain, and the split certificate over the per-part index
// ranges is admissible because the part count is below the first pullback
// index. `holds` is therefore expected on every instance satisfying the
// hypotheses; a violation would expose an engine defect.
// ----------------------------------------------------------------------------

struct SuperadditivityReport {
    Rat whole;              // norm of the summed vector
    std::vector<Rat> parts; // per-part norms
    Rat bound;              // half the sum of part norms
    bool holds;             // whole >= bound
    Antichain witness;      // concatenated per-part witnesses
    NormCertificate certificate;
    Rat certified;          // exact value of the certificate on the pullback of the sum
};

inline SuperadditivityReport check_superadditivity(const std::vector<TreeVector>& parts, int k,
                                                   const EuNormOptions& opts = {}) {
    if (parts.empty()) throw hypothesis_error("parts", "need at least one part");
    for (const auto& p : parts)
        if (p.empty()) throw hypothesis_error("parts", "parts must be nonzero");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i)
        if (parts[i].max_level() >= min_level(parts[i + 1]))
            throw hypothesis_error("bands", "part " + std::to_string(i + 1) +
                                                " does not sit strictly below part " +
                                                std::to_string(i));
    std::vector<Node> roots;
    for (const auto& p : parts) roots.push_back(common_ancestor(p.support()));
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (comparable(roots[i], roots[j]))
                throw hypothesis_error("roots", "parts " + std::to_string(i) + " and " +
                                                    std::to_string(j) +
                                                    " hang under comparable nodes");
    const int r = static_cast<int>(parts.size());
    if (r > k) throw hypothesis_error("count", "more parts than the level floor allows");
    if (static_cast<unsigned>(k) > min_level(parts.front()))
        throw hypothesis_error("floor", "level floor above the lowest support level");

    SuperadditivityReport rep;
    TreeVector sum;
    for (const auto& p : parts) sum += p;
    rep.whole = eu_norm(sum, opts);

    std::vector<IndexInterval> blocks;
    std::vector<NormCertificate> children;
    Rat total(0);
    for (const auto& p : parts) {
        EuNormResult res = eu_norm_with_certificate(p, opts);
        rep.parts.push_back(res.value);
        total += res.value;
        rep.witness.insert(rep.witness.end(), res.witness.begin(), res.witness.end());
        blocks.push_back({static_cast<int>(res.witness.front().len) + 1,
                          static_cast<int>(res.witness.back().len) + 1});
        children.push_back(res.certificate);
    }
    rep.bound = total / 2;
    rep.certificate = NormCertificate::make_split(std::move(blocks), std::move(children));
    rep.certified = evaluate(rep.certificate, pullback(sum, rep.witness));
    rep.holds = rep.whole >= rep.bound;
    return rep;
}

// ----------------------------------------------------------------------------
// Domination of a weighted block sequence by the basis at the band fences:
//
//   |mu_1 u_1 + ... + mu_r u_r|  <=?  |mu_1 t_{f_1} + ... + mu_r t_{f_r}|
//
// for blocks u_k of norm <= 1 supported strictly inside the open level bands
// (f_{k-1}, f_k). The comparison holds whenever every antichain meets each
// block's support in at most one node (single-level blocks, chain-supported
// blocks): the picked index lands at most at the fence and a right shift of
// the basis only grows the norm. It can FAIL for blocks whose support admits
// multi-node antichains inside a wide band, so `holds` is reported, not
// assumed.
// ----------------------------------------------------------------------------

struct BlockDominationReport {
    Rat lhs;                    // norm of the weighted block sum
    Rat rhs;                    // norm of the fence-index comparison vector
    bool holds;                 // lhs <= rhs
    std::vector<Rat> blockNorms;
};

inline BlockDominationReport check_block_domination(const std::vector<TreeVector>& blocks,
                                                    const std::vector<Rat>& mu,
                                                    const std::vector<int>& fences,
                                                    const EuNormOptions& opts = {}) {
    if (blocks.empty()) throw hypothesis_error("blocks", "need at least one block");
    if (mu.size() != blocks.size())
        throw hypothesis_error("weights", "one weight per block required");
    if (fences.size() != blocks.size() + 1)
        throw hypothesis_error("fences", "need one more fence than blocks");
    if (fences.front() < 0) throw hypothesis_error("fences", "fences start at level 0");
    for (std::size_t i = 0; i + 1 < fences.size(); ++i)
        if (fences[i] >= fences[i + 1])
            throw hypothesis_error("fences", "fences must strictly increase");

    BlockDominationReport rep;
    for (std::size_t kIdx = 0; kIdx < blocks.size(); ++kIdx) {
        const auto& u = blocks[kIdx];
        if (u.empty()) throw hypothesis_error("blocks", "blocks must be nonzero");
        if (static_cast<int>(min_level(u)) <= fences[kIdx] ||
            static_cast<int>(u.max_level()) >= fences[kIdx + 1])
            throw hypothesis_error("bands", "block " + std::to_string(kIdx) +
                                                " leaves its open level band");
        Rat n = eu_norm(u, opts);
        if (n > 1)
            throw hypothesis_error("normalization", "block " + std::to_string(kIdx) +
                                                        " has norm above one");
        rep.blockNorms.push_back(n);
    }

    TreeVector weighted;
    NatVector comparison;
    for (std::size_t kIdx = 0; kIdx < blocks.size(); ++kIdx) {
        weighted += mu[kIdx] * blocks[kIdx];
        comparison.set(fences[kIdx + 1], mu[kIdx]);
    }
    rep.lhs = eu_norm(weighted, opts);
    TsirelsonOptions topt;
    topt.support_cap = std::max<std::size_t>(topt.support_cap, comparison.support_size());
    rep.rhs = tsirelson_norm(comparison, topt);
    rep.holds = rep.lhs <= rep.rhs;
    return rep;
}

} // namespace eulab

#endif
