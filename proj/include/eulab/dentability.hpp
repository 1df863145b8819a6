#ifndef EULAB_DENTABILITY_HPP
#define EULAB_DENTABILITY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eulab/convex.hpp"
#include "eulab/errors.hpp"
#include "eulab/prng.hpp"
#include "eulab/rational.hpp"
#include "eulab/tree_vector.hpp"
#include "eulab/treespace.hpp"

namespace eulab {

// ============================================================================
// Slice geometry on the truncated convex body K(d).
//
// A slice is the set of points where a linear functional comes within beta of
// its supremum. Linear functionals on a polytope attain their sup at a vertex,
// so the vertex list gives the sup exactly, the in-slice vertex set exactly,
// and certified lower bounds on slice diameters via vertex pairs. The
// headline quantity is shallow_slice_bound: a functional supported on levels
// <= d0 <= d-2 cannot pin the deep branching, so every slice contains a forked
// vertex pair at tree-norm distance >= 1.
// ============================================================================

struct SliceSpec {
    TreeVector functional;  // acts by coordinate pairing
    Rat beta;               // slice depth, > 0
};

struct SliceReport {
    Rat sup;                          // max of the functional over K(d)
    std::vector<Node> inside;         // leaves of the in-slice vertices (level-lex)
    Rat diameter_bound;               // max pairwise tree-norm distance inside
    std::pair<Node, Node> witness;    // leaves of an attaining pair
};

inline SliceReport slice_vertices(unsigned depth, const SliceSpec& spec) {
    detail::check_depth(depth, "slice_vertices");
    if (spec.beta <= 0) throw std::invalid_argument("slice_vertices: beta must be positive");
    if (!spec.functional.empty() && spec.functional.max_level() > depth)
        throw std::invalid_argument("slice_vertices: functional support exceeds the depth");

    const std::vector<Node> leaves = leaves_at_depth(depth);
    std::vector<TreeVector> vertices;
    vertices.reserve(leaves.size());
    std::vector<Rat> values;
    values.reserve(leaves.size());
    Rat sup;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        vertices.push_back(path_vertex(leaves[i]));
        values.push_back(spec.functional.pair(vertices[i]));
        if (i == 0 || values[i] > sup) sup = values[i];
    }

    SliceReport rep;
    rep.sup = sup;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < leaves.size(); ++i)
        if (values[i] > sup - spec.beta) {
            rep.inside.push_back(leaves[i]);
            idx.push_back(i);
        }

    rep.diameter_bound = Rat(0);
    rep.witness = {rep.inside.front(), rep.inside.front()};
    const EuNormOptions opts = detail::eu_options_for_depth(depth);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const Rat dist = eu_norm(vertices[idx[a]] - vertices[idx[b]], opts);
            if (dist > rep.diameter_bound) {
                rep.diameter_bound = dist;
                rep.witness = {leaves[idx[a]], leaves[idx[b]]};
            }
        }
    }
    return rep;
}

// ----------------------------------------------------------------------------
// The forked pair behind the shallow-slice bound: starting from the first
// in-slice vertex, keep its path through level d0, then branch 0/1 at level
// d0+1 and continue with zeros. Both forks score the same against any
// functional supported on levels <= d0, so both stay strictly inside the
// slice, and their difference has coefficient 1 at level d0+1 - a singleton
// antichain already certifies tree-norm distance >= 1.
// ----------------------------------------------------------------------------

struct ShallowForkReport {
    Node first, second;   // the forked leaves
    Rat bound;            // exact tree-norm distance of the forked vertex pair
    TreeVector difference;
};

inline ShallowForkReport shallow_fork(unsigned depth, unsigned d0, const SliceSpec& spec) {
    if (d0 + 2 > depth)
        throw hypothesis_error("levels",
                               "functional level bound " + std::to_string(d0) +
                                   " must be at most depth-2 = " + std::to_string(depth) + "-2");
    if (!spec.functional.empty() && spec.functional.max_level() > d0)
        throw hypothesis_error("support",
                               "functional reaches level " +
                                   std::to_string(spec.functional.max_level()) +
                                   " above the stated bound " + std::to_string(d0));

    const SliceReport rep = slice_vertices(depth, spec);
    const Node base = rep.inside.front().ancestor(d0);
    Node a = base.child(0);
    Node b = base.child(1);
    while (a.len < depth) a = a.child(0);
    while (b.len < depth) b = b.child(0);

    ShallowForkReport out;
    out.first = a;
    out.second = b;
    out.difference = path_vertex(a) - path_vertex(b);
    out.bound = eu_norm(out.difference, detail::eu_options_for_depth(depth));
    return out;
}

inline Rat shallow_slice_bound(unsigned depth, unsigned d0, const SliceSpec& spec) {
    return shallow_fork(depth, d0, spec).bound;
}

// ----------------------------------------------------------------------------
// Separation table of the half-tree family: one row per inner node alpha,
// carrying the exact tree norm of d_{alpha 0} - d_{alpha 1} at depth d. The
// shared path cancels, so the difference charges +-1 to the two siblings and
// +-2^{-k} to their subtrees; a singleton antichain at the sibling level
// certifies >= 1, and at the last level the difference is a bare two-node
// antichain whose norm is exactly 1.
// ----------------------------------------------------------------------------

struct SeparationRow {
    Node alpha;
    Rat value;
};

struct SeparationTable {
    unsigned depth = 0;
    std::vector<SeparationRow> rows;  // all |alpha| < depth, level-lex order
};

inline SeparationTable separation_table(unsigned depth) {
    detail::check_depth(depth, "separation_table");
    if (depth == 0) throw std::invalid_argument("separation_table: depth must be positive");
    SeparationTable table;
    table.depth = depth;
    const EuNormOptions opts = detail::eu_options_for_depth(depth);
    for (const Node& alpha : all_nodes_to_depth(depth - 1)) {
        const TreeVector diff = d_alpha(alpha.child(0), depth) - d_alpha(alpha.child(1), depth);
        table.rows.push_back({alpha, eu_norm(diff, opts)});
    }
    return table;
}

// ----------------------------------------------------------------------------
// Seeded generator for slice functionals: coefficients uniform on
// {-1, -1/2, 0, 1/2, 1} over a random support at levels <= d0.
// ----------------------------------------------------------------------------

inline TreeVector random_shallow_functional(SplitMix64& rng, unsigned d0) {
    static const Rat pool[] = {Rat(-1), Rat(-1) / 2, Rat(0), Rat(1) / 2, Rat(1)};
    const std::vector<Node> nodes = all_nodes_to_depth(d0);
    TreeVector f;
    const std::size_t count = 1 + rng.below(std::min<std::size_t>(nodes.size(), 6));
    for (std::size_t i = 0; i < count; ++i)
        f.set(nodes[rng.below(nodes.size())], pool[rng.below(5)]);
    return f;
}

// ----------------------------------------------------------------------------
// Observational experiment: how far apart do convex combinations of in-slice
// points drift? Each trial samples `slices` random shallow slices, takes the
// forked pair inside each, and measures the tree norm of the convex
// combination of the differences under random weights. No pass/fail here -
// the rows are data.
// ----------------------------------------------------------------------------

struct ConvexComboRow {
    unsigned trial = 0;
    Rat distance;
};

struct ConvexComboReport {
    unsigned depth = 0;
    unsigned slices = 0;
    std::vector<ConvexComboRow> rows;
    Rat min_distance;
};

inline ConvexComboReport convex_combination_slice_experiment(unsigned depth, unsigned slices,
                                                             unsigned trials, std::uint64_t seed) {
    detail::check_depth(depth, "convex_combination_slice_experiment");
    if (depth < 2) throw std::invalid_argument("convex combination experiment: depth must be >= 2");
    if (slices == 0 || trials == 0)
        throw std::invalid_argument("convex combination experiment: need slices and trials");
    const unsigned d0 = depth - 2;
    static const Rat betas[] = {Rat(1) / 4, Rat(1) / 2, Rat(1)};

    ConvexComboReport rep;
    rep.depth = depth;
    rep.slices = slices;
    const EuNormOptions opts = detail::eu_options_for_depth(depth);
    for (unsigned t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::substream(seed, t);
        TreeVector combo;
        std::vector<Rat> weights;
        Rat total(0);
        for (unsigned s = 0; s < slices; ++s) {
            weights.push_back(Rat(1 + static_cast<int>(rng.below(8))));
            total += weights.back();
        }
        for (unsigned s = 0; s < slices; ++s) {
            SliceSpec spec{random_shallow_functional(rng, d0), betas[rng.below(3)]};
            const ShallowForkReport fork = shallow_fork(depth, d0, spec);
            combo += (weights[s] / total) * fork.difference;
        }
        const Rat dist = eu_norm(combo, opts);
        rep.rows.push_back({t, dist});
        if (t == 0 || dist < rep.min_distance) rep.min_distance = dist;
    }
    return rep;
}

} // namespace eulab

#endif
