#ifndef EULAB_CONVEX_HPP
#define EULAB_CONVEX_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eulab/errors.hpp"
#include "eulab/node.hpp"
#include "eulab/rational.hpp"
#include "eulab/tree_vector.hpp"

namespace eulab {

// ============================================================================
// Convex bodies over the depth-d tree.
//
// A path vertex v_g charges 1 to every node on the root-to-leaf path of g.
// K(d) is the convex hull of the 2^d path vertices; equivalently the set of
// flows: x >= 0, x(root) = 1, and x(a) = x(a0) + x(a1) above the leaf level.
// Leaf values are the barycentric coordinates, so membership and
// reconstruction are both exact and cheap.
// ============================================================================

inline constexpr unsigned kKVertexDepthCap = 10;

namespace detail {
inline void check_depth(unsigned depth, const char* who) {
    if (depth > kKVertexDepthCap)
        throw cap_error(std::string(who) + ": depth " + std::to_string(depth) +
                        " exceeds cap " + std::to_string(kKVertexDepthCap));
}
} // namespace detail

// The path vertex of a single leaf.
inline TreeVector path_vertex(const Node& leaf) {
    TreeVector v;
    for (unsigned l = 0; l <= leaf.len; ++l) v.set(leaf.ancestor(l), Rat(1));
    return v;
}

// All path vertices at the given depth, in leaf level-lex order.
inline std::vector<TreeVector> k_vertices(unsigned depth) {
    detail::check_depth(depth, "k_vertices");
    std::vector<TreeVector> out;
    for (const Node& leaf : leaves_at_depth(depth)) out.push_back(path_vertex(leaf));
    return out;
}

// ----------------------------------------------------------------------------
// Signed measures on the leaves of the depth-d tree.
// ----------------------------------------------------------------------------

class DyadicMeasure {
public:
    explicit DyadicMeasure(unsigned depth = 0) : depth_(depth) {
        detail::check_depth(depth, "DyadicMeasure");
    }

    unsigned depth() const { return depth_; }
    const std::map<Node, Rat>& leaves() const { return leaves_; }
    bool empty() const { return leaves_.empty(); }

    Rat get(const Node& leaf) const {
        auto it = leaves_.find(leaf);
        return it == leaves_.end() ? Rat(0) : it->second;
    }
    void set(const Node& leaf, const Rat& mass) {
        if (leaf.len != depth_)
            throw std::invalid_argument("measure mass must sit on depth-" +
                                        std::to_string(depth_) + " leaves");
        if (mass == 0)
            leaves_.erase(leaf);
        else
            leaves_[leaf] = mass;
    }
    void add(const Node& leaf, const Rat& mass) { set(leaf, get(leaf) + mass); }

    Rat total() const {
        Rat s(0);
        for (const auto& [n, m] : leaves_) s += m;
        return s;
    }

    friend bool operator==(const DyadicMeasure&, const DyadicMeasure&) = default;

private:
    unsigned depth_;
    std::map<Node, Rat> leaves_;
};

// Total variation: the l1 mass of the leaf weights.
inline Rat tv_norm(const DyadicMeasure& mu) {
    Rat s(0);
    for (const auto& [n, m] : mu.leaves()) s += rat_abs(m);
    return s;
}

inline DyadicMeasure dirac_measure(const Node& leaf, unsigned depth) {
    if (leaf.len != depth) throw std::invalid_argument("point mass must sit on a leaf");
    DyadicMeasure mu(depth);
    mu.set(leaf, Rat(1));
    return mu;
}

inline DyadicMeasure uniform_measure(unsigned depth) {
    DyadicMeasure mu(depth);
    const Rat mass = rat_pow2(-static_cast<int>(depth));
    for (const Node& leaf : leaves_at_depth(depth)) mu.set(leaf, mass);
    return mu;
}

inline nlohmann::json measure_to_json(const DyadicMeasure& mu) {
    nlohmann::json leaves = nlohmann::json::array();
    for (const auto& [n, m] : mu.leaves())
        leaves.push_back({{"node", node_to_string(n)}, {"value", rat_to_string(m)}});
    return nlohmann::json{{"depth", mu.depth()}, {"leaves", std::move(leaves)}};
}

inline DyadicMeasure measure_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("depth") || !j.contains("leaves"))
        throw parse_error("measure: expected {depth, leaves}");
    if (!j["depth"].is_number_unsigned()) throw parse_error("measure: depth must be unsigned");
    DyadicMeasure mu(j["depth"].get<unsigned>());
    for (const auto& e : j["leaves"]) {
        if (!e.contains("node") || !e.contains("value"))
            throw parse_error("measure entry: expected {node, value}");
        const Node n = node_from_string(e["node"].get<std::string>());
        if (mu.get(n) != 0) throw parse_error("measure: duplicate leaf " + node_to_string(n));
        if (n.len != mu.depth()) throw parse_error("measure: node off the leaf level");
        mu.set(n, rat_from_string(e["value"].get<std::string>()));
    }
    return mu;
}

// ----------------------------------------------------------------------------
// The cone operator: (T mu)(a) = mu(leaves below a), for every node a of the
// depth-d tree. Point masses map to path vertices, the uniform probability
// measure maps to the half-tree vector of the root, and the tree norm of the
// image never exceeds the total variation of the measure (images of point
// masses are chains of norm one).
// ----------------------------------------------------------------------------

inline TreeVector t_operator(const DyadicMeasure& mu) {
    TreeVector out;
    for (const auto& [leaf, mass] : mu.leaves())
        for (unsigned l = 0; l <= leaf.len; ++l) out.add(leaf.ancestor(l), mass);
    return out;
}

// ----------------------------------------------------------------------------
// Half-tree vectors: d_a is the image under the cone operator of the uniform
// probability measure on the leaves below a. It carries coefficient 1 on every
// node of the path from the root to a, and 2^{-(|b|-|a|)} on every descendant
// b of a down to the leaf level. The family lives in K(d), satisfies the
// martingale identity d_a = (d_a0 + d_a1)/2 for |a| < d, and degenerates to
// the path vertex when a is a leaf.
// ----------------------------------------------------------------------------

inline TreeVector d_alpha(const Node& alpha, unsigned depth) {
    detail::check_depth(depth, "d_alpha");
    if (alpha.len > depth) throw std::invalid_argument("node below the leaf level");
    TreeVector out;
    for (unsigned l = 0; l < alpha.len; ++l) out.set(alpha.ancestor(l), Rat(1));
    std::vector<Node> frontier = {alpha};
    Rat weight(1);
    for (unsigned l = alpha.len;; ++l) {
        for (const Node& n : frontier) out.set(n, weight);
        if (l == depth) break;
        std::vector<Node> next;
        for (const Node& n : frontier) {
            next.push_back(n.child(0));
            next.push_back(n.child(1));
        }
        frontier = std::move(next);
        weight /= 2;
    }
    return out;
}

// ----------------------------------------------------------------------------
// Exact membership in K(d) via the flow characterization, and barycentric
// reconstruction from leaf values. The two are deliberately intertwined:
// x lies in K(d) exactly when its leaf weights are nonnegative, sum to one,
// and regenerate x through the cone operator.
// ----------------------------------------------------------------------------

inline DyadicMeasure leaf_weights(const TreeVector& x, unsigned depth) {
    DyadicMeasure mu(depth);
    for (const auto& [n, v] : x.entries())
        if (n.len == depth) mu.set(n, v);
    return mu;
}

inline bool membership_K(const TreeVector& x, unsigned depth) {
    detail::check_depth(depth, "membership_K");
    if (!x.empty() && x.max_level() > depth) return false;
    for (const auto& [n, v] : x.entries())
        if (v < 0) return false;
    if (x.get(Node()) != 1) return false;
    return t_operator(leaf_weights(x, depth)) == x;
}

} // namespace eulab

#endif
