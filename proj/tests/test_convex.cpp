#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "eulab/convex.hpp"
#include "eulab/prng.hpp"
#include "eulab/treespace.hpp"

using namespace eulab;

namespace {

Node node(const std::string& s) { return node_from_string(s); }

DyadicMeasure random_sparse_measure(SplitMix64& rng, unsigned depth, int maxLeaves) {
    static const std::vector<Rat> pool = {Rat(1),     Rat(-1),     Rat(2),
                                          Rat(1) / 2, Rat(-1) / 2, Rat(3) / 4};
    DyadicMeasure mu(depth);
    const auto leaves = leaves_at_depth(depth);
    const int picks = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(maxLeaves)));
    for (int t = 0; t < picks; ++t)
        mu.set(leaves[static_cast<std::size_t>(rng.below(leaves.size()))],
               pool[static_cast<std::size_t>(rng.below(pool.size()))]);
    return mu;
}

} // namespace

TEST_CASE("path vertices charge exactly the root-to-leaf path") {
    const TreeVector v = path_vertex(node("01"));
    CHECK(v.get(node("")) == 1);
    CHECK(v.get(node("0")) == 1);
    CHECK(v.get(node("01")) == 1);
    CHECK(v.support_size() == 3);
}

TEST_CASE("vertex family: count, membership, norm, operator image") {
    const unsigned depth = 3;
    const auto vertices = k_vertices(depth);
    const auto leaves = leaves_at_depth(depth);
    REQUIRE(vertices.size() == 8);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        CHECK(membership_K(vertices[i], depth));
        CHECK(eu_norm(vertices[i]) == 1); // a chain: the sup norm is 1
        CHECK(vertices[i] == t_operator(dirac_measure(leaves[i], depth)));
    }
    CHECK_THROWS_AS(k_vertices(kKVertexDepthCap + 1), cap_error);
}

TEST_CASE("membership rejects what it should") {
    const unsigned depth = 3;
    CHECK_FALSE(membership_K(TreeVector{}, depth));                      // zero vector
    CHECK_FALSE(membership_K(TreeVector::basis(node("000")), depth));    // no flow to root
    CHECK_FALSE(membership_K(Rat(2) * path_vertex(node("000")), depth)); // root mass 2
    TreeVector broken = path_vertex(node("000"));
    broken.set(node("01"), Rat(1) / 2); // breaks the flow at node 0
    CHECK_FALSE(membership_K(broken, depth));
    TreeVector deep = path_vertex(node("0000"));
    CHECK_FALSE(membership_K(deep, depth)); // support below the leaf level
    // signed combination is in the span but not the hull
    TreeVector signedCombo = Rat(2) * path_vertex(node("000")) - path_vertex(node("111"));
    CHECK_FALSE(membership_K(signedCombo, depth));
}

TEST_CASE("convex combinations of vertices are members and reconstruct") {
    SplitMix64 rng(0xC0B1Eu);
    const unsigned depth = 4;
    const auto vertices = k_vertices(depth);
    for (int trial = 0; trial < 20; ++trial) {
        // random dyadic convex weights over a few vertices
        std::vector<std::size_t> picks;
        for (int p = 0; p < 3; ++p)
            picks.push_back(static_cast<std::size_t>(rng.below(vertices.size())));
        TreeVector x = Rat(1) / 2 * vertices[picks[0]] + Rat(1) / 4 * vertices[picks[1]] +
                       Rat(1) / 4 * vertices[picks[2]];
        CHECK(membership_K(x, depth));
        // barycentric coordinates regenerate the vector through the operator
        const DyadicMeasure w = leaf_weights(x, depth);
        CHECK(w.total() == 1);
        CHECK(tv_norm(w) == 1);
        CHECK(t_operator(w) == x);
    }
}

TEST_CASE("half-tree vectors satisfy the martingale identity") {
    for (unsigned depth : {1u, 2u, 3u, 4u, 5u}) {
        for (const Node& a : all_nodes_to_depth(depth - 1)) {
            const TreeVector lhs = d_alpha(a, depth);
            const TreeVector rhs = Rat(1) / 2 * (d_alpha(a.child(0), depth) +
                                                 d_alpha(a.child(1), depth));
            CHECK(lhs == rhs);
        }
    }
    // at the leaf level the half-tree vector degenerates to the path vertex
    const unsigned depth = 4;
    for (const Node& leaf : leaves_at_depth(depth))
        CHECK(d_alpha(leaf, depth) == path_vertex(leaf));
    // explicit coefficients at depth 2: 1 on the root, then an even split
    const TreeVector root2 = d_alpha(Node(), 2);
    CHECK(root2.get(Node()) == 1);
    for (const Node& n : all_nodes_to_depth(2))
        if (n.len > 0) CHECK(root2.get(n) == rat_pow2(-int(n.len)));
    // every half-tree vector is a member of the truncated convex body
    for (const Node& a : all_nodes_to_depth(3)) CHECK(membership_K(d_alpha(a, 3), 3));
}

TEST_CASE("uniform measure maps to the root half-tree vector") {
    for (unsigned depth : {0u, 1u, 3u, 5u}) {
        CHECK(t_operator(uniform_measure(depth)) == d_alpha(Node(), depth));
        CHECK(uniform_measure(depth).total() == 1);
    }
}

TEST_CASE("operator is linear and dominated by total variation") {
    SplitMix64 rng(0x7D0Fu);
    EuNormOptions opts;
    opts.support_cap = 24;
    for (int trial = 0; trial < 25; ++trial) {
        DyadicMeasure mu = random_sparse_measure(rng, 5, 3);
        DyadicMeasure nu = random_sparse_measure(rng, 5, 3);
        INFO("trial " << trial << ": " << measure_to_json(mu).dump());
        // linearity leaf by leaf
        DyadicMeasure combo(5);
        for (const auto& [n, m] : mu.leaves()) combo.add(n, 2 * m);
        for (const auto& [n, m] : nu.leaves()) combo.add(n, -m);
        CHECK(t_operator(combo) == Rat(2) * t_operator(mu) - t_operator(nu));
        // the image never beats the total variation
        CHECK(eu_norm(t_operator(mu), opts) <= tv_norm(mu));
    }
}

TEST_CASE("measure JSON round trip and rejection") {
    SplitMix64 rng(0x11A5u);
    for (int trial = 0; trial < 10; ++trial) {
        const DyadicMeasure mu = random_sparse_measure(rng, 4, 4);
        CHECK(measure_from_json(measure_to_json(mu)) == mu);
    }
    CHECK_THROWS_AS(measure_from_json(nlohmann::json::array()), parse_error);
    CHECK_THROWS_AS(measure_from_json(nlohmann::json{{"depth", 2}}), parse_error);
    // node off the leaf level
    nlohmann::json off{{"depth", 2},
                       {"leaves", {{{"node", "0"}, {"value", "1"}}}}};
    CHECK_THROWS_AS(measure_from_json(off), parse_error);
    // duplicate leaf
    nlohmann::json dup{{"depth", 1},
                       {"leaves",
                        {{{"node", "0"}, {"value", "1"}}, {{"node", "0"}, {"value", "1/2"}}}}};
    CHECK_THROWS_AS(measure_from_json(dup), parse_error);
    // masses must sit on the leaf level
    DyadicMeasure mu(3);
    CHECK_THROWS_AS(mu.set(node("0"), Rat(1)), std::invalid_argument);
    CHECK_THROWS_AS(dirac_measure(node("0"), 3), std::invalid_argument);
}
