#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "eulab/prng.hpp"
#include "eulab/rational.hpp"
#include "eulab/tsirelson.hpp"
#include "eulab/tree_vector.hpp"

using namespace eulab;

namespace {

NatVector unit(int k) {
    NatVector x;
    x.set(k, Rat(1));
    return x;
}

NatVector range_sum(int lo, int hi) {
    NatVector x;
    for (int k = lo; k <= hi; ++k) x.set(k, Rat(1));
    return x;
}

// Small random vectors for engine-vs-oracle agreement; indices stay tight so
// the exhaustive oracle's interval enumeration remains cheap.
NatVector random_vector(SplitMix64& rng, int maxIndex, int maxSupport) {
    static const std::vector<Rat> pool = {Rat(1),      Rat(-1), Rat(2),     Rat(-2),
                                          Rat(1) / 2,  Rat(-1) / 2, Rat(3) / 2};
    NatVector x;
    const int target = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(maxSupport)));
    std::vector<int> indices;
    for (int k = 1; k <= maxIndex; ++k) indices.push_back(k);
    for (int t = 0; t < target && !indices.empty(); ++t) {
        const std::size_t pos = static_cast<std::size_t>(rng.below(indices.size()));
        x.set(indices[pos], pool[static_cast<std::size_t>(rng.below(pool.size()))]);
        indices.erase(indices.begin() + static_cast<std::ptrdiff_t>(pos));
    }
    return x;
}

} // namespace

TEST_CASE("admissibility of interval systems") {
    CHECK(is_admissible({{{2, 2}, {3, 3}}}));
    CHECK(is_admissible({{{3, 4}, {5, 5}, {7, 9}}}));
    CHECK(is_admissible({{{1, 5}}}));
    CHECK_FALSE(is_admissible({{}}));                   // empty
    CHECK_FALSE(is_admissible({{{1, 1}, {2, 2}}}));     // count 2 > first lo 1
    CHECK_FALSE(is_admissible({{{3, 3}, {3, 4}}}));     // overlap
    CHECK_FALSE(is_admissible({{{4, 2}}}));             // reversed endpoints
    CHECK_FALSE(is_admissible({{{0, 2}}}));             // indices start at 1
    CHECK_FALSE(is_admissible({{{2, 2}, {3, 3}, {4, 4}}})); // count 3 > 2
}

TEST_CASE("basis vectors have norm one with a leaf certificate") {
    for (int k : {1, 2, 7, 16}) {
        auto [value, cert] = tsirelson_norm_with_certificate(unit(k));
        CHECK(value == 1);
        REQUIRE(cert.kind == NormCertificate::Kind::leaf);
        CHECK(cert.index == k);
        CHECK(cert.sign == 1);
        CHECK(certificate_is_valid(cert));
        CHECK(evaluate(cert, unit(k)) == 1);
    }
}

TEST_CASE("pinned small-vector norms") {
    CHECK(tsirelson_norm(range_sum(1, 2)) == 1);
    CHECK(tsirelson_norm(range_sum(2, 3)) == 1);
    CHECK(tsirelson_norm(range_sum(3, 4)) == 1);
    CHECK(tsirelson_norm(range_sum(3, 6)) == Rat(3) / 2);
}

TEST_CASE("sum over indices n+1..2n has norm n/2") {
    for (int n = 2; n <= 5; ++n) {
        CHECK(tsirelson_norm(range_sum(n + 1, 2 * n)) == Rat(n) / 2);
    }
}

TEST_CASE("split certificate for indices 2,3 lands on singleton blocks") {
    auto [value, cert] = tsirelson_norm_with_certificate(range_sum(2, 3));
    CHECK(value == 1);
    REQUIRE(cert.kind == NormCertificate::Kind::split);
    REQUIRE(cert.blocks.size() == 2);
    CHECK(cert.blocks[0] == IndexInterval{2, 2});
    CHECK(cert.blocks[1] == IndexInterval{3, 3});
    REQUIRE(cert.children.size() == 2);
    CHECK(cert.children[0].kind == NormCertificate::Kind::leaf);
    CHECK(cert.children[1].kind == NormCertificate::Kind::leaf);
    CHECK(certificate_is_valid(cert));
    CHECK(evaluate(cert, range_sum(2, 3)) == value);
}

TEST_CASE("zero vector has norm zero and residual zero") {
    NatVector zero;
    CHECK(tsirelson_norm(zero) == 0);
    CHECK(fixed_point_residual(zero) == 0);
}

TEST_CASE("engine agrees with the exhaustive oracle on random vectors") {
    SplitMix64 rng(0xE17A5u);
    for (int trial = 0; trial < 60; ++trial) {
        NatVector x = random_vector(rng, 9, 6);
        INFO("trial " << trial << ": " << nat_vector_to_json(x).dump());
        CHECK(tsirelson_norm(x) == tsirelson_norm_bruteforce(x));
    }
}

TEST_CASE("engine value satisfies the defining equation exactly") {
    std::vector<NatVector> pins = {range_sum(2, 3), range_sum(3, 6), range_sum(4, 8), unit(5)};
    NatVector mixed;
    mixed.set(2, Rat(1));
    mixed.set(4, Rat(-1) / 2);
    mixed.set(5, Rat(2));
    pins.push_back(mixed);
    for (const auto& x : pins) {
        INFO(nat_vector_to_json(x).dump());
        CHECK(fixed_point_residual(x) == 0);
    }
    SplitMix64 rng(0xF1EDu);
    for (int trial = 0; trial < 15; ++trial) {
        NatVector x = random_vector(rng, 8, 5);
        INFO("trial " << trial << ": " << nat_vector_to_json(x).dump());
        CHECK(fixed_point_residual(x) == 0);
    }
}

TEST_CASE("certificates attain the value and stay inside the dual ball") {
    SplitMix64 rng(0xCE27u);
    for (int trial = 0; trial < 40; ++trial) {
        NatVector x = random_vector(rng, 9, 6);
        auto [value, cert] = tsirelson_norm_with_certificate(x);
        INFO("trial " << trial << ": " << nat_vector_to_json(x).dump());
        CHECK(value == tsirelson_norm(x));
        CHECK(certificate_is_valid(cert));
        CHECK(evaluate(cert, x) == value);
        // The same functional applied to any other vector is bounded by that
        // vector's norm: soundness of the certificate as a dual element.
        for (int probe = 0; probe < 3; ++probe) {
            NatVector y = random_vector(rng, 9, 5);
            CHECK(rat_abs(evaluate(cert, y)) <= tsirelson_norm(y));
        }
    }
}

TEST_CASE("norm axioms hold exactly") {
    SplitMix64 rng(0xA10Du);
    for (int trial = 0; trial < 25; ++trial) {
        NatVector x = random_vector(rng, 9, 5);
        NatVector y = random_vector(rng, 9, 5);
        const Rat nx = tsirelson_norm(x);
        const Rat ny = tsirelson_norm(y);
        INFO(nat_vector_to_json(x).dump() << " / " << nat_vector_to_json(y).dump());
        CHECK(nx >= 0);
        CHECK((nx == 0) == x.empty());
        // absolute homogeneity
        CHECK(tsirelson_norm(x * Rat(-3)) == 3 * nx);
        CHECK(tsirelson_norm(x * (Rat(2) / 5)) == Rat(2) / 5 * nx);
        // triangle inequality
        CHECK(tsirelson_norm(x + y) <= nx + ny);
    }
}

TEST_CASE("norm is unconditional and monotone under support restriction") {
    SplitMix64 rng(0xB0B1u);
    for (int trial = 0; trial < 25; ++trial) {
        NatVector x = random_vector(rng, 9, 6);
        const Rat nx = tsirelson_norm(x);
        // sign flips leave the norm unchanged
        NatVector flipped;
        for (const auto& [k, v] : x.entries())
            flipped.set(k, rng.coin() ? v : -v);
        CHECK(tsirelson_norm(flipped) == nx);
        // dropping entries can only shrink the norm
        NatVector restricted;
        for (const auto& [k, v] : x.entries())
            if (rng.coin()) restricted.set(k, v);
        CHECK(tsirelson_norm(restricted) <= nx);
    }
}

TEST_CASE("shifting the support right never shrinks the norm") {
    // Any admissible system norming x transfers index-by-index to the shifted
    // vector, so the shifted norm dominates.
    SplitMix64 rng(0x51F7u);
    for (int trial = 0; trial < 25; ++trial) {
        NatVector x = random_vector(rng, 9, 6);
        NatVector shifted;
        for (const auto& [k, v] : x.entries()) shifted.set(k + 1, v);
        CHECK(tsirelson_norm(x) <= tsirelson_norm(shifted));
    }
    // and the effect can be strict
    CHECK(tsirelson_norm(range_sum(3, 6)) < tsirelson_norm(range_sum(4, 7)));
}

TEST_CASE("support caps are enforced") {
    CHECK_THROWS_AS(tsirelson_norm(range_sum(1, 17)), cap_error);
    CHECK_THROWS_AS(tsirelson_norm_bruteforce(range_sum(1, 11)), cap_error);
    TsirelsonOptions loose;
    loose.support_cap = 32;
    CHECK(tsirelson_norm(range_sum(1, 17), loose) > 0);
}

TEST_CASE("certificate JSON round trip") {
    auto [value, cert] = tsirelson_norm_with_certificate(range_sum(3, 6));
    const auto j = certificate_to_json(cert);
    const NormCertificate back = certificate_from_json(j);
    CHECK(certificate_to_json(back) == j);
    CHECK(evaluate(back, range_sum(3, 6)) == value);
    CHECK(certificate_is_valid(back));

    CHECK_THROWS_AS(certificate_from_json(nlohmann::json{{"kind", "mystery"}}), parse_error);
    CHECK_THROWS_AS(certificate_from_json(nlohmann::json::array()), parse_error);
}

TEST_CASE("invalid certificates are rejected") {
    // count exceeds the first block's left endpoint
    auto bad = NormCertificate::make_split(
        {{1, 1}, {2, 2}},
        {NormCertificate::make_leaf(1, 1), NormCertificate::make_leaf(2, 1)});
    CHECK_FALSE(certificate_is_valid(bad));
    // child outside its block
    auto escape = NormCertificate::make_split(
        {{2, 2}, {3, 3}},
        {NormCertificate::make_leaf(2, 1), NormCertificate::make_leaf(4, 1)});
    CHECK_FALSE(certificate_is_valid(escape));
    // overlapping blocks
    auto overlap = NormCertificate::make_split(
        {{2, 3}, {3, 4}},
        {NormCertificate::make_leaf(2, 1), NormCertificate::make_leaf(4, 1)});
    CHECK_FALSE(certificate_is_valid(overlap));
    // zero sign on a leaf
    CHECK_FALSE(certificate_is_valid(NormCertificate::make_leaf(3, 0)));
}
