#ifndef EULAB_NODE_HPP
#define EULAB_NODE_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "eulab/errors.hpp"

namespace eulab {

// A node of the infinite dyadic tree: a finite 0/1 sequence. The root is the
// empty sequence and |alpha| (the level) is the sequence length. The first
// coordinate sits at the most significant of the low `len` bits, so equal-length
// nodes compare lexicographically by the packed value.
struct Node {
    std::uint64_t bits = 0;
    unsigned len = 0;

    static constexpr unsigned kMaxLen = 62;

    Node() = default;
    Node(std::uint64_t b, unsigned l) : bits(b), len(l) {}

    // Level-lex order: by level first, then lexicographic within a level.
    friend auto operator<=>(const Node& a, const Node& b) {
        if (a.len != b.len) return a.len <=> b.len;
        return a.bits <=> b.bits;
    }
    friend bool operator==(const Node&, const Node&) = default;

    Node child(unsigned bit) const {
        if (len >= kMaxLen) throw cap_error("node deeper than supported");
        return Node((bits << 1) | (bit & 1u), len + 1);
    }
    Node parent() const {
        if (len == 0) throw std::invalid_argument("root has no parent");
        return Node(bits >> 1, len - 1);
    }
    // Ancestor at the given level (level <= len).
    Node ancestor(unsigned level) const {
        if (level > len) throw std::invalid_argument("ancestor level exceeds node level");
        return Node(bits >> (len - level), level);
    }
    unsigned bit_at(unsigned i) const { // i in [0, len)
        return static_cast<unsigned>((bits >> (len - 1 - i)) & 1u);
    }
};

inline bool is_root(const Node& a) { return a.len == 0; }

// a is a (weak) prefix of b: the subtree below a contains b.
inline bool is_prefix_of(const Node& a, const Node& b) {
    return a.len <= b.len && (b.bits >> (b.len - a.len)) == a.bits;
}

inline bool comparable(const Node& a, const Node& b) {
    return is_prefix_of(a, b) || is_prefix_of(b, a);
}

inline bool incomparable(const Node& a, const Node& b) { return !comparable(a, b); }

// Wire format: the bit string, "" for the root, e.g. "011" = (0,1,1).
inline std::string node_to_string(const Node& a) {
    std::string s;
    s.reserve(a.len);
    for (unsigned i = 0; i < a.len; ++i) s.push_back(a.bit_at(i) ? '1' : '0');
    return s;
}

inline Node node_from_string(const std::string& text) {
    if (text.size() > Node::kMaxLen) throw parse_error("node string too long: '" + text + "'");
    Node a;
    for (char c : text) {
        if (c != '0' && c != '1') throw parse_error("malformed node '" + text + "' (bits only)");
        a = a.child(c == '1' ? 1u : 0u);
    }
    return a;
}

// All nodes of the tree truncated at `depth`, in level-lex order.
inline std::vector<Node> all_nodes_to_depth(unsigned depth) {
    std::vector<Node> out;
    for (unsigned l = 0; l <= depth; ++l)
        for (std::uint64_t b = 0; b < (std::uint64_t(1) << l); ++b) out.emplace_back(b, l);
    return out;
}

inline std::vector<Node> leaves_at_depth(unsigned depth) {
    std::vector<Node> out;
    for (std::uint64_t b = 0; b < (std::uint64_t(1) << depth); ++b) out.emplace_back(b, depth);
    return out;
}

} // namespace eulab

#endif
