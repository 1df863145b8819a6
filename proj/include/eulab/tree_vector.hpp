#ifndef EULAB_TREE_VECTOR_HPP
#define EULAB_TREE_VECTOR_HPP

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eulab/node.hpp"
#include "eulab/rational.hpp"

namespace eulab {

// ============================================================================
// TreeVector: a finitely supported vector over dyadic-tree nodes.
// Zero coefficients are never stored, so support() is exactly the nonzeros and
// equality is plain map equality.
// ============================================================================

class TreeVector {
public:
    using Map = std::map<Node, Rat>;

    TreeVector() = default;

    static TreeVector basis(const Node& a) {
        TreeVector v;
        v.set(a, Rat(1));
        return v;
    }

    const Map& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    Rat get(const Node& a) const {
        auto it = entries_.find(a);
        return it == entries_.end() ? Rat(0) : it->second;
    }

    void set(const Node& a, const Rat& value) {
        if (value == 0)
            entries_.erase(a);
        else
            entries_[a] = value;
    }

    void add(const Node& a, const Rat& value) { set(a, get(a) + value); }

    TreeVector& operator+=(const TreeVector& o) {
        for (const auto& [a, v] : o.entries_) add(a, v);
        return *this;
    }
    TreeVector& operator-=(const TreeVector& o) {
        for (const auto& [a, v] : o.entries_) add(a, -v);
        return *this;
    }
    TreeVector& operator*=(const Rat& c) {
        if (c == 0) {
            entries_.clear();
            return *this;
        }
        for (auto& [a, v] : entries_) v *= c;
        return *this;
    }
    friend TreeVector operator+(TreeVector a, const TreeVector& b) { return a += b; }
    friend TreeVector operator-(TreeVector a, const TreeVector& b) { return a -= b; }
    friend TreeVector operator*(const Rat& c, TreeVector a) { return a *= c; }
    friend TreeVector operator*(TreeVector a, const Rat& c) { return a *= c; }
    friend bool operator==(const TreeVector&, const TreeVector&) = default;

    // Support nodes in level-lex order (the map order).
    std::vector<Node> support() const {
        std::vector<Node> out;
        out.reserve(entries_.size());
        for (const auto& [a, v] : entries_) out.push_back(a);
        return out;
    }

    unsigned max_level() const {
        unsigned m = 0;
        for (const auto& [a, v] : entries_) m = std::max(m, a.len);
        return m;
    }

    Rat l1_norm() const {
        Rat s(0);
        for (const auto& [a, v] : entries_) s += rat_abs(v);
        return s;
    }

    Rat linf_norm() const {
        Rat s(0);
        for (const auto& [a, v] : entries_) s = std::max(s, rat_abs(v));
        return s;
    }

    // Coordinate pairing <f, x> = sum_a f_a * x_a.
    Rat pair(const TreeVector& x) const {
        const TreeVector* small = this;
        const TreeVector* big = &x;
        if (small->support_size() > big->support_size()) std::swap(small, big);
        Rat s(0);
        for (const auto& [a, v] : small->entries_) s += v * big->get(a);
        return s;
    }

    // Restriction to levels in [lo, hi].
    TreeVector level_project(unsigned lo, unsigned hi) const {
        TreeVector out;
        for (const auto& [a, v] : entries_)
            if (a.len >= lo && a.len <= hi) out.set(a, v);
        return out;
    }

private:
    Map entries_;
};

// ============================================================================
// NatVector: a finitely supported vector over indices 1,2,3,... (the domain of
// the recursive norm). Same storage conventions as TreeVector.
// ============================================================================

class NatVector {
public:
    using Map = std::map<int, Rat>;

    NatVector() = default;

    static NatVector basis(int k) {
        NatVector v;
        v.set(k, Rat(1));
        return v;
    }

    const Map& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    Rat get(int k) const {
        auto it = entries_.find(k);
        return it == entries_.end() ? Rat(0) : it->second;
    }

    void set(int k, const Rat& value) {
        if (k < 1) throw std::invalid_argument("index must be >= 1");
        if (value == 0)
            entries_.erase(k);
        else
            entries_[k] = value;
    }

    void add(int k, const Rat& value) { set(k, get(k) + value); }

    NatVector& operator+=(const NatVector& o) {
        for (const auto& [k, v] : o.entries_) add(k, v);
        return *this;
    }
    NatVector& operator-=(const NatVector& o) {
        for (const auto& [k, v] : o.entries_) add(k, -v);
        return *this;
    }
    NatVector& operator*=(const Rat& c) {
        if (c == 0) {
            entries_.clear();
            return *this;
        }
        for (auto& [k, v] : entries_) v *= c;
        return *this;
    }
    friend NatVector operator+(NatVector a, const NatVector& b) { return a += b; }
    friend NatVector operator-(NatVector a, const NatVector& b) { return a -= b; }
    friend NatVector operator*(const Rat& c, NatVector a) { return a *= c; }
    friend NatVector operator*(NatVector a, const Rat& c) { return a *= c; }
    friend bool operator==(const NatVector&, const NatVector&) = default;

    Rat l1_norm() const {
        Rat s(0);
        for (const auto& [k, v] : entries_) s += rat_abs(v);
        return s;
    }

    Rat linf_norm() const {
        Rat s(0);
        for (const auto& [k, v] : entries_) s = std::max(s, rat_abs(v));
        return s;
    }

private:
    Map entries_;
};

// ============================================================================
// JSON wire formats. Rationals travel as "p/q" strings, nodes as bit strings.
// Round trip is exact.
// ============================================================================

inline nlohmann::json tree_vector_to_json(const TreeVector& x) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [a, v] : x.entries())
        entries.push_back({{"node", node_to_string(a)}, {"value", rat_to_string(v)}});
    return nlohmann::json{{"entries", std::move(entries)}};
}

inline TreeVector tree_vector_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
        throw parse_error("TreeVector JSON must be {\"entries\": [...]}");
    TreeVector x;
    for (const auto& e : j["entries"]) {
        if (!e.is_object() || !e.contains("node") || !e.contains("value") ||
            !e["node"].is_string() || !e["value"].is_string())
            throw parse_error("TreeVector entry must be {\"node\": \"bits\", \"value\": \"p/q\"}");
        Node a = node_from_string(e["node"].get<std::string>());
        Rat v = rat_from_string(e["value"].get<std::string>());
        if (x.get(a) != 0) throw parse_error("duplicate node '" + node_to_string(a) + "'");
        x.set(a, v);
    }
    return x;
}

inline nlohmann::json nat_vector_to_json(const NatVector& x) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [k, v] : x.entries())
        entries.push_back({{"index", k}, {"value", rat_to_string(v)}});
    return nlohmann::json{{"entries", std::move(entries)}};
}

inline NatVector nat_vector_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
        throw parse_error("NatVector JSON must be {\"entries\": [...]}");
    NatVector x;
    for (const auto& e : j["entries"]) {
        if (!e.is_object() || !e.contains("index") || !e.contains("value") ||
            !e["index"].is_number_integer() || !e["value"].is_string())
            throw parse_error("NatVector entry must be {\"index\": k, \"value\": \"p/q\"}");
        int k = e["index"].get<int>();
        if (k < 1) throw parse_error("NatVector index must be >= 1");
        Rat v = rat_from_string(e["value"].get<std::string>());
        if (x.get(k) != 0) throw parse_error("duplicate index " + std::to_string(k));
        x.set(k, v);
    }
    return x;
}

} // namespace eulab

#endif
