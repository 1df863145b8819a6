#ifndef EULAB_ANTICHAIN_HPP
#define EULAB_ANTICHAIN_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "eulab/node.hpp"

namespace eulab {

// An antichain here is always: pairwise incomparable nodes with strictly
// increasing levels, stored sorted in level-lex order. Strictly increasing
// levels means at most one node per level.
using Antichain = std::vector<Node>;

inline bool is_antichain(const Antichain& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            if (a[i].len >= a[j].len) return false;
            if (comparable(a[i], a[j])) return false;
        }
    }
    return true;
}

inline constexpr std::size_t kAntichainSupportCap = 24;

namespace detail {

// Core walker shared by the plain enumerator and the pruned norm search, so
// both see the identical emission order.
//
// Emission order is post-order over the level-lex extension tree: an antichain
// is emitted after all of its extensions, and extension candidates are scanned
// in level-lex order. (The first emitted antichain is therefore the deepest
// greedy extension of the first node, and every antichain strictly precedes
// all of its prefixes.)
//
// `prune(current, candidateIndex)` may return true to skip the whole subtree
// of antichains that extend `current` with nodes[candidateIndex]; it must only
// do so when no antichain in that subtree can matter to the caller.
template <typename Emit, typename Prune>
void walk_antichains(const std::vector<Node>& nodes, Emit&& emit, Prune&& prune) {
    Antichain current;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> visit = [&](std::size_t startIdx) {
        for (std::size_t i = startIdx; i < nodes.size(); ++i) {
            if (!current.empty()) {
                if (nodes[i].len <= current.back().len) continue;
                bool ok = true;
                for (const Node& c : current)
                    if (comparable(c, nodes[i])) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
            }
            if (prune(static_cast<const Antichain&>(current), i)) continue;
            current.push_back(nodes[i]);
            visit(i + 1);
            current.pop_back();
        }
        if (!current.empty()) emit(static_cast<const Antichain&>(current));
    };
    visit(0);
}

} // namespace detail

// Enumerates every nonempty antichain within `support`, emitting each exactly
// once in the walker's canonical order. The support is deduplicated and sorted
// first. Throws cap_error when the support exceeds `cap` nodes.
template <typename Emit>
void for_each_antichain(std::vector<Node> support, Emit&& emit,
                        std::size_t cap = kAntichainSupportCap) {
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    if (support.size() > cap)
        throw cap_error("antichain enumeration support of " + std::to_string(support.size()) +
                        " nodes exceeds cap " + std::to_string(cap));
    detail::walk_antichains(
        support, emit, [](const Antichain&, std::size_t) { return false; });
}

inline std::vector<Antichain> enumerate_antichains(const std::vector<Node>& support,
                                                   std::size_t cap = kAntichainSupportCap) {
    std::vector<Antichain> out;
    for_each_antichain(
        std::vector<Node>(support), [&](const Antichain& a) { out.push_back(a); }, cap);
    return out;
}

} // namespace eulab

#endif
