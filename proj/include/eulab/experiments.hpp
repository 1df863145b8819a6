#ifndef EULAB_EXPERIMENTS_HPP
#define EULAB_EXPERIMENTS_HPP

#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eulab/convex.hpp"
#include "eulab/dentability.hpp"
#include "eulab/errors.hpp"
#include "eulab/gauges.hpp"
#include "eulab/prng.hpp"
#include "eulab/rational.hpp"
#include "eulab/treespace.hpp"
#include "eulab/tree_vector.hpp"
#include "eulab/tsirelson.hpp"

namespace eulab {

// ============================================================================
// Scripted experiment drivers. Each driver produces a deterministic CSV for a
// fixed configuration: a leading metadata line, a column header, exact
// rationals as "p/q" beside decimal renderings, and a trailing summary line.
// Property experiments count passes and surface the first violating instance
// as replayable JSON; observational experiments just record data.
// ============================================================================

struct ExperimentConfig {
    unsigned depth = 5;
    unsigned levels = 8;       // gauge truncation level
    double tol = 1e-6;
    std::uint64_t seed = 1729;
    unsigned trials = 0;       // 0: per-experiment default
};

struct ExperimentResult {
    std::string name;
    std::string csv;
    unsigned passed = 0;
    unsigned failed = 0;
    bool property = true;            // false: observational only
    nlohmann::json violation;        // first violating instance, null if none
};

// ----------------------------------------------------------------------------
// Seeded instance generators, shared by the drivers and the acceptance suite.
// ----------------------------------------------------------------------------

struct SuperadditivityInstance {
    std::vector<TreeVector> parts;
    unsigned k = 0;
};

// Parts in disjoint subtrees with strictly increasing level bands:
// r in {2,3} parts rooted at distinct level-2 nodes, bands tiled over
// [k, depth] with k in {r, r+1}. Requires depth >= 5.
inline SuperadditivityInstance random_superadditivity_instance(SplitMix64& rng, unsigned depth) {
    if (depth < 5) throw std::invalid_argument("superadditivity generator: depth must be >= 5");
    static const Rat pool[] = {Rat(1), Rat(-1), Rat(1) / 2, Rat(-1) / 2,
                               Rat(2), Rat(-2), Rat(3, 2)};
    SuperadditivityInstance inst;
    const unsigned r = 2 + static_cast<unsigned>(rng.below(2));
    unsigned k = r + static_cast<unsigned>(rng.below(2));
    while (depth < k + r - 1) --k;  // keep r one-level bands available
    inst.k = k;

    // band boundaries: r consecutive chunks of [k, depth]
    std::vector<std::pair<unsigned, unsigned>> bands;
    unsigned lo = k;
    for (unsigned i = 0; i < r; ++i) {
        const unsigned remaining = r - 1 - i;
        const unsigned maxHi = depth - remaining;
        unsigned hi = lo + static_cast<unsigned>(rng.below(maxHi - lo + 1));
        bands.push_back({lo, hi});
        lo = hi + 1;
    }

    // roots: distinct level-2 nodes (pairwise incomparable)
    std::vector<Node> roots = {node_from_string("00"), node_from_string("01"),
                               node_from_string("10"), node_from_string("11")};
    for (unsigned i = 0; i < r; ++i) {
        const std::size_t j = i + rng.below(roots.size() - i);
        std::swap(roots[i], roots[j]);
    }

    for (unsigned i = 0; i < r; ++i) {
        TreeVector part;
        const unsigned count = 1 + static_cast<unsigned>(rng.below(3));
        for (unsigned c = 0; c < count; ++c) {
            const unsigned level = bands[i].first +
                                   static_cast<unsigned>(rng.below(bands[i].second - bands[i].first + 1));
            Node n = roots[i];
            while (n.len < level) n = n.child(static_cast<unsigned>(rng.below(2)));
            part.set(n, pool[rng.below(7)]);
        }
        inst.parts.push_back(std::move(part));
    }
    return inst;
}

struct BlockInstance {
    std::vector<TreeVector> blocks;
    std::vector<Rat> mu;
    std::vector<int> fences;
};

// Blocks from the proven-safe classes: each block is either chain-supported
// or supported on a single level, normalized to tree norm at most 1, inside
// strictly separated open level bands. Requires depth >= 5.
inline BlockInstance random_block_instance(SplitMix64& rng, unsigned depth) {
    if (depth < 5) throw std::invalid_argument("block generator: depth must be >= 5");
    static const Rat muPool[] = {Rat(1), Rat(-1), Rat(1) / 2, Rat(-1) / 2, Rat(2), Rat(-2)};
    BlockInstance inst;
    const unsigned r = 2 + static_cast<unsigned>(rng.below(depth >= 7 ? 2 : 1));

    // fences: r+1 strictly increasing integers with gaps >= 2 so each open
    // band (fences[k], fences[k+1]) holds at least one level
    inst.fences.push_back(1 + static_cast<int>(rng.below(2)));
    for (unsigned i = 0; i < r; ++i) {
        const int remaining = static_cast<int>(r - 1 - i);
        const int maxFence = static_cast<int>(depth) + 1 - 2 * remaining;
        const int minFence = inst.fences.back() + 2;
        inst.fences.push_back(minFence +
                              static_cast<int>(rng.below(static_cast<std::uint64_t>(
                                  maxFence - minFence + 1))));
    }

    for (unsigned i = 0; i < r; ++i) {
        const unsigned bandLo = static_cast<unsigned>(inst.fences[i] + 1);
        const unsigned bandHi = static_cast<unsigned>(inst.fences[i + 1] - 1);
        TreeVector block;
        if (bandHi > bandLo && rng.coin()) {
            // chain through the band with +-1 coefficients
            Node n;
            while (n.len < bandLo) n = n.child(static_cast<unsigned>(rng.below(2)));
            for (unsigned l = bandLo; l <= bandHi; ++l) {
                block.set(n, rng.coin() ? Rat(1) : Rat(-1));
                n = n.child(static_cast<unsigned>(rng.below(2)));
            }
        } else {
            // a single level with +-1 coefficients on a few distinct nodes
            const unsigned level = bandLo + static_cast<unsigned>(rng.below(bandHi - bandLo + 1));
            const unsigned count = 1 + static_cast<unsigned>(rng.below(3));
            for (unsigned c = 0; c < count; ++c) {
                Node n;
                while (n.len < level) n = n.child(static_cast<unsigned>(rng.below(2)));
                block.set(n, rng.coin() ? Rat(1) : Rat(-1));
            }
        }
        inst.blocks.push_back(std::move(block));
        inst.mu.push_back(muPool[rng.below(6)]);
    }
    return inst;
}

// ----------------------------------------------------------------------------
// CSV plumbing.
// ----------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CsvBuilder {
    std::string text;

    void metadata(const std::string& name, const ExperimentConfig& cfg, unsigned trials,
                  const std::string& extra = "") {
        text += "# experiment=" + name + " depth=" + std::to_string(cfg.depth) +
                " seed=" + std::to_string(cfg.seed) + " trials=" + std::to_string(trials);
        if (!extra.empty()) text += " " + extra;
        text += "\n";
    }
    void header(const std::string& columns) { text += columns + "\n"; }
    void row(const std::string& cells) { text += cells + "\n"; }
    void summary(const std::string& s) { text += "# summary: " + s + "\n"; }
};

inline std::string rat_cells(const Rat& v) { return rat_to_string(v) + "," + rat_to_decimal(v); }

} // namespace detail

// ----------------------------------------------------------------------------
// Drivers.
// ----------------------------------------------------------------------------

inline ExperimentResult run_superadditivity_experiment(const ExperimentConfig& cfg) {
    const unsigned trials = cfg.trials ? cfg.trials : 100;
    const unsigned depth = std::max(cfg.depth, 5u);
    ExperimentResult out;
    out.name = "superadditivity";
    detail::CsvBuilder csv;
    ExperimentConfig meta = cfg;
    meta.depth = depth;
    csv.metadata(out.name, meta, trials);
    csv.header("trial,parts,k,whole,whole_dec,bound,bound_dec,certified,certified_dec,holds");
    const EuNormOptions opts = detail::eu_options_for_depth(depth);
    for (unsigned t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::substream(cfg.seed, t);
        const SuperadditivityInstance inst = random_superadditivity_instance(rng, depth);
        const SuperadditivityReport rep = check_superadditivity(inst.parts, inst.k, opts);
        const bool ok = rep.holds && rep.certified == rep.bound;
        csv.row(std::to_string(t) + "," + std::to_string(inst.parts.size()) + "," +
                std::to_string(inst.k) + "," + detail::rat_cells(rep.whole) + "," +
                detail::rat_cells(rep.bound) + "," + detail::rat_cells(rep.certified) + "," +
                (ok ? "1" : "0"));
        if (ok) {
            ++out.passed;
        } else if (out.failed++ == 0) {
            nlohmann::json parts = nlohmann::json::array();
            for (const TreeVector& p : inst.parts) parts.push_back(tree_vector_to_json(p));
            out.violation = nlohmann::json{{"experiment", out.name},
                                           {"trial", t},
                                           {"k", inst.k},
                                           {"parts", std::move(parts)}};
        }
    }
    csv.summary("held=" + std::to_string(out.passed) + "/" + std::to_string(trials));
    out.csv = std::move(csv.text);
    return out;
}

inline ExperimentResult run_blocks_experiment(const ExperimentConfig& cfg) {
    const unsigned trials = cfg.trials ? cfg.trials : 100;
    const unsigned depth = std::max(cfg.depth, 5u);
    ExperimentResult out;
    out.name = "blocks";
    detail::CsvBuilder csv;
    ExperimentConfig meta = cfg;
    meta.depth = depth;
    csv.metadata(out.name, meta, trials);
    csv.header("trial,blocks,lhs,lhs_dec,rhs,rhs_dec,holds");
    const EuNormOptions opts = detail::eu_options_for_depth(depth);
    for (unsigned t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::substream(cfg.seed, t);
        const BlockInstance inst = random_block_instance(rng, depth);
        const BlockDominationReport rep =
            check_block_domination(inst.blocks, inst.mu, inst.fences, opts);
        csv.row(std::to_string(t) + "," + std::to_string(inst.blocks.size()) + "," +
                detail::rat_cells(rep.lhs) + "," + detail::rat_cells(rep.rhs) + "," +
                (rep.holds ? "1" : "0"));
        if (rep.holds) {
            ++out.passed;
        } else if (out.failed++ == 0) {
            nlohmann::json blocks = nlohmann::json::array();
            for (const TreeVector& b : inst.blocks) blocks.push_back(tree_vector_to_json(b));
            nlohmann::json mu = nlohmann::json::array();
            for (const Rat& m : inst.mu) mu.push_back(rat_to_string(m));
            out.violation = nlohmann::json{{"experiment", out.name},
                                           {"trial", t},
                                           {"blocks", std::move(blocks)},
                                           {"mu", std::move(mu)},
                                           {"fences", inst.fences}};
        }
    }
    csv.summary("held=" + std::to_string(out.passed) + "/" + std::to_string(trials));
    out.csv = std::move(csv.text);
    return out;
}

inline ExperimentResult run_separation_experiment(const ExperimentConfig& cfg) {
    const unsigned depth = std::max(cfg.depth, 1u);
    ExperimentResult out;
    out.name = "separation";
    detail::CsvBuilder csv;
    ExperimentConfig meta = cfg;
    meta.depth = depth;
    csv.metadata(out.name, meta, 0);
    csv.header("level,alpha,value,value_dec,ge_one");
    const SeparationTable table = separation_table(depth);
    Rat minValue;
    bool first = true;
    for (const SeparationRow& row : table.rows) {
        const bool ok = row.value >= 1 && (row.alpha.len != depth - 1 || row.value == 1);
        csv.row(std::to_string(row.alpha.len) + "," + node_to_string(row.alpha) + "," +
                detail::rat_cells(row.value) + "," + (ok ? "1" : "0"));
        if (ok) {
            ++out.passed;
        } else if (out.failed++ == 0) {
            out.violation = nlohmann::json{{"experiment", out.name},
                                           {"alpha", node_to_string(row.alpha)},
                                           {"value", rat_to_string(row.value)}};
        }
        if (first || row.value < minValue) {
            minValue = row.value;
            first = false;
        }
    }
    csv.summary("held=" + std::to_string(out.passed) + "/" + std::to_string(table.rows.size()) +
                " min=" + rat_to_string(minValue));
    out.csv = std::move(csv.text);
    return out;
}

inline ExperimentResult run_slices_experiment(const ExperimentConfig& cfg) {
    const unsigned trials = cfg.trials ? cfg.trials : 100;
    const unsigned depth = std::max(cfg.depth, 4u);
    const unsigned d0 = depth - 2;
    static const Rat betas[] = {Rat(1) / 4, Rat(1) / 2, Rat(1)};
    ExperimentResult out;
    out.name = "slices";
    detail::CsvBuilder csv;
    ExperimentConfig meta = cfg;
    meta.depth = depth;
    csv.metadata(out.name, meta, trials, "d0=" + std::to_string(d0));
    csv.header("trial,sup,sup_dec,inside,bound,bound_dec,holds");
    for (unsigned t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::substream(cfg.seed, t);
        const SliceSpec spec{random_shallow_functional(rng, d0), betas[rng.below(3)]};
        const SliceReport rep = slice_vertices(depth, spec);
        const Rat bound = shallow_slice_bound(depth, d0, spec);
        const bool ok = bound >= 1;
        csv.row(std::to_string(t) + "," + detail::rat_cells(rep.sup) + "," +
                std::to_string(rep.inside.size()) + "," + detail::rat_cells(bound) + "," +
                (ok ? "1" : "0"));
        if (ok) {
            ++out.passed;
        } else if (out.failed++ == 0) {
            out.violation = nlohmann::json{{"experiment", out.name},
                                           {"trial", t},
                                           {"functional", tree_vector_to_json(spec.functional)},
                                           {"beta", rat_to_string(spec.beta)}};
        }
    }
    const ConvexComboReport combo = convex_combination_slice_experiment(
        depth, 2, std::max(1u, trials / 10), cfg.seed ^ 0x9E3779B97F4A7C15ull);
    csv.summary("held=" + std::to_string(out.passed) + "/" + std::to_string(trials) +
                " combo_min=" + rat_to_string(combo.min_distance));
    out.csv = std::move(csv.text);
    return out;
}

inline ExperimentResult run_gauges_experiment(const ExperimentConfig& cfg) {
    const unsigned trials = cfg.trials ? cfg.trials : 12;
    const unsigned depth = cfg.depth;
    const unsigned levels = std::max(1u, std::min(cfg.levels, 6u));
    ExperimentResult out;
    out.name = "gauges";
    detail::CsvBuilder csv;
    char tolBuf[32];
    std::snprintf(tolBuf, sizeof tolBuf, "%g", cfg.tol);
    csv.metadata(out.name, cfg, trials,
                 "levels=" + std::to_string(levels) + " tol=" + std::string(tolBuf));
    csv.header("kind,id,n,lo,hi,value_dec,residual,b_norm,ok");
    const Rat tolR = rat_from_double(cfg.tol);
    const EuNormOptions opts = detail::eu_options_for_depth(depth);
    const auto vertices = detail::signed_w_vertices(depth);
    unsigned total = 0;

    const auto record = [&](const std::string& kind, unsigned id, const TreeVector& y, unsigned n,
                            CutPool& pool, bool vertexCeiling) {
        const GaugeResult g = gauge_n(y, n, depth, cfg.tol, &pool);
        const Rat normY = eu_norm(y, opts);
        const Rat p2n = rat_pow2(static_cast<int>(n));
        const Rat p2mn = rat_pow2(-static_cast<int>(n));
        bool ok = g.residual <= tolR && g.b_norm <= 1 && g.hi - g.lo <= tolR;
        ok = ok && g.hi >= normY / (p2n + p2mn) && g.lo <= p2n * normY;  // sandwich
        if (vertexCeiling) ok = ok && g.hi <= p2mn + tolR;
        csv.row(kind + "," + std::to_string(id) + "," + std::to_string(n) + "," +
                rat_to_string(g.lo) + "," + rat_to_string(g.hi) + "," +
                detail::format_double(g.value) + "," + rat_to_string(g.residual) + "," +
                rat_to_string(g.b_norm) + "," + (ok ? "1" : "0"));
        ++total;
        if (ok) {
            ++out.passed;
        } else if (out.failed++ == 0) {
            out.violation = nlohmann::json{{"experiment", out.name},
                                           {"kind", kind},
                                           {"id", id},
                                           {"n", n},
                                           {"vector", tree_vector_to_json(y)}};
        }
    };

    CutPool pool;
    for (std::size_t j = 0; j < vertices.size(); ++j)
        for (unsigned n = 1; n <= levels; ++n)
            record("vertex", static_cast<unsigned>(j), vertices[j], n, pool, true);

    static const Rat coefPool[] = {Rat(1), Rat(-1), Rat(1) / 2, Rat(-1) / 2, Rat(2)};
    const std::vector<Node> nodes = all_nodes_to_depth(depth);
    for (unsigned t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::substream(cfg.seed, t);
        TreeVector y;
        const std::size_t count = 1 + rng.below(4);
        for (std::size_t i = 0; i < count; ++i)
            y.set(nodes[rng.below(nodes.size())], coefPool[rng.below(5)]);
        record("random", t, y, 1 + (t % levels), pool, false);
    }

    csv.summary("held=" + std::to_string(out.passed) + "/" + std::to_string(total));
    out.csv = std::move(csv.text);
    return out;
}

inline ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& cfg) {
    if (name == "superadditivity") return run_superadditivity_experiment(cfg);
    if (name == "blocks") return run_blocks_experiment(cfg);
    if (name == "separation") return run_separation_experiment(cfg);
    if (name == "slices") return run_slices_experiment(cfg);
    if (name == "gauges") return run_gauges_experiment(cfg);
    throw parse_error("unknown experiment '" + name +
                      "' (expected superadditivity|blocks|separation|slices|gauges)");
}

} // namespace eulab

#endif
