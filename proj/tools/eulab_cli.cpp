// Command-line front door for the tree-norm laboratory: parse vectors and
// measures, run the norm and gauge computations with their certificates, and
// drive the scripted experiment suites. Exit codes: 0 ok, 2 input error,
// 3 cap exceeded, 4 property violated.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "eulab/convex.hpp"
#include "eulab/errors.hpp"
#include "eulab/experiments.hpp"
#include "eulab/gauges.hpp"
#include "eulab/treespace.hpp"
#include "eulab/tree_vector.hpp"
#include "eulab/tsirelson.hpp"

namespace {

using nlohmann::json;
using namespace eulab;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;
constexpr int kExitViolation = 4;

struct RunConfig {
    unsigned depth = 5;
    unsigned levels = 8;
    double tol = 1e-6;
    std::uint64_t seed = 1729;
    unsigned trials = 0;
    std::string input = "-";
    std::string format = "json";
    std::string out;
};

std::string read_input(const std::string& path) {
    if (path == "-" || path.empty())
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream f(path, std::ios::binary);
    if (!f) throw parse_error("cannot open input file '" + path + "'");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

json parse_json_input(const std::string& path) {
    const std::string text = read_input(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("invalid JSON input: ") + e.what());
    }
}

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty() || cfg.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw parse_error("cannot open output file '" + cfg.out + "'");
    f << text;
}

json antichain_json(const Antichain& witness) {
    json arr = json::array();
    for (const Node& n : witness) arr.push_back(node_to_string(n));
    return arr;
}

// Scalar results render as a JSON document, or in csv format as a
// value,value_dec row followed by the same traceability payload in a
// trailing comment.
void emit_scalar(const RunConfig& cfg, json doc) {
    if (cfg.format == "csv") {
        std::string text = "value,value_dec\n";
        text += doc.at("value").get<std::string>() + "," +
                doc.at("value_dec").get<std::string>() + "\n";
        doc.erase("value");
        doc.erase("value_dec");
        text += "# detail: " + doc.dump() + "\n";
        write_output(cfg, text);
    } else {
        write_output(cfg, doc.dump(2) + "\n");
    }
}

int cmd_norm_t(const RunConfig& cfg) {
    const NatVector x = nat_vector_from_json(parse_json_input(cfg.input));
    TsirelsonOptions opts;
    opts.support_cap = std::max(opts.support_cap, x.support_size());
    const TsirelsonResult res = tsirelson_norm_with_certificate(x, opts);
    emit_scalar(cfg, json{{"command", "norm-t"},
                          {"value", rat_to_string(res.value)},
                          {"value_dec", rat_to_decimal(res.value)},
                          {"certificate", certificate_to_json(res.certificate)}});
    return kExitOk;
}

int cmd_norm_eu(const RunConfig& cfg) {
    const TreeVector x = tree_vector_from_json(parse_json_input(cfg.input));
    const unsigned depth = x.empty() ? 0 : x.max_level();
    const EuNormResult res = eu_norm_with_certificate(x, detail::eu_options_for_depth(depth));
    emit_scalar(cfg, json{{"command", "norm-eu"},
                          {"value", rat_to_string(res.value)},
                          {"value_dec", rat_to_decimal(res.value)},
                          {"witness", antichain_json(res.witness)},
                          {"certificate", certificate_to_json(res.certificate)}});
    return kExitOk;
}

int cmd_gauge(const RunConfig& cfg) {
    const TreeVector y = tree_vector_from_json(parse_json_input(cfg.input));
    const GaugeResult res = gauge_n(y, cfg.levels, cfg.depth, cfg.tol);
    json doc = gauge_result_to_json(res);
    doc["command"] = "gauge";
    doc["value"] = rat_to_string(res.hi);
    doc["value_dec"] = rat_to_decimal(res.hi);
    emit_scalar(cfg, std::move(doc));
    return kExitOk;
}

int cmd_triple_norm(const RunConfig& cfg) {
    const TreeVector y = tree_vector_from_json(parse_json_input(cfg.input));
    const TripleNormResult res = triple_norm(y, cfg.levels, cfg.depth, cfg.tol);
    json doc = triple_norm_result_to_json(res);
    doc["command"] = "triple-norm";
    // the exact certified data are the squared-sum brackets inside the doc;
    // the headline value is their square-root midpoint
    doc["value"] = detail::format_double(res.value);
    doc["value_dec"] = detail::format_double(res.value);
    emit_scalar(cfg, std::move(doc));
    return kExitOk;
}

int cmd_t_op(const RunConfig& cfg) {
    const DyadicMeasure mu = measure_from_json(parse_json_input(cfg.input));
    const TreeVector image = t_operator(mu);
    const Rat total = tv_norm(mu);
    const EuNormResult res =
        eu_norm_with_certificate(image, detail::eu_options_for_depth(mu.depth()));
    emit_scalar(cfg, json{{"command", "t-op"},
                          {"depth", mu.depth()},
                          {"tv_norm", rat_to_string(total)},
                          {"image", tree_vector_to_json(image)},
                          {"value", rat_to_string(res.value)},
                          {"value_dec", rat_to_decimal(res.value)},
                          {"witness", antichain_json(res.witness)},
                          {"contractive", res.value <= total}});
    return kExitOk;
}

int cmd_experiments(const RunConfig& cfg, const std::string& name) {
    ExperimentConfig ecfg;
    ecfg.depth = cfg.depth;
    ecfg.levels = cfg.levels;
    ecfg.tol = cfg.tol;
    ecfg.seed = cfg.seed;
    ecfg.trials = cfg.trials;
    const ExperimentResult res = run_experiment(name, ecfg);
    if (cfg.format == "json") {
        json doc{{"command", "experiments"},
                 {"name", res.name},
                 {"passed", res.passed},
                 {"failed", res.failed},
                 {"property", res.property},
                 {"csv", res.csv},
                 {"violation", res.violation}};
        write_output(cfg, doc.dump(2) + "\n");
    } else {
        write_output(cfg, res.csv);
    }
    if (res.failed > 0) {
        std::cerr << "property violated; first violating instance:\n"
                  << res.violation.dump(2) << "\n";
        return kExitViolation;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tree-norm laboratory: exact recursive norms, interpolation gauges, "
                 "convex-structure experiments"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string experimentName;

    const auto addCommon = [&](CLI::App* sub, bool withInput) {
        sub->add_option("--depth", cfg.depth, "tree depth")->capture_default_str();
        sub->add_option("--levels", cfg.levels, "gauge level / truncation")->capture_default_str();
        sub->add_option("--tol", cfg.tol, "numeric tolerance")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        if (withInput) sub->add_option("input", cfg.input, "input JSON path, '-' for stdin");
    };

    CLI::App* normT = app.add_subcommand("norm-t", "recursive norm of an index vector");
    addCommon(normT, true);
    CLI::App* normEu = app.add_subcommand("norm-eu", "antichain norm of a tree vector");
    addCommon(normEu, true);
    CLI::App* gauge = app.add_subcommand("gauge", "interpolation gauge at level --levels");
    addCommon(gauge, true);
    CLI::App* triple = app.add_subcommand("triple-norm", "interpolation norm truncated at --levels");
    addCommon(triple, true);
    CLI::App* tOp = app.add_subcommand("t-op", "apply the cone operator to a dyadic measure");
    addCommon(tOp, true);
    CLI::App* experiments = app.add_subcommand("experiments", "run a scripted experiment suite");
    experiments->add_option("name", experimentName, "experiment name")->required();
    experiments->add_option("--trials", cfg.trials, "trial count (0: per-experiment default)")
        ->capture_default_str();
    addCommon(experiments, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (normT->parsed()) return cmd_norm_t(cfg);
        if (normEu->parsed()) return cmd_norm_eu(cfg);
        if (gauge->parsed()) return cmd_gauge(cfg);
        if (triple->parsed()) return cmd_triple_norm(cfg);
        if (tOp->parsed()) return cmd_t_op(cfg);
        return cmd_experiments(cfg, experimentName);
    } catch (const cap_error& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const property_violation& e) {
        std::cerr << "property violated: " << e.what() << "\n";
        return kExitViolation;
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
