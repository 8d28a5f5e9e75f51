// cli.hpp - command line front end: partition, validate, generate, baseline
//
// Exit codes: 0 success, 1 infeasible input or invalid partitioning, 2 usage
// or parse errors. Needs CLI11.hpp and nlohmann/json.hpp on the include path.
#pragma once

#include "hgpart/driver.hpp"
#include "hgpart/generator.hpp"
#include "hgpart/io.hpp"
#include "hgpart/oracle.hpp"
#include "hgpart/parallel.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace hgpart {

inline constexpr int kStatsSchemaVersion = 1;

namespace detail {

using nlohmann::ordered_json;

inline ordered_json capacity_json(Capacity c) { return c == kUnbounded ? ordered_json(nullptr) : ordered_json(c); }

inline ordered_json partition_summary(const Hypergraph& hg, const Partitioning& part, const Constraints& cons) {
    auto report = validate_partitioning(hg, part, cons);
    NodeSize max_size = 0;
    std::uint64_t max_in = 0;
    for (auto s : report.part_sizes) max_size = std::max(max_size, s);
    for (auto c : report.inbound_counts) max_in = std::max<std::uint64_t>(max_in, c);
    ordered_json j;
    j["connectivity"] = connectivity(hg, part);
    j["cut_net"] = cut_net(hg, part);
    j["num_parts"] = part.num_nonempty();
    j["max_part_size"] = max_size;
    j["max_inbound"] = max_in;
    j["violations"] = report.violations.size();
    j["valid"] = report.valid();
    return j;
}

inline ordered_json stats_json(const Hypergraph& hg, const PartitionerConfig& cfg, const PartitionResult& res,
                               double total_seconds) {
    ordered_json j;
    j["schema_version"] = kStatsSchemaVersion;
    j["command"] = "partition";
    j["mode"] = cfg.mode == Mode::kway ? "kway" : "constrained";
    j["input"] = {{"nodes", hg.num_nodes()}, {"edges", hg.num_edges()}, {"pins", hg.num_pins()}};
    ordered_json c;
    c["omega"] = capacity_json(res.stats.omega);
    c["delta"] = capacity_json(res.stats.delta);
    if (cfg.mode == Mode::kway) {
        c["k"] = cfg.k;
        c["epsilon"] = cfg.epsilon;
    }
    c["pi"] = cfg.coarsening.pi;
    c["theta"] = cfg.refinement.theta;
    c["seed"] = cfg.coarsening.seed;
    j["config"] = c;
    j["result"] = partition_summary(hg, res.part, Constraints{res.stats.omega, res.stats.delta});

    ordered_json levels = ordered_json::array();
    for (const auto& l : res.stats.levels)
        levels.push_back({{"level", l.level},
                          {"nodes", l.nodes},
                          {"edges", l.edges},
                          {"pins", l.pins},
                          {"matched_fraction", l.matched_fraction},
                          {"matched_by_rounds", l.matched_by_rounds},
                          {"matched_leftover", l.matched_leftover}});
    j["levels"] = levels;
    ordered_json passes = ordered_json::array();
    for (const auto& p : res.stats.passes)
        passes.push_back({{"level", p.level},
                          {"pass", p.pass.pass},
                          {"enforce_size", p.pass.enforce_size},
                          {"proposed", p.pass.proposed},
                          {"applied", p.pass.applied},
                          {"gain", p.pass.gain},
                          {"connectivity_before", p.pass.connectivity_before},
                          {"connectivity_after", p.pass.connectivity_after}});
    j["refinement_passes"] = passes;

    const auto& t = res.stats.times;
    j["timings"] = {{"threads", par::num_threads()},
                    {"total", total_seconds},
                    {"neighbors", t.neighbors},
                    {"candidates", t.candidates},
                    {"matching", t.matching},
                    {"leftover_pairing", t.leftover},
                    {"coarse_build", t.coarse_build},
                    {"initial_partition", t.initial},
                    {"projection", t.projection},
                    {"pins", t.refine.pins},
                    {"move_proposal", t.refine.propose},
                    {"chaining", t.refine.chain},
                    {"sequence_gains", t.refine.gains},
                    {"events", t.refine.events},
                    {"constraint_checks", t.refine.validate},
                    {"apply", t.refine.apply}};
    return j;
}

inline void write_json(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

// Usage-level failures that surface after flag parsing (missing files and the like).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Hypergraph load(const std::string& path, const std::string& format) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    return read_hypergraph(in, parse_format(format));
}

} // namespace detail

inline int cli_main(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    CLI::App app{"Multi-level partitioner for weighted directed hypergraphs", "hgpart"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware default)")->capture_default_str();

    std::string input, format = "dhgr", output, stats_path, partition_path, mode = "constrained";
    std::optional<std::uint64_t> omega, delta;
    std::uint32_t k = 2, pi = 4, theta = 16;
    double epsilon = 0.03;
    std::uint64_t seed = 0;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input,-i", input, "hypergraph file")->required();
        sub->add_option("--format", format, "dhgr or hgr")->check(CLI::IsMember({"dhgr", "hgr"}))->capture_default_str();
    };
    auto add_limits = [&](CLI::App* sub) {
        sub->add_option("--omega", omega, "max partition size")->check(CLI::Range(std::uint64_t{1}, kUnbounded - 1));
        sub->add_option("--delta", delta, "max distinct inbound edges per partition")
            ->check(CLI::Range(std::uint64_t{1}, kUnbounded - 1));
    };

    auto* part_cmd = app.add_subcommand("partition", "partition a hypergraph");
    add_input(part_cmd);
    add_limits(part_cmd);
    part_cmd->add_option("--mode", mode, "constrained or kway")
        ->check(CLI::IsMember({"constrained", "kway"}))->capture_default_str();
    part_cmd->add_option("--k", k, "partitions (kway)")->check(CLI::Range(2u, kMaxNodes))->capture_default_str();
    part_cmd->add_option("--epsilon", epsilon, "balance slack (kway)")
        ->check(CLI::Range(0.0, 1e9))->capture_default_str();
    part_cmd->add_option("--pi", pi, "candidates per node")->check(CLI::Range(1u, 64u))->capture_default_str();
    part_cmd->add_option("--theta", theta, "refinement passes per level")->capture_default_str();
    part_cmd->add_option("--seed", seed, "noise seed")->capture_default_str();
    part_cmd->add_option("--output,-o", output, "partition file");
    part_cmd->add_option("--stats-json", stats_path, "stats report");

    auto* val_cmd = app.add_subcommand("validate", "check a partition file against constraints");
    add_input(val_cmd);
    add_limits(val_cmd);
    val_cmd->add_option("--partition,-p", partition_path, "partition file")->required();
    val_cmd->add_option("--stats-json", stats_path, "report");

    auto* base_cmd = app.add_subcommand("baseline", "one-pass baseline in node order");
    add_input(base_cmd);
    add_limits(base_cmd);
    base_cmd->add_option("--output,-o", output, "partition file");
    base_cmd->add_option("--stats-json", stats_path, "report");

    std::string kind = "layered", gen_format = "dhgr";
    GeneratorParams gp;
    auto* gen_cmd = app.add_subcommand("generate", "write a synthetic instance");
    gen_cmd->add_option("--kind", kind, "layered or smallworld")
        ->check(CLI::IsMember({"layered", "smallworld"}))->capture_default_str();
    gen_cmd->add_option("--layers", gp.layers)->check(CLI::PositiveNumber)->capture_default_str();
    gen_cmd->add_option("--width", gp.width)->check(CLI::PositiveNumber)->capture_default_str();
    gen_cmd->add_option("--fanout", gp.fanout)->check(CLI::PositiveNumber)->capture_default_str();
    gen_cmd->add_option("--radius", gp.radius)->capture_default_str();
    gen_cmd->add_option("--rewire", gp.rewire)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    gen_cmd->add_option("--max-weight", gp.max_weight)->check(CLI::PositiveNumber)->capture_default_str();
    gen_cmd->add_option("--seed", gp.seed)->capture_default_str();
    gen_cmd->add_option("--format", gen_format)->check(CLI::IsMember({"dhgr", "hgr"}))->capture_default_str();
    gen_cmd->add_option("--output,-o", output, "instance file")->required();

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const Constraints cons{omega.value_or(kUnbounded), delta.value_or(kUnbounded)};
    try {
        par::set_num_threads(threads);
        if (*part_cmd) {
            Hypergraph hg = detail::load(input, format);
            PartitionerConfig cfg;
            cfg.mode = mode == "kway" ? Mode::kway : Mode::constrained;
            cfg.omega = cons.omega;
            cfg.delta = cons.delta;
            cfg.k = k;
            cfg.epsilon = epsilon;
            cfg.coarsening.pi = pi;
            cfg.coarsening.seed = seed;
            cfg.refinement.theta = theta;
            const auto start = std::chrono::steady_clock::now();
            PartitionResult res = partition(hg, cfg);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (!output.empty()) write_partition(output, res.part.assignment);
            if (!stats_path.empty()) detail::write_json(stats_path, detail::stats_json(hg, cfg, res, secs));
            out << "partitions " << res.part.num_nonempty() << " connectivity " << res.stats.connectivity
                << " cut_net " << res.stats.cut_net << (res.stats.valid ? "" : " INVALID") << '\n';
            return res.stats.valid ? 0 : 1;
        }
        if (*val_cmd) {
            Hypergraph hg = detail::load(input, format);
            std::ifstream pin(partition_path);
            if (!pin) throw detail::UsageError("cannot open " + partition_path);
            Partitioning part = Partitioning::from_assignment(hg, read_partition(pin, hg.num_nodes()));
            auto report = validate_partitioning(hg, part, cons);
            for (const auto& v : report.violations)
                out << "partition " << v.part << (v.kind == Violation::Kind::size ? " size " : " inbound ")
                    << v.measured << " > " << v.limit << '\n';
            out << (report.valid() ? "valid" : "invalid") << " partitions " << part.num_nonempty() << " connectivity "
                << connectivity(hg, part) << '\n';
            if (!stats_path.empty()) {
                detail::ordered_json j;
                j["schema_version"] = kStatsSchemaVersion;
                j["command"] = "validate";
                j["result"] = detail::partition_summary(hg, part, cons);
                detail::write_json(stats_path, j);
            }
            return report.valid() ? 0 : 1;
        }
        if (*base_cmd) {
            Hypergraph hg = detail::load(input, format);
            Partitioning part =
                Partitioning::from_assignment(hg, oracle::one_pass(hg, cons.omega, cons.delta));
            if (!output.empty()) write_partition(output, part.assignment);
            if (!stats_path.empty()) {
                detail::ordered_json j;
                j["schema_version"] = kStatsSchemaVersion;
                j["command"] = "baseline";
                j["result"] = detail::partition_summary(hg, part, cons);
                detail::write_json(stats_path, j);
            }
            out << "partitions " << part.num_nonempty() << " connectivity " << connectivity(hg, part) << '\n';
            return 0;
        }
        if (*gen_cmd) {
            Hypergraph hg = generate_instance(parse_instance_kind(kind), gp);
            write_hypergraph(output, hg, parse_format(gen_format));
            out << "nodes " << hg.num_nodes() << " edges " << hg.num_edges() << " pins " << hg.num_pins() << '\n';
            return 0;
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const detail::UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return 1;
    } catch (const InvalidInput& e) {
        err << "invalid: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace hgpart
