// driver.hpp - multi-level loop: coarsen, seed initial partitions, uncoarsen and refine
#pragma once

#include "hgpart/coarse_build.hpp"
#include "hgpart/coarsening.hpp"
#include "hgpart/hypergraph.hpp"
#include "hgpart/matching.hpp"
#include "hgpart/neighborhood.hpp"
#include "hgpart/partitioning.hpp"
#include "hgpart/refinement.hpp"
#include "hgpart/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace hgpart {

enum class Mode { constrained, kway };

struct PartitionerConfig {
    Mode mode = Mode::constrained;
    Capacity omega = kUnbounded;
    Capacity delta = kUnbounded;
    PartId k = 2;
    double epsilon = 0.03;
    CoarseningParams coarsening;
    RefinementParams refinement;
    NodeId kway_halt = 4096;         // k-way coarsening stops below this many nodes
    double stall_fraction = 0.005;   // stop coarsening once a level matches fewer nodes
    std::size_t leftover_scan = 256;

    void check() const {
        if (mode == Mode::constrained) {
            if (omega < 1) throw InvalidInput("omega must be at least 1");
            if (delta < 1) throw InvalidInput("delta must be at least 1");
        } else {
            if (k < 2) throw InvalidInput("k must be at least 2");
            if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be a finite value >= 0");
        }
        if (coarsening.pi < 1) throw InvalidInput("pi must be at least 1");
    }
};

// One coarsening level. levels[0] is the input with an empty map; levels[i].map
// sends level i−1 nodes onto level i nodes.
struct Level {
    Hypergraph hg;
    IncidenceIndex inc;
    LevelMap map;
};
using LevelStack = std::vector<Level>;

struct LevelStats {
    std::uint32_t level = 0;
    NodeId nodes = 0;
    EdgeId edges = 0;
    std::size_t pins = 0;
    // Fraction of this level's nodes clustered into the next level (0 on the last).
    double matched_fraction = 0.0;
    std::size_t matched_by_rounds = 0;
    std::size_t matched_leftover = 0;
};

struct PassRecord {
    std::uint32_t level = 0;
    PassStats pass;
};

struct PhaseTimes {
    double neighbors = 0, candidates = 0, matching = 0, leftover = 0, coarse_build = 0;
    double initial = 0, projection = 0;
    RefinePhaseTimes refine;
};

struct RunStats {
    std::vector<LevelStats> levels;
    std::vector<PassRecord> passes;
    PhaseTimes times;
    Capacity omega = kUnbounded;
    Capacity delta = kUnbounded;
    Weight connectivity = 0.0;
    Weight cut_net = 0.0;
    PartId num_parts = 0;
    PartId num_nonempty = 0;
    bool valid = false;
};

struct PartitionResult {
    Partitioning part;
    RunStats stats;
};

// Called on every projection with the coarse level, its partitioning, the
// finer level and the projected assignment (before refinement).
struct ProjectionView {
    std::uint32_t coarse_level;
    const Level& coarse;
    const Partitioning& coarse_part;
    const Level& fine;
    const std::vector<PartId>& projected;
};
struct DriverHooks {
    std::function<void(const ProjectionView&)> on_project;
};

inline std::vector<PartId> project(std::span<const PartId> coarse_assignment, const LevelMap& lm) {
    std::vector<PartId> fine(lm.num_fine());
    for (NodeId v = 0; v < lm.num_fine(); ++v) fine[v] = coarse_assignment[lm.gamma[v]];
    return fine;
}

// Throws InfeasibleError for the first node that cannot sit alone in a partition.
inline void check_feasible(const Hypergraph& hg, const IncidenceIndex& inc, const Constraints& cons) {
    for (NodeId v = 0; v < hg.num_nodes(); ++v) {
        if (!cons.size_ok(hg.node_size(v)))
            throw InfeasibleError("node " + std::to_string(v) + " has size " + std::to_string(hg.node_size(v)) +
                                      " above omega " + std::to_string(cons.omega),
                                  v);
        if (!cons.inbound_ok(inc.in_count(v)))
            throw InfeasibleError("node " + std::to_string(v) + " has " + std::to_string(inc.in_count(v)) +
                                      " inbound edges, above delta " + std::to_string(cons.delta),
                                  v);
    }
}

// Coarsens until `stop(level)` holds, a level matches nothing, or a level
// matches fewer than cfg.stall_fraction of its nodes.
inline LevelStack coarsen(const Hypergraph& hg, const Constraints& cons, const PartitionerConfig& cfg,
                          const std::function<bool(const Hypergraph&)>& stop, RunStats& stats) {
    LevelStack stack;
    detail::Stopwatch sw;
    stack.push_back(Level{hg, build_incidence(hg), LevelMap{}});
    NeighborSets ns = materialize_neighbors(stack[0].hg, stack[0].inc);
    stats.times.neighbors += sw.lap();

    for (std::uint32_t level = 0;; ++level) {
        const Level& cur = stack.back();
        LevelStats ls;
        ls.level = level;
        ls.nodes = cur.hg.num_nodes();
        ls.edges = cur.hg.num_edges();
        ls.pins = cur.hg.num_pins();
        if (stop(cur.hg) || cur.hg.num_nodes() < 2) {
            stats.levels.push_back(ls);
            break;
        }
        sw.lap();
        CoarseningParams params = cfg.coarsening;
        params.seed = mix64(cfg.coarsening.seed + level);
        ProposalResult prop = propose_candidates(cur.hg, cur.inc, ns, cons, params);
        flag_purged(ns, prop.invalid_pairs);
        stats.times.candidates += sw.lap();

        RoundsResult rr = run_rounds(prop.graph);
        stats.times.matching += sw.lap();
        for (NodeId v = 0; v < cur.hg.num_nodes(); ++v) ls.matched_by_rounds += rr.match[v] != kNoNode;

        std::vector<NodeId> unpaired;
        for (NodeId v = 0; v < cur.hg.num_nodes(); ++v)
            if (rr.match[v] == kNoNode && prop.graph.candidate_counts[v] == 0) unpaired.push_back(v);
        for (auto [a, b] : leftover_pairing(cur.hg, cur.inc, cons, unpaired, cfg.leftover_scan)) {
            rr.match[a] = b;
            rr.match[b] = a;
            ls.matched_leftover += 2;
        }
        stats.times.leftover += sw.lap();

        const std::size_t matched = ls.matched_by_rounds + ls.matched_leftover;
        ls.matched_fraction = static_cast<double>(matched) / static_cast<double>(cur.hg.num_nodes());
        stats.levels.push_back(ls);
        if (matched == 0) break;

        LevelMap lm = build_gamma(rr.match, level + 1);
        CoarseLevel next = coarsen_hypergraph(cur.hg, lm);
        ns = coarsen_neighbors(ns, lm);
        stack.push_back(Level{std::move(next.hg), std::move(next.inc), std::move(lm)});
        stats.times.coarse_build += sw.lap();
        if (ls.matched_fraction < cfg.stall_fraction) {
            const Level& last = stack.back();
            stats.levels.push_back({level + 1, last.hg.num_nodes(), last.hg.num_edges(), last.hg.num_pins()});
            break;
        }
    }
    return stack;
}

namespace detail {

// Projects `part` from the top of the stack down to level 0, refining level i
// whenever refine_from ≥ i.
inline Partitioning uncoarsen(const LevelStack& stack, Partitioning part, std::uint32_t refine_from,
                              const Constraints& cons, const PartitionerConfig& cfg, RunStats& stats,
                              const DriverHooks& hooks) {
    auto refine = [&](std::uint32_t level) {
        if (level > refine_from) return;
        auto rs = refine_level(stack[level].hg, stack[level].inc, part, cons, cfg.refinement);
        for (const auto& p : rs.passes) stats.passes.push_back({level, p});
        auto& t = stats.times.refine;
        t.pins += rs.times.pins;
        t.propose += rs.times.propose;
        t.chain += rs.times.chain;
        t.gains += rs.times.gains;
        t.events += rs.times.events;
        t.validate += rs.times.validate;
        t.apply += rs.times.apply;
    };
    const auto top = static_cast<std::uint32_t>(stack.size() - 1);
    refine(top);
    for (std::uint32_t level = top; level > 0; --level) {
        Stopwatch sw;
        std::vector<PartId> fine = project(part.assignment, stack[level].map);
        if (hooks.on_project) hooks.on_project(ProjectionView{level, stack[level], part, stack[level - 1], fine});
        const PartId k = part.num_parts();
        part = Partitioning::from_assignment(stack[level - 1].hg, std::move(fine), k);
        stats.times.projection += sw.lap();
        refine(level - 1);
    }
    return part;
}

inline void finish_stats(const Hypergraph& hg, const Partitioning& part, const Constraints& cons, RunStats& stats) {
    stats.omega = cons.omega;
    stats.delta = cons.delta;
    stats.connectivity = connectivity(hg, part);
    stats.cut_net = cut_net(hg, part);
    stats.num_parts = part.num_parts();
    stats.num_nonempty = part.num_nonempty();
    stats.valid = validate_partitioning(hg, part, cons).valid();
}

} // namespace detail

// Ω/Δ-constrained mode: the coarsest clusters become the initial partitions.
inline PartitionResult partition_constrained(const Hypergraph& hg, const PartitionerConfig& cfg,
                                             const DriverHooks& hooks = {}) {
    PartitionerConfig c = cfg;
    c.mode = Mode::constrained;
    c.check();
    const Constraints cons{c.omega, c.delta};
    PartitionResult res;
    check_feasible(hg, build_incidence(hg), cons);

    NodeId target = 1;
    if (cons.omega != kUnbounded) {
        const auto total = static_cast<std::uint64_t>(hg.total_size());
        target = static_cast<NodeId>(std::max<std::uint64_t>(1, (total + cons.omega - 1) / cons.omega));
    }
    LevelStack stack = coarsen(hg, cons, c, [&](const Hypergraph& h) { return h.num_nodes() <= target; }, res.stats);

    detail::Stopwatch sw;
    const Level& top = stack.back();
    std::vector<PartId> initial(top.hg.num_nodes());
    std::iota(initial.begin(), initial.end(), PartId{0});
    Partitioning part = Partitioning::from_assignment(top.hg, std::move(initial), top.hg.num_nodes());
    res.stats.times.initial += sw.lap();

    // Each coarsest partition is a single node; refinement starts one level down
    // unless nothing was coarsened.
    const auto top_level = static_cast<std::uint32_t>(stack.size() - 1);
    const std::uint32_t refine_from = top_level == 0 ? 0 : top_level - 1;
    part = detail::uncoarsen(stack, std::move(part), refine_from, cons, c, res.stats, hooks);

    res.part = Partitioning::from_assignment(hg, compact_assignment(part.assignment));
    detail::finish_stats(hg, res.part, cons, res.stats);
    return res;
}

// First fit of coarse nodes taken in decreasing size (lower id first): each
// node goes to the lowest bin with room under omega. Throws when some node
// fits nowhere.
inline std::vector<PartId> balanced_first_fit(const Hypergraph& hg, PartId k, Capacity omega) {
    const NodeId n = hg.num_nodes();
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return hg.node_size(a) > hg.node_size(b); });
    std::vector<NodeSize> load(k, 0);
    std::vector<PartId> assignment(n, kNoPart);
    const Constraints cons{omega, kUnbounded};
    for (NodeId v : order) {
        PartId best = kNoPart;
        for (PartId p = 0; p < k; ++p)
            if (cons.size_ok(load[p] + hg.node_size(v))) {
                best = p;
                break;
            }
        if (best == kNoPart)
            throw InfeasibleError("coarse node " + std::to_string(v) + " fits in no partition under omega " +
                                      std::to_string(omega),
                                  v);
        assignment[v] = best;
        load[best] += hg.node_size(v);
    }
    return assignment;
}

// Balanced k-way mode: Ω = ⌊(1+ε)·|N|/k⌋, no inbound limit. Clusters are
// additionally kept small enough that the initial first fit cannot fail.
inline PartitionResult partition_kway(const Hypergraph& hg, const PartitionerConfig& cfg,
                                      const DriverHooks& hooks = {}) {
    PartitionerConfig c = cfg;
    c.mode = Mode::kway;
    c.check();
    const double total = static_cast<double>(hg.total_size());
    const auto omega = static_cast<Capacity>(std::floor((1.0 + c.epsilon) * total / c.k));
    const Constraints cons{omega, kUnbounded};
    PartitionResult res;
    check_feasible(hg, build_incidence(hg), cons);

    // Any-fit bound: a node of size s fails only if all k bins hold more than
    // Ω − s, i.e. more than total − s overall.
    const double slack = static_cast<double>(omega) - total / c.k;
    const auto cluster_cap = std::max<Capacity>(static_cast<Capacity>(hg.max_node_size()),
                                                static_cast<Capacity>(std::floor(slack * c.k / (c.k - 1))));
    const Constraints coarse_cons{std::min(omega, cluster_cap), kUnbounded};
    const NodeId halt = std::max<NodeId>(c.kway_halt, c.k);
    LevelStack stack =
        coarsen(hg, coarse_cons, c, [&](const Hypergraph& h) { return h.num_nodes() < halt; }, res.stats);

    detail::Stopwatch sw;
    const Level& top = stack.back();
    if (c.k > top.hg.num_nodes())
        throw InvalidInput("k = " + std::to_string(c.k) + " exceeds the " + std::to_string(top.hg.num_nodes()) +
                           " coarse nodes left");
    Partitioning part = Partitioning::from_assignment(top.hg, balanced_first_fit(top.hg, c.k, omega), c.k);
    res.stats.times.initial += sw.lap();

    part = detail::uncoarsen(stack, std::move(part), static_cast<std::uint32_t>(stack.size() - 1), cons, c,
                             res.stats, hooks);
    res.part = std::move(part);
    detail::finish_stats(hg, res.part, cons, res.stats);
    return res;
}

inline PartitionResult partition(const Hypergraph& hg, const PartitionerConfig& cfg, const DriverHooks& hooks = {}) {
    return cfg.mode == Mode::kway ? partition_kway(hg, cfg, hooks) : partition_constrained(hg, cfg, hooks);
}

} // namespace hgpart
