// oracle.hpp - brute-force references for tests and the one-pass baseline
//
// Everything here recomputes from the raw pin lists with ordered sets; no
// incidence index, pins matrix or event machinery is reused.
#pragma once

#include "hgpart/hypergraph.hpp"
#include "hgpart/types.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hgpart::oracle {

inline constexpr std::size_t kMaxMatchingNodes = 20;

struct BruteMatching {
    Weight total = 0.0;
    std::vector<std::pair<NodeId, NodeId>> pairs;  // (lo, hi), ascending
};

// Maximum-weight matching over the proposal edges {n, target(n)} by exhaustive
// search. A mutual pair is a single edge weighted by its lower id's score.
inline BruteMatching brute_matching(std::span<const NodeId> targets, std::span<const Weight> scores) {
    const std::size_t n = targets.size();
    if (n > kMaxMatchingNodes) throw std::invalid_argument("brute_matching supports at most 20 nodes");
    std::map<std::pair<NodeId, NodeId>, Weight> edges;
    for (NodeId v = 0; v < n; ++v) {
        const NodeId t = targets[v];
        if (t == kNoNode) continue;
        const auto key = std::minmax(v, t);
        const bool mutual = targets[t] == v;
        if (!mutual || v < t) edges[{key.first, key.second}] = scores[v];
    }
    std::vector<std::pair<std::pair<NodeId, NodeId>, Weight>> list(edges.begin(), edges.end());

    BruteMatching best;
    std::vector<bool> used(n, false);
    std::vector<std::pair<NodeId, NodeId>> chosen;
    auto search = [&](auto&& self, std::size_t i, Weight acc) -> void {
        if (i == list.size()) {
            if (acc > best.total) {
                best.total = acc;
                best.pairs = chosen;
            }
            return;
        }
        self(self, i + 1, acc);
        auto [a, b] = list[i].first;
        if (!used[a] && !used[b]) {
            used[a] = used[b] = true;
            chosen.emplace_back(a, b);
            self(self, i + 1, acc + list[i].second);
            chosen.pop_back();
            used[a] = used[b] = false;
        }
    };
    search(search, 0, 0.0);
    return best;
}

// Per-edge set of partitions spanned.
inline std::vector<std::set<PartId>> spans(const Hypergraph& hg, std::span<const PartId> assignment) {
    std::vector<std::set<PartId>> out(hg.num_edges());
    for (EdgeId e = 0; e < hg.num_edges(); ++e)
        for (NodeId v : hg.pins(e)) out[e].insert(assignment[v]);
    return out;
}

inline Weight connectivity(const Hypergraph& hg, std::span<const PartId> assignment) {
    Weight total = 0.0;
    auto s = spans(hg, assignment);
    for (EdgeId e = 0; e < hg.num_edges(); ++e)
        if (!s[e].empty()) total += hg.weight(e) * static_cast<Weight>(s[e].size() - 1);
    return total;
}

inline Weight cut_net(const Hypergraph& hg, std::span<const PartId> assignment) {
    Weight total = 0.0;
    auto s = spans(hg, assignment);
    for (EdgeId e = 0; e < hg.num_edges(); ++e)
        if (s[e].size() > 1) total += hg.weight(e);
    return total;
}

// partition → total node size
inline std::map<PartId, NodeSize> part_sizes(const Hypergraph& hg, std::span<const PartId> assignment) {
    std::map<PartId, NodeSize> out;
    for (NodeId v = 0; v < hg.num_nodes(); ++v) out[assignment[v]] += hg.node_size(v);
    return out;
}

// partition → distinct edges having one of its nodes as destination
inline std::map<PartId, std::set<EdgeId>> inbound_sets(const Hypergraph& hg, std::span<const PartId> assignment) {
    std::map<PartId, std::set<EdgeId>> out;
    for (EdgeId e = 0; e < hg.num_edges(); ++e)
        for (NodeId v : hg.destinations(e)) out[assignment[v]].insert(e);
    return out;
}

inline std::map<PartId, std::size_t> inbound_counts(const Hypergraph& hg, std::span<const PartId> assignment) {
    std::map<PartId, std::size_t> out;
    for (auto& [p, s] : inbound_sets(hg, assignment)) out[p] = s.size();
    return out;
}

// Number of (partition, constraint) pairs violated.
inline std::size_t violations(const Hypergraph& hg, std::span<const PartId> assignment, Capacity omega,
                              Capacity delta) {
    std::size_t count = 0;
    for (auto& [p, s] : part_sizes(hg, assignment))
        if (omega != kUnbounded && static_cast<Capacity>(s) > omega) ++count;
    for (auto& [p, c] : inbound_counts(hg, assignment))
        if (delta != kUnbounded && c > delta) ++count;
    return count;
}

struct SimStep {
    Weight connectivity = 0.0;
    std::map<PartId, NodeSize> sizes;
    std::map<PartId, std::size_t> inbound;
    std::size_t violations = 0;
};

// State before any move (index 0) and after each move, recomputed from scratch.
inline std::vector<SimStep> simulate_sequence(const Hypergraph& hg, std::vector<PartId> assignment,
                                              std::span<const std::pair<NodeId, PartId>> moves, Capacity omega,
                                              Capacity delta) {
    std::vector<SimStep> out;
    auto snapshot = [&] {
        SimStep s;
        s.connectivity = oracle::connectivity(hg, assignment);
        s.sizes = part_sizes(hg, assignment);
        s.inbound = inbound_counts(hg, assignment);
        s.violations = violations(hg, assignment, omega, delta);
        out.push_back(std::move(s));
    };
    snapshot();
    for (auto [v, to] : moves) {
        assignment[v] = to;
        snapshot();
    }
    return out;
}

// Fills partitions one after the other in node id order.
inline std::vector<PartId> one_pass(const Hypergraph& hg, Capacity omega, Capacity delta) {
    std::vector<std::vector<EdgeId>> inbound(hg.num_nodes());
    for (EdgeId e = 0; e < hg.num_edges(); ++e)
        for (NodeId v : hg.destinations(e)) inbound[v].push_back(e);

    std::vector<PartId> assignment(hg.num_nodes(), 0);
    PartId current = 0;
    NodeSize used = 0;
    std::set<EdgeId> in_set;
    bool empty = true;
    for (NodeId v = 0; v < hg.num_nodes(); ++v) {
        const NodeSize s = hg.node_size(v);
        if ((omega != kUnbounded && static_cast<Capacity>(s) > omega) ||
            (delta != kUnbounded && inbound[v].size() > delta))
            throw InfeasibleError("node " + std::to_string(v) + " cannot form a valid partition alone", v);
        std::size_t fresh = 0;
        for (EdgeId e : inbound[v]) fresh += in_set.count(e) == 0;
        const bool fits = (omega == kUnbounded || static_cast<Capacity>(used + s) <= omega) &&
                          (delta == kUnbounded || in_set.size() + fresh <= delta);
        if (!fits && !empty) {
            ++current;
            used = 0;
            in_set.clear();
        }
        assignment[v] = current;
        used += s;
        in_set.insert(inbound[v].begin(), inbound[v].end());
        empty = false;
    }
    return assignment;
}

} // namespace hgpart::oracle
