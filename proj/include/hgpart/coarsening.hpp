// coarsening.hpp - pairing candidate proposal over neighbor histograms
//
// Each node scores its unpurged neighbors by η(n, m) = Σ ω(e)/|e| over shared
// incident edges plus a symmetric deterministic noise term, and tracks in the
// same pass inter(n, m), the number of n's inbound edges having m as a
// destination. inter turns the distinct-inbound check of a merged cluster into
// |in(n)| + |in(m)| − inter(n, m) ≤ Δ without explicit set unions.
#pragma once

#include "hgpart/hypergraph.hpp"
#include "hgpart/neighborhood.hpp"
#include "hgpart/parallel.hpp"
#include "hgpart/types.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace hgpart {

struct CoarseningParams {
    std::uint32_t pi = 4;            // candidates per node
    double noise_fraction = 0.1;     // noise cap as a fraction of mean edge weight
    std::size_t batch_size = 1024;   // neighbors scored per histogram batch
    std::uint64_t seed = 0;
};

struct HistogramEntry {
    NodeId neighbor;
    Weight eta;
    std::uint32_t inter;
};

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Stateless value in [0, cap], identical for (a, b) and (b, a).
inline Weight pair_noise(std::uint64_t seed, NodeId a, NodeId b, Weight cap) {
    if (cap <= 0.0) return 0.0;
    const std::uint64_t lo = std::min(a, b), hi = std::max(a, b);
    const std::uint64_t h = mix64(mix64(seed) ^ ((lo << 32) | hi));
    return cap * static_cast<Weight>(h >> 11) * 0x1.0p-53;
}

// Histogram of n over `batch` (ascending neighbor ids). Edges are visited in
// ascending id order so η(n, m) and η(m, n) accumulate identically.
inline std::vector<HistogramEntry> build_histogram(const Hypergraph& hg, const IncidenceIndex& inc, NodeId n,
                                                   std::span<const NodeId> batch, std::uint64_t seed,
                                                   Weight noise_cap) {
    std::vector<HistogramEntry> hist(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) hist[i] = {batch[i], 0.0, 0};
    auto bin = [&](NodeId m) -> HistogramEntry* {
        auto it = std::lower_bound(batch.begin(), batch.end(), m);
        if (it == batch.end() || *it != m) return nullptr;
        return &hist[static_cast<std::size_t>(it - batch.begin())];
    };
    inc.for_each_ascending(n, [&](EdgeId e, bool inbound) {
        const Weight w = hg.weight(e) / static_cast<Weight>(hg.edge_size(e));
        for (NodeId m : hg.sources(e))
            if (m != n)
                if (auto* h = bin(m)) h->eta += w;
        for (NodeId m : hg.destinations(e)) {
            if (m == n) continue;
            if (auto* h = bin(m)) {
                h->eta += w;
                if (inbound) ++h->inter;
            }
        }
    });
    for (auto& h : hist) h.eta += pair_noise(seed, n, h.neighbor, noise_cap);
    return hist;
}

// valid(n, m) for a pair scored in the histogram of n.
inline bool valid_pair(const Hypergraph& hg, const IncidenceIndex& inc, const Constraints& cons, NodeId n, NodeId m,
                       std::uint32_t inter) {
    if (!cons.size_ok(hg.node_size(n) + hg.node_size(m))) return false;
    const std::uint64_t merged_in = std::uint64_t{inc.in_count(n)} + inc.in_count(m) - inter;
    return cons.inbound_ok(merged_in);
}

// Round-major proposal graphs: round r's target and score of node n live at r·|N| + n.
struct ProposalGraph {
    NodeId num_nodes = 0;
    std::uint32_t rounds = 0;
    std::uint64_t seed = 0;
    std::vector<NodeId> targets;
    std::vector<Weight> scores;
    std::vector<std::uint32_t> candidate_counts;  // valid candidates found per node (≤ rounds)

    NodeId target(std::uint32_t round, NodeId n) const { return targets[std::size_t{round} * num_nodes + n]; }
    Weight score(std::uint32_t round, NodeId n) const { return scores[std::size_t{round} * num_nodes + n]; }
    std::span<const NodeId> round_targets(std::uint32_t round) const {
        return {targets.data() + std::size_t{round} * num_nodes, num_nodes};
    }
    std::span<const Weight> round_scores(std::uint32_t round) const {
        return {scores.data() + std::size_t{round} * num_nodes, num_nodes};
    }
};

struct ProposalResult {
    ProposalGraph graph;
    // Neighbor pairs (n < m) that failed valid(n, m); ready for flag_purged.
    std::vector<std::pair<NodeId, NodeId>> invalid_pairs;
};

inline Weight noise_cap_for(const Hypergraph& hg, double fraction) { return fraction * hg.mean_edge_weight(); }

inline ProposalResult propose_candidates(const Hypergraph& hg, const IncidenceIndex& inc, const NeighborSets& ns,
                                         const Constraints& cons, const CoarseningParams& params) {
    if (params.pi < 1) throw InvalidInput("pi must be at least 1");
    const NodeId n = hg.num_nodes();
    const std::uint32_t pi = params.pi;
    const Weight cap = noise_cap_for(hg, params.noise_fraction);
    const std::size_t batch_size = std::max<std::size_t>(1, params.batch_size);

    ProposalResult res;
    auto& pg = res.graph;
    pg.num_nodes = n;
    pg.rounds = pi;
    pg.seed = params.seed;
    pg.targets.assign(std::size_t{pi} * n, kNoNode);
    pg.scores.assign(std::size_t{pi} * n, 0.0);
    pg.candidate_counts.assign(n, 0);

    std::mutex invalid_mutex;
    par::parallel_for_range(n, [&](std::size_t lo, std::size_t hi) {
        std::vector<NodeId> nbrs;
        std::vector<std::pair<Weight, NodeId>> top;
        std::vector<std::pair<NodeId, NodeId>> invalid;
        for (std::size_t vi = lo; vi < hi; ++vi) {
            const auto v = static_cast<NodeId>(vi);
            nbrs.clear();
            for (auto x : ns.entries(v))
                if (!NeighborSets::is_purged(x)) nbrs.push_back(NeighborSets::id_of(x));
            top.clear();
            for (std::size_t b = 0; b < nbrs.size(); b += batch_size) {
                std::span<const NodeId> batch(nbrs.data() + b, std::min(batch_size, nbrs.size() - b));
                for (const auto& h : build_histogram(hg, inc, v, batch, params.seed, cap)) {
                    if (!valid_pair(hg, inc, cons, v, h.neighbor, h.inter)) {
                        if (v < h.neighbor) invalid.emplace_back(v, h.neighbor);
                        continue;
                    }
                    top.emplace_back(h.eta, h.neighbor);
                }
                std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) {
                    return better_candidate(a.first, a.second, b.first, b.second);
                });
                if (top.size() > pi) top.resize(pi);
            }
            pg.candidate_counts[v] = static_cast<std::uint32_t>(top.size());
            for (std::uint32_t r = 0; r < top.size(); ++r) {
                pg.targets[std::size_t{r} * n + v] = top[r].second;
                pg.scores[std::size_t{r} * n + v] = top[r].first;
            }
        }
        std::lock_guard lock(invalid_mutex);
        res.invalid_pairs.insert(res.invalid_pairs.end(), invalid.begin(), invalid.end());
    }, 256);
    std::sort(res.invalid_pairs.begin(), res.invalid_pairs.end());
    return res;
}

// Best-effort pairing of nodes left without candidates. Claimants go by
// descending size (lower id first on ties); each takes the largest free node
// fitting its size slack whose inbound count, overestimated by the plain sum,
// stays within Δ. At most `scan_limit` free nodes are examined per claimant.
inline std::vector<std::pair<NodeId, NodeId>> leftover_pairing(const Hypergraph& hg, const IncidenceIndex& inc,
                                                               const Constraints& cons,
                                                               std::span<const NodeId> unpaired,
                                                               std::size_t scan_limit = 256) {
    std::vector<NodeId> order(unpaired.begin(), unpaired.end());
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return hg.node_size(a) != hg.node_size(b) ? hg.node_size(a) < hg.node_size(b) : a < b;
    });
    order.erase(std::unique(order.begin(), order.end()), order.end());
    const std::size_t k = order.size();
    std::vector<NodeSize> sizes(k);
    for (std::size_t i = 0; i < k; ++i) sizes[i] = hg.node_size(order[i]);

    // Slot i + 1 stands for order[i]; find(s) is the largest free slot ≤ s, slot 0 meaning none.
    std::vector<std::size_t> parent(k + 1);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        std::size_t root = i;
        while (parent[root] != root) root = parent[root];
        while (parent[i] != root) {
            std::size_t next = parent[i];
            parent[i] = root;
            i = next;
        }
        return root;
    };
    auto take = [&](std::size_t idx) { parent[idx + 1] = idx; };
    auto is_free = [&](std::size_t idx) { return find(idx + 1) == idx + 1; };

    std::vector<std::size_t> claim_order(k);
    std::iota(claim_order.begin(), claim_order.end(), std::size_t{0});
    std::stable_sort(claim_order.begin(), claim_order.end(), [&](std::size_t a, std::size_t b) {
        return sizes[a] != sizes[b] ? sizes[a] > sizes[b] : order[a] < order[b];
    });

    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (std::size_t ci : claim_order) {
        if (!is_free(ci)) continue;
        take(ci);
        const NodeId n = order[ci];
        std::size_t limit;
        if (cons.omega == kUnbounded) {
            limit = k;
        } else {
            const NodeSize slack = static_cast<NodeSize>(cons.omega) - sizes[ci];
            if (slack < 1) continue;
            limit = static_cast<std::size_t>(std::upper_bound(sizes.begin(), sizes.end(), slack) - sizes.begin());
        }
        std::size_t cur = find(limit);
        for (std::size_t scanned = 0; cur > 0 && scanned < scan_limit; ++scanned) {
            const std::size_t idx = cur - 1;
            const NodeId m = order[idx];
            if (cons.inbound_ok(std::uint64_t{inc.in_count(n)} + inc.in_count(m))) {
                take(idx);
                pairs.emplace_back(n, m);
                break;
            }
            cur = find(idx);
        }
    }
    return pairs;
}

} // namespace hgpart
