// Shared fixtures and random instance generators for the test suites.
#pragma once

#include "hgpart/hgpart.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace hgtest {

using namespace hgpart;

// Nodes 0..3; e0: src{0} dst{1,2} w=1; e1: src{1} dst{2} w=2; e2: src{2} dst{3} w=1.
inline Hypergraph h_ex() {
    return Hypergraph::from_edges(4, {{{0}, {1, 2}, 1.0}, {{1}, {2}, 2.0}, {{2}, {3}, 1.0}});
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    // Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x;
        do x = gen_();
        while (x >= limit);
        return lo + x % span;
    }
    bool chance(double p) { return static_cast<double>(gen_() >> 11) * 0x1.0p-53 < p; }
    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

struct RandomHgParams {
    NodeId nodes = 20;
    EdgeId edges = 30;
    std::uint32_t max_edge = 5;
    std::uint32_t max_weight = 4;
    NodeSize max_node_size = 1;
};

// Integer weights keep every metric sum exact.
inline Hypergraph random_hypergraph(Rng& rng, const RandomHgParams& p) {
    std::vector<std::size_t> offsets{0};
    std::vector<NodeId> data;
    std::vector<std::uint32_t> srcs;
    std::vector<Weight> weights;
    std::vector<NodeId> pool(p.nodes);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    for (EdgeId e = 0; e < p.edges; ++e) {
        const auto size = static_cast<std::uint32_t>(rng.between(1, std::min<std::uint64_t>(p.max_edge, p.nodes)));
        for (std::uint32_t i = 0; i < size; ++i) std::swap(pool[i], pool[rng.between(i, p.nodes - 1)]);
        data.insert(data.end(), pool.begin(), pool.begin() + size);
        offsets.push_back(data.size());
        srcs.push_back(static_cast<std::uint32_t>(rng.between(0, size)));
        weights.push_back(static_cast<Weight>(rng.between(1, p.max_weight)));
    }
    std::vector<NodeSize> sizes(p.nodes);
    for (auto& s : sizes) s = static_cast<NodeSize>(rng.between(1, static_cast<std::uint64_t>(p.max_node_size)));
    return Hypergraph(p.nodes, std::move(offsets), std::move(data), std::move(srcs), std::move(weights),
                      std::move(sizes));
}

inline std::vector<PartId> random_assignment(Rng& rng, NodeId n, PartId k) {
    std::vector<PartId> a(n);
    for (auto& p : a) p = static_cast<PartId>(rng.between(0, k - 1));
    return a;
}

// Random matching map: pairs drawn over a shuffled node order.
inline std::vector<NodeId> random_match(Rng& rng, NodeId n, double pair_prob = 0.5) {
    std::vector<NodeId> order(n), match(n, kNoNode);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (NodeId i = 0; i + 1 < n; i += 2)
        if (rng.chance(pair_prob)) {
            match[order[i]] = order[i + 1];
            match[order[i + 1]] = order[i];
        }
    return match;
}

// Two-cycle pseudo-forest with scores non-decreasing toward the roots. Some
// trees hang off a terminal node with no target.
struct Forest {
    std::vector<NodeId> targets;
    std::vector<Weight> scores;
};

inline Forest random_forest(Rng& rng, NodeId n, std::uint32_t max_score = 20) {
    Forest f;
    f.targets.assign(n, kNoNode);
    f.scores.assign(n, 0.0);
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng.engine());
    std::vector<NodeId> placed;
    std::vector<Weight> cap(n, 0.0);  // score bound for children of a node
    for (NodeId i = 0; i < n; ++i) {
        const NodeId v = order[i];
        const bool new_root = placed.empty() || rng.chance(0.25);
        if (new_root) {
            if (i + 1 < n && rng.chance(0.7)) {
                const NodeId w = order[++i];
                const auto s = static_cast<Weight>(rng.between(1, max_score));
                f.targets[v] = w;
                f.targets[w] = v;
                f.scores[v] = f.scores[w] = s;
                cap[v] = cap[w] = s;
                placed.push_back(v);
                placed.push_back(w);
            } else {
                cap[v] = static_cast<Weight>(max_score);
                placed.push_back(v);
            }
            continue;
        }
        const NodeId parent = placed[rng.between(0, placed.size() - 1)];
        const auto s = static_cast<Weight>(rng.between(1, static_cast<std::uint64_t>(cap[parent])));
        f.targets[v] = parent;
        f.scores[v] = s;
        cap[v] = s;
        placed.push_back(v);
    }
    return f;
}

} // namespace hgtest
