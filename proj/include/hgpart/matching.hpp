// matching.hpp - exact maximum-weight matching on two-cycle pseudo-forests
//
// A round's proposal graph is functional (each node has at most one target)
// and every directed cycle is a mutual pair. Removing the pair edge leaves
// in-arborescences hanging off the two roots, so the optimum follows from a
// leaf-to-root DP:
//
//   ss1(n) = score(n) + Σ_{c ∈ child(n)} ss0(c)             (n matched upward)
//   ss0(n) = Σ_{c ∈ child(n)} ss0(c) + max(0, max_c ss1(c) − ss0(c))
//
// A root pair (a, b) joins both roots' children in ss1 and is matched iff
// ss1(a) > ss0(a) + ss0(b). The matching is then read top-down.
#pragma once

#include "hgpart/coarsening.hpp"
#include "hgpart/types.hpp"

#include <algorithm>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgpart {

// R = {n : target(target(n)) = n}, ascending. Throws std::logic_error when the
// graph holds a self-loop or a directed cycle longer than two.
inline std::vector<NodeId> find_roots(std::span<const NodeId> targets) {
    const auto n = static_cast<NodeId>(targets.size());
    std::vector<std::uint8_t> state(n, 0);  // 0 new, 1 on current walk, 2 done
    std::vector<NodeId> walk;
    for (NodeId s = 0; s < n; ++s) {
        if (state[s] != 0) continue;
        walk.clear();
        NodeId v = s;
        while (v != kNoNode && state[v] == 0) {
            state[v] = 1;
            walk.push_back(v);
            v = targets[v];
            if (v != kNoNode && v >= n) throw std::logic_error("proposal target out of range");
        }
        if (v != kNoNode && state[v] == 1) {
            std::size_t len = walk.size() - static_cast<std::size_t>(std::find(walk.begin(), walk.end(), v) - walk.begin());
            if (len != 2)
                throw std::logic_error("proposal graph has a cycle of length " + std::to_string(len) + " through node " +
                                       std::to_string(v));
        }
        for (NodeId w : walk) state[w] = 2;
    }
    std::vector<NodeId> roots;
    for (NodeId v = 0; v < n; ++v)
        if (targets[v] != kNoNode && targets[targets[v]] == v) roots.push_back(v);
    return roots;
}

struct MatchState {
    std::vector<Weight> ss0;
    std::vector<Weight> ss1;                 // −∞ where the node cannot match upward
    std::vector<Weight> best_child_gain;     // max ss1 − ss0 over children, −∞ if childless
    std::vector<NodeId> best_child;          // argmax, ties to the higher id
    std::vector<NodeId> match;               // partner or kNoNode

    // Σ over matched pairs of the pair edge's score.
    Weight total = 0.0;
};

// Exact DP on one round. Nodes already matched must have no target and no
// node may target them.
inline MatchState solve_matching(std::span<const NodeId> targets, std::span<const Weight> scores) {
    const auto n = static_cast<NodeId>(targets.size());
    constexpr Weight kNegInf = -std::numeric_limits<Weight>::infinity();
    const std::vector<NodeId> roots = find_roots(targets);
    std::vector<bool> is_root(n, false);
    for (NodeId r : roots) is_root[r] = true;

    // Children by parent, ascending ids; pair edges between roots are excluded.
    std::vector<std::size_t> child_off(std::size_t{n} + 1, 0);
    for (NodeId v = 0; v < n; ++v)
        if (targets[v] != kNoNode && !is_root[v]) ++child_off[targets[v] + 1];
    for (NodeId v = 0; v < n; ++v) child_off[v + 1] += child_off[v];
    std::vector<NodeId> children(child_off[n]);
    {
        std::vector<std::size_t> cursor(child_off.begin(), child_off.end() - 1);
        for (NodeId v = 0; v < n; ++v)
            if (targets[v] != kNoNode && !is_root[v]) children[cursor[targets[v]]++] = v;
    }

    // Leaves first: Kahn order over the child → parent edges.
    std::vector<std::uint32_t> pending(n);
    for (NodeId v = 0; v < n; ++v) pending[v] = static_cast<std::uint32_t>(child_off[v + 1] - child_off[v]);
    std::vector<NodeId> order;
    order.reserve(n);
    for (NodeId v = 0; v < n; ++v)
        if (pending[v] == 0) order.push_back(v);
    for (std::size_t i = 0; i < order.size(); ++i) {
        NodeId v = order[i];
        if (targets[v] == kNoNode || is_root[v]) continue;
        if (--pending[targets[v]] == 0) order.push_back(targets[v]);
    }

    MatchState st;
    st.ss0.assign(n, 0.0);
    st.ss1.assign(n, kNegInf);
    st.best_child_gain.assign(n, kNegInf);
    st.best_child.assign(n, kNoNode);
    st.match.assign(n, kNoNode);
    std::vector<Weight> child_sum(n, 0.0);

    for (NodeId v : order) {
        Weight sum0 = 0.0;
        for (std::size_t i = child_off[v]; i < child_off[v + 1]; ++i) {
            NodeId c = children[i];
            sum0 += st.ss0[c];
            Weight gain = st.ss1[c] - st.ss0[c];
            if (gain > st.best_child_gain[v] || (gain == st.best_child_gain[v] && c > st.best_child[v])) {
                st.best_child_gain[v] = gain;
                st.best_child[v] = c;
            }
        }
        child_sum[v] = sum0;
        st.ss0[v] = sum0 + std::max(Weight{0.0}, st.best_child_gain[v]);
        if (targets[v] != kNoNode && !is_root[v]) st.ss1[v] = scores[v] + sum0;
    }
    // Root pairs: evaluated once on the lower id, mirrored on the partner.
    std::vector<bool> pair_matched(n, false);
    for (NodeId a : roots) {
        NodeId b = targets[a];
        if (a > b) continue;
        Weight joint = scores[a] + child_sum[a] + child_sum[b];
        st.ss1[a] = st.ss1[b] = joint;
        if (joint > st.ss0[a] + st.ss0[b]) pair_matched[a] = pair_matched[b] = true;
    }

    auto take_best_child = [&](NodeId v) {
        if (st.best_child[v] != kNoNode && st.best_child_gain[v] > 0.0) st.match[v] = st.best_child[v];
    };
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        NodeId v = *it;
        if (is_root[v]) {
            if (pair_matched[v]) st.match[v] = targets[v];
            else take_best_child(v);
        } else if (targets[v] == kNoNode) {
            take_best_child(v);
        } else if (st.match[targets[v]] == v) {
            st.match[v] = targets[v];
        } else {
            take_best_child(v);
        }
    }

    for (NodeId v = 0; v < n; ++v) {
        NodeId t = targets[v];
        if (t == kNoNode || st.match[v] != t) continue;
        if (is_root[v] && v > t) continue;
        st.total += scores[v];
    }
    return st;
}

struct RoundsResult {
    std::vector<NodeId> match;                // symmetric partner map
    std::vector<std::uint32_t> matched_per_round;  // newly matched nodes in each round
};

// Runs one matching per proposal round; round r only sees nodes left
// unmatched by rounds < r.
inline RoundsResult run_rounds(const ProposalGraph& pg) {
    const NodeId n = pg.num_nodes;
    RoundsResult res;
    res.match.assign(n, kNoNode);
    std::vector<NodeId> targets(n);
    for (std::uint32_t r = 0; r < pg.rounds; ++r) {
        auto round_t = pg.round_targets(r);
        bool any = false;
        for (NodeId v = 0; v < n; ++v) {
            NodeId t = round_t[v];
            targets[v] = (res.match[v] != kNoNode || t == kNoNode || res.match[t] != kNoNode) ? kNoNode : t;
            any |= targets[v] != kNoNode;
        }
        std::uint32_t newly = 0;
        if (any) {
            MatchState st = solve_matching(targets, pg.round_scores(r));
            for (NodeId v = 0; v < n; ++v) {
                if (st.match[v] != kNoNode) {
                    res.match[v] = st.match[v];
                    ++newly;
                }
            }
        }
        res.matched_per_round.push_back(newly);
    }
    return res;
}

} // namespace hgpart
