// coarse_build.hpp - next-level hypergraph, incidence and neighbor sets from a matching
#pragma once

#include "hgpart/hypergraph.hpp"
#include "hgpart/neighborhood.hpp"
#include "hgpart/parallel.hpp"
#include "hgpart/types.hpp"

#include <algorithm>
#include <array>
#include <span>
#include <vector>

namespace hgpart {

// Fine node → coarse node map of one level. Clusters hold one or two fine nodes.
struct LevelMap {
    std::vector<NodeId> gamma;
    std::vector<std::array<NodeId, 2>> members;  // second slot kNoNode for singletons
    std::uint32_t level = 0;

    NodeId num_fine() const { return static_cast<NodeId>(gamma.size()); }
    NodeId num_coarse() const { return static_cast<NodeId>(members.size()); }
};

// Coarse ids follow ascending smallest member id. Non-mutual entries are ignored.
inline LevelMap build_gamma(std::span<const NodeId> match, std::uint32_t level = 0) {
    const auto n = static_cast<NodeId>(match.size());
    LevelMap lm;
    lm.level = level;
    lm.gamma.assign(n, kNoNode);
    for (NodeId v = 0; v < n; ++v) {
        if (lm.gamma[v] != kNoNode) continue;
        NodeId m = match[v];
        const auto id = static_cast<NodeId>(lm.members.size());
        lm.gamma[v] = id;
        if (m != kNoNode && m != v && m < n && match[m] == v) {
            lm.gamma[m] = id;
            lm.members.push_back({v, m});
        } else {
            lm.members.push_back({v, kNoNode});
        }
    }
    return lm;
}

struct CoarseLevel {
    Hypergraph hg;
    IncidenceIndex inc;
    std::vector<EdgeId> edge_map;  // fine edge → coarse edge, kNoNode when dropped
};

// Maps every fine edge through γ. Pins are deduplicated; a cluster that is both
// source and destination stays a destination only. Edges keep their identity
// (parallel edges are not merged), except those left with no destination and
// at most one source, which carry no objective or constraint weight.
inline CoarseLevel coarsen_hypergraph(const Hypergraph& hg, const LevelMap& lm) {
    const EdgeId m = hg.num_edges();
    const auto& offs = hg.pin_offsets();
    std::vector<NodeId> scratch(hg.num_pins());
    std::vector<std::uint32_t> sizes(m, 0), srcs(m, 0);
    std::vector<std::uint8_t> keep(m, 0);

    par::parallel_for_range(m, [&](std::size_t lo, std::size_t hi) {
        std::vector<NodeId> src, dst;
        for (std::size_t ei = lo; ei < hi; ++ei) {
            const auto e = static_cast<EdgeId>(ei);
            dst.clear();
            src.clear();
            for (NodeId v : hg.destinations(e)) dst.push_back(lm.gamma[v]);
            for (NodeId v : hg.sources(e)) src.push_back(lm.gamma[v]);
            std::sort(dst.begin(), dst.end());
            dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
            std::sort(src.begin(), src.end());
            src.erase(std::unique(src.begin(), src.end()), src.end());
            src.erase(std::remove_if(src.begin(), src.end(),
                                     [&](NodeId c) { return std::binary_search(dst.begin(), dst.end(), c); }),
                      src.end());
            NodeId* seg = scratch.data() + offs[e];
            std::copy(src.begin(), src.end(), seg);
            std::copy(dst.begin(), dst.end(), seg + src.size());
            srcs[e] = static_cast<std::uint32_t>(src.size());
            sizes[e] = static_cast<std::uint32_t>(src.size() + dst.size());
            keep[e] = !(dst.empty() && src.size() <= 1);
        }
    }, 1024);

    CoarseLevel out;
    out.edge_map.assign(m, kNoNode);
    std::vector<std::size_t> new_off{0};
    std::vector<std::uint32_t> new_src;
    std::vector<Weight> new_w;
    for (EdgeId e = 0; e < m; ++e) {
        if (!keep[e]) continue;
        out.edge_map[e] = static_cast<EdgeId>(new_src.size());
        new_off.push_back(new_off.back() + sizes[e]);
        new_src.push_back(srcs[e]);
        new_w.push_back(hg.weight(e));
    }
    std::vector<NodeId> data(new_off.back());
    par::parallel_for(m, [&](std::size_t e) {
        if (out.edge_map[e] == kNoNode) return;
        std::copy_n(scratch.begin() + static_cast<std::ptrdiff_t>(offs[e]), sizes[e],
                    data.begin() + static_cast<std::ptrdiff_t>(new_off[out.edge_map[e]]));
    }, 4096);

    std::vector<NodeSize> node_sizes(lm.num_coarse(), 0);
    for (NodeId c = 0; c < lm.num_coarse(); ++c)
        for (NodeId v : lm.members[c])
            if (v != kNoNode) node_sizes[c] += hg.node_size(v);

    out.hg = Hypergraph(Hypergraph::Unchecked{}, lm.num_coarse(), std::move(new_off), std::move(data),
                        std::move(new_src), std::move(new_w), std::move(node_sizes));
    out.inc = build_incidence(out.hg);
    return out;
}

// Coarse neighbor sets from the fine ones. A coarse neighbor is dropped when
// every fine occurrence feeding it was purged; survivors start unflagged.
inline NeighborSets coarsen_neighbors(const NeighborSets& ns, const LevelMap& lm) {
    const NodeId nc = lm.num_coarse();
    std::vector<std::size_t> bound(nc, 0);
    for (NodeId c = 0; c < nc; ++c)
        for (NodeId v : lm.members[c])
            if (v != kNoNode) bound[c] += ns.size(v);
    std::vector<std::size_t> scratch_off;
    std::size_t scratch_total = par::exclusive_scan(bound, scratch_off);
    std::vector<std::uint32_t> scratch(scratch_total);
    std::vector<std::size_t> kept(nc, 0);

    par::parallel_for(nc, [&](std::size_t ci) {
        const auto c = static_cast<NodeId>(ci);
        std::uint32_t* seg = scratch.data() + scratch_off[c];
        std::size_t k = 0;
        for (NodeId v : lm.members[c]) {
            if (v == kNoNode) continue;
            for (auto entry : ns.entries(v)) {
                NodeId t = lm.gamma[NeighborSets::id_of(entry)];
                if (t == c) continue;
                seg[k++] = t | (entry & NeighborSets::kFlag);
            }
        }
        // Ordered by (id, flag): a live occurrence, if any, leads its run.
        std::sort(seg, seg + k, [](std::uint32_t a, std::uint32_t b) {
            NodeId ia = NeighborSets::id_of(a), ib = NeighborSets::id_of(b);
            return ia != ib ? ia < ib : a < b;
        });
        std::size_t out = 0;
        for (std::size_t i = 0; i < k;) {
            NodeId id = NeighborSets::id_of(seg[i]);
            bool any_live = !NeighborSets::is_purged(seg[i]);
            std::size_t j = i + 1;
            while (j < k && NeighborSets::id_of(seg[j]) == id) ++j;
            if (any_live) seg[out++] = id;
            i = j;
        }
        kept[c] = out;
    }, 512);

    std::vector<std::size_t> offsets;
    std::size_t total = par::exclusive_scan(kept, offsets);
    std::vector<std::uint32_t> data(total);
    par::parallel_for(nc, [&](std::size_t c) {
        std::copy_n(scratch.begin() + static_cast<std::ptrdiff_t>(scratch_off[c]), kept[c],
                    data.begin() + static_cast<std::ptrdiff_t>(offsets[c]));
    }, 4096);
    return NeighborSets(std::move(offsets), std::move(data));
}

} // namespace hgpart
