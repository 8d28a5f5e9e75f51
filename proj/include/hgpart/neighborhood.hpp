// neighborhood.hpp - materialized, deduplicated neighbor sets with sticky purge flags
#pragma once

#include "hgpart/hypergraph.hpp"
#include "hgpart/parallel.hpp"
#include "hgpart/types.hpp"

#include <algorithm>
#include <atomic>
#include <span>
#include <utility>
#include <vector>

namespace hgpart {

// Per-node neighbor segments sorted by id. The top bit of an entry marks a
// neighbor proven permanently invalid as a pairing target.
class NeighborSets {
public:
    static constexpr std::uint32_t kFlag = 0x80000000u;

    NeighborSets() = default;
    NeighborSets(std::vector<std::size_t> offsets, std::vector<std::uint32_t> data)
        : offsets_(std::move(offsets)), data_(std::move(data)) {}

    static NodeId id_of(std::uint32_t entry) { return entry & ~kFlag; }
    static bool is_purged(std::uint32_t entry) { return (entry & kFlag) != 0; }

    NodeId num_nodes() const { return static_cast<NodeId>(offsets_.size() - 1); }
    std::size_t total_entries() const { return data_.size(); }

    std::span<const std::uint32_t> entries(NodeId n) const {
        return {data_.data() + offsets_[n], offsets_[n + 1] - offsets_[n]};
    }
    std::size_t size(NodeId n) const { return offsets_[n + 1] - offsets_[n]; }

    // Neighbor ids of n, purged ones included.
    std::vector<NodeId> ids(NodeId n) const {
        std::vector<NodeId> out;
        for (auto x : entries(n)) out.push_back(id_of(x));
        return out;
    }
    std::vector<NodeId> unpurged(NodeId n) const {
        std::vector<NodeId> out;
        for (auto x : entries(n))
            if (!is_purged(x)) out.push_back(id_of(x));
        return out;
    }

    // Position of m in n's segment, or npos.
    std::size_t find(NodeId n, NodeId m) const {
        auto seg = entries(n);
        auto it = std::lower_bound(seg.begin(), seg.end(), m,
                                   [](std::uint32_t entry, NodeId v) { return id_of(entry) < v; });
        if (it == seg.end() || id_of(*it) != m) return npos;
        return offsets_[n] + static_cast<std::size_t>(it - seg.begin());
    }
    bool contains(NodeId n, NodeId m) const { return find(n, m) != npos; }
    bool purged(NodeId n, NodeId m) const {
        std::size_t i = find(n, m);
        return i != npos && is_purged(data_[i]);
    }

    const std::vector<std::size_t>& offsets() const { return offsets_; }
    const std::vector<std::uint32_t>& data() const { return data_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend void flag_purged(NeighborSets& ns, std::span<const std::pair<NodeId, NodeId>> pairs);
    friend bool operator==(const NeighborSets&, const NeighborSets&) = default;

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> data_;
};

inline NeighborSets materialize_neighbors(const Hypergraph& hg, const IncidenceIndex& inc) {
    const NodeId n = hg.num_nodes();
    std::vector<std::size_t> bound(n, 0);
    for (NodeId v = 0; v < n; ++v)
        for (EdgeId e : inc.incident(v)) bound[v] += hg.edge_size(e) - 1;
    std::vector<std::size_t> scratch_off;
    std::size_t scratch_total = par::exclusive_scan(bound, scratch_off);

    std::vector<std::uint32_t> scratch(scratch_total);
    std::vector<std::size_t> unique_count(n, 0);
    par::parallel_for(n, [&](std::size_t vi) {
        const auto v = static_cast<NodeId>(vi);
        std::uint32_t* seg = scratch.data() + scratch_off[v];
        std::size_t k = 0;
        for (EdgeId e : inc.incident(v))
            for (NodeId u : hg.pins(e))
                if (u != v) seg[k++] = u;
        std::sort(seg, seg + k);
        unique_count[v] = static_cast<std::size_t>(std::unique(seg, seg + k) - seg);
    }, 512);

    std::vector<std::size_t> offsets;
    std::size_t total = par::exclusive_scan(unique_count, offsets);
    std::vector<std::uint32_t> data(total);
    par::parallel_for(n, [&](std::size_t v) {
        std::copy_n(scratch.begin() + static_cast<std::ptrdiff_t>(scratch_off[v]), unique_count[v],
                    data.begin() + static_cast<std::ptrdiff_t>(offsets[v]));
    }, 4096);
    return NeighborSets(std::move(offsets), std::move(data));
}

// Flags m in n's set and n in m's set for every listed pair. Unknown pairs are ignored.
inline void flag_purged(NeighborSets& ns, std::span<const std::pair<NodeId, NodeId>> pairs) {
    // Lookup phase reads only; the flag phase writes only.
    std::vector<std::size_t> slots(2 * pairs.size(), NeighborSets::npos);
    par::parallel_for(pairs.size(), [&](std::size_t i) {
        auto [a, b] = pairs[i];
        if (a >= ns.num_nodes() || b >= ns.num_nodes()) return;
        std::size_t ab = ns.find(a, b);
        std::size_t ba = ns.find(b, a);
        if (ab == NeighborSets::npos || ba == NeighborSets::npos) return;
        slots[2 * i] = ab;
        slots[2 * i + 1] = ba;
    }, 4096);
    par::parallel_for(slots.size(), [&](std::size_t i) {
        if (slots[i] == NeighborSets::npos) return;
        std::atomic_ref<std::uint32_t>(ns.data_[slots[i]]).fetch_or(NeighborSets::kFlag, std::memory_order_relaxed);
    }, 8192);
}

} // namespace hgpart
