// partitioning.hpp - partition assignment, per-edge pin counts and objective metrics
#pragma once

#include "hgpart/hypergraph.hpp"
#include "hgpart/parallel.hpp"
#include "hgpart/types.hpp"

#include <algorithm>
#include <span>
#include <string>
#include <vector>

namespace hgpart {

enum class PinsMode { all, inbound };

// Sparse pins(p, e) / pins_in(p, e) storage. Each edge owns a segment with room
// for one entry per pin; live entries are kept sorted by partition id.
class PinsMatrix {
public:
    PinsMatrix() = default;

    PinsMode mode() const { return mode_; }
    EdgeId num_edges() const { return static_cast<EdgeId>(used_.size()); }

    std::uint32_t count(PartId p, EdgeId e) const {
        auto ps = parts(e);
        auto it = std::lower_bound(ps.begin(), ps.end(), p);
        if (it == ps.end() || *it != p) return 0;
        return counts_[offsets_[e] + static_cast<std::size_t>(it - ps.begin())];
    }

    // Partitions holding at least one (counted) pin of e, ascending.
    std::span<const PartId> parts(EdgeId e) const { return {parts_.data() + offsets_[e], used_[e]}; }
    std::span<const std::uint32_t> counts(EdgeId e) const { return {counts_.data() + offsets_[e], used_[e]}; }
    std::uint32_t distinct(EdgeId e) const { return used_[e]; }

    // Applies pins(p, e) += delta. Returns the new count.
    std::uint32_t add(PartId p, EdgeId e, int delta) {
        const std::size_t base = offsets_[e];
        PartId* first = parts_.data() + base;
        PartId* last = first + used_[e];
        PartId* it = std::lower_bound(first, last, p);
        std::size_t idx = static_cast<std::size_t>(it - first);
        if (it != last && *it == p) {
            std::uint32_t c = counts_[base + idx] + static_cast<std::uint32_t>(delta);
            if (c == 0) {
                std::copy(it + 1, last, it);
                std::copy(counts_.begin() + static_cast<std::ptrdiff_t>(base + idx + 1),
                          counts_.begin() + static_cast<std::ptrdiff_t>(base + used_[e]),
                          counts_.begin() + static_cast<std::ptrdiff_t>(base + idx));
                --used_[e];
            } else {
                counts_[base + idx] = c;
            }
            return c;
        }
        if (delta <= 0) throw std::logic_error("pins count would become negative");
        if (used_[e] == offsets_[e + 1] - base) throw std::logic_error("pins segment overflow");
        std::copy_backward(it, last, last + 1);
        std::copy_backward(counts_.begin() + static_cast<std::ptrdiff_t>(base + idx),
                           counts_.begin() + static_cast<std::ptrdiff_t>(base + used_[e]),
                           counts_.begin() + static_cast<std::ptrdiff_t>(base + used_[e] + 1));
        *it = p;
        counts_[base + idx] = static_cast<std::uint32_t>(delta);
        ++used_[e];
        return static_cast<std::uint32_t>(delta);
    }

    friend bool operator==(const PinsMatrix& a, const PinsMatrix& b) {
        if (a.mode_ != b.mode_ || a.used_ != b.used_) return false;
        for (EdgeId e = 0; e < a.num_edges(); ++e) {
            auto pa = a.parts(e), pb = b.parts(e);
            auto ca = a.counts(e), cb = b.counts(e);
            if (!std::equal(pa.begin(), pa.end(), pb.begin()) || !std::equal(ca.begin(), ca.end(), cb.begin()))
                return false;
        }
        return true;
    }

    friend PinsMatrix build_pins_matrix(const Hypergraph& hg, std::span<const PartId> assignment, PinsMode mode);

private:
    PinsMode mode_ = PinsMode::all;
    std::vector<std::size_t> offsets_{0};
    std::vector<PartId> parts_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint32_t> used_;
};

inline PinsMatrix build_pins_matrix(const Hypergraph& hg, std::span<const PartId> assignment, PinsMode mode) {
    PinsMatrix pm;
    pm.mode_ = mode;
    const EdgeId m = hg.num_edges();
    pm.offsets_.assign(std::size_t{m} + 1, 0);
    for (EdgeId e = 0; e < m; ++e) {
        std::size_t cap = mode == PinsMode::all ? hg.edge_size(e) : hg.edge_size(e) - hg.src_count(e);
        pm.offsets_[e + 1] = pm.offsets_[e] + cap;
    }
    pm.parts_.assign(pm.offsets_[m], 0);
    pm.counts_.assign(pm.offsets_[m], 0);
    pm.used_.assign(m, 0);
    par::parallel_for(m, [&](std::size_t ei) {
        const auto e = static_cast<EdgeId>(ei);
        auto pins = mode == PinsMode::all ? hg.pins(e) : hg.destinations(e);
        PartId* seg = pm.parts_.data() + pm.offsets_[e];
        std::uint32_t* cnt = pm.counts_.data() + pm.offsets_[e];
        for (std::size_t i = 0; i < pins.size(); ++i) seg[i] = assignment[pins[i]];
        std::sort(seg, seg + pins.size());
        std::uint32_t used = 0;
        for (std::size_t i = 0; i < pins.size();) {
            std::size_t j = i;
            while (j < pins.size() && seg[j] == seg[i]) ++j;
            seg[used] = seg[i];
            cnt[used] = static_cast<std::uint32_t>(j - i);
            ++used;
            i = j;
        }
        pm.used_[e] = used;
    }, 1024);
    return pm;
}

// Node → partition map plus the size and distinct-inbound ledgers.
struct Partitioning {
    std::vector<PartId> assignment;
    std::vector<NodeSize> part_sizes;
    std::vector<std::uint32_t> part_inbound_counts;

    PartId num_parts() const { return static_cast<PartId>(part_sizes.size()); }
    PartId part(NodeId n) const { return assignment[n]; }

    PartId num_nonempty() const {
        return static_cast<PartId>(std::count_if(part_sizes.begin(), part_sizes.end(), [](NodeSize s) { return s > 0; }));
    }

    // Builds the ledgers from scratch. num_parts = 0 uses max id + 1.
    static Partitioning from_assignment(const Hypergraph& hg, std::vector<PartId> assignment, PartId num_parts = 0) {
        if (assignment.size() != hg.num_nodes()) throw InvalidInput("assignment length differs from node count");
        PartId k = num_parts;
        for (PartId p : assignment) {
            if (p == kNoPart) throw InvalidInput("node without partition");
            if (num_parts == 0) k = std::max(k, p + 1);
            else if (p >= num_parts) throw InvalidInput("partition id out of range");
        }
        Partitioning part;
        part.part_sizes.assign(k, 0);
        for (NodeId n = 0; n < hg.num_nodes(); ++n) part.part_sizes[assignment[n]] += hg.node_size(n);
        part.part_inbound_counts.assign(k, 0);
        PinsMatrix pins_in = build_pins_matrix(hg, assignment, PinsMode::inbound);
        for (EdgeId e = 0; e < hg.num_edges(); ++e)
            for (PartId p : pins_in.parts(e)) ++part.part_inbound_counts[p];
        part.assignment = std::move(assignment);
        return part;
    }
};

// Renumbers partition ids onto the contiguous range of nonempty partitions,
// preserving their relative order.
inline std::vector<PartId> compact_assignment(std::span<const PartId> assignment) {
    PartId k = 0;
    for (PartId p : assignment) k = std::max(k, p + 1);
    std::vector<PartId> remap(k, kNoPart);
    for (PartId p : assignment) remap[p] = 0;
    PartId next = 0;
    for (auto& r : remap)
        if (r != kNoPart) r = next++;
    std::vector<PartId> out(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) out[i] = remap[assignment[i]];
    return out;
}

namespace detail {
// Number of distinct labels among the mapped pins of every edge.
template <class Label>
std::vector<std::uint32_t> distinct_labels_per_edge(const Hypergraph& hg, std::span<const Label> labels) {
    std::vector<std::uint32_t> spans(hg.num_edges(), 0);
    par::parallel_for_range(hg.num_edges(), [&](std::size_t lo, std::size_t hi) {
        std::vector<Label> scratch;
        for (std::size_t ei = lo; ei < hi; ++ei) {
            auto pins = hg.pins(static_cast<EdgeId>(ei));
            scratch.clear();
            for (NodeId v : pins) scratch.push_back(labels[v]);
            std::sort(scratch.begin(), scratch.end());
            spans[ei] = static_cast<std::uint32_t>(std::unique(scratch.begin(), scratch.end()) - scratch.begin());
        }
    }, 1024);
    return spans;
}
} // namespace detail

// Σ_e ω(e)·(λ(e) − 1), summed in edge order.
inline Weight connectivity(const Hypergraph& hg, std::span<const PartId> assignment) {
    auto spans = detail::distinct_labels_per_edge(hg, assignment);
    Weight total = 0.0;
    for (EdgeId e = 0; e < hg.num_edges(); ++e)
        if (spans[e] > 1) total += hg.weight(e) * static_cast<Weight>(spans[e] - 1);
    return total;
}
inline Weight connectivity(const Hypergraph& hg, const Partitioning& part) { return connectivity(hg, part.assignment); }

inline Weight cut_net(const Hypergraph& hg, std::span<const PartId> assignment) {
    auto spans = detail::distinct_labels_per_edge(hg, assignment);
    Weight total = 0.0;
    for (EdgeId e = 0; e < hg.num_edges(); ++e)
        if (spans[e] > 1) total += hg.weight(e);
    return total;
}
inline Weight cut_net(const Hypergraph& hg, const Partitioning& part) { return cut_net(hg, part.assignment); }

// Σ_e ω(e)·(|e| − |γ(e)|) for a node → cluster map γ.
inline Weight coarsening_score(const Hypergraph& hg, std::span<const NodeId> gamma) {
    auto spans = detail::distinct_labels_per_edge(hg, gamma);
    Weight total = 0.0;
    for (EdgeId e = 0; e < hg.num_edges(); ++e)
        if (hg.edge_size(e) > spans[e]) total += hg.weight(e) * static_cast<Weight>(hg.edge_size(e) - spans[e]);
    return total;
}

// Σ_e ω(e)·(|e| − 1), the shared constant of the score/connectivity duality.
inline Weight duality_constant(const Hypergraph& hg) {
    Weight total = 0.0;
    for (EdgeId e = 0; e < hg.num_edges(); ++e)
        if (hg.edge_size(e) > 1) total += hg.weight(e) * static_cast<Weight>(hg.edge_size(e) - 1);
    return total;
}

struct Violation {
    enum class Kind { size, inbound };
    PartId part;
    Kind kind;
    std::uint64_t measured;
    Capacity limit;
};

struct ValidationReport {
    std::vector<NodeSize> part_sizes;
    std::vector<std::uint32_t> inbound_counts;
    std::vector<Violation> violations;

    bool valid() const { return violations.empty(); }
};

// Recomputes sizes and distinct inbound counts from the assignment alone.
inline ValidationReport validate_partitioning(const Hypergraph& hg, std::span<const PartId> assignment,
                                              const Constraints& cons) {
    if (assignment.size() != hg.num_nodes()) throw InvalidInput("assignment length differs from node count");
    PartId k = 0;
    for (PartId p : assignment) {
        if (p == kNoPart) throw InvalidInput("node without partition");
        k = std::max(k, p + 1);
    }
    ValidationReport rep;
    rep.part_sizes.assign(k, 0);
    rep.inbound_counts.assign(k, 0);
    for (NodeId n = 0; n < hg.num_nodes(); ++n) rep.part_sizes[assignment[n]] += hg.node_size(n);

    std::vector<EdgeId> last_edge(k, kNoNode);
    for (EdgeId e = 0; e < hg.num_edges(); ++e) {
        for (NodeId v : hg.destinations(e)) {
            PartId p = assignment[v];
            if (last_edge[p] != e) {
                last_edge[p] = e;
                ++rep.inbound_counts[p];
            }
        }
    }
    for (PartId p = 0; p < k; ++p) {
        if (!cons.size_ok(rep.part_sizes[p]))
            rep.violations.push_back({p, Violation::Kind::size, static_cast<std::uint64_t>(rep.part_sizes[p]), cons.omega});
        if (!cons.inbound_ok(rep.inbound_counts[p]))
            rep.violations.push_back({p, Violation::Kind::inbound, rep.inbound_counts[p], cons.delta});
    }
    return rep;
}
inline ValidationReport validate_partitioning(const Hypergraph& hg, const Partitioning& part, const Constraints& cons) {
    return validate_partitioning(hg, part.assignment, cons);
}

} // namespace hgpart
