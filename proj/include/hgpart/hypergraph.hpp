// hypergraph.hpp - compressed directed hypergraph and per-node incidence index
#pragma once

#include "hgpart/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace hgpart {

// Convenience description of one edge, used by builders and tests.
struct DirectedEdge {
    std::vector<NodeId> src;
    std::vector<NodeId> dst;
    Weight weight = 1.0;
};

// Two-level compressed pin storage. Each edge segment holds its source pins
// first, then its destination pins.
class Hypergraph {
public:
    struct Unchecked {};

    Hypergraph() = default;

    Hypergraph(NodeId num_nodes, std::vector<std::size_t> pin_offsets, std::vector<NodeId> pin_data,
               std::vector<std::uint32_t> src_counts, std::vector<Weight> edge_weights,
               std::vector<NodeSize> node_sizes)
        : Hypergraph(Unchecked{}, num_nodes, std::move(pin_offsets), std::move(pin_data), std::move(src_counts),
                     std::move(edge_weights), std::move(node_sizes)) {
        validate();
    }

    // Skips validation; for structures produced by the library itself.
    Hypergraph(Unchecked, NodeId num_nodes, std::vector<std::size_t> pin_offsets, std::vector<NodeId> pin_data,
               std::vector<std::uint32_t> src_counts, std::vector<Weight> edge_weights,
               std::vector<NodeSize> node_sizes)
        : num_nodes_(num_nodes), pin_offsets_(std::move(pin_offsets)), pin_data_(std::move(pin_data)),
          src_counts_(std::move(src_counts)), edge_weights_(std::move(edge_weights)),
          node_sizes_(std::move(node_sizes)) {
        if (pin_offsets_.empty()) pin_offsets_.push_back(0);
    }

    // Unit node sizes; edges keep the given order.
    static Hypergraph from_edges(NodeId num_nodes, const std::vector<DirectedEdge>& edges) {
        std::vector<std::size_t> offsets{0};
        std::vector<NodeId> data;
        std::vector<std::uint32_t> src_counts;
        std::vector<Weight> weights;
        for (const auto& e : edges) {
            data.insert(data.end(), e.src.begin(), e.src.end());
            data.insert(data.end(), e.dst.begin(), e.dst.end());
            offsets.push_back(data.size());
            src_counts.push_back(static_cast<std::uint32_t>(e.src.size()));
            weights.push_back(e.weight);
        }
        return Hypergraph(num_nodes, std::move(offsets), std::move(data), std::move(src_counts), std::move(weights),
                          std::vector<NodeSize>(num_nodes, 1));
    }

    NodeId num_nodes() const { return num_nodes_; }
    EdgeId num_edges() const { return static_cast<EdgeId>(src_counts_.size()); }
    std::size_t num_pins() const { return pin_data_.size(); }

    std::span<const NodeId> pins(EdgeId e) const {
        return {pin_data_.data() + pin_offsets_[e], pin_offsets_[e + 1] - pin_offsets_[e]};
    }
    std::span<const NodeId> sources(EdgeId e) const { return pins(e).first(src_counts_[e]); }
    std::span<const NodeId> destinations(EdgeId e) const { return pins(e).subspan(src_counts_[e]); }
    std::uint32_t edge_size(EdgeId e) const { return static_cast<std::uint32_t>(pin_offsets_[e + 1] - pin_offsets_[e]); }
    std::uint32_t src_count(EdgeId e) const { return src_counts_[e]; }
    Weight weight(EdgeId e) const { return edge_weights_[e]; }
    NodeSize node_size(NodeId n) const { return node_sizes_[n]; }

    NodeSize total_size() const { return std::accumulate(node_sizes_.begin(), node_sizes_.end(), NodeSize{0}); }
    NodeSize max_node_size() const {
        return node_sizes_.empty() ? 0 : *std::max_element(node_sizes_.begin(), node_sizes_.end());
    }
    Weight mean_edge_weight() const {
        if (edge_weights_.empty()) return 0.0;
        Weight sum = 0.0;
        for (Weight w : edge_weights_) sum += w;
        return sum / static_cast<Weight>(edge_weights_.size());
    }
    std::uint32_t max_edge_size() const {
        std::uint32_t d = 0;
        for (EdgeId e = 0; e < num_edges(); ++e) d = std::max(d, edge_size(e));
        return d;
    }

    const std::vector<std::size_t>& pin_offsets() const { return pin_offsets_; }
    const std::vector<NodeId>& pin_data() const { return pin_data_; }
    const std::vector<std::uint32_t>& src_counts() const { return src_counts_; }
    const std::vector<Weight>& edge_weights() const { return edge_weights_; }
    const std::vector<NodeSize>& node_sizes() const { return node_sizes_; }

    // Throws InvalidInput on any storage invariant violation.
    void validate() const {
        if (num_nodes_ > kMaxNodes) throw InvalidInput("too many nodes");
        if (node_sizes_.size() != num_nodes_) throw InvalidInput("node_sizes length differs from num_nodes");
        const std::size_t m = src_counts_.size();
        if (pin_offsets_.size() != m + 1 || edge_weights_.size() != m)
            throw InvalidInput("edge arrays have inconsistent lengths");
        if (pin_offsets_.front() != 0 || pin_offsets_.back() != pin_data_.size())
            throw InvalidInput("pin offsets do not cover the pin array");
        for (NodeId n = 0; n < num_nodes_; ++n)
            if (node_sizes_[n] < 1) throw InvalidInput("node " + std::to_string(n) + " has size < 1");
        std::vector<EdgeId> seen(num_nodes_, kNoNode);
        for (EdgeId e = 0; e < m; ++e) {
            if (pin_offsets_[e + 1] < pin_offsets_[e]) throw InvalidInput("pin offsets decrease at edge " + std::to_string(e));
            if (src_counts_[e] > edge_size(e)) throw InvalidInput("edge " + std::to_string(e) + " has more sources than pins");
            if (!(edge_weights_[e] > 0.0) || !std::isfinite(edge_weights_[e]))
                throw InvalidInput("edge " + std::to_string(e) + " has non-positive weight");
            for (NodeId v : pins(e)) {
                if (v >= num_nodes_) throw InvalidInput("edge " + std::to_string(e) + " references node out of range");
                if (seen[v] == e) throw InvalidInput("edge " + std::to_string(e) + " repeats node " + std::to_string(v));
                seen[v] = e;
            }
        }
    }

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

private:
    NodeId num_nodes_ = 0;
    std::vector<std::size_t> pin_offsets_{0};
    std::vector<NodeId> pin_data_;
    std::vector<std::uint32_t> src_counts_;
    std::vector<Weight> edge_weights_;
    std::vector<NodeSize> node_sizes_;
};

// Per-node incident edge lists, inbound edge ids first, both sublists ascending.
class IncidenceIndex {
public:
    IncidenceIndex() = default;
    IncidenceIndex(std::vector<std::size_t> offsets, std::vector<EdgeId> data, std::vector<std::uint32_t> in_counts)
        : offsets_(std::move(offsets)), data_(std::move(data)), in_counts_(std::move(in_counts)) {}

    NodeId num_nodes() const { return static_cast<NodeId>(in_counts_.size()); }

    std::span<const EdgeId> incident(NodeId n) const {
        return {data_.data() + offsets_[n], offsets_[n + 1] - offsets_[n]};
    }
    std::span<const EdgeId> in(NodeId n) const { return incident(n).first(in_counts_[n]); }
    std::span<const EdgeId> out(NodeId n) const { return incident(n).subspan(in_counts_[n]); }
    std::uint32_t in_count(NodeId n) const { return in_counts_[n]; }
    std::uint32_t degree(NodeId n) const { return static_cast<std::uint32_t>(offsets_[n + 1] - offsets_[n]); }

    // Visits I(n) in ascending edge id order, merging the two sorted sublists.
    // f(edge, inbound) is called once per incident edge.
    template <class F>
    void for_each_ascending(NodeId n, F&& f) const {
        auto ins = in(n);
        auto outs = out(n);
        std::size_t i = 0, o = 0;
        while (i < ins.size() || o < outs.size()) {
            if (o == outs.size() || (i < ins.size() && ins[i] < outs[o])) {
                f(ins[i++], true);
            } else {
                f(outs[o++], false);
            }
        }
    }

    const std::vector<std::size_t>& offsets() const { return offsets_; }
    const std::vector<EdgeId>& data() const { return data_; }
    const std::vector<std::uint32_t>& in_counts() const { return in_counts_; }

    friend bool operator==(const IncidenceIndex&, const IncidenceIndex&) = default;

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<EdgeId> data_;
    std::vector<std::uint32_t> in_counts_;
};

inline IncidenceIndex build_incidence(const Hypergraph& hg) {
    const NodeId n = hg.num_nodes();
    std::vector<std::uint32_t> in_counts(n, 0), out_counts(n, 0);
    for (EdgeId e = 0; e < hg.num_edges(); ++e) {
        for (NodeId v : hg.sources(e)) ++out_counts[v];
        for (NodeId v : hg.destinations(e)) ++in_counts[v];
    }
    std::vector<std::size_t> offsets(std::size_t{n} + 1, 0);
    for (NodeId v = 0; v < n; ++v) offsets[v + 1] = offsets[v] + in_counts[v] + out_counts[v];

    std::vector<EdgeId> data(offsets[n]);
    std::vector<std::size_t> in_cursor(offsets.begin(), offsets.end() - 1);
    std::vector<std::size_t> out_cursor(n);
    for (NodeId v = 0; v < n; ++v) out_cursor[v] = offsets[v] + in_counts[v];
    for (EdgeId e = 0; e < hg.num_edges(); ++e) {
        for (NodeId v : hg.sources(e)) data[out_cursor[v]++] = e;
        for (NodeId v : hg.destinations(e)) data[in_cursor[v]++] = e;
    }
    return IncidenceIndex(std::move(offsets), std::move(data), std::move(in_counts));
}

} // namespace hgpart
