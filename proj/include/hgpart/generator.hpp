// generator.hpp - synthetic layered and small-world directed hypergraphs
//
// Node ids run layer by layer: node i of layer l is l·width + i. Every node
// outside the last layer sources one edge whose destinations are `fanout`
// distinct nodes of the next layer within `radius` positions (cyclically) of
// its own. In small-world instances each destination is independently
// rewired with probability `rewire` to a uniform node of a uniform layer.
#pragma once

#include "hgpart/hypergraph.hpp"
#include "hgpart/types.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace hgpart {

enum class InstanceKind { layered, smallworld };

inline InstanceKind parse_instance_kind(std::string_view name) {
    if (name == "layered") return InstanceKind::layered;
    if (name == "smallworld") return InstanceKind::smallworld;
    throw InvalidInput("unknown instance kind '" + std::string(name) + "' (expected layered or smallworld)");
}

struct GeneratorParams {
    std::uint32_t layers = 8;
    std::uint32_t width = 64;
    std::uint32_t fanout = 4;
    std::uint32_t radius = 8;
    double rewire = 0.1;            // smallworld only
    std::uint32_t max_weight = 1;   // integer weights drawn uniformly from [1, max_weight]
    std::uint64_t seed = 1;

    void check() const {
        if (layers < 1 || width < 1) throw InvalidInput("layers and width must be at least 1");
        if (std::uint64_t{layers} * width > kMaxNodes) throw InvalidInput("too many nodes");
        if (layers > 1 && fanout < 1) throw InvalidInput("fanout must be at least 1");
        const std::uint64_t window = std::min<std::uint64_t>(width, 2ull * radius + 1);
        if (layers > 1 && fanout > window) throw InvalidInput("fanout exceeds the locality window");
        if (!(rewire >= 0.0 && rewire <= 1.0)) throw InvalidInput("rewire must lie in [0, 1]");
        if (max_weight < 1) throw InvalidInput("max_weight must be at least 1");
    }
};

namespace detail {

// Uniform value in [0, n) by rejection; fixed across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % n;
}

inline double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace detail

inline Hypergraph generate_instance(InstanceKind kind, const GeneratorParams& params) {
    params.check();
    const std::uint32_t L = params.layers, W = params.width, f = params.fanout;
    const auto n = static_cast<NodeId>(std::uint64_t{L} * W);
    // Separate streams: rewire decisions never shift the local structure.
    std::mt19937_64 local(params.seed);
    std::mt19937_64 rewiring(params.seed ^ 0x5bd1e9955bd1e995ull);
    std::mt19937_64 weights(params.seed ^ 0x2545f4914f6cdd1dull);
    const bool rewire = kind == InstanceKind::smallworld && params.rewire > 0.0;

    const std::uint32_t window = static_cast<std::uint32_t>(std::min<std::uint64_t>(W, 2ull * params.radius + 1));
    std::vector<std::int64_t> offsets(window);
    std::vector<std::size_t> pin_offsets{0};
    std::vector<NodeId> data;
    std::vector<std::uint32_t> src_counts;
    std::vector<Weight> edge_weights;
    if (L > 1) {
        data.reserve(std::size_t{L - 1} * W * (f + 1));
        src_counts.reserve(std::size_t{L - 1} * W);
    }
    std::vector<NodeId> dst(f);
    for (std::uint32_t l = 0; l + 1 < L; ++l) {
        for (std::uint32_t i = 0; i < W; ++i) {
            const NodeId src = l * W + i;
            // Partial Fisher-Yates over the window offsets centered on i.
            const std::int64_t lo = window == W ? 0 : static_cast<std::int64_t>(i) - params.radius;
            for (std::uint32_t j = 0; j < window; ++j) offsets[j] = lo + j;
            for (std::uint32_t j = 0; j < f; ++j) {
                const auto pick = j + static_cast<std::uint32_t>(detail::uniform_below(local, window - j));
                std::swap(offsets[j], offsets[pick]);
                const auto pos = static_cast<std::uint32_t>(((offsets[j] % W) + W) % W);
                dst[j] = (l + 1) * W + pos;
            }
            if (rewire) {
                for (std::uint32_t j = 0; j < f; ++j) {
                    if (detail::uniform_unit(rewiring) >= params.rewire) continue;
                    for (int attempt = 0; attempt < 16; ++attempt) {
                        const auto layer = static_cast<NodeId>(detail::uniform_below(rewiring, L));
                        const auto cand = layer * W + static_cast<NodeId>(detail::uniform_below(rewiring, W));
                        if (cand == src || std::find(dst.begin(), dst.end(), cand) != dst.end()) continue;
                        dst[j] = cand;
                        break;
                    }
                }
            }
            data.push_back(src);
            data.insert(data.end(), dst.begin(), dst.end());
            pin_offsets.push_back(data.size());
            src_counts.push_back(1);
            edge_weights.push_back(
                params.max_weight == 1 ? 1.0 : static_cast<Weight>(1 + detail::uniform_below(weights, params.max_weight)));
        }
    }
    return Hypergraph(n, std::move(pin_offsets), std::move(data), std::move(src_counts), std::move(edge_weights),
                      std::vector<NodeSize>(n, 1));
}

} // namespace hgpart
