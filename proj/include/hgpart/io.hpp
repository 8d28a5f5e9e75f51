// io.hpp - dhgr/hgr hypergraph files and partition files
//
// dhgr: header `|E| |N| fmt` (fmt 0 unweighted, 1 weighted), then one line per
// edge: [weight] s v1 ... vk with 1-based node ids, the first s being sources.
// hgr is the undirected variant without s; all pins become destinations.
// Lines starting with % are comments.
#pragma once

#include "hgpart/hypergraph.hpp"
#include "hgpart/partitioning.hpp"
#include "hgpart/types.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hgpart {

enum class FileFormat { dhgr, hgr };

inline FileFormat parse_format(std::string_view name) {
    if (name == "dhgr") return FileFormat::dhgr;
    if (name == "hgr") return FileFormat::hgr;
    throw InvalidInput("unknown format '" + std::string(name) + "' (expected dhgr or hgr)");
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
T parse_uint(std::string_view tok, std::size_t line, const char* what) {
    T v{};
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ParseError("invalid " + std::string(what) + " '" + std::string(tok) + "'", line);
    return v;
}

inline Weight parse_weight(std::string_view tok, std::size_t line) {
    Weight w{};
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ParseError("invalid weight '" + std::string(tok) + "'", line);
    if (!(w > 0.0) || !std::isfinite(w)) throw ParseError("weight must be positive, got '" + std::string(tok) + "'", line);
    return w;
}

inline std::string format_weight(Weight w) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, w);
    return std::string(buf, p);
}

} // namespace detail

inline Hypergraph read_hypergraph(std::istream& in, FileFormat format) {
    std::string line;
    std::size_t lineno = 0;
    auto next_content = [&](bool& got) {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line[0] == '%') continue;
            got = true;
            return;
        }
        got = false;
    };

    bool got = false;
    do {
        next_content(got);
    } while (got && detail::split_ws(line).empty());
    if (!got) throw ParseError("missing header", lineno == 0 ? 1 : lineno);
    auto head = detail::split_ws(line);
    if (head.size() < 2 || head.size() > 3) throw ParseError("header must be '|E| |N| [fmt]'", lineno);
    const auto num_edges = detail::parse_uint<std::uint64_t>(head[0], lineno, "edge count");
    const auto num_nodes = detail::parse_uint<std::uint64_t>(head[1], lineno, "node count");
    const auto fmt = head.size() == 3 ? detail::parse_uint<unsigned>(head[2], lineno, "fmt") : 0u;
    if (fmt > 1) throw ParseError("fmt must be 0 or 1", lineno);
    if (num_nodes > kMaxNodes) throw ParseError("too many nodes", lineno);
    if (num_edges > std::numeric_limits<EdgeId>::max() - 1) throw ParseError("too many edges", lineno);
    const bool weighted = fmt == 1;
    const bool directed = format == FileFormat::dhgr;

    std::vector<std::size_t> offsets{0};
    std::vector<NodeId> data;
    std::vector<std::uint32_t> src_counts;
    std::vector<Weight> weights;
    std::vector<EdgeId> seen(num_nodes, kNoNode);
    for (EdgeId e = 0; e < num_edges; ++e) {
        next_content(got);
        if (!got) throw ParseError("expected " + std::to_string(num_edges) + " edges, found " + std::to_string(e), lineno + 1);
        auto tok = detail::split_ws(line);
        if (tok.empty()) throw ParseError("empty edge line", lineno);
        std::size_t t = 0;
        Weight w = 1.0;
        if (weighted) w = detail::parse_weight(tok[t++], lineno);
        std::uint64_t s = 0;
        if (directed) {
            if (t >= tok.size()) throw ParseError("missing source count", lineno);
            s = detail::parse_uint<std::uint64_t>(tok[t++], lineno, "source count");
        }
        const std::size_t pin_count = tok.size() - t;
        if (pin_count == 0) throw ParseError("edge has no pins", lineno);
        if (s > pin_count) throw ParseError("source count exceeds pin count", lineno);
        for (; t < tok.size(); ++t) {
            const auto id = detail::parse_uint<std::uint64_t>(tok[t], lineno, "node id");
            if (id < 1 || id > num_nodes) throw ParseError("node id " + std::string(tok[t]) + " out of range", lineno);
            const auto v = static_cast<NodeId>(id - 1);
            if (seen[v] == e) throw ParseError("duplicate pin " + std::string(tok[t]), lineno);
            seen[v] = e;
            data.push_back(v);
        }
        offsets.push_back(data.size());
        src_counts.push_back(static_cast<std::uint32_t>(s));
        weights.push_back(w);
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '%') continue;
        if (!detail::split_ws(line).empty()) throw ParseError("unexpected content after the last edge", lineno);
    }
    return Hypergraph(static_cast<NodeId>(num_nodes), std::move(offsets), std::move(data), std::move(src_counts),
                      std::move(weights), std::vector<NodeSize>(num_nodes, 1));
}

inline Hypergraph read_hypergraph(const std::string& path, FileFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_hypergraph(in, format);
}

// Writes fmt 1 only when some weight differs from 1. hgr output drops edge direction.
inline void write_hypergraph(std::ostream& out, const Hypergraph& hg, FileFormat format) {
    bool weighted = false;
    for (EdgeId e = 0; e < hg.num_edges(); ++e) weighted |= hg.weight(e) != 1.0;
    out << hg.num_edges() << ' ' << hg.num_nodes() << ' ' << (weighted ? 1 : 0) << '\n';
    std::string buf;
    for (EdgeId e = 0; e < hg.num_edges(); ++e) {
        buf.clear();
        if (weighted) {
            buf += detail::format_weight(hg.weight(e));
            buf += ' ';
        }
        if (format == FileFormat::dhgr) {
            buf += std::to_string(hg.src_count(e));
            buf += ' ';
        }
        bool first = true;
        for (NodeId v : hg.pins(e)) {
            if (!first) buf += ' ';
            buf += std::to_string(v + 1);
            first = false;
        }
        buf += '\n';
        out << buf;
    }
}

inline void write_hypergraph(const std::string& path, const Hypergraph& hg, FileFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_hypergraph(out, hg, format);
    if (!out) throw std::runtime_error("write failed: " + path);
}

// One zero-based partition id per line in node order, compacted onto the nonempty partitions.
inline void write_partition(std::ostream& out, std::span<const PartId> assignment) {
    std::string buf;
    for (PartId p : compact_assignment(assignment)) {
        buf += std::to_string(p);
        buf += '\n';
    }
    out << buf;
}

inline void write_partition(const std::string& path, std::span<const PartId> assignment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_partition(out, assignment);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<PartId> read_partition(std::istream& in, NodeId num_nodes) {
    std::vector<PartId> assignment;
    assignment.reserve(num_nodes);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tok = detail::split_ws(line);
        if (tok.empty()) continue;
        if (tok.size() != 1) throw ParseError("expected one partition id", lineno);
        const auto p = detail::parse_uint<std::uint64_t>(tok[0], lineno, "partition id");
        if (p >= kNoPart) throw ParseError("partition id too large", lineno);
        if (assignment.size() == num_nodes) throw ParseError("more lines than nodes", lineno);
        assignment.push_back(static_cast<PartId>(p));
    }
    if (assignment.size() != num_nodes)
        throw ParseError("expected " + std::to_string(num_nodes) + " partition ids, found " +
                             std::to_string(assignment.size()),
                         lineno);
    return assignment;
}

inline std::vector<PartId> read_partition(const std::string& path, NodeId num_nodes) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_partition(in, num_nodes);
}

} // namespace hgpart
