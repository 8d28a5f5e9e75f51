// types.hpp - identifiers, scalar aliases and error types shared across hgpart
#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace hgpart {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using PartId = std::uint32_t;
using Weight = double;
using NodeSize = std::int64_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr PartId kNoPart = std::numeric_limits<PartId>::max();

// Ids live in the low 31 bits; neighbor sets borrow the top bit as a flag.
inline constexpr std::uint32_t kMaxNodes = 0x7fffffffu;

// Capacity limit used for Ω and Δ. kUnbounded disables the constraint.
using Capacity = std::uint64_t;
inline constexpr Capacity kUnbounded = std::numeric_limits<Capacity>::max();

struct Constraints {
    Capacity omega = kUnbounded;  // max Σ size(n) per partition
    Capacity delta = kUnbounded;  // max distinct inbound edges per partition

    bool size_ok(NodeSize used) const {
        return omega == kUnbounded || used <= static_cast<NodeSize>(omega);
    }
    bool inbound_ok(std::uint64_t used) const {
        return delta == kUnbounded || used <= delta;
    }
};

// The one tie rule: higher score first, then higher id.
inline bool better_candidate(Weight sa, NodeId a, Weight sb, NodeId b) {
    return sa > sb || (sa == sb && a > b);
}

// Malformed hypergraph or partitioning data handed to the library.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// No valid solution exists for the requested constraints.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, NodeId node)
        : std::runtime_error(what), node_(node) {}
    NodeId node() const { return node_; }

private:
    NodeId node_;
};

// File content that cannot be parsed; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace hgpart
