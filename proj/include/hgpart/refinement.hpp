// refinement.hpp - sequence-based parallel local search under size/inbound limits
//
// One pass: every node proposes its best move in isolation, moves are chained
// source-to-destination into paths and cycles, chains are ranked by total
// gain, gains are recomputed as if all earlier moves had been applied, and
// the constraint state after every move is derived from sparse events. The
// legal prefix of highest cumulative gain is applied.
#pragma once

#include "hgpart/hypergraph.hpp"
#include "hgpart/parallel.hpp"
#include "hgpart/partitioning.hpp"
#include "hgpart/types.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace hgpart {

struct RefinementParams {
    std::uint32_t theta = 16;        // passes per level
    double alpha = 1e-6;             // chaining penalty per unit of size difference
    double beta = 1e-7;              // chaining penalty per unit of |in| difference
    std::size_t window = 256;        // candidate successors examined per chain tail
    std::uint32_t chain_rounds = 16;
};

inline constexpr std::uint32_t kNoMove = std::numeric_limits<std::uint32_t>::max();

namespace detail {
// Stable counting sort by key(x) ∈ [0, range). Returns the bucket offsets.
template <class T, class Key>
std::vector<std::size_t> counting_sort(std::vector<T>& items, std::size_t range, Key key) {
    std::vector<std::size_t> off(range + 1, 0);
    for (const auto& x : items) ++off[key(x) + 1];
    for (std::size_t r = 0; r < range; ++r) off[r + 1] += off[r];
    std::vector<T> out(items.size());
    std::vector<std::size_t> next(off.begin(), off.end() - 1);
    for (const auto& x : items) out[next[key(x)]++] = x;
    items.swap(out);
    return off;
}
} // namespace detail

struct Move {
    NodeId node = kNoNode;
    PartId from = kNoPart;
    PartId to = kNoPart;
    Weight gain_isolated = 0.0;
    Weight gain_insequence = 0.0;
    std::uint32_t pred = kNoMove;  // sequence positions of chain neighbors
    std::uint32_t succ = kNoMove;
    std::uint32_t position = kNoMove;
};

namespace detail {
// One past the largest partition id any move touches.
inline PartId part_range(std::span<const Move> moves) {
    PartId k = 0;
    for (const auto& mv : moves) k = std::max({k, mv.from + 1, mv.to + 1});
    return k;
}
} // namespace detail

struct MoveSequence {
    std::vector<Move> moves;                  // in sequence order
    std::vector<std::uint32_t> chain_starts;  // first position of every chain

    std::size_t size() const { return moves.size(); }

    // cumulative[k] = Σ of the first k in-sequence gains; cumulative[0] = 0.
    std::vector<Weight> cumulative_gains() const {
        std::vector<Weight> cum(moves.size() + 1, 0.0);
        for (std::size_t i = 0; i < moves.size(); ++i) cum[i + 1] = cum[i] + moves[i].gain_insequence;
        return cum;
    }
};

// Best move of every node given the current pins(p, e). Destinations are the
// partitions sharing an edge with the node; with enforce_size they must also
// have room for it. Moves of nonpositive gain are kept for chaining.
inline std::vector<Move> propose_moves(const Hypergraph& hg, const IncidenceIndex& inc, const Partitioning& part,
                                       const PinsMatrix& pins, const Constraints& cons, bool enforce_size) {
    const NodeId n = hg.num_nodes();
    const PartId k = part.num_parts();
    std::vector<Move> slots(n);
    par::parallel_for_range(n, [&](std::size_t lo, std::size_t hi) {
        std::vector<Weight> present(k, 0.0);
        std::vector<std::uint8_t> seen(k, 0);
        std::vector<PartId> touched;
        for (std::size_t vi = lo; vi < hi; ++vi) {
            const auto v = static_cast<NodeId>(vi);
            const PartId ps = part.assignment[v];
            Weight saving = 0.0, total = 0.0;
            touched.clear();
            for (EdgeId e : inc.incident(v)) {
                const Weight w = hg.weight(e);
                total += w;
                auto ps_list = pins.parts(e);
                auto cnt = pins.counts(e);
                for (std::size_t i = 0; i < ps_list.size(); ++i) {
                    PartId p = ps_list[i];
                    if (p == ps) {
                        if (cnt[i] == 1) saving += w;
                        continue;
                    }
                    if (!seen[p]) {
                        seen[p] = 1;
                        touched.push_back(p);
                    }
                    present[p] += w;
                }
            }
            PartId best = kNoPart;
            Weight best_gain = 0.0;
            for (PartId p : touched) {
                const Weight gain = saving - (total - present[p]);
                const bool fits = !enforce_size || cons.size_ok(part.part_sizes[p] + hg.node_size(v));
                if (fits && (best == kNoPart || gain > best_gain || (gain == best_gain && p > best))) {
                    best = p;
                    best_gain = gain;
                }
                present[p] = 0.0;
                seen[p] = 0;
            }
            if (best != kNoPart) slots[v] = Move{v, ps, best, best_gain, best_gain};
        }
    }, 512);
    std::vector<Move> moves;
    for (auto& m : slots)
        if (m.node != kNoNode) moves.push_back(m);
    return moves;
}

// Chains moves into paths/cycles and concatenates chains by decreasing total
// in-isolation gain. Moves are ranked by (source, −gain); over up to
// params.chain_rounds rounds every chain tail grades the first params.window
// free heads departing from its destination partition, and contended heads go
// to the tail of highest (grade, node id).
inline MoveSequence build_chains(std::vector<Move> moves, const Hypergraph& hg, const IncidenceIndex& inc,
                                 const RefinementParams& params) {
    const auto m = static_cast<std::uint32_t>(moves.size());
    MoveSequence seq;
    if (m == 0) return seq;

    std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
        if (a.from != b.from) return a.from < b.from;
        if (a.gain_isolated != b.gain_isolated) return a.gain_isolated > b.gain_isolated;
        return a.node > b.node;
    });
    const PartId k = detail::part_range(moves);
    std::vector<std::uint32_t> range_off(std::size_t{k} + 1, 0);
    for (const auto& mv : moves) ++range_off[mv.from + 1];
    for (PartId p = 0; p < k; ++p) range_off[p + 1] += range_off[p];

    std::vector<std::uint32_t> pred(m, kNoMove), succ(m, kNoMove);
    std::vector<double> sizes(m), ins(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        sizes[i] = static_cast<double>(hg.node_size(moves[i].node));
        ins[i] = static_cast<double>(inc.in_count(moves[i].node));
    }

    // A tail's scan depends only on (destination, size, |in|): scan once per key.
    std::vector<std::uint32_t> by_key(m);
    std::iota(by_key.begin(), by_key.end(), 0u);
    std::sort(by_key.begin(), by_key.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (moves[a].to != moves[b].to) return moves[a].to < moves[b].to;
        if (sizes[a] != sizes[b]) return sizes[a] < sizes[b];
        if (ins[a] != ins[b]) return ins[a] < ins[b];
        return a < b;
    });
    std::vector<std::uint32_t> key_off{0};
    for (std::uint32_t i = 1; i < m; ++i) {
        const std::uint32_t a = by_key[i - 1], b = by_key[i];
        if (moves[a].to != moves[b].to || sizes[a] != sizes[b] || ins[a] != ins[b]) key_off.push_back(i);
    }
    key_off.push_back(m);

    struct Claim {
        double grade;
        NodeId tail_node;
        std::uint32_t tail;
    };
    std::vector<std::uint32_t> avail, avail_off(std::size_t{k} + 1);
    std::vector<std::uint32_t> choice(m);
    std::vector<double> choice_grade(m);
    std::vector<Claim> claims(m);
    std::vector<std::uint8_t> claimed(m);

    for (std::uint32_t round = 0; round < params.chain_rounds; ++round) {
        // Free heads per source partition, still in rank order.
        avail.clear();
        for (PartId p = 0; p < k; ++p) {
            avail_off[p] = static_cast<std::uint32_t>(avail.size());
            for (std::uint32_t i = range_off[p]; i < range_off[p + 1]; ++i)
                if (pred[i] == kNoMove) avail.push_back(i);
        }
        avail_off[k] = static_cast<std::uint32_t>(avail.size());

        par::parallel_for(key_off.size() - 1, [&](std::size_t g) {
            std::uint32_t ti = kNoMove;
            for (std::uint32_t j = key_off[g]; j < key_off[g + 1]; ++j) {
                choice[by_key[j]] = kNoMove;
                if (ti == kNoMove && succ[by_key[j]] == kNoMove) ti = by_key[j];
            }
            if (ti == kNoMove) return;
            const PartId q = moves[ti].to;
            const std::uint32_t lo = avail_off[q];
            const std::uint32_t hi = std::min<std::uint32_t>(avail_off[q + 1], lo + static_cast<std::uint32_t>(params.window));
            std::uint32_t best = kNoMove;
            double best_grade = 0.0;
            for (std::uint32_t a = lo; a < hi; ++a) {
                const std::uint32_t c = avail[a];
                const double gain = moves[c].gain_isolated;
                // Candidates are ranked by gain and grade ≤ gain, so nothing later can win.
                if (best != kNoMove && gain < best_grade) break;
                const double grade = gain - params.alpha * std::abs(sizes[ti] - sizes[c]) -
                                     params.beta * std::abs(ins[ti] - ins[c]);
                if (best == kNoMove || grade > best_grade ||
                    (grade == best_grade && moves[c].node > moves[best].node)) {
                    best = c;
                    best_grade = grade;
                }
            }
            for (std::uint32_t j = key_off[g]; j < key_off[g + 1]; ++j) {
                const std::uint32_t t = by_key[j];
                if (succ[t] != kNoMove) continue;
                choice[t] = best;
                choice_grade[t] = best_grade;
            }
        }, 64);

        std::fill(claimed.begin(), claimed.end(), 0);
        for (std::uint32_t t = 0; t < m; ++t) {
            const std::uint32_t c = choice[t];
            if (c == kNoMove) continue;
            Claim mine{choice_grade[t], moves[t].node, t};
            if (!claimed[c] || mine.grade > claims[c].grade ||
                (mine.grade == claims[c].grade && mine.tail_node > claims[c].tail_node)) {
                claims[c] = mine;
                claimed[c] = 1;
            }
        }
        bool linked = false;
        for (std::uint32_t c = 0; c < m; ++c) {
            if (!claimed[c]) continue;
            succ[claims[c].tail] = c;
            pred[c] = claims[c].tail;
            linked = true;
        }
        if (!linked) break;
    }

    // Extract paths from their heads, then the remaining cycles.
    struct Chain {
        std::uint32_t first_rank;
        Weight total;
        std::vector<std::uint32_t> members;
    };
    std::vector<Chain> chains;
    std::vector<std::uint8_t> visited(m, 0);
    auto walk = [&](std::uint32_t start) {
        Chain ch{start, 0.0, {}};
        for (std::uint32_t c = start; c != kNoMove && !visited[c]; c = succ[c]) {
            visited[c] = 1;
            ch.members.push_back(c);
            ch.total += moves[c].gain_isolated;
        }
        chains.push_back(std::move(ch));
    };
    for (std::uint32_t i = 0; i < m; ++i)
        if (pred[i] == kNoMove) walk(i);
    // A cycle starts at its move of highest (gain, node id).
    for (std::uint32_t i = 0; i < m; ++i) {
        if (visited[i]) continue;
        std::uint32_t start = i;
        for (std::uint32_t c = succ[i]; c != i; c = succ[c])
            if (better_candidate(moves[c].gain_isolated, moves[c].node, moves[start].gain_isolated, moves[start].node))
                start = c;
        walk(start);
    }
    std::stable_sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) {
        if (a.total != b.total) return a.total > b.total;
        return a.first_rank < b.first_rank;
    });

    seq.moves.reserve(m);
    std::vector<std::uint32_t> position(m);
    for (const auto& ch : chains) {
        seq.chain_starts.push_back(static_cast<std::uint32_t>(seq.moves.size()));
        for (std::uint32_t c : ch.members) {
            position[c] = static_cast<std::uint32_t>(seq.moves.size());
            seq.moves.push_back(moves[c]);
        }
    }
    for (std::uint32_t i = 0; i < m; ++i) seq.moves[i].position = i;
    for (std::uint32_t c = 0; c < m; ++c) {
        Move& mv = seq.moves[position[c]];
        mv.pred = pred[c] == kNoMove ? kNoMove : position[pred[c]];
        mv.succ = succ[c] == kNoMove ? kNoMove : position[succ[c]];
    }
    return seq;
}

// Wraps an already ordered move list as a sequence (no chaining).
inline MoveSequence sequence_from_moves(std::vector<Move> moves) {
    MoveSequence seq;
    seq.moves = std::move(moves);
    for (std::uint32_t i = 0; i < seq.moves.size(); ++i) {
        seq.moves[i].position = i;
        seq.moves[i].pred = seq.moves[i].succ = kNoMove;
        seq.chain_starts.push_back(i);
    }
    return seq;
}

// gain_insequence of each move assuming every earlier move in the sequence is
// applied. Every edge replays the moves of its pins in sequence order against
// running per-partition counts; a move earns +ω(e) when it is the last pin of
// e at its source and −ω(e) when e has no pin at its destination yet. The
// per-edge terms of a move are summed in its incidence order.
inline void in_sequence_gains(const Hypergraph& hg, const IncidenceIndex& inc, const PinsMatrix& pins,
                              MoveSequence& seq) {
    const std::size_t m = seq.moves.size();
    std::vector<std::size_t> slot_off(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) slot_off[i + 1] = slot_off[i] + inc.degree(seq.moves[i].node);
    struct Visit {
        EdgeId edge;
        std::uint32_t move;
        std::size_t slot;
    };
    std::vector<Visit> visits(slot_off[m]);
    par::parallel_for(m, [&](std::size_t i) {
        std::size_t o = slot_off[i];
        for (EdgeId e : inc.incident(seq.moves[i].node)) {
            visits[o] = {e, static_cast<std::uint32_t>(i), o};
            ++o;
        }
    }, 2048);
    const auto edge_off = detail::counting_sort(visits, hg.num_edges(), [](const Visit& v) { return v.edge; });

    const PartId k = detail::part_range(seq.moves);
    std::vector<Weight> terms(slot_off[m], 0.0);
    par::parallel_for_range(hg.num_edges(), [&](std::size_t lo, std::size_t hi) {
        std::vector<std::int64_t> count(k, 0);
        std::vector<std::uint8_t> seen(k, 0);
        std::vector<PartId> touched;
        auto at = [&](PartId p, EdgeId e) -> std::int64_t& {
            if (!seen[p]) {
                seen[p] = 1;
                count[p] = pins.count(p, e);
                touched.push_back(p);
            }
            return count[p];
        };
        for (std::size_t e = lo; e < hi; ++e) {
            const auto edge = static_cast<EdgeId>(e);
            const Weight w = hg.weight(edge);
            for (std::size_t j = edge_off[e]; j < edge_off[e + 1]; ++j) {
                const Move& mv = seq.moves[visits[j].move];
                std::int64_t& at_s = at(mv.from, edge);
                std::int64_t& at_d = at(mv.to, edge);
                Weight t = 0.0;
                if (at_s == 1) t += w;
                if (at_d == 0) t -= w;
                terms[visits[j].slot] = t;
                --at_s;
                ++at_d;
            }
            for (PartId p : touched) seen[p] = 0;
            touched.clear();
        }
    }, 1024);
    par::parallel_for(m, [&](std::size_t i) {
        Weight gain = 0.0;
        for (std::size_t o = slot_off[i]; o < slot_off[i + 1]; ++o) gain += terms[o];
        seq.moves[i].gain_insequence = gain;
    }, 2048);
}

struct SizeEvent {
    PartId part;
    std::uint32_t position;
    NodeSize delta;
};
struct InboundPinEvent {
    PartId part;
    EdgeId edge;
    std::uint32_t position;
    std::int32_t delta;
};
struct EventStream {
    std::vector<SizeEvent> size_events;         // sorted by (part, position)
    std::vector<InboundPinEvent> pin_events;    // sorted by (part, edge, position)
};

// Two size events per move and, for every inbound edge of the moved node, one
// pins_in decrement at the source and one increment at the destination.
inline EventStream generate_events(const Hypergraph& hg, const IncidenceIndex& inc, const MoveSequence& seq,
                                   bool with_inbound = true) {
    const std::size_t m = seq.moves.size();
    EventStream ev;
    ev.size_events.resize(2 * m);
    std::vector<std::size_t> pin_off(m + 1, 0);
    if (with_inbound)
        for (std::size_t i = 0; i < m; ++i) pin_off[i + 1] = pin_off[i] + 2 * inc.in_count(seq.moves[i].node);
    ev.pin_events.resize(pin_off[m]);
    par::parallel_for(m, [&](std::size_t i) {
        const Move& mv = seq.moves[i];
        const auto pos = static_cast<std::uint32_t>(i);
        const NodeSize s = hg.node_size(mv.node);
        ev.size_events[2 * i] = {mv.from, pos, -s};
        ev.size_events[2 * i + 1] = {mv.to, pos, s};
        if (!with_inbound) return;
        std::size_t o = pin_off[i];
        for (EdgeId e : inc.in(mv.node)) {
            ev.pin_events[o++] = {mv.from, e, pos, -1};
            ev.pin_events[o++] = {mv.to, e, pos, +1};
        }
    }, 2048);
    // Events were written in position order, so stable passes by the remaining keys suffice.
    const PartId k = detail::part_range(seq.moves);
    detail::counting_sort(ev.size_events, k, [](const SizeEvent& x) { return x.part; });
    detail::counting_sort(ev.pin_events, hg.num_edges(), [](const InboundPinEvent& x) { return x.edge; });
    detail::counting_sort(ev.pin_events, k, [](const InboundPinEvent& x) { return x.part; });
    return ev;
}

// Capacity used by `part` right after the move at `position`.
struct CapacityTrack {
    PartId part;
    std::uint32_t position;
    std::int64_t used;
};

struct SequenceValidation {
    std::vector<std::uint32_t> violations;  // [k] = active violations after the first k moves
    std::vector<CapacityTrack> sizes;       // per size event, sorted by (part, position)
    std::vector<CapacityTrack> inbound;     // per distinct-inbound change, sorted by (part, position)

    bool legal(std::size_t k) const { return violations[k] == 0; }
};

// Derives constraint state along the sequence from the events alone: running
// sums per partition for sizes, running pins_in per (partition, edge) whose
// zero crossings become ±1 distinct-inbound events, then validity flips whose
// prefix sum counts active violations.
inline SequenceValidation validate_sequence(const EventStream& ev, const Partitioning& part, const PinsMatrix& pins_in,
                                            const Constraints& cons, std::size_t num_moves) {
    SequenceValidation out;
    std::vector<std::int32_t> flips(num_moves + 1, 0);
    std::uint32_t base = 0;
    for (PartId p = 0; p < part.num_parts(); ++p) {
        base += !cons.size_ok(part.part_sizes[p]);
        base += !cons.inbound_ok(part.part_inbound_counts[p]);
    }

    auto track = [&](auto&& events_by_part, auto initial_of, auto ok, std::vector<CapacityTrack>& sink) {
        // events_by_part: (part, position, delta) triples sorted by (part, position), positions unique per part
        std::size_t i = 0;
        while (i < events_by_part.size()) {
            const PartId p = events_by_part[i].part;
            std::int64_t used = initial_of(p);
            bool was_ok = ok(used);
            for (; i < events_by_part.size() && events_by_part[i].part == p; ++i) {
                used += events_by_part[i].delta;
                sink.push_back({p, events_by_part[i].position, used});
                const bool now_ok = ok(used);
                if (was_ok != now_ok) flips[events_by_part[i].position + 1] += now_ok ? -1 : 1;
                was_ok = now_ok;
            }
        }
    };

    track(ev.size_events, [&](PartId p) { return std::int64_t{part.part_sizes[p]}; },
          [&](std::int64_t used) { return cons.size_ok(used); }, out.sizes);

    // Zero crossings of pins_in(p, e) → distinct-inbound deltas, merged per (p, position).
    struct Delta {
        PartId part;
        std::uint32_t position;
        std::int64_t delta;
    };
    std::vector<Delta> distinct;
    for (std::size_t i = 0; i < ev.pin_events.size();) {
        const PartId p = ev.pin_events[i].part;
        const EdgeId e = ev.pin_events[i].edge;
        std::int64_t running = pins_in.count(p, e);
        for (; i < ev.pin_events.size() && ev.pin_events[i].part == p && ev.pin_events[i].edge == e; ++i) {
            const std::int64_t next = running + ev.pin_events[i].delta;
            if (running == 0 && next == 1) distinct.push_back({p, ev.pin_events[i].position, +1});
            if (running == 1 && next == 0) distinct.push_back({p, ev.pin_events[i].position, -1});
            running = next;
        }
    }
    detail::counting_sort(distinct, num_moves, [](const Delta& d) { return d.position; });
    detail::counting_sort(distinct, part.num_parts(), [](const Delta& d) { return d.part; });
    std::vector<Delta> merged;
    for (const auto& d : distinct) {
        if (!merged.empty() && merged.back().part == d.part && merged.back().position == d.position)
            merged.back().delta += d.delta;
        else
            merged.push_back(d);
    }
    track(merged, [&](PartId p) { return std::int64_t{part.part_inbound_counts[p]}; },
          [&](std::int64_t used) { return cons.inbound_ok(static_cast<std::uint64_t>(used)); }, out.inbound);

    out.violations.resize(num_moves + 1);
    std::int64_t active = base;
    for (std::size_t k = 0; k <= num_moves; ++k) {
        active += flips[k];
        out.violations[k] = static_cast<std::uint32_t>(active);
    }
    return out;
}

// Applies the first k moves, keeping assignment, ledgers and both pins
// matrices in sync.
inline void apply_moves(const Hypergraph& hg, const IncidenceIndex& inc, std::span<const Move> moves,
                        Partitioning& part, PinsMatrix& pins, PinsMatrix& pins_in) {
    for (const Move& mv : moves) {
        for (EdgeId e : inc.incident(mv.node)) {
            pins.add(mv.from, e, -1);
            pins.add(mv.to, e, +1);
        }
        for (EdgeId e : inc.in(mv.node)) {
            if (pins_in.add(mv.from, e, -1) == 0) --part.part_inbound_counts[mv.from];
            if (pins_in.add(mv.to, e, +1) == 1) ++part.part_inbound_counts[mv.to];
        }
        part.part_sizes[mv.from] -= hg.node_size(mv.node);
        part.part_sizes[mv.to] += hg.node_size(mv.node);
        part.assignment[mv.node] = mv.to;
    }
}

// Legal landing position of maximum cumulative gain (shortest on ties); 0 when
// no legal position has positive gain.
inline std::size_t best_prefix(const MoveSequence& seq, const SequenceValidation& val) {
    const auto cum = seq.cumulative_gains();
    std::size_t best = 0;
    Weight best_gain = 0.0;
    for (std::size_t k = 1; k < cum.size(); ++k)
        if (val.legal(k) && cum[k] > best_gain) {
            best = k;
            best_gain = cum[k];
        }
    return best;
}

inline std::size_t apply_best_prefix(const Hypergraph& hg, const IncidenceIndex& inc, const MoveSequence& seq,
                                     const SequenceValidation& val, Partitioning& part, PinsMatrix& pins,
                                     PinsMatrix& pins_in) {
    const std::size_t k = best_prefix(seq, val);
    apply_moves(hg, inc, std::span<const Move>(seq.moves).first(k), part, pins, pins_in);
    return k;
}

struct PassStats {
    std::uint32_t pass = 0;
    bool enforce_size = false;
    std::size_t proposed = 0;
    std::size_t applied = 0;
    Weight gain = 0.0;
    Weight connectivity_before = 0.0;
    Weight connectivity_after = 0.0;
};

struct RefinePhaseTimes {
    double pins = 0, propose = 0, chain = 0, gains = 0, events = 0, validate = 0, apply = 0;
};

struct RefineLevelStats {
    std::vector<PassStats> passes;
    RefinePhaseTimes times;
};

namespace detail {
class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double lap() {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point start_;
};
} // namespace detail

// Θ passes on one level. The first ⌈Θ/2⌉ passes may propose moves that
// overfill their destination; later passes only propose moves that fit.
inline RefineLevelStats refine_level(const Hypergraph& hg, const IncidenceIndex& inc, Partitioning& part,
                                     const Constraints& cons, const RefinementParams& params) {
    RefineLevelStats stats;
    if (params.theta == 0) return stats;
    detail::Stopwatch sw;
    PinsMatrix pins = build_pins_matrix(hg, part.assignment, PinsMode::all);
    const bool with_inbound = cons.delta != kUnbounded;
    PinsMatrix pins_in = build_pins_matrix(hg, part.assignment, PinsMode::inbound);
    stats.times.pins += sw.lap();

    Weight conn = connectivity(hg, part);
    const std::uint32_t relaxed_passes = (params.theta + 1) / 2;
    for (std::uint32_t pass = 0; pass < params.theta; ++pass) {
        const bool enforce = pass >= relaxed_passes;
        PassStats ps;
        ps.pass = pass;
        ps.enforce_size = enforce;
        ps.connectivity_before = conn;

        sw.lap();
        auto moves = propose_moves(hg, inc, part, pins, cons, enforce);
        stats.times.propose += sw.lap();
        ps.proposed = moves.size();
        std::size_t applied = 0;
        if (!moves.empty()) {
            MoveSequence seq = build_chains(std::move(moves), hg, inc, params);
            stats.times.chain += sw.lap();
            in_sequence_gains(hg, inc, pins, seq);
            stats.times.gains += sw.lap();
            EventStream ev = generate_events(hg, inc, seq, with_inbound);
            stats.times.events += sw.lap();
            SequenceValidation val = validate_sequence(ev, part, pins_in, cons, seq.size());
            stats.times.validate += sw.lap();
            applied = best_prefix(seq, val);
            if (applied > 0) ps.gain = seq.cumulative_gains()[applied];
            apply_moves(hg, inc, std::span<const Move>(seq.moves).first(applied), part, pins, pins_in);
            stats.times.apply += sw.lap();
#ifndef NDEBUG
            if (applied > 0 && (pins != build_pins_matrix(hg, part.assignment, PinsMode::all) ||
                                pins_in != build_pins_matrix(hg, part.assignment, PinsMode::inbound)))
                throw std::logic_error("incremental pins update diverged from recomputation");
#endif
        }
        ps.applied = applied;
        if (applied > 0) conn = connectivity(hg, part);
        ps.connectivity_after = conn;
        stats.passes.push_back(ps);

        // A pass that changes nothing would repeat identically: skip ahead.
        if (applied == 0) {
            if (enforce) break;
            pass = relaxed_passes - 1;
        }
    }
    return stats;
}

} // namespace hgpart
