#include "support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace hgtest;

namespace {

struct State {
    Hypergraph hg;
    IncidenceIndex inc;
    Partitioning part;
    PinsMatrix pins, pins_in;

    State(Hypergraph g, std::vector<PartId> a, PartId k = 0)
        : hg(std::move(g)), inc(build_incidence(hg)), part(Partitioning::from_assignment(hg, std::move(a), k)),
          pins(build_pins_matrix(hg, part.assignment, PinsMode::all)),
          pins_in(build_pins_matrix(hg, part.assignment, PinsMode::inbound)) {}
};

const Move* move_of(const std::vector<Move>& moves, NodeId n) {
    for (const auto& m : moves)
        if (m.node == n) return &m;
    return nullptr;
}

// Random sequence: distinct nodes, each sent to a random other partition.
std::vector<Move> random_moves(Rng& rng, const Partitioning& part, std::size_t count) {
    const auto n = static_cast<NodeId>(part.assignment.size());
    std::vector<NodeId> nodes(n);
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    std::shuffle(nodes.begin(), nodes.end(), rng.engine());
    std::vector<Move> out;
    for (std::size_t i = 0; i < std::min<std::size_t>(count, n); ++i) {
        const NodeId v = nodes[i];
        const PartId from = part.assignment[v];
        PartId to = static_cast<PartId>(rng.between(0, part.num_parts() - 2));
        if (to >= from) ++to;
        out.push_back(Move{v, from, to});
    }
    return out;
}

std::vector<std::pair<NodeId, PartId>> as_pairs(const MoveSequence& seq) {
    std::vector<std::pair<NodeId, PartId>> out;
    for (const auto& m : seq.moves) out.emplace_back(m.node, m.to);
    return out;
}

// Full per-partition capacity after every position, rebuilt from the tracks.
std::vector<std::map<PartId, std::int64_t>> replay(std::size_t positions, const std::vector<CapacityTrack>& tracks,
                                                   const std::map<PartId, std::int64_t>& initial) {
    std::vector<std::map<PartId, std::int64_t>> out(positions + 1, initial);
    std::vector<std::vector<CapacityTrack>> by_pos(positions);
    for (const auto& t : tracks) by_pos[t.position].push_back(t);
    for (std::size_t k = 0; k < positions; ++k) {
        out[k + 1] = out[k];
        for (const auto& t : by_pos[k]) out[k + 1][t.part] = t.used;
    }
    return out;
}

template <class V>
std::map<PartId, std::int64_t> dense(const std::map<PartId, V>& m, PartId k) {
    std::map<PartId, std::int64_t> out;
    for (PartId p = 0; p < k; ++p) out[p] = 0;
    for (auto& [p, v] : m) out[p] = static_cast<std::int64_t>(v);
    return out;
}

}  // namespace

TEST(Propose, HexNode2) {
    State s(h_ex(), {0, 0, 1, 1});
    auto moves = propose_moves(s.hg, s.inc, s.part, s.pins, Constraints{3, 3}, true);
    const Move* m = move_of(moves, 2);
    ASSERT_NE(m, nullptr);
    EXPECT_EQ(m->from, 1u);
    EXPECT_EQ(m->to, 0u);
    EXPECT_EQ(m->gain_isolated, 2.0);
    EXPECT_EQ(move_of(moves, 3), nullptr);  // no adjacent partition
    std::vector<PartId> after{0, 0, 0, 1};
    EXPECT_EQ(connectivity(s.hg, std::vector<PartId>{0, 0, 1, 1}) - connectivity(s.hg, after), 2.0);
    EXPECT_EQ(connectivity(s.hg, after), 1.0);
}

TEST(Propose, InternalNodeHasNegativeGain) {
    // 0 and 1 share two internal edges; 0 also touches 2 in p1.
    auto hg = Hypergraph::from_edges(3, {{{}, {0, 1}, 1.0}, {{0}, {1}, 1.0}, {{0}, {2}, 1.0}});
    State s(hg, {0, 0, 1});
    auto moves = propose_moves(s.hg, s.inc, s.part, s.pins, Constraints{}, false);
    const Move* m0 = move_of(moves, 0);
    ASSERT_NE(m0, nullptr);
    EXPECT_EQ(m0->gain_isolated, -1.0);
}

TEST(Propose, NoCandidates) {
    auto hg = Hypergraph::from_edges(3, {{{0}, {1}, 1.0}});
    State single(hg, {0, 0, 0});
    EXPECT_TRUE(propose_moves(single.hg, single.inc, single.part, single.pins, Constraints{}, false).empty());
    State isolated(hg, {0, 0, 1});
    auto moves = propose_moves(isolated.hg, isolated.inc, isolated.part, isolated.pins, Constraints{}, false);
    EXPECT_EQ(move_of(moves, 2), nullptr);
}

TEST(Propose, EnforceSizeExcludesFullPartitions) {
    State s(h_ex(), {0, 0, 1, 1});
    auto moves = propose_moves(s.hg, s.inc, s.part, s.pins, Constraints{2, kUnbounded}, true);
    EXPECT_TRUE(moves.empty());
    auto relaxed = propose_moves(s.hg, s.inc, s.part, s.pins, Constraints{2, kUnbounded}, false);
    EXPECT_NE(move_of(relaxed, 2), nullptr);
}

TEST(Propose, GainOracleAndBestDestination) {
    Rng rng(41);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        auto hg = random_hypergraph(rng, {25, 35, 5, 6, 2});
        const PartId k = 5;
        State s(hg, random_assignment(rng, 25, k), k);
        const Constraints cons{12, kUnbounded};
        const bool enforce = t % 2 == 0;
        auto moves = propose_moves(s.hg, s.inc, s.part, s.pins, cons, enforce);
        const Weight before = oracle::connectivity(s.hg, s.part.assignment);
        for (NodeId v = 0; v < s.hg.num_nodes(); ++v) {
            // Best (gain, id) over every other partition, adjacent or not.
            std::set<PartId> adjacent;
            for (EdgeId e = 0; e < s.hg.num_edges(); ++e) {
                auto pins = s.hg.pins(e);
                if (std::find(pins.begin(), pins.end(), v) == pins.end()) continue;
                for (NodeId u : pins) adjacent.insert(s.part.assignment[u]);
            }
            PartId best = kNoPart;
            Weight best_gain = 0.0;
            for (PartId p = 0; p < k; ++p) {
                if (p == s.part.assignment[v]) continue;
                if (enforce && s.part.part_sizes[p] + s.hg.node_size(v) > 12) continue;
                auto a = s.part.assignment;
                a[v] = p;
                const Weight g = before - oracle::connectivity(s.hg, a);
                if (!adjacent.count(p)) {
                    EXPECT_LE(g, 0.0);
                    continue;
                }
                if (best == kNoPart || better_candidate(g, p, best_gain, best)) {
                    best = p;
                    best_gain = g;
                }
            }
            const Move* m = move_of(moves, v);
            if (best == kNoPart) {
                EXPECT_EQ(m, nullptr);
                continue;
            }
            ASSERT_NE(m, nullptr);
            EXPECT_EQ(m->to, best);
            EXPECT_EQ(m->gain_isolated, best_gain);
            ++checked;
        }
    }
    EXPECT_GT(checked, 500);
}

TEST(Chains, TwoCycle) {
    auto hg = Hypergraph::from_edges(2, {{{0}, {1}, 1.0}});
    auto inc = build_incidence(hg);
    std::vector<Move> moves{{0, 0, 1, 3.0, 3.0}, {1, 1, 0, 1.0, 1.0}};
    auto seq = build_chains(moves, hg, inc, RefinementParams{});
    ASSERT_EQ(seq.size(), 2u);
    EXPECT_EQ(seq.chain_starts, (std::vector<std::uint32_t>{0}));
    EXPECT_EQ(seq.moves[0].node, 0u);
    EXPECT_EQ(seq.moves[1].node, 1u);
    EXPECT_EQ(seq.moves[0].succ, 1u);
    EXPECT_EQ(seq.moves[1].succ, 0u);
}

TEST(Chains, NothingComposes) {
    auto hg = Hypergraph::from_edges(6, {});
    auto inc = build_incidence(hg);
    // sources 0,1,2 and destinations 3,4,5: no move starts where another ends
    std::vector<Move> moves{{0, 0, 3, 1.0}, {1, 1, 4, 5.0}, {2, 2, 5, 2.0}};
    auto seq = build_chains(moves, hg, inc, RefinementParams{});
    EXPECT_EQ(seq.chain_starts, (std::vector<std::uint32_t>{0, 1, 2}));
    EXPECT_EQ(seq.moves[0].node, 1u);
    EXPECT_EQ(seq.moves[1].node, 2u);
    EXPECT_EQ(seq.moves[2].node, 0u);
}

TEST(Chains, ContentionGoesToHigherTail) {
    auto hg = Hypergraph::from_edges(3, {});
    auto inc = build_incidence(hg);
    // Tails 0 (p0→p2) and 1 (p1→p2) both want head 2 (p2→p3), equal grades.
    std::vector<Move> moves{{0, 0, 2, 5.0}, {1, 1, 2, 4.0}, {2, 2, 3, 2.0}};
    auto seq = build_chains(moves, hg, inc, RefinementParams{});
    // chain 1 → 2 (total 6) ranks first, then 0 (total 5)
    ASSERT_EQ(seq.size(), 3u);
    EXPECT_EQ(seq.moves[0].node, 1u);
    EXPECT_EQ(seq.moves[1].node, 2u);
    EXPECT_EQ(seq.moves[2].node, 0u);
    EXPECT_EQ(seq.moves[2].succ, kNoMove);
    EXPECT_EQ(seq.chain_starts, (std::vector<std::uint32_t>{0, 2}));
}

TEST(Chains, GradePenalizesSizeDifference) {
    auto hg = Hypergraph(3, {0}, {}, {}, {}, {1, 1, 5});
    auto inc = build_incidence(hg);
    // Tail 0 (p0→p1) picks between heads 1 and 2 of equal gain; 2 differs in size.
    std::vector<Move> moves{{0, 0, 1, 1.0}, {1, 1, 2, 2.0}, {2, 1, 3, 2.0}};
    auto seq = build_chains(moves, hg, inc, RefinementParams{});
    for (const auto& m : seq.moves)
        if (m.node == 0) {
            EXPECT_EQ(seq.moves[m.succ].node, 1u);
        }
}

TEST(Chains, StructureIsDisjointPathsAndCycles) {
    Rng rng(6);
    for (int t = 0; t < 50; ++t) {
        auto hg = random_hypergraph(rng, {60, 80, 4, 3, 2});
        State s(hg, random_assignment(rng, 60, 6), 6);
        auto moves = propose_moves(s.hg, s.inc, s.part, s.pins, Constraints{}, false);
        RefinementParams params;
        params.window = 1 + t % 5;
        auto seq = build_chains(moves, s.hg, s.inc, params);
        ASSERT_EQ(seq.size(), moves.size());
        std::set<NodeId> nodes;
        for (std::uint32_t i = 0; i < seq.size(); ++i) {
            const auto& m = seq.moves[i];
            EXPECT_EQ(m.position, i);
            EXPECT_TRUE(nodes.insert(m.node).second);
            if (m.succ != kNoMove) {
                EXPECT_EQ(seq.moves[m.succ].pred, i);
                EXPECT_EQ(seq.moves[m.succ].from, m.to);
            }
        }
        // Chains are contiguous: every link points at the next position or back to the chain start.
        std::vector<std::uint32_t> starts = seq.chain_starts;
        starts.push_back(static_cast<std::uint32_t>(seq.size()));
        Weight prev_total = std::numeric_limits<Weight>::infinity();
        for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
            Weight total = 0.0;
            for (std::uint32_t i = starts[c]; i < starts[c + 1]; ++i) {
                total += seq.moves[i].gain_isolated;
                const auto succ = seq.moves[i].succ;
                if (i + 1 < starts[c + 1]) EXPECT_EQ(succ, i + 1);
                else EXPECT_TRUE(succ == kNoMove || succ == starts[c]);
            }
            EXPECT_LE(total, prev_total);
            prev_total = total;
        }
    }
}

TEST(InSequence, SingleMoveEqualsIsolated) {
    State s(h_ex(), {0, 0, 1, 1});
    auto moves = propose_moves(s.hg, s.inc, s.part, s.pins, Constraints{}, false);
    for (const auto& m : moves) {
        auto seq = sequence_from_moves({m});
        in_sequence_gains(s.hg, s.inc, s.pins, seq);
        EXPECT_EQ(seq.moves[0].gain_insequence, m.gain_isolated);
    }
}

TEST(InSequence, SharedEdgeBothLeave) {
    // Edge {0,1} in p0; 0 → p1, then 1 → p2. The second move makes the edge span p1 and p2.
    auto hg = Hypergraph::from_edges(4, {{{}, {0, 1}, 1.0}, {{}, {0, 2}, 1.0}, {{}, {1, 3}, 1.0}});
    State s(hg, {0, 0, 1, 2});
    auto seq = sequence_from_moves({Move{0, 0, 1}, Move{1, 0, 2}});
    in_sequence_gains(s.hg, s.inc, s.pins, seq);
    auto sim = oracle::simulate_sequence(s.hg, s.part.assignment, as_pairs(seq), kUnbounded, kUnbounded);
    EXPECT_EQ(seq.moves[0].gain_insequence, sim[0].connectivity - sim[1].connectivity);
    EXPECT_EQ(seq.moves[1].gain_insequence, sim[1].connectivity - sim[2].connectivity);
    // Alone, node 1 trades e2 for a cut e0; after 0 has left, e0 is already cut.
    auto alone = sequence_from_moves({Move{1, 0, 2}});
    in_sequence_gains(s.hg, s.inc, s.pins, alone);
    EXPECT_EQ(alone.moves[0].gain_insequence, 0.0);
    EXPECT_EQ(seq.moves[1].gain_insequence, 1.0);
}

TEST(InSequence, SwapCorrectionsCancel) {
    auto hg = Hypergraph::from_edges(2, {{{0}, {1}, 1.0}});
    State s(hg, {0, 1});
    auto seq = sequence_from_moves({Move{0, 0, 1}, Move{1, 1, 0}});
    in_sequence_gains(s.hg, s.inc, s.pins, seq);
    EXPECT_EQ(seq.moves[0].gain_insequence, 1.0);
    EXPECT_EQ(seq.moves[1].gain_insequence, -1.0);
    EXPECT_EQ(seq.cumulative_gains(), (std::vector<Weight>{0.0, 1.0, 0.0}));
}

TEST(InSequence, PrefixOracleOnRandomSequences) {
    Rng rng(23);
    for (int t = 0; t < 150; ++t) {
        auto hg = random_hypergraph(rng, {30, 45, 6, 5, 2});
        const PartId k = static_cast<PartId>(rng.between(2, 6));
        State s(hg, random_assignment(rng, 30, k), k);
        auto seq = sequence_from_moves(random_moves(rng, s.part, rng.between(1, 30)));
        in_sequence_gains(s.hg, s.inc, s.pins, seq);
        auto sim = oracle::simulate_sequence(s.hg, s.part.assignment, as_pairs(seq), kUnbounded, kUnbounded);
        auto cum = seq.cumulative_gains();
        for (std::size_t i = 0; i < cum.size(); ++i) EXPECT_EQ(cum[i], sim[0].connectivity - sim[i].connectivity);
    }
}

TEST(Events, HexMove2) {
    State s(h_ex(), {0, 0, 1, 1});
    auto seq = sequence_from_moves({Move{2, 1, 0}});
    auto ev = generate_events(s.hg, s.inc, seq);
    ASSERT_EQ(ev.size_events.size(), 2u);
    EXPECT_EQ(ev.size_events[0].part, 0u);
    EXPECT_EQ(ev.size_events[0].delta, 1);
    EXPECT_EQ(ev.size_events[1].part, 1u);
    EXPECT_EQ(ev.size_events[1].delta, -1);
    ASSERT_EQ(ev.pin_events.size(), 4u);
    std::set<std::tuple<PartId, EdgeId, int>> got;
    for (const auto& e : ev.pin_events) got.insert({e.part, e.edge, e.delta});
    EXPECT_EQ(got, (std::set<std::tuple<PartId, EdgeId, int>>{{0, 0, 1}, {0, 1, 1}, {1, 0, -1}, {1, 1, -1}}));
}

TEST(Events, CountsAndEmpty) {
    auto hg = Hypergraph::from_edges(2, {{{0}, {1}, 1.0}});
    State s(hg, {0, 1});
    auto ev = generate_events(s.hg, s.inc, sequence_from_moves({Move{0, 0, 1}}));
    EXPECT_EQ(ev.size_events.size(), 2u);
    EXPECT_TRUE(ev.pin_events.empty());
    auto none = generate_events(s.hg, s.inc, MoveSequence{});
    EXPECT_TRUE(none.size_events.empty());
    EXPECT_TRUE(none.pin_events.empty());
}

TEST(Validate, OverfillThenVacate) {
    // p0 = {0}, p1 = {1, 2}; Ω = 2. 0 → p1 overfills; 1 → p0 restores.
    auto hg = Hypergraph::from_edges(3, {});
    State s(hg, {0, 1, 1});
    auto seq = sequence_from_moves({Move{0, 0, 1}, Move{1, 1, 0}});
    auto val = validate_sequence(generate_events(s.hg, s.inc, seq), s.part, s.pins_in, Constraints{2, kUnbounded},
                                 seq.size());
    EXPECT_EQ(val.violations, (std::vector<std::uint32_t>{0, 1, 0}));
    EXPECT_FALSE(val.legal(1));
    EXPECT_TRUE(val.legal(2));
}

TEST(Validate, SingleValidMove) {
    State s(h_ex(), {0, 0, 1, 1});
    auto seq = sequence_from_moves({Move{2, 1, 0}});
    auto val = validate_sequence(generate_events(s.hg, s.inc, seq), s.part, s.pins_in, Constraints{3, 3}, 1);
    EXPECT_EQ(val.violations, (std::vector<std::uint32_t>{0, 0}));
}

TEST(Validate, SoleDestinationLeaving) {
    // e0: src{0} dst{1}; p1 = {1} holds e0's only destination pin.
    auto hg = Hypergraph::from_edges(2, {{{0}, {1}, 1.0}});
    State s(hg, {0, 1});
    ASSERT_EQ(s.pins_in.count(1, 0), 1u);
    auto seq = sequence_from_moves({Move{1, 1, 0}});
    auto val = validate_sequence(generate_events(s.hg, s.inc, seq), s.part, s.pins_in, Constraints{}, 1);
    ASSERT_EQ(val.inbound.size(), 2u);
    EXPECT_EQ(val.inbound[0].part, 0u);
    EXPECT_EQ(val.inbound[0].used, 1);
    EXPECT_EQ(val.inbound[1].part, 1u);
    EXPECT_EQ(val.inbound[1].used, 0);
}

TEST(Validate, EventOracleOnRandomSequences) {
    Rng rng(57);
    for (int t = 0; t < 300; ++t) {
        auto hg = random_hypergraph(rng, {25, 35, 5, 3, 3});
        const PartId k = static_cast<PartId>(rng.between(2, 6));
        State s(hg, random_assignment(rng, 25, k), k);
        const Capacity omega = rng.between(4, 20), delta = rng.between(3, 20);
        auto seq = sequence_from_moves(random_moves(rng, s.part, rng.between(0, 25)));
        auto val = validate_sequence(generate_events(s.hg, s.inc, seq), s.part, s.pins_in, Constraints{omega, delta},
                                     seq.size());
        auto sim = oracle::simulate_sequence(s.hg, s.part.assignment, as_pairs(seq), omega, delta);
        std::map<PartId, std::int64_t> init_sizes, init_in;
        for (PartId p = 0; p < k; ++p) {
            init_sizes[p] = s.part.part_sizes[p];
            init_in[p] = s.part.part_inbound_counts[p];
        }
        auto sizes = replay(seq.size(), val.sizes, init_sizes);
        auto in = replay(seq.size(), val.inbound, init_in);
        ASSERT_EQ(val.violations.size(), sim.size());
        for (std::size_t i = 0; i < sim.size(); ++i) {
            EXPECT_EQ(val.violations[i], sim[i].violations);
            EXPECT_EQ(sizes[i], dense(sim[i].sizes, k));
            EXPECT_EQ(in[i], dense(sim[i].inbound, k));
        }
    }
}

TEST(Apply, BestLegalPrefix) {
    MoveSequence seq = sequence_from_moves({Move{0, 0, 1}, Move{1, 0, 1}, Move{2, 0, 1}});
    seq.moves[0].gain_insequence = 2;
    seq.moves[1].gain_insequence = 3;
    seq.moves[2].gain_insequence = -5;
    SequenceValidation val;
    val.violations = {0, 0, 1, 0};
    // cumulative 0, 2, 5 (illegal), 0 → best legal is position 1
    EXPECT_EQ(best_prefix(seq, val), 1u);
    val.violations = {0, 1, 1, 0};
    EXPECT_EQ(best_prefix(seq, val), 0u);  // only legal positions have gain ≤ 0
    val.violations = {0, 0, 0, 0};
    EXPECT_EQ(best_prefix(seq, val), 2u);
    seq.moves[2].gain_insequence = 0;
    EXPECT_EQ(best_prefix(seq, val), 2u);  // ties go to the shorter prefix
}

TEST(Apply, ConnectivityDropsByCumulativeGain) {
    Rng rng(88);
    for (int t = 0; t < 100; ++t) {
        auto hg = random_hypergraph(rng, {30, 40, 5, 4, 2});
        const PartId k = 4;
        State s(hg, random_assignment(rng, 30, k), k);
        const Constraints cons{14, 30};
        const bool valid_before = validate_partitioning(s.hg, s.part, cons).valid();
        auto moves = propose_moves(s.hg, s.inc, s.part, s.pins, cons, t % 2 == 1);
        auto seq = build_chains(moves, s.hg, s.inc, RefinementParams{});
        in_sequence_gains(s.hg, s.inc, s.pins, seq);
        auto val = validate_sequence(generate_events(s.hg, s.inc, seq), s.part, s.pins_in, cons, seq.size());
        const Weight before = connectivity(s.hg, s.part);
        const std::size_t applied = apply_best_prefix(s.hg, s.inc, seq, val, s.part, s.pins, s.pins_in);
        const Weight after = oracle::connectivity(s.hg, s.part.assignment);
        EXPECT_EQ(before - after, seq.cumulative_gains()[applied]);
        EXPECT_GE(before, after);
        EXPECT_EQ(s.pins, build_pins_matrix(s.hg, s.part.assignment, PinsMode::all));
        EXPECT_EQ(s.pins_in, build_pins_matrix(s.hg, s.part.assignment, PinsMode::inbound));
        auto fresh = Partitioning::from_assignment(s.hg, s.part.assignment, k);
        EXPECT_EQ(fresh.part_sizes, s.part.part_sizes);
        EXPECT_EQ(fresh.part_inbound_counts, s.part.part_inbound_counts);
        if (valid_before) {
            EXPECT_TRUE(validate_partitioning(s.hg, s.part, cons).valid());
        }
    }
}

TEST(RefineLevel, HexSinglePass) {
    State s(h_ex(), {0, 0, 1, 1});
    RefinementParams params;
    params.theta = 1;
    auto stats = refine_level(s.hg, s.inc, s.part, Constraints{3, 3}, params);
    EXPECT_EQ(s.part.assignment, (std::vector<PartId>{0, 0, 0, 1}));
    EXPECT_EQ(connectivity(s.hg, s.part), 1.0);
    ASSERT_EQ(stats.passes.size(), 1u);
    EXPECT_EQ(stats.passes[0].connectivity_before, 3.0);
    EXPECT_EQ(stats.passes[0].connectivity_after, 1.0);
}

TEST(RefineLevel, ThetaZeroAndLocalOptimum) {
    State s(h_ex(), {0, 0, 1, 1});
    RefinementParams params;
    params.theta = 0;
    refine_level(s.hg, s.inc, s.part, Constraints{3, 3}, params);
    EXPECT_EQ(s.part.assignment, (std::vector<PartId>{0, 0, 1, 1}));
    State opt(h_ex(), {0, 0, 0, 0});
    refine_level(opt.hg, opt.inc, opt.part, Constraints{}, RefinementParams{});
    EXPECT_EQ(opt.part.assignment, (std::vector<PartId>{0, 0, 0, 0}));
}

TEST(RefineLevel, MonotoneAndSafeOnRandomStates) {
    Rng rng(101);
    for (int t = 0; t < 60; ++t) {
        auto hg = random_hypergraph(rng, {50, 70, 5, 4, 2});
        auto a = oracle::one_pass(hg, 12, 25);
        State s(hg, a);
        const Constraints cons{12, 25};
        auto stats = refine_level(s.hg, s.inc, s.part, cons, RefinementParams{});
        Weight prev = oracle::connectivity(hg, a);
        for (const auto& p : stats.passes) {
            EXPECT_EQ(p.connectivity_before, prev);
            EXPECT_LE(p.connectivity_after, p.connectivity_before);
            prev = p.connectivity_after;
        }
        EXPECT_EQ(prev, oracle::connectivity(hg, s.part.assignment));
        EXPECT_TRUE(validate_partitioning(s.hg, s.part, cons).valid());
    }
}

TEST(RefineLevel, ThreadCountDoesNotMatter) {
    Rng rng(3);
    auto hg = random_hypergraph(rng, {3000, 4000, 6, 3, 2});
    auto start = random_assignment(rng, 3000, 40);
    std::vector<std::vector<PartId>> results;
    for (unsigned threads : {1u, 4u}) {
        par::set_num_threads(threads);
        State s(hg, start, 40);
        refine_level(s.hg, s.inc, s.part, Constraints{120, kUnbounded}, RefinementParams{});
        results.push_back(s.part.assignment);
    }
    par::set_num_threads(0);
    EXPECT_EQ(results[0], results[1]);
}
