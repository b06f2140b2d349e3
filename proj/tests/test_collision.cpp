#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "collision.hpp"
#include "doctest.h"
#include "error.hpp"
#include "rng.hpp"
#include "test_util.hpp"

using namespace aggsched;

namespace {

struct Fixture {
    Wsn w = test::demo8();
    HopMap hops = compute_hops(w);
    ForwardingGraph fg = build_forwarding_graph(w, hops);
};

// independent single-channel construction used as the oracle for the
// channel-extended builder at channels=1
std::vector<std::pair<int, int>> single_channel_conflicts(const ForwardingGraph& fg, const Wsn& w) {
    std::vector<std::pair<int, int>> out;
    for (size_t i = 0; i < fg.arcs.size(); ++i) {
        for (size_t j = i + 1; j < fg.arcs.size(); ++j) {
            const Arc& a = fg.arcs[i];
            const Arc& b = fg.arcs[j];
            const bool shared_endpoint = a.sender == b.sender || a.receiver == b.receiver ||
                                         a.sender == b.receiver || b.sender == a.receiver;
            const bool overheard = w.adjacent(a.receiver, b.sender) || w.adjacent(b.receiver, a.sender);
            if (shared_endpoint || overheard) out.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("packet counts follow the ceiling rule") {
    CHECK(packets_required(4, 3) == 2);
    CHECK(packets_required(7, 3) == 3);
    CHECK(packets_required(1, 3) == 1);
    for (int alpha = 1; alpha <= 6; ++alpha) CHECK(packets_required(0, alpha) == 0);
}

TEST_CASE("forwarding graph keeps only hop-decreasing links") {
    Fixture f;
    CHECK(f.fg.has_arc(5, 1));
    CHECK(f.fg.has_arc(5, 2));
    CHECK(!f.fg.has_arc(1, 2));  // same hop level
    CHECK(!f.fg.has_arc(2, 1));
    CHECK(!f.fg.has_arc(0, 1));  // toward the sink only
    CHECK(f.fg.has_arc(7, 3));
    CHECK(static_cast<int>(f.fg.arcs.size()) == 8);

    // star: every leaf points at the hub
    Wsn star = Wsn::from_parts(5, 0, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, {0, 1, 1, 1, 1});
    ForwardingGraph sfg = build_forwarding_graph(star, compute_hops(star));
    CHECK(static_cast<int>(sfg.arcs.size()) == 4);
    for (NodeId leaf = 1; leaf <= 4; ++leaf) CHECK(sfg.has_arc(leaf, 0));
}

TEST_CASE("collision clauses on concrete pairs") {
    Fixture f;
    // C3: node 2 would transmit and receive at once, channels irrelevant
    CHECK(collides({3, 2, 1}, {2, 0, 1}, f.w));
    CHECK(collides({3, 2, 1}, {2, 0, 2}, f.w));
    // C1: same sender on different channels still collides
    CHECK(collides({5, 1, 1}, {5, 2, 2}, f.w));
    // C2: shared receiver
    CHECK(collides({5, 1, 1}, {4, 1, 2}, f.w));
    // C4: receiver 1 hears sender 2 when the channel matches
    CHECK(collides({5, 1, 1}, {2, 0, 1}, f.w));
    CHECK(!collides({5, 1, 1}, {2, 0, 2}, f.w));
    // far apart, same channel, no collision
    CHECK(!collides({6, 4, 1}, {3, 2, 1}, f.w));
}

TEST_CASE("collides is symmetric over all candidate pairs") {
    Fixture f;
    ConflictGraph cg = build_conflict_graph(f.fg, f.w, 2);
    for (int i = 0; i < cg.candidate_count(); ++i)
        for (int j = i + 1; j < cg.candidate_count(); ++j)
            CHECK(collides(cg.candidates[static_cast<size_t>(i)], cg.candidates[static_cast<size_t>(j)], f.w) ==
                  collides(cg.candidates[static_cast<size_t>(j)], cg.candidates[static_cast<size_t>(i)], f.w));
}

TEST_CASE("conflict graph over two channels on the fixture") {
    Fixture f;
    ConflictGraph cg = build_conflict_graph(f.fg, f.w, 2);
    CHECK(cg.candidate_count() == 16);
    CHECK(cg.arc_count() == 8);

    const int ea1 = cg.index_of(5, 1, 1);
    const int bs1 = cg.index_of(2, 0, 1);
    const int bs2 = cg.index_of(2, 0, 2);
    const int eb2 = cg.index_of(5, 2, 2);
    REQUIRE(ea1 >= 0);
    REQUIRE(bs1 >= 0);
    REQUIRE(bs2 >= 0);
    REQUIRE(eb2 >= 0);
    CHECK(cg.conflict(ea1, bs1));   // overheard on the shared channel
    CHECK(!cg.conflict(ea1, bs2));  // different channels, no overhearing
    CHECK(cg.conflict(ea1, eb2));   // same sender across channels

    CHECK(cg.index_of(1, 2, 1) == -1);
    CHECK(cg.index_of(5, 1, 3) == -1);
}

TEST_CASE("channels=1 reproduces the single-channel construction") {
    Fixture f;
    ConflictGraph cg = build_conflict_graph(f.fg, f.w, 1);
    CHECK(cg.conflict_edges() == single_channel_conflicts(f.fg, f.w));
}

TEST_CASE("for_each_conflicting covers exactly the conflicting candidates") {
    Fixture f;
    ConflictGraph cg = build_conflict_graph(f.fg, f.w, 2);
    for (int i = 0; i < cg.candidate_count(); ++i) {
        std::vector<char> hit(static_cast<size_t>(cg.candidate_count()), 0);
        cg.for_each_conflicting(cg.candidates[static_cast<size_t>(i)], [&](int j) { hit[static_cast<size_t>(j)] = 1; });
        for (int j = 0; j < cg.candidate_count(); ++j) {
            if (j == i) continue;
            CHECK(static_cast<bool>(hit[static_cast<size_t>(j)]) == cg.conflict(i, j));
        }
        CHECK(hit[static_cast<size_t>(i)]);  // self is always swept up by its C1 bucket
    }
}

TEST_CASE("candidate weights from the initial ledger") {
    Fixture f;
    DataLedger ledger(f.w, 3);
    // sender 5 holds one unit two hops out; receiver 1 holds 7
    CandidateWeights ea = weights({5, 1, 1}, ledger, f.hops);
    CHECK(ea.urgency == 2);
    CHECK(ea.headroom == 2);
    CandidateWeights eb = weights({5, 2, 1}, ledger, f.hops);
    CHECK(eb.headroom == 2);
    // empty sender
    DataLedger drained(f.w, 3);
    drained.set_pending(5, 0);
    CHECK(weights({5, 1, 1}, drained, f.hops).urgency == 0);
    // the sink consumes: no aggregation headroom on its links
    CHECK(weights({1, 0, 1}, ledger, f.hops).headroom == 0);
}

TEST_CASE("ledger transfers move units and the sink consumes") {
    Fixture f;
    DataLedger ledger(f.w, 3);
    ledger.transfer(3, 2, 3);
    CHECK(ledger.pending(3) == 1);
    CHECK(ledger.pending(2) == 7);
    ledger.transfer(1, 0, 3);
    CHECK(ledger.pending(1) == 4);
    CHECK(ledger.pending(0) == 0);
}

TEST_CASE("precedence: smaller channel wins on full weight ties") {
    Fixture f;
    DataLedger ledger(f.w, 3);
    CandidateWeights w1 = weights({5, 1, 1}, ledger, f.hops);
    CandidateWeights w2 = weights({5, 1, 2}, ledger, f.hops);
    CHECK(precedence_higher({5, 1, 1}, w1, {5, 1, 2}, w2));
    CHECK(!precedence_higher({5, 1, 2}, w2, {5, 1, 1}, w1));
}

TEST_CASE("precedence is a strict total order on the fixture candidates") {
    Fixture f;
    ConflictGraph cg = build_conflict_graph(f.fg, f.w, 2);
    DataLedger ledger(f.w, 3);
    std::vector<CandidateWeights> ws;
    for (const auto& c : cg.candidates) ws.push_back(weights(c, ledger, f.hops));
    const int n = cg.candidate_count();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const bool ij = precedence_higher(cg.candidates[static_cast<size_t>(i)], ws[static_cast<size_t>(i)],
                                              cg.candidates[static_cast<size_t>(j)], ws[static_cast<size_t>(j)]);
            const bool ji = precedence_higher(cg.candidates[static_cast<size_t>(j)], ws[static_cast<size_t>(j)],
                                              cg.candidates[static_cast<size_t>(i)], ws[static_cast<size_t>(i)]);
            CHECK(ij != ji);  // antisymmetric and total
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                const bool ij = precedence_higher(cg.candidates[static_cast<size_t>(i)], ws[static_cast<size_t>(i)],
                                                  cg.candidates[static_cast<size_t>(j)], ws[static_cast<size_t>(j)]);
                const bool jk = precedence_higher(cg.candidates[static_cast<size_t>(j)], ws[static_cast<size_t>(j)],
                                                  cg.candidates[static_cast<size_t>(k)], ws[static_cast<size_t>(k)]);
                if (ij && jk)
                    CHECK(precedence_higher(cg.candidates[static_cast<size_t>(i)], ws[static_cast<size_t>(i)],
                                            cg.candidates[static_cast<size_t>(k)], ws[static_cast<size_t>(k)]));
            }
}

TEST_CASE("headroom stays within [0, alpha) and vanishes on exact packings") {
    Fixture f;
    Rng rng(202);
    for (int trial = 0; trial < 200; ++trial) {
        const int alpha = rng.next_int(1, 8);
        DataLedger ledger(f.w, alpha);
        for (NodeId v = 1; v < f.w.node_count(); ++v) ledger.set_pending(v, rng.next_int(0, 20));
        for (const Arc& a : f.fg.arcs) {
            const CandidateWeights cw = weights({a.sender, a.receiver, 1}, ledger, f.hops);
            CHECK(cw.headroom >= 0);
            CHECK(cw.headroom < alpha);
            if (a.receiver != f.w.sink() && ledger.pending(a.receiver) % alpha == 0) CHECK(cw.headroom == 0);
        }
    }
}

TEST_CASE("relabelling channels is a conflict-graph automorphism") {
    Fixture f;
    ConflictGraph cg = build_conflict_graph(f.fg, f.w, 3);
    const int perm[4] = {0, 3, 1, 2};  // channel permutation 1->3, 2->1, 3->2
    auto mapped = [&](int idx) {
        const auto& c = cg.candidates[static_cast<size_t>(idx)];
        return cg.index_of(c.sender, c.receiver, perm[c.channel]);
    };
    for (int i = 0; i < cg.candidate_count(); ++i)
        for (int j = i + 1; j < cg.candidate_count(); ++j)
            CHECK(cg.conflict(i, j) == cg.conflict(mapped(i), mapped(j)));
}

TEST_CASE("conflict graph dump lists candidates then conflicts") {
    Fixture f;
    ConflictGraph cg = build_conflict_graph(f.fg, f.w, 2);
    const std::string dump = cg.dump();
    CHECK(dump.find("candidate 5 1 1") != std::string::npos);
    CHECK(dump.find("candidate 5 1 2") != std::string::npos);
    CHECK(dump.find("conflict 0 ") != std::string::npos);
}
