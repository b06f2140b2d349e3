#pragma once

#include <cstdint>
#include <vector>

#include "collision.hpp"
#include "schedule.hpp"
#include "wsn.hpp"

namespace aggsched {

/// Working state shared by the reference schedulers: the ledger plus the
/// static structures it is scheduled against.
struct NetworkSnapshot {
    const Wsn* net;
    HopMap hops;
    ForwardingGraph forwarding;
    ConflictGraph conflicts;
    DataLedger ledger;
    int channels;

    NetworkSnapshot(const Wsn& w, int alpha, int channels);
    bool drained() const;  // every non-sink node forwarded everything
};

struct BruteForceCaps {
    int max_nodes = 6;
    int max_total_rho = 8;
    int max_channels = 2;
    int max_alpha = 3;
    std::size_t max_states = 2'000'000;
};

struct BruteForceResult {
    int optimal_slots = 0;
    Schedule witness;
    std::size_t states_explored = 0;
};

/// Exact minimum slot count by breadth-first search over ledger states,
/// trying every conflict-free slot action with every feasible payload split.
/// The problem is NP-complete, so hard size caps are enforced.
BruteForceResult brute_force_min_slots(const Wsn& w, int alpha, int channels,
                                       const BruteForceCaps& caps = {});

/// Centralised analogue of the distributed selection rule: per slot,
/// repeatedly commit the globally highest-precedence unblocked candidate
/// whose sender holds data, blocking its conflict neighbourhood.
Schedule greedy_centralized_schedule(const Wsn& w, int alpha, int channels);

/// Tree-based periodic baseline: builds a one-round collision-free template
/// assuming unbounded aggregation (one transmission per node, children before
/// parents), then replays it round after round under the real alpha, dropping
/// occurrences with nothing to send and removing slots that end up empty.
Schedule periodic_reuse_schedule(const Wsn& w, int alpha, int channels);

/// The template underlying periodic_reuse_schedule, exposed for tests:
/// entry.slot is the in-round slot, gamma is 0 (filled during replay).
std::vector<ScheduleEntry> periodic_template(const Wsn& w, const HopMap& hops, int channels);

}  // namespace aggsched
