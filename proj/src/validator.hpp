#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schedule.hpp"
#include "wsn.hpp"

namespace aggsched {

enum class Rule { c1, c2, c3, c4, gamma_range, causality, non_delivery, unknown_arc };

const char* rule_name(Rule r);

struct Violation {
    int slot = 0;
    Rule rule{};
    std::vector<ScheduleEntry> entries;
};

struct ValidationReport {
    bool ok = false;
    std::vector<Violation> violations;
    int slots_used = 0;       // index of last non-empty slot; interior gaps count
    long long delivered = 0;  // raw units that reached the sink
    long long expected = 0;   // sum of rho over the network

    std::string to_text() const;
};

/// Scheduler-agnostic check of a schedule against the raw network: re-derives
/// the four collision clauses from adjacency and channel equality, replays
/// the ledger slot by slot for causality, and accounts for full delivery.
/// Deliberately does not share code with the collision-graph module.
ValidationReport validate(const Wsn& w, const HopMap& hops, int alpha, int channels, const Schedule& s);

/// The validator's from-scratch pairwise collision rule, exposed so it can be
/// cross-checked against the collision-graph implementation. Returns the
/// first matching clause for two same-slot entries, or nullopt.
std::optional<Rule> validator_pair_rule(const Wsn& w, const ScheduleEntry& a, const ScheduleEntry& b);

}  // namespace aggsched
