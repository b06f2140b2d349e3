#include "baselines.hpp"

#include <algorithm>
#include <unordered_map>

#include "error.hpp"

namespace aggsched {

NetworkSnapshot::NetworkSnapshot(const Wsn& w, int alpha, int ch)
    : net(&w), hops(compute_hops(w)), forwarding(build_forwarding_graph(w, hops)),
      conflicts(build_conflict_graph(forwarding, w, ch)), ledger(w, alpha), channels(ch) {}

bool NetworkSnapshot::drained() const {
    for (NodeId v = 0; v < net->node_count(); ++v)
        if (v != net->sink() && ledger.pending(v) != 0) return false;
    return true;
}

namespace {

std::uint64_t encode_state(const std::vector<int>& pending, const std::vector<NodeId>& tracked) {
    std::uint64_t key = 0;
    for (NodeId v : tracked) key = (key << 4) | static_cast<std::uint64_t>(pending[static_cast<size_t>(v)] & 0xf);
    return key;
}

struct SlotAction {
    std::vector<ScheduleEntry> entries;  // slot field unset
};

// all conflict-free candidate sets with every feasible gamma choice
void enumerate_actions(const ConflictGraph& cg, const std::vector<int>& pending, int alpha,
                       std::vector<SlotAction>& out) {
    std::vector<int> selectable;
    for (int ci = 0; ci < cg.candidate_count(); ++ci)
        if (pending[static_cast<size_t>(cg.candidates[static_cast<size_t>(ci)].sender)] > 0) selectable.push_back(ci);

    std::vector<ScheduleEntry> chosen;
    std::vector<int> chosen_idx;
    auto rec = [&](auto&& self, size_t from) -> void {
        if (!chosen.empty()) out.push_back({chosen});
        for (size_t k = from; k < selectable.size(); ++k) {
            const int ci = selectable[k];
            bool compatible = true;
            for (int cj : chosen_idx)
                if (cg.conflict(ci, cj)) {
                    compatible = false;
                    break;
                }
            if (!compatible) continue;
            const auto& c = cg.candidates[static_cast<size_t>(ci)];
            const int max_gamma = std::min(pending[static_cast<size_t>(c.sender)], alpha);
            chosen_idx.push_back(ci);
            for (int g = 1; g <= max_gamma; ++g) {
                chosen.push_back({0, c.sender, c.receiver, g, c.channel});
                self(self, k + 1);
                chosen.pop_back();
            }
            chosen_idx.pop_back();
        }
    };
    rec(rec, 0);
}

}  // namespace

BruteForceResult brute_force_min_slots(const Wsn& w, int alpha, int channels, const BruteForceCaps& caps) {
    if (w.node_count() > caps.max_nodes)
        fail(Errc::size_cap, "brute force capped at " + std::to_string(caps.max_nodes) + " nodes, got " +
                                 std::to_string(w.node_count()));
    if (w.total_rho() > caps.max_total_rho)
        fail(Errc::size_cap, "brute force capped at " + std::to_string(caps.max_total_rho) +
                                 " total raw units, got " + std::to_string(w.total_rho()));
    if (channels > caps.max_channels)
        fail(Errc::size_cap, "brute force capped at " + std::to_string(caps.max_channels) + " channels");
    if (alpha > caps.max_alpha)
        fail(Errc::size_cap, "brute force capped at alpha " + std::to_string(caps.max_alpha));
    if (alpha < 1 || channels < 1) fail(Errc::config, "alpha and channels must be >= 1");

    NetworkSnapshot snap(w, alpha, channels);
    std::vector<NodeId> tracked;  // non-sink nodes, fixed order for the state key
    for (NodeId v = 0; v < w.node_count(); ++v)
        if (v != w.sink()) tracked.push_back(v);

    std::vector<int> start(static_cast<size_t>(w.node_count()), 0);
    for (NodeId v : tracked) start[static_cast<size_t>(v)] = w.rho(v);

    struct Parent {
        std::uint64_t prev;
        std::vector<ScheduleEntry> entries;
        int depth;
    };
    std::unordered_map<std::uint64_t, Parent> seen;
    const std::uint64_t start_key = encode_state(start, tracked);
    const std::uint64_t goal_key = 0;
    seen.emplace(start_key, Parent{start_key, {}, 0});

    BruteForceResult result;
    if (start_key == goal_key) return result;  // nothing to forward

    std::vector<std::pair<std::uint64_t, std::vector<int>>> frontier{{start_key, start}};
    std::vector<SlotAction> actions;
    int depth = 0;
    while (!frontier.empty()) {
        ++depth;
        std::vector<std::pair<std::uint64_t, std::vector<int>>> next;
        for (const auto& [key, pending] : frontier) {
            actions.clear();
            enumerate_actions(snap.conflicts, pending, alpha, actions);
            for (const auto& action : actions) {
                std::vector<int> after = pending;
                for (const auto& e : action.entries) {
                    after[static_cast<size_t>(e.sender)] -= e.gamma;
                    if (e.receiver != w.sink()) after[static_cast<size_t>(e.receiver)] += e.gamma;
                }
                const std::uint64_t after_key = encode_state(after, tracked);
                if (seen.count(after_key)) continue;
                seen.emplace(after_key, Parent{key, action.entries, depth});
                if (seen.size() > caps.max_states) fail(Errc::size_cap, "brute force state budget exhausted");
                if (after_key == goal_key) {
                    result.optimal_slots = depth;
                    result.states_explored = seen.size();
                    std::uint64_t cur = after_key;
                    while (cur != start_key) {
                        const Parent& p = seen.at(cur);
                        for (ScheduleEntry e : p.entries) {
                            e.slot = p.depth;
                            result.witness.add(e);
                        }
                        cur = p.prev;
                    }
                    return result;
                }
                next.emplace_back(after_key, std::move(after));
            }
        }
        frontier = std::move(next);
    }
    // unreachable for connected networks: some transmission is always possible
    fail(Errc::livelock, "brute force search exhausted without draining the network");
}

Schedule greedy_centralized_schedule(const Wsn& w, int alpha, int channels) {
    if (alpha < 1 || channels < 1) fail(Errc::config, "alpha and channels must be >= 1");
    NetworkSnapshot snap(w, alpha, channels);
    const ConflictGraph& cg = snap.conflicts;
    Schedule out;
    std::vector<std::uint8_t> blocked(static_cast<size_t>(cg.candidate_count()), 0);

    int slot = 0;
    while (!snap.drained()) {
        ++slot;
        std::fill(blocked.begin(), blocked.end(), 0);
        for (;;) {
            int best = -1;
            CandidateWeights best_w{};
            for (int ci = 0; ci < cg.candidate_count(); ++ci) {
                if (blocked[static_cast<size_t>(ci)]) continue;
                const auto& c = cg.candidates[static_cast<size_t>(ci)];
                if (snap.ledger.pending(c.sender) <= 0) continue;
                const CandidateWeights cw = weights(c, snap.ledger, snap.hops);
                if (best < 0 || precedence_higher(c, cw, cg.candidates[static_cast<size_t>(best)], best_w)) {
                    best = ci;
                    best_w = cw;
                }
            }
            if (best < 0) break;
            const auto& c = cg.candidates[static_cast<size_t>(best)];
            const int gamma = std::min(snap.ledger.pending(c.sender), alpha);
            out.add({slot, c.sender, c.receiver, gamma, c.channel});
            snap.ledger.transfer(c.sender, c.receiver, gamma);
            blocked[static_cast<size_t>(best)] = 1;
            cg.for_each_conflicting(c, [&](int cj) { blocked[static_cast<size_t>(cj)] = 1; });
        }
    }
    return out;
}

std::vector<ScheduleEntry> periodic_template(const Wsn& w, const HopMap& hops, int channels) {
    // single parent per node: the lowest-hop neighbour, ties to the smaller id
    const int n = w.node_count();
    std::vector<NodeId> parent(static_cast<size_t>(n), -1);
    int max_hop = 0;
    for (NodeId v = 0; v < n; ++v) {
        max_hop = std::max(max_hop, hops.of(v));
        if (v == w.sink()) continue;
        NodeId best = -1;
        for (NodeId u : w.neighbors(v))
            if (best < 0 || hops.of(u) < hops.of(best) || (hops.of(u) == hops.of(best) && u < best)) best = u;
        parent[static_cast<size_t>(v)] = best;
    }

    std::vector<int> slot_of(static_cast<size_t>(n), 0);
    std::vector<std::vector<ScheduleEntry>> per_slot;
    std::vector<ScheduleEntry> entries;

    // deepest levels first; within a level, ascending id; first-fit (slot, channel)
    for (int level = max_hop; level >= 1; --level) {
        for (NodeId v = 0; v < n; ++v) {
            if (v == w.sink() || hops.of(v) != level) continue;
            int min_slot = 1;
            for (NodeId c = 0; c < n; ++c)
                if (c != w.sink() && parent[static_cast<size_t>(c)] == v)
                    min_slot = std::max(min_slot, slot_of[static_cast<size_t>(c)] + 1);
            const NodeId p = parent[static_cast<size_t>(v)];
            for (int s = min_slot;; ++s) {
                if (per_slot.size() < static_cast<size_t>(s)) per_slot.resize(static_cast<size_t>(s));
                bool placed = false;
                for (int ch = 1; ch <= channels && !placed; ++ch) {
                    const TransmissionCandidate cand{v, p, ch};
                    bool fits = true;
                    for (const auto& other : per_slot[static_cast<size_t>(s - 1)])
                        if (collides(cand, {other.sender, other.receiver, other.channel}, w)) {
                            fits = false;
                            break;
                        }
                    if (fits) {
                        ScheduleEntry e{s, v, p, 0, ch};
                        per_slot[static_cast<size_t>(s - 1)].push_back(e);
                        entries.push_back(e);
                        slot_of[static_cast<size_t>(v)] = s;
                        placed = true;
                    }
                }
                if (placed) break;
            }
        }
    }
    std::sort(entries.begin(), entries.end(), [](const ScheduleEntry& a, const ScheduleEntry& b) {
        return a.slot != b.slot ? a.slot < b.slot : a.sender < b.sender;
    });
    return entries;
}

Schedule periodic_reuse_schedule(const Wsn& w, int alpha, int channels) {
    if (alpha < 1 || channels < 1) fail(Errc::config, "alpha and channels must be >= 1");
    const HopMap hops = compute_hops(w);
    const auto tmpl = periodic_template(w, hops, channels);
    int template_slots = 0;
    for (const auto& e : tmpl) template_slots = std::max(template_slots, e.slot);

    DataLedger ledger(w, alpha);
    Schedule out;
    int out_slot = 0;
    auto all_drained = [&] {
        for (NodeId v = 0; v < w.node_count(); ++v)
            if (v != w.sink() && ledger.pending(v) != 0) return false;
        return true;
    };
    while (!all_drained()) {
        for (int s = 1; s <= template_slots; ++s) {
            std::vector<ScheduleEntry> fired;
            for (const auto& e : tmpl) {
                if (e.slot != s) continue;
                const int have = ledger.pending(e.sender);
                if (have <= 0) continue;  // occurrence dropped this round
                fired.push_back({0, e.sender, e.receiver, std::min(have, alpha), e.channel});
            }
            if (fired.empty()) continue;  // the slot is removed from the round
            ++out_slot;
            for (auto e : fired) {
                e.slot = out_slot;
                out.add(e);
                ledger.transfer(e.sender, e.receiver, e.gamma);
            }
        }
    }
    return out;
}

}  // namespace aggsched
