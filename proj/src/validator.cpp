#include "validator.hpp"

#include <sstream>

namespace aggsched {

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::c1: return "C1";
        case Rule::c2: return "C2";
        case Rule::c3: return "C3";
        case Rule::c4: return "C4";
        case Rule::gamma_range: return "gamma-range";
        case Rule::causality: return "causality";
        case Rule::non_delivery: return "non-delivery";
        case Rule::unknown_arc: return "unknown-arc";
    }
    return "?";
}

std::optional<Rule> validator_pair_rule(const Wsn& w, const ScheduleEntry& a, const ScheduleEntry& b) {
    if (a.sender == b.sender) return Rule::c1;
    if (a.receiver == b.receiver) return Rule::c2;
    if (a.sender == b.receiver || b.sender == a.receiver) return Rule::c3;
    if (a.channel == b.channel) {
        // receiver hears the other transmission's sender
        if (w.adjacent(a.receiver, b.sender)) return Rule::c4;
        if (w.adjacent(b.receiver, a.sender)) return Rule::c4;
    }
    return std::nullopt;
}

namespace {

bool entry_nodes_known(const Wsn& w, const ScheduleEntry& e) {
    return e.sender >= 0 && e.sender < w.node_count() && e.receiver >= 0 && e.receiver < w.node_count();
}

}  // namespace

ValidationReport validate(const Wsn& w, const HopMap& hops, int alpha, int channels, const Schedule& s) {
    ValidationReport rep;
    rep.expected = w.total_rho();

    std::vector<long long> pending(static_cast<size_t>(w.node_count()));
    for (NodeId v = 0; v < w.node_count(); ++v) pending[static_cast<size_t>(v)] = w.rho(v);
    pending[static_cast<size_t>(w.sink())] = 0;

    for (int slot = 1; slot <= s.slot_count(); ++slot) {
        const auto& entries = s.slots[static_cast<size_t>(slot - 1)];
        if (!entries.empty()) rep.slots_used = slot;

        for (const auto& e : entries) {
            if (!entry_nodes_known(w, e) || e.channel < 1 || e.channel > channels ||
                !w.adjacent(e.sender, e.receiver) || hops.of(e.sender) <= hops.of(e.receiver)) {
                rep.violations.push_back({slot, Rule::unknown_arc, {e}});
                continue;
            }
            if (e.gamma < 1 || e.gamma > alpha) rep.violations.push_back({slot, Rule::gamma_range, {e}});
        }
        for (size_t i = 0; i < entries.size(); ++i) {
            if (!entry_nodes_known(w, entries[i])) continue;
            for (size_t j = i + 1; j < entries.size(); ++j) {
                if (!entry_nodes_known(w, entries[j])) continue;
                if (auto rule = validator_pair_rule(w, entries[i], entries[j]))
                    rep.violations.push_back({slot, *rule, {entries[i], entries[j]}});
            }
        }
        // data received in slot k is forwardable from slot k+1 on, so every
        // gamma is checked against the pending count at slot start
        for (const auto& e : entries) {
            if (!entry_nodes_known(w, e)) continue;
            if (e.gamma > pending[static_cast<size_t>(e.sender)])
                rep.violations.push_back({slot, Rule::causality, {e}});
        }
        for (const auto& e : entries) {
            if (!entry_nodes_known(w, e)) continue;
            pending[static_cast<size_t>(e.sender)] -= e.gamma;
            if (e.receiver == w.sink())
                rep.delivered += e.gamma;
            else
                pending[static_cast<size_t>(e.receiver)] += e.gamma;
        }
    }

    if (rep.delivered != rep.expected) rep.violations.push_back({rep.slots_used, Rule::non_delivery, {}});
    rep.ok = rep.violations.empty() && rep.delivered == rep.expected;
    return rep;
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << "violation " << v.slot << ' ' << rule_name(v.rule);
        for (const auto& e : v.entries)
            out << ' ' << e.sender << "->" << e.receiver << ":g" << e.gamma << ":ch" << e.channel;
        out << '\n';
    }
    out << "result ok=" << (ok ? 1 : 0) << " slots_used=" << slots_used << " delivered=" << delivered
        << " expected=" << expected << " violations=" << violations.size() << '\n';
    return out.str();
}

}  // namespace aggsched
