#include "collision.hpp"

#include <algorithm>
#include <sstream>

#include "error.hpp"

namespace aggsched {

bool ForwardingGraph::has_arc(NodeId sender, NodeId receiver) const {
    Arc probe{sender, receiver};
    auto it = std::lower_bound(arcs.begin(), arcs.end(), probe, [](const Arc& a, const Arc& b) {
        return a.sender != b.sender ? a.sender < b.sender : a.receiver < b.receiver;
    });
    return it != arcs.end() && *it == probe;
}

ForwardingGraph build_forwarding_graph(const Wsn& w, const HopMap& hops) {
    ForwardingGraph fg;
    for (NodeId u = 0; u < w.node_count(); ++u)
        for (NodeId v : w.neighbors(u))
            if (hops.of(u) > hops.of(v)) fg.arcs.push_back({u, v});
    std::sort(fg.arcs.begin(), fg.arcs.end(), [](const Arc& a, const Arc& b) {
        return a.sender != b.sender ? a.sender < b.sender : a.receiver < b.receiver;
    });
    return fg;
}

bool collides(const TransmissionCandidate& a, const TransmissionCandidate& b, const Wsn& w) {
    if (a.sender == b.sender) return true;                              // C1
    if (a.receiver == b.receiver) return true;                          // C2
    if (a.sender == b.receiver || b.sender == a.receiver) return true;  // C3
    if (a.channel == b.channel &&
        (w.adjacent(a.receiver, b.sender) || w.adjacent(b.receiver, a.sender)))
        return true;  // C4
    return false;
}

DataLedger::DataLedger(const Wsn& w, int alpha) : alpha_(alpha), sink_(w.sink()) {
    if (alpha < 1) fail(Errc::config, "alpha must be >= 1");
    pending_.resize(static_cast<size_t>(w.node_count()));
    for (NodeId v = 0; v < w.node_count(); ++v) pending_[static_cast<size_t>(v)] = w.rho(v);
}

long long DataLedger::total_pending() const {
    long long sum = 0;
    for (int p : pending_) sum += p;
    return sum;
}

void DataLedger::set_pending(NodeId v, int units) {
    pending_[static_cast<size_t>(v)] = (v == sink_) ? 0 : units;
}

void DataLedger::transfer(NodeId sender, NodeId receiver, int units) {
    pending_[static_cast<size_t>(sender)] -= units;
    if (receiver != sink_) pending_[static_cast<size_t>(receiver)] += units;
}

CandidateWeights weights(const TransmissionCandidate& c, const DataLedger& ledger, const HopMap& hops) {
    CandidateWeights w;
    w.urgency = static_cast<long long>(packets_required(ledger.pending(c.sender), ledger.alpha())) *
                hops.of(c.sender);
    if (c.receiver == ledger.sink()) {
        w.headroom = 0;
    } else {
        const int pr = ledger.pending(c.receiver);
        w.headroom = ledger.alpha() * packets_required(pr, ledger.alpha()) - pr;
    }
    return w;
}

int ConflictGraph::index_of(NodeId sender, NodeId receiver, int channel) const {
    if (channel < 1 || channel > channels) return -1;
    Arc probe{sender, receiver};
    auto it = std::lower_bound(arcs.begin(), arcs.end(), probe, [](const Arc& a, const Arc& b) {
        return a.sender != b.sender ? a.sender < b.sender : a.receiver < b.receiver;
    });
    if (it == arcs.end() || !(*it == probe)) return -1;
    return (channel - 1) * arc_count() + static_cast<int>(it - arcs.begin());
}

std::vector<std::pair<int, int>> ConflictGraph::conflict_edges() const {
    std::vector<std::pair<int, int>> edges;
    const int n = candidate_count();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (conflict(i, j)) edges.emplace_back(i, j);
    return edges;
}

std::string ConflictGraph::dump() const {
    std::ostringstream out;
    for (const auto& c : candidates) out << "candidate " << c.sender << ' ' << c.receiver << ' ' << c.channel << '\n';
    for (auto [i, j] : conflict_edges()) out << "conflict " << i << ' ' << j << '\n';
    return out.str();
}

ConflictGraph build_conflict_graph(const ForwardingGraph& fg, const Wsn& w, int channels) {
    if (channels < 1) fail(Errc::config, "channel count must be >= 1");
    ConflictGraph g;
    g.net = &w;
    g.channels = channels;
    g.arcs = fg.arcs;
    g.candidates.reserve(g.arcs.size() * static_cast<size_t>(channels));
    for (int ch = 1; ch <= channels; ++ch)
        for (const Arc& a : g.arcs) g.candidates.push_back({a.sender, a.receiver, ch});
    g.arcs_by_sender.resize(static_cast<size_t>(w.node_count()));
    g.arcs_by_receiver.resize(static_cast<size_t>(w.node_count()));
    for (std::int32_t ai = 0; ai < g.arc_count(); ++ai) {
        g.arcs_by_sender[static_cast<size_t>(g.arcs[static_cast<size_t>(ai)].sender)].push_back(ai);
        g.arcs_by_receiver[static_cast<size_t>(g.arcs[static_cast<size_t>(ai)].receiver)].push_back(ai);
    }
    return g;
}

}  // namespace aggsched
