#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wsn.hpp"

namespace aggsched {

/// Unit-size packets a node holding `pending` raw units must still forward
/// when up to `alpha` units fit in one packet.
inline int packets_required(int pending, int alpha) {
    return (pending + alpha - 1) / alpha;
}

struct Arc {
    NodeId sender = 0;
    NodeId receiver = 0;
    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed hop-decreasing links: (u,v) is an arc iff u and v are neighbours
/// and u is strictly farther from the sink.
struct ForwardingGraph {
    std::vector<Arc> arcs;  // sorted by (sender, receiver)
    bool has_arc(NodeId sender, NodeId receiver) const;
};

ForwardingGraph build_forwarding_graph(const Wsn& w, const HopMap& hops);

/// One possible transmission: a forwarding arc bound to a channel in [1, channels].
struct TransmissionCandidate {
    NodeId sender = 0;
    NodeId receiver = 0;
    int channel = 1;
    friend bool operator==(const TransmissionCandidate&, const TransmissionCandidate&) = default;
};

/// True iff scheduling both transmissions in one slot collides:
///   C1 shared sender, C2 shared receiver, C3 one endpoint both sends and
///   receives, C4 a receiver overhears the other sender on the same channel.
/// C1-C3 are channel-independent; only C4 requires equal channels.
bool collides(const TransmissionCandidate& a, const TransmissionCandidate& b, const Wsn& w);

/// Raw units each node still has to forward. The sink consumes what it
/// receives, so its entry is pinned to zero.
class DataLedger {
public:
    DataLedger(const Wsn& w, int alpha);

    int alpha() const { return alpha_; }
    NodeId sink() const { return sink_; }
    int pending(NodeId v) const { return pending_[static_cast<size_t>(v)]; }
    long long total_pending() const;

    void set_pending(NodeId v, int units);
    void transfer(NodeId sender, NodeId receiver, int units);

private:
    std::vector<int> pending_;
    int alpha_;
    NodeId sink_;
};

/// Selection weights of a candidate, derived from the current ledger:
/// urgency = packets_required(sender) * hop(sender); headroom = how many raw
/// units the receiver can absorb without growing its own packet count.
/// Candidates into the sink get headroom 0 (the sink consumes, never forwards).
struct CandidateWeights {
    long long urgency = 0;
    int headroom = 0;
};

CandidateWeights weights(const TransmissionCandidate& c, const DataLedger& ledger, const HopMap& hops);

/// Strict total order over distinct candidates: higher urgency wins, then
/// higher headroom, then the smaller channel, then the larger (sender id,
/// receiver id) pair.
inline bool precedence_higher(const TransmissionCandidate& a, const CandidateWeights& wa,
                              const TransmissionCandidate& b, const CandidateWeights& wb) {
    if (wa.urgency != wb.urgency) return wa.urgency > wb.urgency;
    if (wa.headroom != wb.headroom) return wa.headroom > wb.headroom;
    if (a.channel != b.channel) return a.channel < b.channel;
    if (a.sender != b.sender) return a.sender > b.sender;
    return a.receiver > b.receiver;
}

/// Conflict graph over all (arc, channel) candidates. Candidates are laid out
/// channel-major: index = (channel-1) * arc_count + arc_index, with arcs in
/// ForwardingGraph order. The conflict relation is derived on demand from
/// `collides`; it is never materialised except by conflict_edges().
struct ConflictGraph {
    const Wsn* net = nullptr;
    int channels = 1;
    std::vector<TransmissionCandidate> candidates;
    std::vector<Arc> arcs;  // sorted; candidates[i] uses arcs[i % arc_count]
    std::vector<std::vector<std::int32_t>> arcs_by_sender;    // node -> arc indices
    std::vector<std::vector<std::int32_t>> arcs_by_receiver;  // node -> arc indices

    int arc_count() const { return static_cast<int>(arcs.size()); }
    int candidate_count() const { return static_cast<int>(candidates.size()); }
    int index_of(NodeId sender, NodeId receiver, int channel) const;  // -1 if absent
    bool conflict(int i, int j) const { return collides(candidates[static_cast<size_t>(i)], candidates[static_cast<size_t>(j)], *net); }

    /// Calls f(index) for every candidate conflicting with c (the candidate
    /// itself included via its C1 bucket; duplicates possible — callers must
    /// apply idempotent updates).
    template <class F>
    void for_each_conflicting(const TransmissionCandidate& c, F&& f) const {
        const int a = arc_count();
        auto all_channels = [&](std::int32_t ai) {
            for (int ch = 0; ch < channels; ++ch) f(ch * a + ai);
        };
        auto one_channel = [&](std::int32_t ai) { f((c.channel - 1) * a + ai); };
        if (c.sender < static_cast<NodeId>(arcs_by_sender.size())) {
            for (std::int32_t ai : arcs_by_sender[static_cast<size_t>(c.sender)]) all_channels(ai);      // C1
            for (std::int32_t ai : arcs_by_receiver[static_cast<size_t>(c.receiver)]) all_channels(ai);  // C2
            for (std::int32_t ai : arcs_by_sender[static_cast<size_t>(c.receiver)]) all_channels(ai);    // C3
            for (std::int32_t ai : arcs_by_receiver[static_cast<size_t>(c.sender)]) all_channels(ai);    // C3
        }
        // C4: a sender the receiver can hear, or a receiver that hears our sender
        for (NodeId z : net->neighbors(c.receiver))
            for (std::int32_t ai : arcs_by_sender[static_cast<size_t>(z)]) one_channel(ai);
        for (NodeId y : net->neighbors(c.sender))
            for (std::int32_t ai : arcs_by_receiver[static_cast<size_t>(y)]) one_channel(ai);
    }

    std::vector<std::pair<int, int>> conflict_edges() const;  // i < j, materialised
    std::string dump() const;  // "candidate <s> <r> <ch>" lines then "conflict <i> <j>" lines
};

ConflictGraph build_conflict_graph(const ForwardingGraph& fg, const Wsn& w, int channels);

}  // namespace aggsched
