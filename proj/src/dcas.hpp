#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collision.hpp"
#include "schedule.hpp"
#include "wsn.hpp"

namespace aggsched {

enum class MsgKind : std::uint8_t { decision, skip, finished };

/// Control-plane message flooded to the emitter's 3-hop view. Delivery is
/// instantaneous and reliable; only scheduled data transmissions occupy
/// slots. `id` identifies the originated message so that re-broadcast copies
/// are processed at most once per node.
struct ControlMessage {
    MsgKind kind = MsgKind::decision;
    std::int32_t id = -1;  // assigned by the driver at origination
    NodeId from = -1;      // relaying node
    ScheduleEntry entry{};  // decision payload (entry.slot = the decided slot)
    NodeId node = -1;      // skip/finished subject
    std::int32_t slot = 0;  // skipped slot
};

using Outbox = std::vector<ControlMessage>;

/// Per-sensor scheduling state machine: a 3-hop local view of the network,
/// the induced local conflict graph, a slot clock, per-slot candidate
/// blocking marks, believed peer clocks, and the node's own schedule slice.
class NodeState {
public:
    NodeState(const Wsn& w, const HopMap& hops, NodeId me, int alpha, int channels);

    enum class Action { none, decided, skipped };

    /// Processes one message; returns false for duplicates, own echoes and
    /// messages from pruned senders. May emit a re-broadcast when this node
    /// is the decision's receiver.
    bool receive(const ControlMessage& m, Outbox& out);

    /// Finish test: nothing left to forward and no deeper node remains in
    /// the pruned view. Emits the finished notice when it fires.
    bool maybe_finish(Outbox& out);

    /// One scheduling attempt. Requires the clock gate (own slot <= every
    /// believed peer clock); picks the highest-precedence unblocked candidate
    /// with a non-empty sender. Decides when that candidate is ours, skips
    /// when none exists, otherwise waits for the owner to act.
    Action try_schedule(Outbox& out, ScheduleEntry* decided);

    NodeId id() const { return me_; }
    int clock() const { return t_; }
    bool finished() const { return finished_; }
    bool clock_gate_open() const;
    const std::vector<ScheduleEntry>& accepted_entries() const { return own_entries_; }
    const std::vector<NodeId>& active_recipients() const { return recipients_; }

    // introspection (tests, transcripts)
    std::vector<NodeId> view_nodes(bool active_only = true) const;
    std::vector<TransmissionCandidate> local_candidates(bool active_only = true) const;
    bool in_view(NodeId v) const;
    bool is_blocked(const TransmissionCandidate& c) const;
    int pending_of(NodeId v) const;
    int peer_clock_of(NodeId v) const;

private:
    int candidate_index(NodeId sender, NodeId receiver, int channel) const;
    void whiten_all();
    void block(int ci);
    void block_conflicts_of(NodeId sender, NodeId receiver, int channel);
    void block_endpoint(NodeId v);
    void prune(NodeId v);
    void bump_peer_clock(NodeId v, int value);
    bool mark_seen(std::int32_t msg_id);
    void rescan();

    const Wsn* net_;
    NodeId me_;
    NodeId sink_;
    int alpha_;
    int channels_;
    int t_ = 1;
    bool finished_ = false;

    // local view, indexed 0..view_size-1
    std::vector<NodeId> view_;        // ascending global ids
    std::vector<std::int32_t> loc_;   // global id -> local index or -1
    std::vector<std::uint8_t> active_;
    std::vector<int> hop_;
    std::vector<int> pending_;
    std::vector<int> peer_clock_;
    int me_local_ = -1;

    // local conflict-graph candidates (channel-major over sorted local arcs)
    std::vector<NodeId> c_sender_;    // global ids
    std::vector<NodeId> c_receiver_;
    std::vector<std::int32_t> c_sender_l_;
    std::vector<std::int32_t> c_receiver_l_;
    std::vector<std::uint8_t> c_channel_;
    std::vector<std::uint8_t> c_blocked_;
    std::vector<std::uint8_t> c_active_;
    std::vector<std::vector<std::int32_t>> by_sender_l_;    // local node -> candidate indices
    std::vector<std::vector<std::int32_t>> by_receiver_l_;

    std::vector<ScheduleEntry> own_entries_;
    std::vector<NodeId> recipients_;  // active view minus me
    std::vector<std::uint64_t> seen_;  // message-id bitset

    // scan cache: valid while no colour/ledger/view change happened
    bool state_dirty_ = true;
    int cached_best_ = -1;  // candidate index, or -1 for "no selectable candidate"
    std::vector<long long> urg_scratch_;
    std::vector<int> head_scratch_;
};

struct DcasOptions {
    int alpha = 1;
    int channels = 1;
    std::uint64_t seed = 0;          // drives the interleaving when randomised
    bool random_interleave = false;  // shuffle the per-pass node order
    bool trace = false;              // build the textual transcript
};

struct DcasEvent {
    enum class Kind { decision, skip, finished } kind{};
    long long step = 0;
    NodeId node = -1;
    int clock = 0;          // node's slot clock when the event was emitted
    ScheduleEntry entry{};  // decisions only
    int slot = 0;           // skips only
};

struct DcasResult {
    Schedule schedule;
    std::vector<DcasEvent> events;
    std::vector<std::vector<ScheduleEntry>> node_entries;  // per-node schedule slices
    std::string transcript;
    long long driver_steps = 0;
};

/// Runs one DCAS simulation to completion (the sink has observed every node
/// of its view finish). Deterministic for fixed inputs; throws
/// Errc::livelock if the step budget is exhausted or a full pass makes no
/// progress while work remains.
DcasResult run_dcas(const Wsn& w, const DcasOptions& opts);

}  // namespace aggsched
