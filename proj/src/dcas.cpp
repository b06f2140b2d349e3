#include "dcas.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "error.hpp"
#include "rng.hpp"

namespace aggsched {

NodeState::NodeState(const Wsn& w, const HopMap& hops, NodeId me, int alpha, int channels)
    : net_(&w), me_(me), sink_(w.sink()), alpha_(alpha), channels_(channels) {
    LocalView view = k_hop_subgraph(w, me, 3);
    view_ = view.nodes;
    loc_.assign(static_cast<size_t>(w.node_count()), -1);
    for (size_t i = 0; i < view_.size(); ++i) loc_[static_cast<size_t>(view_[i])] = static_cast<std::int32_t>(i);
    me_local_ = loc_[static_cast<size_t>(me_)];

    const size_t vs = view_.size();
    active_.assign(vs, 1);
    hop_.resize(vs);
    pending_.resize(vs);
    peer_clock_.assign(vs, 1);
    for (size_t i = 0; i < vs; ++i) {
        hop_[i] = hops.of(view_[i]);
        pending_[i] = (view_[i] == sink_) ? 0 : w.rho(view_[i]);
    }

    std::vector<Arc> arcs;
    for (auto [u, v] : view.edges) {
        if (hops.of(u) > hops.of(v))
            arcs.push_back({u, v});
        else if (hops.of(v) > hops.of(u))
            arcs.push_back({v, u});
    }
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
        return a.sender != b.sender ? a.sender < b.sender : a.receiver < b.receiver;
    });

    const size_t cand_count = arcs.size() * static_cast<size_t>(channels_);
    c_sender_.reserve(cand_count);
    c_receiver_.reserve(cand_count);
    c_sender_l_.reserve(cand_count);
    c_receiver_l_.reserve(cand_count);
    c_channel_.reserve(cand_count);
    by_sender_l_.resize(vs);
    by_receiver_l_.resize(vs);
    for (int ch = 1; ch <= channels_; ++ch) {
        for (const Arc& a : arcs) {
            const auto ci = static_cast<std::int32_t>(c_sender_.size());
            c_sender_.push_back(a.sender);
            c_receiver_.push_back(a.receiver);
            c_sender_l_.push_back(loc_[static_cast<size_t>(a.sender)]);
            c_receiver_l_.push_back(loc_[static_cast<size_t>(a.receiver)]);
            c_channel_.push_back(static_cast<std::uint8_t>(ch));
            by_sender_l_[static_cast<size_t>(loc_[static_cast<size_t>(a.sender)])].push_back(ci);
            by_receiver_l_[static_cast<size_t>(loc_[static_cast<size_t>(a.receiver)])].push_back(ci);
        }
    }
    c_blocked_.assign(cand_count, 0);
    c_active_.assign(cand_count, 1);

    recipients_.reserve(vs - 1);
    for (NodeId v : view_)
        if (v != me_) recipients_.push_back(v);

    urg_scratch_.assign(vs, 0);
    head_scratch_.assign(vs, 0);
}

bool NodeState::in_view(NodeId v) const {
    const std::int32_t l = loc_[static_cast<size_t>(v)];
    return l >= 0 && active_[static_cast<size_t>(l)];
}

std::vector<NodeId> NodeState::view_nodes(bool active_only) const {
    std::vector<NodeId> out;
    for (size_t i = 0; i < view_.size(); ++i)
        if (!active_only || active_[i]) out.push_back(view_[i]);
    return out;
}

std::vector<TransmissionCandidate> NodeState::local_candidates(bool active_only) const {
    std::vector<TransmissionCandidate> out;
    for (size_t ci = 0; ci < c_sender_.size(); ++ci)
        if (!active_only || c_active_[ci]) out.push_back({c_sender_[ci], c_receiver_[ci], c_channel_[ci]});
    return out;
}

int NodeState::candidate_index(NodeId sender, NodeId receiver, int channel) const {
    for (size_t ci = 0; ci < c_sender_.size(); ++ci)
        if (c_sender_[ci] == sender && c_receiver_[ci] == receiver && c_channel_[ci] == channel)
            return static_cast<int>(ci);
    return -1;
}

bool NodeState::is_blocked(const TransmissionCandidate& c) const {
    const int ci = candidate_index(c.sender, c.receiver, c.channel);
    if (ci < 0) fail(Errc::config, "candidate not in this node's local graph");
    return c_blocked_[static_cast<size_t>(ci)] != 0;
}

int NodeState::pending_of(NodeId v) const {
    const std::int32_t l = loc_[static_cast<size_t>(v)];
    if (l < 0) fail(Errc::config, "node not in view");
    return pending_[static_cast<size_t>(l)];
}

int NodeState::peer_clock_of(NodeId v) const {
    const std::int32_t l = loc_[static_cast<size_t>(v)];
    if (l < 0) fail(Errc::config, "node not in view");
    return peer_clock_[static_cast<size_t>(l)];
}

void NodeState::whiten_all() {
    std::fill(c_blocked_.begin(), c_blocked_.end(), 0);
    state_dirty_ = true;
}

void NodeState::block(int ci) {
    if (c_active_[static_cast<size_t>(ci)] && !c_blocked_[static_cast<size_t>(ci)]) {
        c_blocked_[static_cast<size_t>(ci)] = 1;
        state_dirty_ = true;
    }
}

void NodeState::block_conflicts_of(NodeId sender, NodeId receiver, int channel) {
    const std::int32_t xl = loc_[static_cast<size_t>(sender)];
    const std::int32_t yl = loc_[static_cast<size_t>(receiver)];
    if (xl >= 0) {
        for (std::int32_t ci : by_sender_l_[static_cast<size_t>(xl)]) block(ci);    // C1
        for (std::int32_t ci : by_receiver_l_[static_cast<size_t>(xl)]) block(ci);  // C3
    }
    if (yl >= 0) {
        for (std::int32_t ci : by_receiver_l_[static_cast<size_t>(yl)]) block(ci);  // C2
        for (std::int32_t ci : by_sender_l_[static_cast<size_t>(yl)]) block(ci);    // C3
    }
    // C4, same channel only: senders the deciding receiver can hear, and
    // receivers that can hear the deciding sender
    for (NodeId z : net_->neighbors(receiver)) {
        const std::int32_t zl = loc_[static_cast<size_t>(z)];
        if (zl < 0) continue;
        for (std::int32_t ci : by_sender_l_[static_cast<size_t>(zl)])
            if (c_channel_[static_cast<size_t>(ci)] == channel) block(ci);
    }
    for (NodeId q : net_->neighbors(sender)) {
        const std::int32_t ql = loc_[static_cast<size_t>(q)];
        if (ql < 0) continue;
        for (std::int32_t ci : by_receiver_l_[static_cast<size_t>(ql)])
            if (c_channel_[static_cast<size_t>(ci)] == channel) block(ci);
    }
}

void NodeState::block_endpoint(NodeId v) {
    const std::int32_t vl = loc_[static_cast<size_t>(v)];
    if (vl < 0) return;
    for (std::int32_t ci : by_sender_l_[static_cast<size_t>(vl)]) block(ci);
    for (std::int32_t ci : by_receiver_l_[static_cast<size_t>(vl)]) block(ci);
}

void NodeState::prune(NodeId v) {
    const std::int32_t vl = loc_[static_cast<size_t>(v)];
    if (vl < 0 || !active_[static_cast<size_t>(vl)]) return;
    active_[static_cast<size_t>(vl)] = 0;
    for (std::int32_t ci : by_sender_l_[static_cast<size_t>(vl)]) c_active_[static_cast<size_t>(ci)] = 0;
    for (std::int32_t ci : by_receiver_l_[static_cast<size_t>(vl)]) c_active_[static_cast<size_t>(ci)] = 0;
    recipients_.clear();
    for (size_t i = 0; i < view_.size(); ++i)
        if (active_[i] && view_[i] != me_) recipients_.push_back(view_[i]);
    state_dirty_ = true;
}

void NodeState::bump_peer_clock(NodeId v, int value) {
    const std::int32_t vl = loc_[static_cast<size_t>(v)];
    if (vl < 0) return;
    if (peer_clock_[static_cast<size_t>(vl)] < value) peer_clock_[static_cast<size_t>(vl)] = value;
}

bool NodeState::mark_seen(std::int32_t msg_id) {
    const auto word = static_cast<size_t>(msg_id >> 6);
    const std::uint64_t bit = 1ULL << (msg_id & 63);
    if (word >= seen_.size()) seen_.resize(word + 1, 0);
    if (seen_[word] & bit) return false;
    seen_[word] |= bit;
    return true;
}

bool NodeState::receive(const ControlMessage& m, Outbox& out) {
    if (finished_) return false;
    switch (m.kind) {
        case MsgKind::decision: {
            const ScheduleEntry& e = m.entry;
            if (e.sender == me_) return false;  // echo of an own decision
            if (!mark_seen(m.id)) return false;
            const std::int32_t xl = loc_[static_cast<size_t>(e.sender)];
            if (xl >= 0 && active_[static_cast<size_t>(xl)]) {
                pending_[static_cast<size_t>(xl)] -= e.gamma;
                state_dirty_ = true;
            }
            const std::int32_t yl = loc_[static_cast<size_t>(e.receiver)];
            if (yl >= 0 && active_[static_cast<size_t>(yl)] && e.receiver != sink_) {
                pending_[static_cast<size_t>(yl)] += e.gamma;
                state_dirty_ = true;
            }
            if (e.receiver == me_) {
                whiten_all();
                own_entries_.push_back(e);
                ControlMessage relay = m;
                relay.from = me_;
                out.push_back(relay);
                if (e.slot + 1 > t_) t_ = e.slot + 1;
                peer_clock_[static_cast<size_t>(me_local_)] = t_;
            } else if (t_ == e.slot) {
                block_conflicts_of(e.sender, e.receiver, e.channel);
            }
            bump_peer_clock(e.sender, e.slot + 1);
            bump_peer_clock(e.receiver, e.slot + 1);
            return true;
        }
        case MsgKind::skip: {
            if (m.node == me_) return false;
            if (!mark_seen(m.id)) return false;
            if (t_ == m.slot) block_endpoint(m.node);
            bump_peer_clock(m.node, m.slot + 1);
            return true;
        }
        case MsgKind::finished: {
            if (m.node == me_) return false;
            if (!mark_seen(m.id)) return false;
            prune(m.node);
            return true;
        }
    }
    return false;
}

bool NodeState::maybe_finish(Outbox& out) {
    if (finished_) return false;
    if (pending_[static_cast<size_t>(me_local_)] != 0) return false;
    const int my_hop = hop_[static_cast<size_t>(me_local_)];
    for (size_t i = 0; i < view_.size(); ++i)
        if (active_[i] && hop_[i] > my_hop) return false;
    finished_ = true;
    ControlMessage m;
    m.kind = MsgKind::finished;
    m.from = me_;
    m.node = me_;
    out.push_back(m);
    return true;
}

bool NodeState::clock_gate_open() const {
    for (size_t i = 0; i < view_.size(); ++i)
        if (active_[i] && peer_clock_[i] < t_) return false;
    return true;
}

void NodeState::rescan() {
    for (size_t i = 0; i < view_.size(); ++i) {
        if (!active_[i]) continue;
        const int d = packets_required(pending_[i], alpha_);
        urg_scratch_[i] = static_cast<long long>(d) * hop_[i];
        head_scratch_[i] = alpha_ * d - pending_[i];
    }
    int best = -1;
    TransmissionCandidate best_cand{};
    CandidateWeights best_w{};
    const size_t n = c_sender_.size();
    for (size_t ci = 0; ci < n; ++ci) {
        if (!c_active_[ci] || c_blocked_[ci]) continue;
        const auto sl = static_cast<size_t>(c_sender_l_[ci]);
        if (pending_[sl] <= 0) continue;  // empty senders are not selectable
        const TransmissionCandidate cand{c_sender_[ci], c_receiver_[ci], c_channel_[ci]};
        const CandidateWeights cw{urg_scratch_[sl], head_scratch_[static_cast<size_t>(c_receiver_l_[ci])]};
        if (best < 0 || precedence_higher(cand, cw, best_cand, best_w)) {
            best = static_cast<int>(ci);
            best_cand = cand;
            best_w = cw;
        }
    }
    cached_best_ = best;
}

NodeState::Action NodeState::try_schedule(Outbox& out, ScheduleEntry* decided) {
    if (finished_) return Action::none;
    if (!clock_gate_open()) return Action::none;
    if (state_dirty_) {
        rescan();
        state_dirty_ = false;
    }
    if (cached_best_ < 0) {
        ControlMessage m;
        m.kind = MsgKind::skip;
        m.from = me_;
        m.node = me_;
        m.slot = t_;
        out.push_back(m);
        whiten_all();
        ++t_;
        peer_clock_[static_cast<size_t>(me_local_)] = t_;
        return Action::skipped;
    }
    const auto ci = static_cast<size_t>(cached_best_);
    if (c_sender_[ci] != me_) return Action::none;  // highest precedence belongs to another node

    ScheduleEntry e;
    e.slot = t_;
    e.sender = me_;
    e.receiver = c_receiver_[ci];
    e.gamma = std::min(pending_[static_cast<size_t>(me_local_)], alpha_);
    e.channel = c_channel_[ci];

    pending_[static_cast<size_t>(me_local_)] -= e.gamma;
    const auto yl = static_cast<size_t>(c_receiver_l_[ci]);
    if (e.receiver != sink_) pending_[yl] += e.gamma;
    own_entries_.push_back(e);

    ControlMessage m;
    m.kind = MsgKind::decision;
    m.from = me_;
    m.entry = e;
    out.push_back(m);

    whiten_all();
    ++t_;
    peer_clock_[static_cast<size_t>(me_local_)] = t_;
    if (peer_clock_[yl] < t_) peer_clock_[yl] = t_;
    if (decided) *decided = e;
    return Action::decided;
}

namespace {

// post-mortem summary for the livelock trap: every unfinished node's clock,
// gate status and current top pick
std::string stalled_dump(const std::vector<NodeState>& nodes, const HopMap& hops, const DcasOptions& opts) {
    std::ostringstream out;
    int shown = 0;
    for (const auto& node : nodes) {
        if (node.finished()) continue;
        if (++shown > 400) {
            out << "  ...\n";
            break;
        }
        out << "  node=" << node.id() << " t=" << node.clock() << " gate=" << (node.clock_gate_open() ? 1 : 0)
            << " pending=" << node.pending_of(node.id());
        if (node.clock_gate_open()) {
            bool found = false;
            TransmissionCandidate best{};
            CandidateWeights best_w{};
            for (const auto& c : node.local_candidates()) {
                if (node.is_blocked(c) || node.pending_of(c.sender) <= 0) continue;
                CandidateWeights cw;
                cw.urgency = static_cast<long long>(packets_required(node.pending_of(c.sender), opts.alpha)) *
                             hops.of(c.sender);
                cw.headroom = opts.alpha * packets_required(node.pending_of(c.receiver), opts.alpha) -
                              node.pending_of(c.receiver);
                if (!found || precedence_higher(c, cw, best, best_w)) {
                    found = true;
                    best = c;
                    best_w = cw;
                }
            }
            if (found)
                out << " best=" << best.sender << "->" << best.receiver << "/ch" << best.channel
                    << " urg=" << best_w.urgency;
            else
                out << " best=none";
        } else {
            for (NodeId v : node.view_nodes())
                if (node.peer_clock_of(v) < node.clock()) out << " lag=" << v << "@" << node.peer_clock_of(v);
        }
        out << '\n';
    }
    return out.str();
}

void trace_recv(std::ostringstream& tr, long long step, NodeId at, const ControlMessage& m) {
    tr << "t=" << step << " node=" << at << " ev=recv";
    switch (m.kind) {
        case MsgKind::decision:
            tr << " kind=decision from=" << m.from << " src=" << m.entry.sender << " dst=" << m.entry.receiver
               << " slot=" << m.entry.slot << " gamma=" << m.entry.gamma << " ch=" << m.entry.channel;
            break;
        case MsgKind::skip:
            tr << " kind=skip from=" << m.from << " who=" << m.node << " slot=" << m.slot;
            break;
        case MsgKind::finished:
            tr << " kind=finished from=" << m.from << " who=" << m.node;
            break;
    }
    tr << '\n';
}

}  // namespace

DcasResult run_dcas(const Wsn& w, const DcasOptions& opts) {
    if (opts.alpha < 1) fail(Errc::config, "alpha must be >= 1");
    if (opts.channels < 1) fail(Errc::config, "channel count must be >= 1");

    const HopMap hops = compute_hops(w);
    const int n = w.node_count();
    const NodeId sink = w.sink();

    std::vector<NodeState> nodes;
    nodes.reserve(static_cast<size_t>(n));
    for (NodeId u = 0; u < n; ++u) nodes.emplace_back(w, hops, u, opts.alpha, opts.channels);

    std::vector<std::vector<ControlMessage>> inbox(static_cast<size_t>(n));
    std::vector<NodeId> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(opts.seed);

    DcasResult res;
    std::ostringstream tr;
    std::int32_t next_id = 0;
    long long steps = 0;
    Outbox outbox;

    auto route = [&](NodeId from) {
        for (auto& m : outbox) {
            if (m.id < 0) m.id = next_id++;
            for (NodeId r : nodes[static_cast<size_t>(from)].active_recipients())
                if (!nodes[static_cast<size_t>(r)].finished()) inbox[static_cast<size_t>(r)].push_back(m);
        }
        outbox.clear();
    };

    while (!nodes[static_cast<size_t>(sink)].finished()) {
        if (opts.random_interleave) rng.shuffle(order.data(), n);
        bool activity = false;
        for (NodeId u : order) {
            NodeState& node = nodes[static_cast<size_t>(u)];
            ++steps;
            auto& q = inbox[static_cast<size_t>(u)];
            if (node.finished()) {
                q.clear();
                continue;
            }
            if (!q.empty()) {
                for (const auto& m : q) {
                    if (node.receive(m, outbox)) {
                        activity = true;
                        if (opts.trace) trace_recv(tr, steps, u, m);
                    }
                }
                q.clear();
                route(u);
            }
            if (node.maybe_finish(outbox)) {
                activity = true;
                res.events.push_back({DcasEvent::Kind::finished, steps, u, node.clock(), {}, 0});
                if (opts.trace) tr << "t=" << steps << " node=" << u << " ev=finished clock=" << node.clock() << '\n';
                route(u);
                continue;
            }
            const int slot_before = node.clock();
            ScheduleEntry e;
            const auto act = node.try_schedule(outbox, &e);
            if (act == NodeState::Action::decided) {
                activity = true;
                res.schedule.add(e);
                res.events.push_back({DcasEvent::Kind::decision, steps, u, node.clock(), e, e.slot});
                if (opts.trace)
                    tr << "t=" << steps << " node=" << u << " ev=decision slot=" << e.slot << " to=" << e.receiver
                       << " gamma=" << e.gamma << " ch=" << e.channel << '\n';
                route(u);
            } else if (act == NodeState::Action::skipped) {
                activity = true;
                res.events.push_back({DcasEvent::Kind::skip, steps, u, node.clock(), {}, slot_before});
                if (opts.trace) tr << "t=" << steps << " node=" << u << " ev=skip slot=" << slot_before << '\n';
                route(u);
            }
        }
        if (nodes[static_cast<size_t>(sink)].finished()) break;

        int max_t = 1;
        for (const auto& node : nodes) max_t = std::max(max_t, node.clock());
        if (steps > 10LL * n * n * max_t)
            fail(Errc::livelock, "step budget exhausted after " + std::to_string(steps) + " steps at slot " +
                                     std::to_string(max_t) + "\n" + stalled_dump(nodes, hops, opts));
        if (!activity)
            fail(Errc::livelock, "no node made progress in a full pass at step " + std::to_string(steps) + "\n" +
                                     stalled_dump(nodes, hops, opts));
    }

    res.driver_steps = steps;
    res.node_entries.resize(static_cast<size_t>(n));
    for (NodeId u = 0; u < n; ++u) res.node_entries[static_cast<size_t>(u)] = nodes[static_cast<size_t>(u)].accepted_entries();

    // every committed entry must appear in exactly the sender's and the
    // receiver's local schedule slice
    auto key = [](const ScheduleEntry& e) {
        return std::tuple(e.slot, e.sender, e.receiver, e.gamma, e.channel);
    };
    std::vector<std::vector<ScheduleEntry>> expected(static_cast<size_t>(n));
    for (const auto& slot : res.schedule.slots) {
        for (const auto& e : slot) {
            expected[static_cast<size_t>(e.sender)].push_back(e);
            expected[static_cast<size_t>(e.receiver)].push_back(e);
        }
    }
    for (NodeId u = 0; u < n; ++u) {
        auto got = res.node_entries[static_cast<size_t>(u)];
        auto want = expected[static_cast<size_t>(u)];
        std::sort(got.begin(), got.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
        std::sort(want.begin(), want.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
        if (got != want)
            throw std::logic_error("node " + std::to_string(u) + " schedule slice diverges from the global schedule");
    }

    if (opts.trace) res.transcript = tr.str();
    return res;
}

}  // namespace aggsched
