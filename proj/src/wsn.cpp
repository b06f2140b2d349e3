#include "wsn.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "rng.hpp"

namespace aggsched {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        if (!tok.empty() && tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

long long parse_ll(const std::string& tok, int line_no, const char* what) {
    size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        fail(Errc::parse, "line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
    }
    if (pos != tok.size())
        fail(Errc::parse, "line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
    return v;
}

double parse_real(const std::string& tok, int line_no, const char* what) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        fail(Errc::parse, "line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
    }
    if (pos != tok.size())
        fail(Errc::parse, "line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
    return v;
}

}  // namespace

void Wsn::add_edge(NodeId u, NodeId v) {
    if (u == v) fail(Errc::parse, "self-loop on node " + std::to_string(u));
    if (adjacent(u, v)) return;
    adj_bits_[static_cast<size_t>(u) * words_ + static_cast<size_t>(v >> 6)] |= 1ULL << (v & 63);
    adj_bits_[static_cast<size_t>(v) * words_ + static_cast<size_t>(u >> 6)] |= 1ULL << (u & 63);
    adj_[static_cast<size_t>(u)].push_back(v);
    adj_[static_cast<size_t>(v)].push_back(u);
    ++edges_;
}

void Wsn::seal() {
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    if (rho_[static_cast<size_t>(sink_)] != 0)
        fail(Errc::parse, "sink must generate no data (rho(sink) = 0)");
    for (int v = 0; v < n_; ++v)
        if (rho_[static_cast<size_t>(v)] < 0) fail(Errc::parse, "negative rho on node " + std::to_string(v));

    // connectivity: BFS from the sink must reach everyone
    std::vector<char> seen(static_cast<size_t>(n_), 0);
    std::deque<NodeId> q{sink_};
    seen[static_cast<size_t>(sink_)] = 1;
    int reached = 1;
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop_front();
        for (NodeId v : adj_[static_cast<size_t>(u)]) {
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = 1;
                ++reached;
                q.push_back(v);
            }
        }
    }
    if (reached != n_)
        fail(Errc::disconnected,
             "network is disconnected: only " + std::to_string(reached) + " of " + std::to_string(n_) +
                 " nodes reach the sink");
}

Wsn Wsn::from_parts(int node_count, NodeId sink, const std::vector<std::pair<NodeId, NodeId>>& edges,
                    const std::vector<int>& rho) {
    if (node_count < 1) fail(Errc::parse, "node count must be >= 1");
    if (sink < 0 || sink >= node_count) fail(Errc::parse, "sink id out of range");
    if (static_cast<int>(rho.size()) != node_count) fail(Errc::parse, "rho list size mismatch");
    Wsn w;
    w.n_ = node_count;
    w.sink_ = sink;
    w.rho_ = rho;
    w.words_ = static_cast<size_t>((node_count + 63) / 64);
    w.adj_.resize(static_cast<size_t>(node_count));
    w.adj_bits_.assign(static_cast<size_t>(node_count) * w.words_, 0);
    for (auto [u, v] : edges) {
        if (u < 0 || u >= node_count || v < 0 || v >= node_count)
            fail(Errc::parse, "edge endpoint out of range");
        w.add_edge(u, v);
    }
    w.seal();
    return w;
}

Wsn Wsn::from_topology_text(std::string_view text) {
    Wsn w;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool have_header = false;
    bool want_positions = false;
    long long declared_nodes = 0;
    long long declared_sink = 0;
    std::vector<char> node_seen;
    std::vector<std::pair<NodeId, NodeId>> deferred_edges;
    int nodes_declared = 0;

    while (std::getline(in, line)) {
        ++line_no;
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        if (tok[0] == "wsn") {
            if (have_header) fail(Errc::parse, "line " + std::to_string(line_no) + ": duplicate header");
            if (tok.size() != 3 && !(tok.size() == 5 && tok[3] == "range"))
                fail(Errc::parse, "line " + std::to_string(line_no) + ": header must be 'wsn <n> <sink> [range <R>]'");
            declared_nodes = parse_ll(tok[1], line_no, "node count");
            declared_sink = parse_ll(tok[2], line_no, "sink id");
            if (declared_nodes < 1) fail(Errc::parse, "line " + std::to_string(line_no) + ": node count must be >= 1");
            if (declared_sink < 0 || declared_sink >= declared_nodes)
                fail(Errc::parse, "line " + std::to_string(line_no) + ": declared sink does not exist");
            if (tok.size() == 5) {
                w.range_ = parse_real(tok[4], line_no, "range");
                if (!(w.range_ > 0)) fail(Errc::parse, "line " + std::to_string(line_no) + ": range must be > 0");
                want_positions = true;
            }
            w.n_ = static_cast<int>(declared_nodes);
            w.sink_ = static_cast<NodeId>(declared_sink);
            w.words_ = static_cast<size_t>((w.n_ + 63) / 64);
            w.rho_.assign(static_cast<size_t>(w.n_), 0);
            w.adj_.resize(static_cast<size_t>(w.n_));
            w.adj_bits_.assign(static_cast<size_t>(w.n_) * w.words_, 0);
            w.xs_.assign(static_cast<size_t>(w.n_), 0.0);
            w.ys_.assign(static_cast<size_t>(w.n_), 0.0);
            node_seen.assign(static_cast<size_t>(w.n_), 0);
            have_header = true;
        } else if (tok[0] == "node") {
            if (!have_header) fail(Errc::parse, "line " + std::to_string(line_no) + ": 'node' before header");
            if (tok.size() != 3 && tok.size() != 5)
                fail(Errc::parse, "line " + std::to_string(line_no) + ": node line must be 'node <id> <rho> [<x> <y>]'");
            long long id = parse_ll(tok[1], line_no, "node id");
            if (id < 0 || id >= w.n_)
                fail(Errc::parse, "line " + std::to_string(line_no) + ": node id " + std::to_string(id) +
                                      " outside 0.." + std::to_string(w.n_ - 1));
            if (node_seen[static_cast<size_t>(id)])
                fail(Errc::duplicate_node, "line " + std::to_string(line_no) + ": duplicate node " + std::to_string(id));
            node_seen[static_cast<size_t>(id)] = 1;
            ++nodes_declared;
            long long rho = parse_ll(tok[2], line_no, "rho");
            if (rho < 0) fail(Errc::parse, "line " + std::to_string(line_no) + ": rho must be >= 0");
            w.rho_[static_cast<size_t>(id)] = static_cast<int>(rho);
            if (tok.size() == 5) {
                w.xs_[static_cast<size_t>(id)] = parse_real(tok[3], line_no, "x");
                w.ys_[static_cast<size_t>(id)] = parse_real(tok[4], line_no, "y");
                w.have_pos_ = true;
            } else if (want_positions) {
                fail(Errc::parse, "line " + std::to_string(line_no) + ": header declares a range, node needs <x> <y>");
            }
        } else if (tok[0] == "edge") {
            if (!have_header) fail(Errc::parse, "line " + std::to_string(line_no) + ": 'edge' before header");
            if (want_positions)
                fail(Errc::parse, "line " + std::to_string(line_no) + ": explicit edges not allowed with a range header");
            if (tok.size() != 3) fail(Errc::parse, "line " + std::to_string(line_no) + ": edge line must be 'edge <u> <v>'");
            long long u = parse_ll(tok[1], line_no, "edge endpoint");
            long long v = parse_ll(tok[2], line_no, "edge endpoint");
            if (u < 0 || u >= w.n_ || v < 0 || v >= w.n_)
                fail(Errc::parse, "line " + std::to_string(line_no) + ": edge references undeclared node");
            if (u == v) fail(Errc::parse, "line " + std::to_string(line_no) + ": self-loop");
            deferred_edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
        } else {
            fail(Errc::parse, "line " + std::to_string(line_no) + ": unknown directive '" + tok[0] + "'");
        }
    }

    if (!have_header) fail(Errc::parse, "missing 'wsn' header line");
    if (nodes_declared != w.n_)
        fail(Errc::parse, "header declares " + std::to_string(w.n_) + " nodes, found " + std::to_string(nodes_declared));

    for (auto [u, v] : deferred_edges) {
        if (!node_seen[static_cast<size_t>(u)] || !node_seen[static_cast<size_t>(v)])
            fail(Errc::parse, "edge references undeclared node");
        w.add_edge(u, v);
    }
    if (want_positions) {
        const double r2 = w.range_ * w.range_;
        for (NodeId u = 0; u < w.n_; ++u) {
            for (NodeId v = u + 1; v < w.n_; ++v) {
                const double dx = w.xs_[static_cast<size_t>(u)] - w.xs_[static_cast<size_t>(v)];
                const double dy = w.ys_[static_cast<size_t>(u)] - w.ys_[static_cast<size_t>(v)];
                if (dx * dx + dy * dy <= r2) w.add_edge(u, v);
            }
        }
    }
    if (!w.have_pos_) {
        w.xs_.clear();
        w.ys_.clear();
    }
    w.seal();
    return w;
}

Wsn Wsn::from_topology_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(Errc::io, "cannot open topology file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_topology_text(ss.str());
}

Wsn Wsn::random_unit_disk(int sensors, double area_side, double transmission_range, int beta,
                          std::uint64_t seed, int max_attempts) {
    if (sensors < 1) fail(Errc::config, "sensor count must be >= 1");
    if (!(area_side > 0)) fail(Errc::config, "area side must be > 0");
    if (!(transmission_range > 0)) fail(Errc::config, "transmission range must be > 0");
    if (beta < 1) fail(Errc::config, "beta must be >= 1");

    Rng rng(seed);
    const double r2 = transmission_range * transmission_range;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<double> xs(static_cast<size_t>(sensors)), ys(static_cast<size_t>(sensors));
        for (int v = 0; v < sensors; ++v) {
            xs[static_cast<size_t>(v)] = rng.next_double() * area_side;
            ys[static_cast<size_t>(v)] = rng.next_double() * area_side;
        }
        std::vector<int> rho(static_cast<size_t>(sensors), 0);
        for (int v = 1; v < sensors; ++v) rho[static_cast<size_t>(v)] = rng.next_int(1, beta);

        Wsn w;
        w.n_ = sensors;
        w.sink_ = 0;
        w.words_ = static_cast<size_t>((sensors + 63) / 64);
        w.rho_ = std::move(rho);
        w.adj_.resize(static_cast<size_t>(sensors));
        w.adj_bits_.assign(static_cast<size_t>(sensors) * w.words_, 0);
        w.xs_ = std::move(xs);
        w.ys_ = std::move(ys);
        w.have_pos_ = true;
        w.range_ = transmission_range;
        for (NodeId u = 0; u < sensors; ++u) {
            for (NodeId v = u + 1; v < sensors; ++v) {
                const double dx = w.xs_[static_cast<size_t>(u)] - w.xs_[static_cast<size_t>(v)];
                const double dy = w.ys_[static_cast<size_t>(u)] - w.ys_[static_cast<size_t>(v)];
                if (dx * dx + dy * dy <= r2) w.add_edge(u, v);
            }
        }
        try {
            w.seal();
        } catch (const Error& e) {
            if (e.code() == Errc::disconnected) continue;  // resample the whole layout
            throw;
        }
        return w;
    }
    fail(Errc::deployment, "no connected layout after " + std::to_string(max_attempts) +
                               " attempts (n=" + std::to_string(sensors) + ", L=" + std::to_string(area_side) +
                               ", R=" + std::to_string(transmission_range) + ")");
}

long long Wsn::total_rho() const {
    long long sum = 0;
    for (int r : rho_) sum += r;
    return sum;
}

std::string Wsn::to_topology_text() const {
    std::ostringstream out;
    char buf[64];
    if (have_pos_) {
        std::snprintf(buf, sizeof buf, "%.17g", range_);
        out << "wsn " << n_ << ' ' << sink_ << " range " << buf << '\n';
        for (NodeId v = 0; v < n_; ++v) {
            out << "node " << v << ' ' << rho_[static_cast<size_t>(v)];
            std::snprintf(buf, sizeof buf, " %.17g", xs_[static_cast<size_t>(v)]);
            out << buf;
            std::snprintf(buf, sizeof buf, " %.17g", ys_[static_cast<size_t>(v)]);
            out << buf << '\n';
        }
    } else {
        out << "wsn " << n_ << ' ' << sink_ << '\n';
        for (NodeId v = 0; v < n_; ++v) out << "node " << v << ' ' << rho_[static_cast<size_t>(v)] << '\n';
        for (NodeId u = 0; u < n_; ++u)
            for (NodeId v : adj_[static_cast<size_t>(u)])
                if (u < v) out << "edge " << u << ' ' << v << '\n';
    }
    return out.str();
}

HopMap compute_hops(const Wsn& w) {
    HopMap h;
    h.hop.assign(static_cast<size_t>(w.node_count()), -1);
    std::deque<NodeId> q{w.sink()};
    h.hop[static_cast<size_t>(w.sink())] = 0;
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop_front();
        for (NodeId v : w.neighbors(u)) {
            if (h.hop[static_cast<size_t>(v)] < 0) {
                h.hop[static_cast<size_t>(v)] = h.hop[static_cast<size_t>(u)] + 1;
                q.push_back(v);
            }
        }
    }
    return h;
}

bool LocalView::contains(NodeId v) const {
    return std::binary_search(nodes.begin(), nodes.end(), v);
}

LocalView k_hop_subgraph(const Wsn& w, NodeId center, int radius) {
    if (center < 0 || center >= w.node_count()) fail(Errc::config, "k_hop_subgraph: center out of range");
    LocalView view;
    view.center = center;
    view.radius = radius;

    std::vector<int> dist(static_cast<size_t>(w.node_count()), -1);
    std::deque<NodeId> q{center};
    dist[static_cast<size_t>(center)] = 0;
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop_front();
        if (dist[static_cast<size_t>(u)] == radius) continue;
        for (NodeId v : w.neighbors(u)) {
            if (dist[static_cast<size_t>(v)] < 0) {
                dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
                q.push_back(v);
            }
        }
    }
    for (NodeId v = 0; v < w.node_count(); ++v) {
        if (dist[static_cast<size_t>(v)] >= 0) {
            view.nodes.push_back(v);
            view.distance.push_back(dist[static_cast<size_t>(v)]);
        }
    }
    for (NodeId u : view.nodes) {
        for (NodeId v : w.neighbors(u)) {
            if (u < v && dist[static_cast<size_t>(v)] >= 0 &&
                std::min(dist[static_cast<size_t>(u)], dist[static_cast<size_t>(v)]) <= radius - 1)
                view.edges.emplace_back(u, v);
        }
    }
    std::sort(view.edges.begin(), view.edges.end());
    return view;
}

}  // namespace aggsched
