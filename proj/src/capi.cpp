#include "aggsched.h"

#include <cstring>
#include <new>
#include <string>

#include "baselines.hpp"
#include "collision.hpp"
#include "dcas.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "schedule.hpp"
#include "validator.hpp"
#include "wsn.hpp"

struct aggsched_wsn {
    aggsched::Wsn w;
};
struct aggsched_schedule {
    aggsched::Schedule s;
};
struct aggsched_report {
    aggsched::ValidationReport r;
};

namespace {

thread_local std::string g_last_error;

aggsched_status status_of(aggsched::Errc code) {
    using aggsched::Errc;
    switch (code) {
        case Errc::ok: return AGGSCHED_OK;
        case Errc::parse: return AGGSCHED_ERR_PARSE;
        case Errc::disconnected: return AGGSCHED_ERR_DISCONNECTED;
        case Errc::duplicate_node: return AGGSCHED_ERR_DUPLICATE_NODE;
        case Errc::deployment: return AGGSCHED_ERR_DEPLOYMENT;
        case Errc::size_cap: return AGGSCHED_ERR_SIZE_CAP;
        case Errc::livelock: return AGGSCHED_ERR_LIVELOCK;
        case Errc::validation: return AGGSCHED_ERR_VALIDATION;
        case Errc::config: return AGGSCHED_ERR_CONFIG;
        case Errc::io: return AGGSCHED_ERR_IO;
    }
    return AGGSCHED_ERR_INTERNAL;
}

template <class F>
aggsched_status guarded(F&& body) {
    try {
        body();
        return AGGSCHED_OK;
    } catch (const aggsched::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AGGSCHED_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

aggsched_status require(bool ok, const char* message) {
    if (ok) return AGGSCHED_OK;
    g_last_error = message;
    return AGGSCHED_ERR_CONFIG;
}

}  // namespace

extern "C" {

const char* aggsched_last_error(void) { return g_last_error.c_str(); }

void aggsched_string_free(char* s) { delete[] s; }

aggsched_status aggsched_wsn_parse(const char* text, aggsched_wsn** out) {
    if (auto st = require(text && out, "null argument")) return st;
    return guarded([&] { *out = new aggsched_wsn{aggsched::Wsn::from_topology_text(text)}; });
}

aggsched_status aggsched_wsn_load_file(const char* path, aggsched_wsn** out) {
    if (auto st = require(path && out, "null argument")) return st;
    return guarded([&] { *out = new aggsched_wsn{aggsched::Wsn::from_topology_file(path)}; });
}

aggsched_status aggsched_wsn_random(int sensors, double area_side, double range, int beta,
                                    uint64_t seed, aggsched_wsn** out) {
    if (auto st = require(out != nullptr, "null argument")) return st;
    return guarded([&] {
        *out = new aggsched_wsn{aggsched::Wsn::random_unit_disk(sensors, area_side, range, beta, seed)};
    });
}

void aggsched_wsn_free(aggsched_wsn* w) { delete w; }

int aggsched_wsn_node_count(const aggsched_wsn* w) { return w ? w->w.node_count() : 0; }
int aggsched_wsn_edge_count(const aggsched_wsn* w) { return w ? w->w.edge_count() : 0; }
int aggsched_wsn_sink(const aggsched_wsn* w) { return w ? w->w.sink() : -1; }
long long aggsched_wsn_total_data(const aggsched_wsn* w) { return w ? w->w.total_rho() : 0; }

aggsched_status aggsched_wsn_to_text(const aggsched_wsn* w, char** out) {
    if (auto st = require(w && out, "null argument")) return st;
    return guarded([&] { *out = dup_string(w->w.to_topology_text()); });
}

aggsched_status aggsched_run(const aggsched_wsn* w, const char* algo, int alpha, int channels,
                             uint64_t seed, aggsched_schedule** out, char** transcript_or_null) {
    if (auto st = require(w && algo && out, "null argument")) return st;
    return guarded([&] {
        const aggsched::Algo a = aggsched::algo_from_name(algo);
        aggsched::Schedule s;
        std::string transcript;
        switch (a) {
            case aggsched::Algo::dcas: {
                aggsched::DcasOptions opts;
                opts.alpha = alpha;
                opts.channels = channels;
                opts.seed = seed;
                opts.trace = transcript_or_null != nullptr;
                aggsched::DcasResult r = aggsched::run_dcas(w->w, opts);
                s = std::move(r.schedule);
                transcript = std::move(r.transcript);
                break;
            }
            case aggsched::Algo::greedy:
                s = aggsched::greedy_centralized_schedule(w->w, alpha, channels);
                break;
            case aggsched::Algo::periodic:
                s = aggsched::periodic_reuse_schedule(w->w, alpha, channels);
                break;
            case aggsched::Algo::bruteforce:
                s = aggsched::brute_force_min_slots(w->w, alpha, channels).witness;
                break;
        }
        *out = new aggsched_schedule{std::move(s)};
        if (transcript_or_null) *transcript_or_null = dup_string(transcript);
    });
}

void aggsched_schedule_free(aggsched_schedule* s) { delete s; }

aggsched_status aggsched_schedule_to_text(const aggsched_schedule* s, char** out) {
    if (auto st = require(s && out, "null argument")) return st;
    return guarded([&] { *out = dup_string(s->s.to_text()); });
}

aggsched_status aggsched_schedule_parse(const char* text, aggsched_schedule** out) {
    if (auto st = require(text && out, "null argument")) return st;
    return guarded([&] { *out = new aggsched_schedule{aggsched::Schedule::from_text(text)}; });
}

aggsched_status aggsched_schedule_load_file(const char* path, aggsched_schedule** out) {
    if (auto st = require(path && out, "null argument")) return st;
    return guarded([&] { *out = new aggsched_schedule{aggsched::Schedule::from_file(path)}; });
}

int aggsched_schedule_slot_count(const aggsched_schedule* s) { return s ? s->s.slot_count() : 0; }

aggsched_status aggsched_validate(const aggsched_wsn* w, int alpha, int channels,
                                  const aggsched_schedule* s, aggsched_report** out) {
    if (auto st = require(w && s && out, "null argument")) return st;
    return guarded([&] {
        const aggsched::HopMap hops = aggsched::compute_hops(w->w);
        *out = new aggsched_report{aggsched::validate(w->w, hops, alpha, channels, s->s)};
    });
}

void aggsched_report_free(aggsched_report* r) { delete r; }

int aggsched_report_ok(const aggsched_report* r) { return r && r->r.ok ? 1 : 0; }
int aggsched_report_slots_used(const aggsched_report* r) { return r ? r->r.slots_used : 0; }
long long aggsched_report_delivered(const aggsched_report* r) { return r ? r->r.delivered : 0; }
int aggsched_report_violation_count(const aggsched_report* r) {
    return r ? static_cast<int>(r->r.violations.size()) : 0;
}

aggsched_status aggsched_report_to_text(const aggsched_report* r, char** out) {
    if (auto st = require(r && out, "null argument")) return st;
    return guarded([&] { *out = dup_string(r->r.to_text()); });
}

aggsched_status aggsched_dump_conflict_graph(const aggsched_wsn* w, int channels, char** out) {
    if (auto st = require(w && out, "null argument")) return st;
    return guarded([&] {
        const aggsched::HopMap hops = aggsched::compute_hops(w->w);
        const aggsched::ForwardingGraph fg = aggsched::build_forwarding_graph(w->w, hops);
        const aggsched::ConflictGraph cg = aggsched::build_conflict_graph(fg, w->w, channels);
        *out = dup_string(cg.dump());
    });
}

aggsched_status aggsched_simulate_csv(const aggsched_sim_params* params, char** csv,
                                      char** schedule_text_or_null, char** transcript_or_null) {
    if (auto st = require(params && params->algo && csv, "null argument")) return st;
    return guarded([&] {
        aggsched::SingleRunSpec spec;
        if (params->topology_path && params->topology_path[0]) spec.topology_path = params->topology_path;
        spec.sensors = params->sensors;
        spec.area_side = params->area_side;
        spec.range = params->range;
        spec.beta = params->beta;
        spec.alpha = params->alpha;
        spec.channels = params->channels;
        spec.seed = params->seed;
        spec.algo = aggsched::algo_from_name(params->algo);
        spec.timings = params->timings != 0;
        spec.trace = params->trace != 0;
        aggsched::SingleRunResult res = aggsched::run_single(spec);
        *csv = dup_string(aggsched::ResultRow::csv_header() + "\n" + res.row.csv_line() + "\n");
        if (schedule_text_or_null) *schedule_text_or_null = dup_string(res.schedule.to_text());
        if (transcript_or_null) *transcript_or_null = dup_string(res.transcript);
    });
}

aggsched_status aggsched_sweep_csv(const aggsched_sweep_params* params, char** csv) {
    if (auto st = require(params && params->axis && csv, "null argument")) return st;
    return guarded([&] {
        aggsched::ExperimentConfig config;
        config.sensors = params->sensors;
        config.area_side = params->area_side;
        config.range = params->range;
        config.beta = params->beta;
        auto assign_ints = [](std::vector<int>& dst, const int* src, int n) {
            if (src && n > 0) dst.assign(src, src + n);
        };
        assign_ints(config.alpha_list, params->alphas, params->n_alphas);
        assign_ints(config.channels_list, params->channels, params->n_channels);
        assign_ints(config.sensors_list, params->sensor_points, params->n_sensor_points);
        assign_ints(config.beta_list, params->beta_points, params->n_beta_points);
        if (params->size_points && params->n_size_points > 0)
            config.size_list.assign(params->size_points, params->size_points + params->n_size_points);
        config.runs = params->runs;
        config.seed = params->seed;
        config.timings = params->timings != 0;
        config.algos.clear();
        for (int i = 0; i < params->n_algos; ++i) config.algos.push_back(aggsched::algo_from_name(params->algos[i]));
        const aggsched::SweepAxis axis = aggsched::axis_from_name(params->axis);
        *csv = dup_string(aggsched::run_sweep(config, axis).csv);
    });
}

}  // extern "C"
