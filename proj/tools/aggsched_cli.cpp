// aggsched command-line front end. Talks to the core exclusively through the
// C API in aggsched.h.
//
// Exit codes: 0 success, 1 usage/config error, 2 validation failure,
// 3 brute-force size cap exceeded.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aggsched.h"

namespace {

int exit_code_for(aggsched_status st) {
    switch (st) {
        case AGGSCHED_OK: return 0;
        case AGGSCHED_ERR_VALIDATION: return 2;
        case AGGSCHED_ERR_SIZE_CAP: return 3;
        default: return 1;
    }
}

int report_failure(aggsched_status st) {
    std::cerr << "error: " << aggsched_last_error() << "\n";
    return exit_code_for(st);
}

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { aggsched_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

bool write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return true;
    }
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return false;
    }
    return true;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos <= csv.size()) {
        const size_t comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= csv.size()) {
        const size_t comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<std::string> parse_name_list(const std::string& csv) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= csv.size()) {
        const size_t comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(tok);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

uint64_t effective_seed(uint64_t cli_seed) {
    if (const char* env = std::getenv("AGGSCHED_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric AGGSCHED_SEED='" << env << "'\n";
        }
    }
    return cli_seed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aggsched: minimum-latency collision-free aggregation scheduling for multi-channel WSNs"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run one scheduler on one network and emit a CSV row");
    std::string topology, out_path, schedule_out, algo = "dcas", alpha_csv = "1", channels_csv = "1";
    int sensors = 0, beta = 1;
    double area = 0, range = 5;
    uint64_t seed = 1;
    bool trace = false, timings = false;
    simulate->add_option("--topology", topology, "topology file (omit to deploy randomly)");
    simulate->add_option("--sensors", sensors, "node count for random deployments (includes the sink)");
    simulate->add_option("--area", area, "square area side L");
    simulate->add_option("--range", range, "transmission range")->capture_default_str();
    simulate->add_option("--beta", beta, "max raw units generated per sensor")->capture_default_str();
    simulate->add_option("--alpha", alpha_csv, "aggregation ratio")->capture_default_str();
    simulate->add_option("--channels", channels_csv, "number of channels")->capture_default_str();
    simulate->add_option("--seed", seed, "RNG seed (AGGSCHED_SEED overrides)")->capture_default_str();
    simulate->add_option("--algo", algo, "dcas | greedy | periodic | bruteforce")->capture_default_str();
    simulate->add_option("--out", out_path, "write the CSV here instead of stdout");
    simulate->add_option("--schedule-out", schedule_out, "write the produced schedule here");
    simulate->add_flag("--trace", trace, "print the driver transcript to stderr (dcas)");
    simulate->add_flag("--timings", timings, "record wall time in the CSV (off keeps output byte-stable)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "replicated parameter sweep along one axis, CSV output");
    std::string axis, sweep_algos = "dcas", sweep_alpha_csv, sweep_channels_csv, sweep_sensors_csv, sweep_sizes_csv,
                sweep_betas_csv, sweep_out;
    int sweep_sensors = 200, sweep_beta = 3, runs = 30;
    double sweep_area = 30, sweep_range = 5;
    uint64_t sweep_seed = 1;
    bool sweep_timings = false;
    sweep->add_option("--axis", axis, "alpha | channels | sensors | size | beta")->required();
    sweep->add_option("--sensors", sweep_sensors_csv, "sensor count (list when --axis sensors)");
    sweep->add_option("--area", sweep_sizes_csv, "area side L (list when --axis size)");
    sweep->add_option("--range", sweep_range, "transmission range")->capture_default_str();
    sweep->add_option("--beta", sweep_betas_csv, "max raw units (list when --axis beta)");
    sweep->add_option("--alpha", sweep_alpha_csv, "aggregation ratio(s), comma separated");
    sweep->add_option("--channels", sweep_channels_csv, "channel count(s), comma separated");
    sweep->add_option("--runs", runs, "replications per axis point")->capture_default_str();
    sweep->add_option("--seed", sweep_seed, "base seed; run r uses seed+r")->capture_default_str();
    sweep->add_option("--algo", sweep_algos, "comma-separated subset of dcas,greedy,periodic")->capture_default_str();
    sweep->add_option("--out", sweep_out, "write the CSV here instead of stdout");
    sweep->add_flag("--timings", sweep_timings, "record wall times in the CSV");

    // validate
    auto* validate = app.add_subcommand("validate", "check a schedule file against a topology");
    std::string v_topology, v_schedule;
    int v_alpha = 1, v_channels = 1;
    validate->add_option("--topology", v_topology, "topology file")->required();
    validate->add_option("--schedule", v_schedule, "schedule file")->required();
    validate->add_option("--alpha", v_alpha, "aggregation ratio")->capture_default_str();
    validate->add_option("--channels", v_channels, "number of channels")->capture_default_str();

    // dump-graph
    auto* dump = app.add_subcommand("dump-graph", "print the transmission-candidate conflict graph");
    std::string d_topology, d_out;
    int d_channels = 1;
    dump->add_option("--topology", d_topology, "topology file")->required();
    dump->add_option("--channels", d_channels, "number of channels")->capture_default_str();
    dump->add_option("--out", d_out, "write the listing here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (simulate->parsed()) {
        const auto alphas = parse_int_list(alpha_csv);
        const auto chans = parse_int_list(channels_csv);
        if (alphas.size() != 1 || chans.size() != 1) {
            std::cerr << "error: simulate takes exactly one --alpha and one --channels value\n";
            return 1;
        }
        aggsched_sim_params p{};
        p.topology_path = topology.empty() ? nullptr : topology.c_str();
        p.sensors = sensors;
        p.area_side = area;
        p.range = range;
        p.beta = beta;
        p.alpha = alphas[0];
        p.channels = chans[0];
        p.seed = effective_seed(seed);
        p.algo = algo.c_str();
        p.timings = timings ? 1 : 0;
        p.trace = trace ? 1 : 0;
        OwnedString csv, sched, transcript;
        char** sched_out_ptr = schedule_out.empty() ? nullptr : &sched.p;
        if (aggsched_status st =
                aggsched_simulate_csv(&p, &csv.p, sched_out_ptr, trace ? &transcript.p : nullptr))
            return report_failure(st);
        if (!write_output(out_path, csv.str())) return 1;
        if (!schedule_out.empty() && !write_output(schedule_out, sched.str())) return 1;
        if (trace) std::cerr << transcript.str();
        return 0;
    }

    if (sweep->parsed()) {
        const auto alphas = parse_int_list(sweep_alpha_csv);
        const auto chans = parse_int_list(sweep_channels_csv);
        const auto sensor_pts = parse_int_list(sweep_sensors_csv);
        const auto size_pts = parse_double_list(sweep_sizes_csv);
        const auto beta_pts = parse_int_list(sweep_betas_csv);
        const auto algo_names = parse_name_list(sweep_algos);
        std::vector<const char*> algo_ptrs;
        for (const auto& a : algo_names) algo_ptrs.push_back(a.c_str());

        aggsched_sweep_params p{};
        p.axis = axis.c_str();
        p.sensors = sensor_pts.size() == 1 ? sensor_pts[0] : sweep_sensors;
        p.area_side = size_pts.size() == 1 ? size_pts[0] : sweep_area;
        p.range = sweep_range;
        p.beta = beta_pts.size() == 1 ? beta_pts[0] : sweep_beta;
        p.alphas = alphas.empty() ? nullptr : alphas.data();
        p.n_alphas = static_cast<int>(alphas.size());
        p.channels = chans.empty() ? nullptr : chans.data();
        p.n_channels = static_cast<int>(chans.size());
        p.sensor_points = sensor_pts.empty() ? nullptr : sensor_pts.data();
        p.n_sensor_points = static_cast<int>(sensor_pts.size());
        p.size_points = size_pts.empty() ? nullptr : size_pts.data();
        p.n_size_points = static_cast<int>(size_pts.size());
        p.beta_points = beta_pts.empty() ? nullptr : beta_pts.data();
        p.n_beta_points = static_cast<int>(beta_pts.size());
        p.runs = runs;
        p.seed = effective_seed(sweep_seed);
        p.algos = algo_ptrs.data();
        p.n_algos = static_cast<int>(algo_ptrs.size());
        p.timings = sweep_timings ? 1 : 0;

        OwnedString csv;
        if (aggsched_status st = aggsched_sweep_csv(&p, &csv.p)) return report_failure(st);
        if (!write_output(sweep_out, csv.str())) return 1;
        return 0;
    }

    if (validate->parsed()) {
        aggsched_wsn* w = nullptr;
        if (aggsched_status st = aggsched_wsn_load_file(v_topology.c_str(), &w)) return report_failure(st);
        std::unique_ptr<aggsched_wsn, void (*)(aggsched_wsn*)> wsn_guard(w, aggsched_wsn_free);
        aggsched_schedule* s = nullptr;
        if (aggsched_status st = aggsched_schedule_load_file(v_schedule.c_str(), &s)) return report_failure(st);
        std::unique_ptr<aggsched_schedule, void (*)(aggsched_schedule*)> sched_guard(s, aggsched_schedule_free);
        aggsched_report* r = nullptr;
        if (aggsched_status st = aggsched_validate(w, v_alpha, v_channels, s, &r)) return report_failure(st);
        std::unique_ptr<aggsched_report, void (*)(aggsched_report*)> report_guard(r, aggsched_report_free);
        OwnedString text;
        if (aggsched_status st = aggsched_report_to_text(r, &text.p)) return report_failure(st);
        std::cout << text.str();
        return aggsched_report_ok(r) ? 0 : 2;
    }

    if (dump->parsed()) {
        aggsched_wsn* w = nullptr;
        if (aggsched_status st = aggsched_wsn_load_file(d_topology.c_str(), &w)) return report_failure(st);
        std::unique_ptr<aggsched_wsn, void (*)(aggsched_wsn*)> wsn_guard(w, aggsched_wsn_free);
        OwnedString text;
        if (aggsched_status st = aggsched_dump_conflict_graph(w, d_channels, &text.p)) return report_failure(st);
        if (!write_output(d_out, text.str())) return 1;
        return 0;
    }

    return 1;
}
