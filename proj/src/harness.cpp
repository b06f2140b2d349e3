#include "harness.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "baselines.hpp"
#include "dcas.hpp"
#include "error.hpp"

namespace aggsched {

const char* algo_name(Algo a) {
    switch (a) {
        case Algo::dcas: return "dcas";
        case Algo::greedy: return "greedy";
        case Algo::periodic: return "periodic";
        case Algo::bruteforce: return "bruteforce";
    }
    return "?";
}

Algo algo_from_name(const std::string& name) {
    if (name == "dcas") return Algo::dcas;
    if (name == "greedy") return Algo::greedy;
    if (name == "periodic") return Algo::periodic;
    if (name == "bruteforce") return Algo::bruteforce;
    fail(Errc::config, "unknown algorithm '" + name + "' (expected dcas, greedy, periodic or bruteforce)");
}

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::alpha: return "alpha";
        case SweepAxis::channels: return "channels";
        case SweepAxis::sensors: return "sensors";
        case SweepAxis::size: return "size";
        case SweepAxis::beta: return "beta";
    }
    return "?";
}

SweepAxis axis_from_name(const std::string& name) {
    if (name == "alpha") return SweepAxis::alpha;
    if (name == "channels") return SweepAxis::channels;
    if (name == "sensors") return SweepAxis::sensors;
    if (name == "size") return SweepAxis::size;
    if (name == "beta") return SweepAxis::beta;
    fail(Errc::config, "unknown sweep axis '" + name + "' (expected alpha, channels, sensors, size or beta)");
}

namespace {

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string fmt_mean(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string ResultRow::csv_header() {
    return "algo,sensors,L,beta,alpha,channels,seed,slots_used,delivered,wall_time_ms";
}

std::string ResultRow::csv_line() const {
    std::ostringstream out;
    out << algo << ',' << sensors << ',' << fmt_g(area) << ',' << beta << ',' << alpha << ',' << channels << ','
        << seed << ',' << slots_used << ',' << delivered << ',' << wall_time_ms;
    return out.str();
}

SingleRunResult run_single(const SingleRunSpec& spec) {
    if (spec.alpha < 1) fail(Errc::config, "alpha must be >= 1");
    if (spec.channels < 1) fail(Errc::config, "channels must be >= 1");

    Wsn w;
    if (!spec.topology_path.empty()) {
        w = Wsn::from_topology_file(spec.topology_path);
    } else {
        if (spec.sensors < 1) fail(Errc::config, "either --topology or --sensors is required");
        w = Wsn::random_unit_disk(spec.sensors, spec.area_side, spec.range, spec.beta, spec.seed);
    }

    SingleRunResult res;
    const auto t0 = std::chrono::steady_clock::now();
    switch (spec.algo) {
        case Algo::dcas: {
            DcasOptions opts;
            opts.alpha = spec.alpha;
            opts.channels = spec.channels;
            opts.seed = spec.seed;
            opts.trace = spec.trace;
            DcasResult r = run_dcas(w, opts);
            res.schedule = std::move(r.schedule);
            res.transcript = std::move(r.transcript);
            break;
        }
        case Algo::greedy:
            res.schedule = greedy_centralized_schedule(w, spec.alpha, spec.channels);
            break;
        case Algo::periodic:
            res.schedule = periodic_reuse_schedule(w, spec.alpha, spec.channels);
            break;
        case Algo::bruteforce:
            res.schedule = brute_force_min_slots(w, spec.alpha, spec.channels).witness;
            break;
    }
    const auto t1 = std::chrono::steady_clock::now();

    const HopMap hops = compute_hops(w);
    res.report = validate(w, hops, spec.alpha, spec.channels, res.schedule);
    if (!res.report.ok)
        fail(Errc::validation, std::string(algo_name(spec.algo)) + " produced an invalid schedule:\n" +
                                   res.report.to_text());

    res.row.algo = algo_name(spec.algo);
    res.row.sensors = w.node_count();
    res.row.area = spec.topology_path.empty() ? spec.area_side : 0;
    res.row.beta = spec.topology_path.empty() ? spec.beta : 0;
    res.row.alpha = spec.alpha;
    res.row.channels = spec.channels;
    res.row.seed = spec.seed;
    res.row.slots_used = res.report.slots_used;
    res.row.delivered = res.report.delivered;
    res.row.wall_time_ms =
        spec.timings ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() : 0;
    return res;
}

SweepResult run_sweep(const ExperimentConfig& config, SweepAxis axis) {
    if (config.runs < 1) fail(Errc::config, "runs must be >= 1");
    if (config.algos.empty()) fail(Errc::config, "at least one algorithm is required");
    for (Algo a : config.algos)
        if (a == Algo::bruteforce) fail(Errc::config, "bruteforce is not available in sweeps (size caps); use simulate");

    auto first_or = [](const std::vector<int>& v, int dflt) { return v.empty() ? dflt : v.front(); };

    std::vector<double> points;
    switch (axis) {
        case SweepAxis::alpha:
            if (config.alpha_list.empty())
                points = {1, 2, 4, 8, 16, 32, 64, 128};
            else
                for (int a : config.alpha_list) points.push_back(a);
            break;
        case SweepAxis::channels:
            if (config.channels_list.empty())
                points = {1, 2, 4};
            else
                for (int c : config.channels_list) points.push_back(c);
            break;
        case SweepAxis::sensors:
            if (config.sensors_list.empty())
                points = {50, 200, 350};
            else
                for (int s : config.sensors_list) points.push_back(s);
            break;
        case SweepAxis::size:
            if (config.size_list.empty())
                points = {20, 30, 40};
            else
                points = config.size_list;
            break;
        case SweepAxis::beta:
            if (config.beta_list.empty())
                points = {1, 3, 5};
            else
                for (int b : config.beta_list) points.push_back(b);
            break;
    }

    SweepResult result;
    std::ostringstream csv;
    csv << ResultRow::csv_header() << '\n';

    for (double point : points) {
        for (int r = 0; r < config.runs; ++r) {
            for (Algo algo : config.algos) {
                SingleRunSpec spec;
                spec.sensors = axis == SweepAxis::sensors ? static_cast<int>(point) : config.sensors;
                spec.area_side = axis == SweepAxis::size ? point : config.area_side;
                spec.range = config.range;
                spec.beta = axis == SweepAxis::beta ? static_cast<int>(point) : config.beta;
                spec.alpha = axis == SweepAxis::alpha ? static_cast<int>(point) : first_or(config.alpha_list, 4);
                spec.channels =
                    axis == SweepAxis::channels ? static_cast<int>(point) : first_or(config.channels_list, 2);
                spec.seed = config.seed + static_cast<std::uint64_t>(r);
                spec.algo = algo;
                spec.timings = config.timings;
                try {
                    SingleRunResult one = run_single(spec);
                    csv << one.row.csv_line() << '\n';
                    result.rows.push_back(std::move(one.row));
                } catch (const Error& e) {
                    fail(e.code(), "sweep cell algo=" + std::string(algo_name(algo)) + " " + axis_name(axis) + "=" +
                                       fmt_g(point) + " seed=" + std::to_string(spec.seed) + ": " + e.what());
                }
            }
        }
    }

    for (double point : points) {
        for (Algo algo : config.algos) {
            double slot_sum = 0, deliver_sum = 0;
            int count = 0;
            for (const auto& row : result.rows) {
                if (row.algo != algo_name(algo)) continue;
                const double row_point = axis == SweepAxis::alpha      ? row.alpha
                                         : axis == SweepAxis::channels ? row.channels
                                         : axis == SweepAxis::sensors  ? row.sensors
                                         : axis == SweepAxis::size     ? row.area
                                                                       : row.beta;
                if (row_point != point) continue;
                slot_sum += row.slots_used;
                deliver_sum += static_cast<double>(row.delivered);
                ++count;
            }
            csv << "# aggregate algo=" << algo_name(algo) << ' ' << axis_name(axis) << '=' << fmt_g(point)
                << " mean_slots=" << fmt_mean(slot_sum / count) << " mean_delivered=" << fmt_mean(deliver_sum / count)
                << " runs=" << count << '\n';
        }
    }

    result.csv = csv.str();
    return result;
}

double mean_slots(const std::vector<ResultRow>& rows, const std::string& algo, SweepAxis axis, double value) {
    double sum = 0;
    int count = 0;
    for (const auto& row : rows) {
        if (row.algo != algo) continue;
        const double row_point = axis == SweepAxis::alpha      ? row.alpha
                                 : axis == SweepAxis::channels ? row.channels
                                 : axis == SweepAxis::sensors  ? row.sensors
                                 : axis == SweepAxis::size     ? row.area
                                                               : row.beta;
        if (row_point != value) continue;
        sum += row.slots_used;
        ++count;
    }
    if (count == 0) fail(Errc::config, "no rows for algo=" + algo + " at " + std::string(axis_name(axis)));
    return sum / count;
}

}  // namespace aggsched
