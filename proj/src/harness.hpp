#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "schedule.hpp"
#include "validator.hpp"
#include "wsn.hpp"

namespace aggsched {

enum class Algo { dcas, greedy, periodic, bruteforce };

const char* algo_name(Algo a);
Algo algo_from_name(const std::string& name);  // Errc::config on unknown names

struct SingleRunSpec {
    std::string topology_path;  // empty -> random deployment from the fields below
    int sensors = 0;
    double area_side = 0;
    double range = 5;
    int beta = 1;
    int alpha = 1;
    int channels = 1;
    std::uint64_t seed = 0;
    Algo algo = Algo::dcas;
    bool timings = false;  // when false the wall-time column is emitted as 0
    bool trace = false;
};

struct ResultRow {
    std::string algo;
    int sensors = 0;
    double area = 0;  // 0 for file-based topologies
    int beta = 0;     // 0 for file-based topologies
    int alpha = 1;
    int channels = 1;
    std::uint64_t seed = 0;
    int slots_used = 0;
    long long delivered = 0;
    long long wall_time_ms = 0;

    static std::string csv_header();
    std::string csv_line() const;
};

struct SingleRunResult {
    ResultRow row;
    Schedule schedule;
    ValidationReport report;
    std::string transcript;
};

/// Runs one scheduler on one instance and gates the result through the
/// validator; an invalid schedule is a hard failure (Errc::validation).
SingleRunResult run_single(const SingleRunSpec& spec);

enum class SweepAxis { alpha, channels, sensors, size, beta };

SweepAxis axis_from_name(const std::string& name);
const char* axis_name(SweepAxis axis);

struct ExperimentConfig {
    int sensors = 200;
    double area_side = 30;
    double range = 5;
    int beta = 3;
    std::vector<int> alpha_list;     // empty -> {4}, or the full ladder on the alpha axis
    std::vector<int> channels_list;  // empty -> {2}, or {1,2,4} on the channels axis
    std::vector<int> sensors_list;   // empty -> {50,200,350} on the sensors axis
    std::vector<double> size_list;   // empty -> {20,30,40} on the size axis
    std::vector<int> beta_list;      // empty -> {1,3,5} on the beta axis
    int runs = 30;
    std::uint64_t seed = 1;
    std::vector<Algo> algos{Algo::dcas};
    bool timings = false;
};

struct SweepResult {
    std::vector<ResultRow> rows;  // axis-point major, then run, then algo
    std::string csv;              // header, rows, then '#'-prefixed aggregate lines
};

/// Parameter sweep with seeded replication: run r of every axis point deploys
/// with seed = base_seed + r, so points that share deployment parameters are
/// compared on identical networks. Every row passed validation.
SweepResult run_sweep(const ExperimentConfig& config, SweepAxis axis);

/// Mean slots_used over the rows matching (algo, predicate column == value).
double mean_slots(const std::vector<ResultRow>& rows, const std::string& algo, SweepAxis axis, double value);

}  // namespace aggsched
