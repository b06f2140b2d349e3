/* aggsched — collision-free multi-channel data-aggregation scheduling for
 * wireless sensor networks.
 *
 * C API over the C++ core: opaque handles, integer status codes, and
 * caller-freed strings. Every function that can fail returns an
 * aggsched_status; on failure aggsched_last_error() describes the problem
 * (the message is thread-local and valid until the next failing call).
 */
#ifndef AGGSCHED_H
#define AGGSCHED_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct aggsched_wsn aggsched_wsn;
typedef struct aggsched_schedule aggsched_schedule;
typedef struct aggsched_report aggsched_report;

typedef enum aggsched_status {
    AGGSCHED_OK = 0,
    AGGSCHED_ERR_PARSE = 1,
    AGGSCHED_ERR_DISCONNECTED = 2,
    AGGSCHED_ERR_DUPLICATE_NODE = 3,
    AGGSCHED_ERR_DEPLOYMENT = 4,
    AGGSCHED_ERR_SIZE_CAP = 5,
    AGGSCHED_ERR_LIVELOCK = 6,
    AGGSCHED_ERR_VALIDATION = 7,
    AGGSCHED_ERR_CONFIG = 8,
    AGGSCHED_ERR_IO = 9,
    AGGSCHED_ERR_INTERNAL = 10
} aggsched_status;

const char* aggsched_last_error(void);

/* Frees any char* returned by this library. */
void aggsched_string_free(char* s);

/* ---- networks ---------------------------------------------------------- */

aggsched_status aggsched_wsn_parse(const char* text, aggsched_wsn** out);
aggsched_status aggsched_wsn_load_file(const char* path, aggsched_wsn** out);

/* Random connected unit-disk deployment: `sensors` nodes in [0,L]^2, node 0
 * is the sink, per-node data volume uniform in [1,beta]. Deterministic for a
 * fixed seed. */
aggsched_status aggsched_wsn_random(int sensors, double area_side, double range, int beta,
                                    uint64_t seed, aggsched_wsn** out);
void aggsched_wsn_free(aggsched_wsn* w);

int aggsched_wsn_node_count(const aggsched_wsn* w);
int aggsched_wsn_edge_count(const aggsched_wsn* w);
int aggsched_wsn_sink(const aggsched_wsn* w);
long long aggsched_wsn_total_data(const aggsched_wsn* w);
aggsched_status aggsched_wsn_to_text(const aggsched_wsn* w, char** out);

/* ---- scheduling -------------------------------------------------------- */

/* algo is one of "dcas", "greedy", "periodic", "bruteforce". The seed only
 * affects randomised interleaving modes; the default driver is
 * deterministic. With a non-NULL transcript pointer (dcas only) the driver
 * records one line per event. */
aggsched_status aggsched_run(const aggsched_wsn* w, const char* algo, int alpha, int channels,
                             uint64_t seed, aggsched_schedule** out, char** transcript_or_null);
void aggsched_schedule_free(aggsched_schedule* s);

aggsched_status aggsched_schedule_to_text(const aggsched_schedule* s, char** out);
aggsched_status aggsched_schedule_parse(const char* text, aggsched_schedule** out);
aggsched_status aggsched_schedule_load_file(const char* path, aggsched_schedule** out);
int aggsched_schedule_slot_count(const aggsched_schedule* s);

/* ---- validation -------------------------------------------------------- */

aggsched_status aggsched_validate(const aggsched_wsn* w, int alpha, int channels,
                                  const aggsched_schedule* s, aggsched_report** out);
void aggsched_report_free(aggsched_report* r);
int aggsched_report_ok(const aggsched_report* r);
int aggsched_report_slots_used(const aggsched_report* r);
long long aggsched_report_delivered(const aggsched_report* r);
int aggsched_report_violation_count(const aggsched_report* r);
aggsched_status aggsched_report_to_text(const aggsched_report* r, char** out);

/* ---- diagnostics ------------------------------------------------------- */

/* Text listing of the candidate conflict graph: one "candidate <sender>
 * <receiver> <channel>" line per (arc, channel) pair followed by one
 * "conflict <i> <j>" line per conflicting index pair. */
aggsched_status aggsched_dump_conflict_graph(const aggsched_wsn* w, int channels, char** out);

/* ---- experiment harness ------------------------------------------------ */

typedef struct aggsched_sim_params {
    const char* topology_path; /* NULL or empty -> random deployment */
    int sensors;
    double area_side;
    double range;
    int beta;
    int alpha;
    int channels;
    uint64_t seed;
    const char* algo;
    int timings; /* nonzero -> measure wall time; otherwise the column is 0 */
    int trace;
} aggsched_sim_params;

/* One validated run. csv receives header plus one row; the optional out
 * parameters receive the schedule text and (dcas) transcript. */
aggsched_status aggsched_simulate_csv(const aggsched_sim_params* params, char** csv,
                                      char** schedule_text_or_null, char** transcript_or_null);

typedef struct aggsched_sweep_params {
    const char* axis; /* "alpha", "channels", "sensors", "size" or "beta" */
    int sensors;
    double area_side;
    double range;
    int beta;
    const int* alphas;
    int n_alphas;
    const int* channels;
    int n_channels;
    const int* sensor_points;
    int n_sensor_points;
    const double* size_points;
    int n_size_points;
    const int* beta_points;
    int n_beta_points;
    int runs;
    uint64_t seed;
    const char* const* algos;
    int n_algos;
    int timings;
} aggsched_sweep_params;

/* Seeded replicated sweep along one axis; run r deploys with seed + r.
 * csv receives the full table plus '#'-prefixed per-point aggregate lines.
 * Every emitted row passed the validator. */
aggsched_status aggsched_sweep_csv(const aggsched_sweep_params* params, char** csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AGGSCHED_H */
