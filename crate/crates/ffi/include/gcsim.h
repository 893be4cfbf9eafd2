#ifndef GCSIM_H
#define GCSIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GcsimStatus {
  GCSIM_STATUS_OK = 0,
  GCSIM_STATUS_IO = 1,
  GCSIM_STATUS_VALIDATION = 2,
  GCSIM_STATUS_LOGIC = 3,
  GCSIM_STATUS_NULL_POINTER = 4,
  GCSIM_STATUS_INVALID_ARGUMENT = 5,
  GCSIM_STATUS_DOMAIN = 6,
  GCSIM_STATUS_PANIC = 7,
} GcsimStatus;

// Aggregated results of one scenario run.
typedef struct GcsimReport GcsimReport;

// A parsed, not yet validated scenario.
typedef struct GcsimScenario GcsimScenario;

// One metric of a report. `std_error` and `ci95_half` are NaN when fewer than
// two replications were run.
typedef struct GcsimSummary {
  double mean;
  double std_error;
  double ci95_half;
  uint32_t replications;
} GcsimSummary;

typedef struct GcsimBlocking {
  double new_call;
  double handoff;
} GcsimBlocking;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse a scenario from a JSON document. On success `*out` receives a new
// handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum GcsimStatus gcsim_scenario_from_json(const char *json, struct GcsimScenario **out);

// Replace the scheme, given by name (`FCA`, `StaticGC`, `DynamicGC`,
// `DGCA_CBS`).
//
// # Safety
// `scenario` must come from [`gcsim_scenario_from_json`]; `scheme` must be
// NUL-terminated.
enum GcsimStatus gcsim_scenario_set_scheme(struct GcsimScenario *scenario, const char *scheme);

// Check a scenario without running it.
//
// # Safety
// `scenario` must be a live handle.
enum GcsimStatus gcsim_scenario_validate(const struct GcsimScenario *scenario);

// # Safety
// `scenario` must be null or a handle not yet freed.
void gcsim_scenario_free(struct GcsimScenario *scenario);

// Run every replication and aggregate. Worker threads follow
// `GCSIM_THREADS`; results do not depend on it.
//
// # Safety
// `scenario` must be a live handle and `out` a valid pointer.
enum GcsimStatus gcsim_run(const struct GcsimScenario *scenario, struct GcsimReport **out);

// Look up a metric by name: `new_call_blocking`, `handoff_blocking`,
// `forced_termination`, `carried_load` or `mean_guard_count`.
//
// # Safety
// `report` must be a live handle, `metric` NUL-terminated and `out` valid.
enum GcsimStatus gcsim_report_metric(const struct GcsimReport *report,
                                     const char *metric,
                                     struct GcsimSummary *out);

// Render the report as CSV. The returned string is released with
// [`gcsim_string_free`].
//
// # Safety
// `report` must be a live handle and `scenario_id` NUL-terminated; `out`
// must be valid.
enum GcsimStatus gcsim_report_to_csv(const struct GcsimReport *report,
                                     const char *scenario_id,
                                     char **out);

// # Safety
// `report` must be null or a handle not yet freed.
void gcsim_report_free(struct GcsimReport *report);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void gcsim_string_free(char *s);

// Exact blocking of a single cell with `guard` of `channels` channels
// reserved for handoffs.
//
// # Safety
// `out` must be a valid pointer.
enum GcsimStatus gcsim_oracle_blocking(uint32_t channels,
                                       uint32_t guard,
                                       double new_rate,
                                       double handoff_rate,
                                       double service_rate,
                                       struct GcsimBlocking *out);

// # Safety
// `out` must be a valid pointer.
enum GcsimStatus gcsim_erlang_b(uint32_t channels, double load, double *out);

// Copy the last error message of this thread into `buf`, truncated and
// NUL-terminated. Returns the full message length in bytes.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
uintptr_t gcsim_last_error(char *buf, uintptr_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GCSIM_H */
