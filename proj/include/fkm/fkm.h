/*
 * fkm -- Finsler almost-Kahler mechanics toolkit, C API.
 *
 * The library is consumed through opaque handles and integer status
 * codes; every artifact (reports, trajectories, sweeps) is returned as
 * a heap string owned by the library and released with fkm_string_free.
 * Status values match the CLI exit codes.
 */

#ifndef FKM_FKM_H
#define FKM_FKM_H

#include <stddef.h>

#if defined(_WIN32)
#define FKM_API __declspec(dllexport)
#else
#define FKM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fkm_status {
  FKM_OK = 0,
  FKM_CHECK_FAILED = 1,  /* a validation / verification check failed   */
  FKM_CONFIG_ERROR = 2,  /* malformed or inconsistent configuration    */
  FKM_DOMAIN_ERROR = 3,  /* numeric or domain failure                  */
  FKM_MISUSE = 4         /* null handle or bad argument                */
} fkm_status;

typedef enum fkm_command {
  FKM_CMD_VALIDATE = 0,
  FKM_CMD_DERIVE = 1,
  FKM_CMD_SIMULATE = 2,
  FKM_CMD_VERIFY = 3,
  FKM_CMD_EINSTEIN = 4
} fkm_command;

typedef enum fkm_format {
  FKM_FORMAT_DEFAULT = 0,
  FKM_FORMAT_CSV = 1,
  FKM_FORMAT_JSON = 2
} fkm_format;

FKM_API const char* fkm_version(void);
FKM_API const char* fkm_status_name(fkm_status status);

/* Message describing the most recent failure on this thread ("" when
 * the last call succeeded). */
FKM_API const char* fkm_last_error(void);

FKM_API void fkm_string_free(char* s);

/* ---- sessions: a parsed run configuration (JSON document) ---- */

typedef struct fkm_session fkm_session;

FKM_API fkm_status fkm_session_create(const char* config_json,
                                      fkm_session** out);
FKM_API void fkm_session_destroy(fkm_session* session);

/* Runs one command; *artifact_out receives the CSV/JSON payload (may be
 * non-null even on FKM_DOMAIN_ERROR, e.g. a partial trajectory). */
FKM_API fkm_status fkm_session_run(fkm_session* session, fkm_command command,
                                   fkm_format format, char** artifact_out);

/* Human-readable summary or error of the last run on this session. */
FKM_API const char* fkm_session_message(const fkm_session* session);

/* ---- metrics: pointwise geometry without a full session ---- */

typedef struct fkm_metric fkm_metric;

/* metric_json is the "metric" configuration object, e.g.
 *   {"kind": "randers", "dimension": 2, "parameters": {"b": [0.5, 0]}} */
FKM_API fkm_status fkm_metric_create(const char* metric_json,
                                     fkm_metric** out);
FKM_API void fkm_metric_destroy(fkm_metric* metric);
FKM_API int fkm_metric_dimension(const fkm_metric* metric);

/* x and y point at n doubles; outputs are row-major where matrices. */
FKM_API fkm_status fkm_metric_fundamental(const fkm_metric* metric,
                                          const double* x, const double* y,
                                          double* f_out);
FKM_API fkm_status fkm_metric_tensor(const fkm_metric* metric, const double* x,
                                     const double* y, double* g_out);
FKM_API fkm_status fkm_metric_energy_density(const fkm_metric* metric,
                                             const double* x, const double* y,
                                             double* t_out);
FKM_API fkm_status fkm_metric_spray(const fkm_metric* metric, const double* x,
                                    const double* y, double* spray_out);
FKM_API fkm_status fkm_metric_connection(const fkm_metric* metric,
                                         const double* x, const double* y,
                                         double* n_out);

/* ---- Kahler-Einstein corollary functions ---- */

/* u = A + sqrt(A^2 - 2ct), v in its cancellation-free form, and the
 * integrability defect |v - (c - u u')/(2t u' - u)|. Any output pointer
 * may be NULL. */
FKM_API fkm_status fkm_einstein_uv(double A, double c, double t, double* u_out,
                                   double* v_out, double* defect_out);

#ifdef __cplusplus
}
#endif

#endif /* FKM_FKM_H */
