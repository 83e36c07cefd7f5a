/* Linear stability and dynamic transitions of rotating magnetoconvection: C interface. */
#ifndef RMC_RMC_H
#define RMC_RMC_H

#include <stddef.h>

#if defined(RMC_BUILDING_LIBRARY)
#define RMC_API __attribute__((visibility("default")))
#else
#define RMC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmc_status {
    RMC_OK = 0,
    RMC_ERR_VALIDATION = 1,
    RMC_ERR_INVALID_INDEX = 2,
    RMC_ERR_DEGENERATE_CUBIC = 3,
    RMC_ERR_SINGULAR_EIGENVECTOR = 4,
    RMC_ERR_NO_HOPF = 5,
    RMC_ERR_SEARCH_FAILURE = 6,
    RMC_ERR_DEGENERATE = 7,
    RMC_ERR_RESONANT_SUB_MODE = 8,
    RMC_ERR_NON_GENERIC = 9,
    RMC_ERR_NO_SUCH_STATE = 10,
    RMC_ERR_BOUNDARY_AMBIGUOUS = 11,
    RMC_ERR_IO = 12,
    RMC_ERR_BLOW_UP = 13,
    RMC_ERR_INCONCLUSIVE = 14,
    RMC_ERR_INTERNAL = 15,
    RMC_ERR_NULL_ARGUMENT = 16
} rmc_status;

typedef enum rmc_kind { RMC_SIMPLE_REAL = 0, RMC_COMPLEX_PAIR = 1, RMC_DOUBLE_REAL = 2 } rmc_kind;

/* Opaque session: holds the last error message. Not thread-safe; use one session per thread. */
typedef struct rmc_session rmc_session;
/* Opaque list of named text payloads produced by a command. */
typedef struct rmc_result rmc_result;

typedef struct rmc_params {
    double Ta, Q, Pr, L1, L2;
    double Ra;  /* used only when has_ra != 0 */
    int has_ra;
} rmc_params;

typedef struct rmc_critical {
    double ra_c1, ra_c2, ra_c;
    rmc_kind kind;
    int multiplicity;
    int n_modes;       /* entries used in modes */
    int modes[2][3];   /* (j, k, l) of the critical index set */
    double hopf_rho;   /* 0 unless kind is RMC_COMPLEX_PAIR */
    int pes_ok;
    int non_generic;
} rmc_critical;

RMC_API const char* rmc_version(void);
RMC_API const char* rmc_status_name(rmc_status s);
/* Process exit code for a status: 0 success, 2 config error, 3 non-generic or absent state, 4 internal failure. */
RMC_API int rmc_status_exit_code(rmc_status s);

RMC_API rmc_status rmc_session_create(rmc_session** out);
RMC_API void rmc_session_destroy(rmc_session* s);
/* Message of the last failed call on this session; empty after a success. */
RMC_API const char* rmc_session_last_error(const rmc_session* s);

/* Runs "critical", "transition", "sweep", "fields" or "oracle" on a JSON config document. */
RMC_API rmc_status rmc_run(rmc_session* s, const char* command, const char* config_json, rmc_result** out);

RMC_API size_t rmc_result_count(const rmc_result* r);
RMC_API const char* rmc_result_name(const rmc_result* r, size_t i);
/* NUL-terminated payload; length (optional) receives its size in bytes. */
RMC_API const char* rmc_result_data(const rmc_result* r, size_t i, size_t* length);
RMC_API void rmc_result_destroy(rmc_result* r);

RMC_API rmc_status rmc_critical_search(rmc_session* s, const rmc_params* p, rmc_critical* out);

/* Eigenvalues of one index at p->Ra (required), sorted by descending real part. */
RMC_API rmc_status rmc_mode_eigenvalues(rmc_session* s, const rmc_params* p, int j, int k, int l, double re[3],
                                        double im[3], int* count);

#ifdef __cplusplus
}
#endif

#endif /* RMC_RMC_H */
