/* C interface to the ptnoether library. All functions are thread-safe; the last-error text is per thread. */
#ifndef PTNOETHER_H
#define PTNOETHER_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ptn_status {
  PTN_OK = 0,
  PTN_ERR_INVALID_ARGUMENT = 1,
  PTN_ERR_CONFIG = 2,
  PTN_ERR_NUMERIC = 3,
  PTN_ERR_REGIME = 4,
  PTN_ERR_IO = 5,
  PTN_ERR_INTERNAL = 6
} ptn_status;

typedef enum ptn_convention { PTN_CONVENTION_PAPER = 0, PTN_CONVENTION_UNIT = 1 } ptn_convention;

typedef enum ptn_regime { PTN_REGIME_UNBROKEN = 0, PTN_REGIME_BROKEN = 1, PTN_REGIME_EXCEPTIONAL_POINT = 2 } ptn_regime;

typedef struct ptn_system ptn_system;
typedef struct ptn_trajectory ptn_trajectory;
typedef struct ptn_circuit ptn_circuit;

const char* ptn_version(void);
/* Message for the most recent failing call on this thread; empty string if none. */
const char* ptn_last_error(void);
/* Frees strings returned through char** out-parameters. */
void ptn_string_free(char* s);

/* dim 2: single qubit, dim 4: two qubits, dim 3: spin-1 with gamma = a * s. */
ptn_status ptn_system_create(int dim, double s, double a, ptn_convention conv, ptn_system** out);
void ptn_system_destroy(ptn_system* sys);
ptn_status ptn_system_dim(const ptn_system* sys, int* out);
ptn_status ptn_system_regime(const ptn_system* sys, ptn_regime* out);
/* Writes min(capacity, dim) eigenvalues; *count receives dim. */
ptn_status ptn_system_eigenvalues(const ptn_system* sys, double* re, double* im, size_t capacity, size_t* count);

/* Pure initial state given by n computational-basis amplitudes (psi_im may be NULL).
   observable: a name such as "tilde_z", "sigma_y", "tilde_S_y". Times: points >= 2 over [t0, t1]. */
ptn_status ptn_trajectory_compute(const ptn_system* sys, const double* psi_re, const double* psi_im, size_t n,
                                  const char* observable, double t0, double t1, size_t points, ptn_trajectory** out);
size_t ptn_trajectory_length(const ptn_trajectory* tr);
ptn_status ptn_trajectory_value(const ptn_trajectory* tr, size_t i, double* t, double* re, double* im);
void ptn_trajectory_destroy(ptn_trajectory* tr);

ptn_status ptn_circuit_compile(const ptn_system* sys, double t, double tol, ptn_circuit** out);
/* phase_insensitive: best complex scale; strict: best real positive scale. Either pointer may be NULL. */
ptn_status ptn_circuit_residuals(const ptn_circuit* c, double* phase_insensitive, double* strict);
ptn_status ptn_circuit_serialize(const ptn_circuit* c, char** out);
void ptn_circuit_destroy(ptn_circuit* c);

/* Pipelines behind the command-line tool. out_text/out_summary may be NULL. */
ptn_status ptn_run_config_file(const char* path, char** out_summary);
ptn_status ptn_write_figure(int which, const char* out_dir, char** out_summary);
ptn_status ptn_decompose(double s, double a, double t, double tol, char** out_text);
ptn_status ptn_symmetries_file(const char* matrix_path, const char* kind, double tol, char** out_text);
ptn_status ptn_tomography_config_file(const char* path, const char* out_dir, char** out_summary);

#ifdef __cplusplus
}
#endif

#endif /* PTNOETHER_H */
