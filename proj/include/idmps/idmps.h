/* C interface to the idmps library.
 *
 * Objects are opaque handles created by idmps_*_create / build functions and
 * released with the matching *_free. Every fallible call returns an
 * idmps_status; on failure idmps_last_error() describes the problem for the
 * calling thread. Strings returned through char** are heap-allocated and must
 * be released with idmps_string_free.
 */
#ifndef IDMPS_IDMPS_H
#define IDMPS_IDMPS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(IDMPS_BUILDING_LIBRARY)
#    define IDMPS_API __declspec(dllexport)
#  else
#    define IDMPS_API __declspec(dllimport)
#  endif
#else
#  define IDMPS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum idmps_status {
  IDMPS_OK = 0,
  IDMPS_ERR_INPUT = 1,       /* invalid argument or precondition */
  IDMPS_ERR_DOMAIN = 2,      /* e.g. a kernel pole */
  IDMPS_ERR_NUMERICAL = 3,   /* series or eigensolver failure */
  IDMPS_ERR_CONSISTENCY = 4, /* internal post-condition, e.g. a vanishing state */
  IDMPS_ERR_IO = 5,
  IDMPS_ERR_INTERNAL = 6
} idmps_status;

typedef struct idmps_state idmps_state;
typedef struct idmps_hamiltonian idmps_hamiltonian;
typedef struct idmps_eigen idmps_eigen;
typedef struct idmps_scan idmps_scan;

IDMPS_API const char* idmps_version(void);
IDMPS_API const char* idmps_status_name(idmps_status s);
/* Message of the last failed call on this thread ("" if none). */
IDMPS_API const char* idmps_last_error(void);
IDMPS_API void idmps_string_free(char* s);

/* Worker cap; 0 restores the default (IDMPS_THREADS, else hardware). */
IDMPS_API idmps_status idmps_set_threads(int n);
IDMPS_API int idmps_get_threads(void);

/* ---- special functions ----------------------------------------------------
 * fn: "theta1".."theta4", "prime", "wp2", "wp3", "wp4"; tau = i * radius.
 * value = (re + i im) * exp(log_scale); log_scale may be NULL, in which case
 * the value is returned unscaled (and may overflow). */
IDMPS_API idmps_status idmps_special_eval(const char* fn, double z_re, double z_im, double radius,
                                          double* re, double* im, double* log_scale);
IDMPS_API idmps_status idmps_modular_residual(double radius, double z_re, double z_im, double* residual);

/* ---- states ------------------------------------------------------------- */
/* model "su2_1"/"su2_2", label "0", "half", "2", "3", "4"; cylinder != 0
 * ignores radius. su2_2 states are returned in the flavor basis. */
IDMPS_API idmps_status idmps_state_build(const char* model, const char* label, int n, double radius, int cylinder,
                                         idmps_state** out);
/* Measured <T>, total spin and discarded log-norm of a block state. */
IDMPS_API idmps_status idmps_state_block_info(const idmps_state* s, double* momentum_re, double* momentum_im,
                                              double* total_spin, double* global_log_scale);
/* which: mg+, mg-, aklt, aklt-circ, dimer0, dimer1, s1dimer+, s1dimer-, hs, hs-exc. */
IDMPS_API idmps_status idmps_state_reference(const char* which, int n, idmps_state** out);
/* u applied on every site for d = 3; a copy for d = 2. */
IDMPS_API idmps_status idmps_state_standard_basis(const idmps_state* s, idmps_state** out);
/* Thin-torus partner of a block state: target name and fidelity. *target is
 * a heap string. */
IDMPS_API idmps_status idmps_state_pairing(const idmps_state* s, char** target, double* fidelity);

IDMPS_API int idmps_state_sites(const idmps_state* s);
IDMPS_API int idmps_state_local_dim(const idmps_state* s);
IDMPS_API uint64_t idmps_state_size(const idmps_state* s);
/* Copies min(count, size) amplitudes as interleaved (re, im) pairs. */
IDMPS_API idmps_status idmps_state_amplitudes(const idmps_state* s, double* interleaved, uint64_t count);
IDMPS_API idmps_status idmps_state_from_amplitudes(int n, int d, const double* interleaved, uint64_t count,
                                                   idmps_state** out);
/* |<a|b>|^2 / (<a|a><b|b>) */
IDMPS_API idmps_status idmps_state_fidelity(const idmps_state* a, const idmps_state* b, double* out);

/* metadata_json may be NULL. */
IDMPS_API idmps_status idmps_state_save_json(const idmps_state* s, const char* path, const char* metadata_json);
IDMPS_API idmps_status idmps_state_save_binary(const idmps_state* s, const char* path);
/* Reads either format (binary is detected by its magic). */
IDMPS_API idmps_status idmps_state_load(const char* path, idmps_state** out);
IDMPS_API void idmps_state_free(idmps_state* s);

/* ---- Hamiltonians ------------------------------------------------------- */
/* kind: "hs", "j1j2", "qbq", "parent". j1, j2 are used by j1j2, theta by qbq. */
IDMPS_API idmps_status idmps_hamiltonian_create(const char* kind, int n, double j1, double j2, double theta,
                                                idmps_hamiltonian** out);
IDMPS_API void idmps_hamiltonian_free(idmps_hamiltonian* h);
/* States must be in the standard spin basis. */
IDMPS_API idmps_status idmps_hamiltonian_energy(const idmps_hamiltonian* h, const idmps_state* s, double* out);
IDMPS_API idmps_status idmps_hamiltonian_residual(const idmps_hamiltonian* h, const idmps_state* s, double e,
                                                  double* out);
/* k lowest eigenpairs; k <= 0 returns the full ground multiplet. */
IDMPS_API idmps_status idmps_hamiltonian_ground(const idmps_hamiltonian* h, int k, idmps_eigen** out);

IDMPS_API size_t idmps_eigen_count(const idmps_eigen* e);
IDMPS_API idmps_status idmps_eigen_value(const idmps_eigen* e, size_t i, double* energy, int* twice_sz,
                                         double* residual);
IDMPS_API idmps_status idmps_eigen_state(const idmps_eigen* e, size_t i, idmps_state** out);
IDMPS_API void idmps_eigen_free(idmps_eigen* e);

IDMPS_API idmps_status idmps_parent_check(int n, double* residual, double* min_eigenvalue);

/* ---- experiments -------------------------------------------------------- */
typedef enum idmps_objective { IDMPS_OBJECTIVE_ENERGY = 0, IDMPS_OBJECTIVE_FIDELITY = 1 } idmps_objective;
typedef enum idmps_scan_status {
  IDMPS_SCAN_INTERIOR = 0,
  IDMPS_SCAN_LOWER_EDGE = 1,
  IDMPS_SCAN_UNBOUNDED = 2
} idmps_scan_status;

typedef struct idmps_scan_options {
  const double* grid; /* NULL: default log grid on [0.02, 30] */
  size_t grid_len;
  idmps_objective objective;
  double refine_tol;
} idmps_scan_options;
IDMPS_API void idmps_scan_options_init(idmps_scan_options* o);

IDMPS_API idmps_status idmps_scan_radius(const char* model, const char* label, const idmps_hamiltonian* h,
                                         const idmps_scan_options* opts, idmps_scan** out);
IDMPS_API idmps_status idmps_scan_optimum(const idmps_scan* s, double* radius, double* energy,
                                          double* fidelity_per_site, idmps_scan_status* status);
IDMPS_API idmps_status idmps_scan_csv(const idmps_scan* s, char** out);
IDMPS_API idmps_status idmps_scan_json(const idmps_scan* s, char** out);
IDMPS_API void idmps_scan_free(idmps_scan* s);

/* param "J2" (base must be j1j2) or "theta" (base must be qbq). */
IDMPS_API idmps_status idmps_sweep(const char* model, const char* label, const idmps_hamiltonian* base,
                                   const char* param, const double* values, size_t n_values,
                                   const idmps_scan_options* opts, char** csv, char** json);

/* Infidelity of the block state against span(targets) per radius. */
IDMPS_API idmps_status idmps_limits(const char* model, const char* label, int n, const idmps_state* const* targets,
                                    size_t n_targets, const double* radii, size_t n_radii, char** csv,
                                    int* monotone_tail);

typedef struct idmps_suite_options {
  const int* sites; /* NULL: {4, 6} */
  size_t n_sites;
  const double* radii; /* NULL: {0.1, 1, 10} */
  size_t n_radii;
  int modular_samples;
  uint64_t seed;
  int omit_marshall_sign;
} idmps_suite_options;
IDMPS_API void idmps_suite_options_init(idmps_suite_options* o);
/* *passed is 1 when every check passes. Check failures are not errors. */
IDMPS_API idmps_status idmps_check_suite(const idmps_suite_options* o, char** json, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* IDMPS_IDMPS_H */
