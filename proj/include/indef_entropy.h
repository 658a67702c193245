#ifndef INDEF_ENTROPY_H
#define INDEF_ENTROPY_H

#include <stdint.h>

#if defined(_WIN32)
#if defined(IE_BUILDING_LIBRARY)
#define IE_API __declspec(dllexport)
#else
#define IE_API __declspec(dllimport)
#endif
#else
#define IE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returning int returns one of these; on failure
   ie_last_error() holds a message for the calling thread. */
enum {
    IE_OK = 0,
    IE_INVALID_ARGUMENT = 1,
    IE_NON_HERMITIAN_INPUT = 2,
    IE_SINGULAR_S = 3,
    IE_AMBIGUOUS_INERTIA = 4,
    IE_RANK_DEFICIENT_Y = 5,
    IE_EVALUATION_FAILURE = 6,
    IE_INCONSISTENT_CONDITIONS = 7,
    IE_POLE_HIT = 8,
    IE_POLE_PROXIMITY = 9,
    IE_SINGULAR_PHAT = 10,
    IE_BOUNDARY_POLE = 11,
    IE_FRAME_POLE = 12,
    IE_DENOMINATOR_SINGULAR = 13,
    IE_SOLUTION_POLE = 14,
    IE_RESOLVENT_POLE = 15,
    IE_POLE_INSIDE_RADIUS = 16,
    IE_NON_CONVERGENT = 17,
    IE_COEFFICIENT_MISMATCH = 18,
    IE_NON_INTEGRABLE = 19,
    IE_NO_CONVERGENCE = 20,
    IE_PARAMETER_POLE = 21,
    IE_ZERO_ON_CONTOUR = 22,
    IE_COUNT_MISMATCH = 23,
    IE_CONDITIONING_BREAKDOWN = 24,
    IE_GENERATION_EXHAUSTED = 25,
    IE_DEGENERATE_PARAMETER = 26,
    IE_IO = 27,
    IE_INTERNAL = 28,
    IE_UNKNOWN = 99
};

enum { IE_MODE_PAIR = 0, IE_MODE_CONTRACTIVE = 1 };

typedef struct ie_triple ie_triple;
typedef struct ie_solution ie_solution;
typedef struct ie_scenario ie_scenario;

/* Complex values travel as interleaved (re, im) doubles. A p x p matrix is
   p*p complex entries in row-major order, i.e. 2*p*p doubles. */

IE_API const char* ie_version(void);
IE_API const char* ie_status_name(int status);
IE_API const char* ie_last_error(void);

/* Toeplitz data s_0..s_{n-1} (n consecutive p x p matrices) and nu (NULL for
   zero). Builds the structured triple; fails with IE_SINGULAR_S,
   IE_NON_HERMITIAN_INPUT, IE_AMBIGUOUS_INERTIA. */
IE_API int ie_triple_create(int p, int n, const double* blocks, const double* nu, ie_triple** out);
IE_API int ie_triple_generate(uint64_t seed, int p, int n, int kappa_target, ie_triple** out);
IE_API void ie_triple_destroy(ie_triple* triple);
IE_API int ie_triple_shape(const ie_triple* triple, int* p, int* n, int* kappa);
IE_API int ie_triple_displacement_residual(const ie_triple* triple, double* out);
IE_API int ie_triple_j_unitarity(const ie_triple* triple, double z_re, double z_im, double* out);

/* Constant Nevanlinna parameter psi (NULL for psi = i I). */
IE_API int ie_solution_create(const ie_triple* triple, const double* psi, int mode, ie_solution** out);
/* Constant strict contraction phi0; evaluated in the contractive form. */
IE_API int ie_solution_create_contraction(const ie_triple* triple, const double* phi0, ie_solution** out);
IE_API void ie_solution_destroy(ie_solution* solution);
IE_API int ie_solution_eval(const ie_solution* solution, double z_re, double z_im, double* out);
IE_API int ie_solution_omega_star(const ie_solution* solution, double l_re, double l_im, double* out);
IE_API int ie_solution_q_tilde(const ie_solution* solution, double l_re, double l_im, double* out);
/* star != 0: E_star(phi, l); otherwise E(phi, l). */
IE_API int ie_solution_entropy(const ie_solution* solution, double l_re, double l_im, int star, double* out);
/* Zeros of q_tilde in the disk; lambdas (2 * capacity doubles) may be NULL. */
IE_API int ie_solution_zeros(const ie_solution* solution, int* total, int* distinct, double* lambdas, int capacity);

IE_API int ie_scenario_parse(const char* json, ie_scenario** out);
IE_API int ie_scenario_generate(uint64_t seed, ie_scenario** out);
IE_API void ie_scenario_destroy(ie_scenario* scenario);
IE_API int ie_scenario_set_seed(ie_scenario* scenario, uint64_t seed);
IE_API int ie_scenario_set_i_max(ie_scenario* scenario, int i_max);
IE_API int ie_scenario_set_tolerance(ie_scenario* scenario, const char* key, double value);
/* Comma-separated experiment names, e.g. "interpolation,entropy_identity". */
IE_API int ie_scenario_set_experiments(ie_scenario* scenario, const char* names);
/* JSON text of the scenario; release with ie_string_free. */
IE_API int ie_scenario_to_json(const ie_scenario* scenario, char** out);
/* Output directory recorded in the scenario; release with ie_string_free. */
IE_API int ie_scenario_output_dir(const ie_scenario* scenario, char** out);
/* Runs the scenario into out_dir (NULL: the scenario's own directory).
   *passed is 1 iff every experiment passed. */
IE_API int ie_scenario_run(const ie_scenario* scenario, const char* out_dir, int* passed);
IE_API void ie_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif
