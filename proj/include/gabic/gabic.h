/* C interface to the giant-atom waveguide simulator. All entry points return
 * a gabic_status; on failure gabic_last_error() describes the problem for the
 * calling thread. Strings returned through out-parameters are owned by the
 * caller and released with gabic_string_free(). */
#ifndef GABIC_GABIC_H
#define GABIC_GABIC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gabic_status {
  GABIC_OK = 0,
  GABIC_ERR_VALIDATION = 2,
  GABIC_ERR_MODEL_UNAVAILABLE = 3,
  GABIC_ERR_INTERNAL = 4,
  GABIC_ERR_IO = 5,
  GABIC_ERR_ARG = 6,
} gabic_status;

typedef struct gabic_config gabic_config;
typedef struct gabic_model gabic_model;

const char* gabic_version(void);

/* Message from the most recent failing call on this thread, or NULL. */
const char* gabic_last_error(void);

void gabic_string_free(char* s);

/* Configuration ------------------------------------------------------- */

gabic_status gabic_config_load(const char* path, gabic_config** out);
gabic_status gabic_config_parse(const char* text, gabic_config** out);
gabic_status gabic_config_set(gabic_config* cfg, const char* key, const char* value);
void gabic_config_free(gabic_config* cfg);

/* Newline-separated violation list in *out; empty string when runnable.
 * subcommand may be NULL for the base checks. */
gabic_status gabic_config_validate(const gabic_config* cfg, const char* subcommand,
                                   char** out);

/* Execution ----------------------------------------------------------- */

/* Runs one subcommand (spectrum, bic, boc, dynamics, beats, sweep,
 * selfcheck) and writes artifacts plus a manifest under out_dir. out_dir and
 * format may be NULL to use the configured values; manifest_out may be NULL
 * when the JSON manifest text is not wanted. */
gabic_status gabic_run(const gabic_config* cfg, const char* subcommand,
                       const char* out_dir, const char* format, int jobs,
                       uint64_t seed, char** manifest_out);

/* Bound-state model --------------------------------------------------- */

gabic_status gabic_model_create(const gabic_config* cfg, gabic_model** out);
void gabic_model_free(gabic_model* m);

/* energies[3] = {lower BOC, BIC, upper BOC}; a missing state reports NAN. */
gabic_status gabic_model_bound_state_energies(const gabic_model* m, double energies[3]);

/* detunings[2] = {E_I - E_L, E_U - E_I}; fails with MODEL_UNAVAILABLE when a
 * bound state is missing. */
gabic_status gabic_model_detunings(const gabic_model* m, double detunings[2]);

/* Whether the resonant coupling amplitude vanishes for this configuration. */
gabic_status gabic_model_bic_condition(const gabic_model* m, int* holds);

/* Analytic BIC profile on sites [leg0 - margin, legN + margin], interleaved
 * re/im pairs. *n_sites reports the required pair count when out is NULL. */
gabic_status gabic_model_bic_profile(const gabic_model* m, int margin, double* out,
                                     size_t* n_sites);

#ifdef __cplusplus
}
#endif

#endif /* GABIC_GABIC_H */
