#ifndef SOS_H
#define SOS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returns 0 on success or an error code; sos_last_error() describes the last failure
   on the calling thread. Strings returned through char** are owned by the caller (sos_string_free). */

enum {
    SOS_OK = 0,
    SOS_E_INVALID_ARGUMENT = 1,
    SOS_E_ENUMERATION_TOO_LARGE = 2,
    SOS_E_CAP_NOT_CONVERGED = 3,
    SOS_E_INCOMPATIBLE_SET = 4,
    SOS_E_NEGATIVE_HEIGHT = 5,
    SOS_E_ORDER_TOO_LARGE = 6,
    SOS_E_NON_ELEMENTARY_CYLINDER = 7,
    SOS_E_SITE_NOT_AT_ZERO = 8,
    SOS_E_DISCONNECTED = 9,
    SOS_E_TEMPLATE_MISMATCH = 10,
    SOS_E_PARAMS_OUT_OF_RANGE = 11,
    SOS_E_NOT_LARGE_SET = 12,
    SOS_E_REGION_TOO_LARGE = 13,
    SOS_E_PARAMS_INVALID = 14,
    SOS_E_EPSILON_RANGE = 15,
    SOS_E_PARSE = 16,
    SOS_E_IO = 17,
    SOS_E_INTERNAL = 99
};

const char* sos_last_error(void);
int sos_last_error_code(void);
void sos_string_free(char* s);

/* Model */
int sos_params_from_physical(double J, double K, double beta, double* t, double* u);
int sos_energy(int width, int height, int boundary, const int* heights, double t, double u, double* out);
int sos_log_partition(int width, int height, int boundary, double t, double u, int height_cap, double* log_z);

/* Cylinders: decomposition of a height field to debug text and back. */
int sos_decompose(int width, int height, int boundary, const int* heights, char** text);
int sos_reconstruct(const char* text, int width, int height, int* heights_out);

/* Perturbation catalog */
typedef struct sos_catalog sos_catalog;
int sos_catalog_build(int k, int h, int N, const char* cache_dir, sos_catalog** out);
size_t sos_catalog_size(const sos_catalog* c);
long sos_catalog_count(const sos_catalog* c, int norm, int wall);
uint64_t sos_catalog_hash(const sos_catalog* c);
int sos_catalog_serialize(const sos_catalog* c, char** text);
void sos_catalog_free(sos_catalog* c);

/* Series */
typedef struct sos_series sos_series;
int sos_free_energy(int h, int k, int N, sos_series** out);
int sos_free_energy_difference(int h, int k, int N, sos_series** out);
int sos_series_dump(const sos_series* s, char** text);
int sos_series_pretty(const sos_series* s, char** text);
int sos_series_evaluate(const sos_series* s, double t, double u, double* out);
void sos_series_free(sos_series* s);
int sos_dominant_level(double t, double u, int k, int N, int h_max, int* level, double* margin, int* trusted);

/* Phase diagram */
int sos_chalker_classify(double J, double K, double beta, int* classification); /* 0 partial, 1 complete, 2 unresolved */
int sos_layering_windows(double t, double epsilon, int n_max, double* lo, double* hi); /* arrays of n_max+1 */
int sos_verify_coefficients(int k, int N, char** table, int* exit_code);

/* Monte Carlo */
typedef struct {
    int width, height, boundary;
    double t, u, J;
    long sweeps, burn_in;
    int thin;
    uint64_t seed;
    int metropolis;   /* 0 heat bath, 1 metropolis */
    int height_cap;   /* 0: unbounded */
    int z_max;
    int batches;
} sos_chain_config;

void sos_chain_config_default(sos_chain_config* c);
/* rho_z and rho_z_se need z_max+1 slots each; either may be NULL. */
int sos_run_chain(const sos_chain_config* c, double* rho0, double* rho0_se, int* majority_level, double* not_at_n,
                  double* not_at_n_se, double* rho_z, double* rho_z_se, char** csv_row);

/* CLI commands; output text is what the command prints, exit code is the process status. */
int sos_cmd_verify_coefficients(int k, int N, char** text, int* exit_code);
int sos_cmd_free_energy(int h, int k, int N, const char* output_dir, char** text);
int sos_cmd_windows(double t, double epsilon, int n_max, char** text);
int sos_cmd_chalker(double J, const char* beta_grid, const char* K_grid, char** text);
int sos_cmd_scan(const char* spec_path, const char* output_dir, char** text);
/* has_seed = 0 takes the seed from the spec file. */
int sos_cmd_simulate(const char* spec_path, const char* output_dir, int has_seed, uint64_t seed, char** text);
int sos_cmd_oracle(const char* spec_path, const char* output_dir, char** text);
int sos_default_output_dir(char** text);

#ifdef __cplusplus
}
#endif

#endif
