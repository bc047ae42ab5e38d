/*
  Copyright 2026 The qmimo Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef QMIMO_H_INCLUDED
#define QMIMO_H_INCLUDED

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QMIMO_BUILDING)
#    define QMIMO_EXPORT __declspec(dllexport)
#  else
#    define QMIMO_EXPORT __declspec(dllimport)
#  endif
#else
#  define QMIMO_EXPORT __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/*
 * Status codes. Every fallible call returns one; on failure the message is
 * available from qmimo_last_error() on the calling thread.
 */
typedef enum qmimo_status_ {
  QMIMO_OK = 0,
  QMIMO_ERR_INVALID_ARGUMENT = 1,
  QMIMO_ERR_SINGULAR_GRAM = 2,
  QMIMO_ERR_LENGTH_MISMATCH = 3,
  QMIMO_ERR_DIMENSION_MISMATCH = 4,
  QMIMO_ERR_NO_CONVERGENCE = 5,
  QMIMO_ERR_UNREACHABLE = 6,
  QMIMO_ERR_INFINITE_PRECISION = 7,
  QMIMO_ERR_IO = 8,
  QMIMO_ERR_USAGE = 9,
  QMIMO_ERR_INTERNAL = 100
} qmimo_status;

/* Resolution value meaning full precision (no quantizer). */
#define QMIMO_BITS_INF 0u

typedef enum qmimo_quantizer_kind_ {
  QMIMO_QUANTIZER_NONE = 0,
  QMIMO_QUANTIZER_UNIFORM = 1,
  QMIMO_QUANTIZER_LLOYD_MAX = 2
} qmimo_quantizer_kind;

typedef enum qmimo_agc_mode_ {
  QMIMO_AGC_ANALYTIC = 0,
  QMIMO_AGC_EMPIRICAL = 1,
  QMIMO_AGC_PER_ANTENNA = 2
} qmimo_agc_mode;

typedef struct qmimo_config_ qmimo_config;
typedef struct qmimo_curve_ qmimo_curve;
typedef struct qmimo_quantizer_ qmimo_quantizer;

typedef struct qmimo_point_ {
  double snr_db_per_bit;
  double gamma0;
  double gamma_q0;
  uint64_t bits_sent;
  uint64_t bit_errors;
  double ber_numerical;
  double ber_analytical_full;
  double ber_analytical_twoterm;
  uint64_t channel_draws;
  uint64_t singular_redraws;
  int saturated;
} qmimo_point;

QMIMO_EXPORT const char* qmimo_version(void);
QMIMO_EXPORT const char* qmimo_last_error(void);
QMIMO_EXPORT const char* qmimo_status_name(qmimo_status status);

/* Simulation configuration. Defaults: QPSK, N=100, K=10, full precision,
   100 symbols per channel, 500 errors / 1e9 bits, seed 1, per-antenna AGC. */
QMIMO_EXPORT qmimo_status qmimo_config_create(qmimo_config** out);
QMIMO_EXPORT void qmimo_config_destroy(qmimo_config* cfg);
QMIMO_EXPORT qmimo_status qmimo_config_set_modulation(qmimo_config* cfg, unsigned m);
QMIMO_EXPORT qmimo_status qmimo_config_set_link(qmimo_config* cfg, size_t antennas,
                                                size_t users);
QMIMO_EXPORT qmimo_status qmimo_config_set_resolution(qmimo_config* cfg, unsigned bits,
                                                      qmimo_quantizer_kind kind);
QMIMO_EXPORT qmimo_status qmimo_config_set_snr_grid(qmimo_config* cfg,
                                                    const double* snr_db, size_t count);
QMIMO_EXPORT qmimo_status qmimo_config_set_symbols_per_channel(qmimo_config* cfg,
                                                               size_t symbols);
QMIMO_EXPORT qmimo_status qmimo_config_set_stopping(qmimo_config* cfg,
                                                    uint64_t min_bit_errors,
                                                    uint64_t max_bits);
QMIMO_EXPORT qmimo_status qmimo_config_set_seed(qmimo_config* cfg, uint64_t seed);
QMIMO_EXPORT qmimo_status qmimo_config_set_agc(qmimo_config* cfg, qmimo_agc_mode mode);
/* 0 selects QMIMO_WORKERS from the environment, else hardware concurrency. */
QMIMO_EXPORT qmimo_status qmimo_config_set_workers(qmimo_config* cfg, unsigned workers);
QMIMO_EXPORT qmimo_status qmimo_config_validate(const qmimo_config* cfg);

/* Monte Carlo sweep over the configured SNR grid. */
QMIMO_EXPORT qmimo_status qmimo_run_sweep(const qmimo_config* cfg, qmimo_curve** out);
QMIMO_EXPORT qmimo_status qmimo_run_trial(const qmimo_config* cfg, size_t snr_index,
                                          uint64_t trial_index, uint64_t* bits_sent,
                                          uint64_t* bit_errors);
QMIMO_EXPORT void qmimo_curve_destroy(qmimo_curve* curve);
QMIMO_EXPORT size_t qmimo_curve_size(const qmimo_curve* curve);
QMIMO_EXPORT qmimo_status qmimo_curve_point(const qmimo_curve* curve, size_t index,
                                            qmimo_point* out);
QMIMO_EXPORT qmimo_status qmimo_curve_write_csv(const qmimo_curve* curve,
                                                const qmimo_config* cfg,
                                                const char* path);
QMIMO_EXPORT qmimo_status qmimo_write_plot_script(const char* csv_path,
                                                  const char* script_path);

/* Closed-form analytics. bits = QMIMO_BITS_INF means full precision. */
QMIMO_EXPORT qmimo_status qmimo_aqnm_params(unsigned bits, double* rho, double* alpha);
QMIMO_EXPORT qmimo_status qmimo_gamma_q0(double sigma_x2, double sigma_n2, size_t users,
                                         double alpha, double* out);
QMIMO_EXPORT qmimo_status qmimo_ber_full(unsigned m, size_t antennas, size_t users,
                                         unsigned bits, double gamma0, double* out);
QMIMO_EXPORT qmimo_status qmimo_ber_twoterm(unsigned m, size_t antennas, size_t users,
                                            unsigned bits, double gamma0, double* out);
QMIMO_EXPORT qmimo_status qmimo_ber_floor(unsigned m, size_t antennas, size_t users,
                                          unsigned bits, double* out);
QMIMO_EXPORT qmimo_status qmimo_snr_for_ber(unsigned m, size_t antennas, size_t users,
                                            unsigned bits, double target, double* gamma0);
QMIMO_EXPORT qmimo_status qmimo_ber_degradation(unsigned m, size_t antennas,
                                                size_t users, unsigned bits,
                                                double target, double* db);

/* Scalar quantizer design for a unit-variance Gaussian input. */
QMIMO_EXPORT qmimo_status qmimo_quantizer_design(unsigned bits, qmimo_quantizer_kind kind,
                                                 qmimo_quantizer** out);
QMIMO_EXPORT void qmimo_quantizer_destroy(qmimo_quantizer* q);
QMIMO_EXPORT size_t qmimo_quantizer_levels(const qmimo_quantizer* q, double* levels,
                                           size_t capacity);
QMIMO_EXPORT size_t qmimo_quantizer_thresholds(const qmimo_quantizer* q,
                                               double* thresholds, size_t capacity);
QMIMO_EXPORT double qmimo_quantizer_distortion(const qmimo_quantizer* q);
QMIMO_EXPORT double qmimo_quantizer_apply(const qmimo_quantizer* q, double z);
QMIMO_EXPORT qmimo_status qmimo_quantizer_write_table(const qmimo_quantizer* q,
                                                      const char* path);

/* Reports. min_bit_errors/max_bits/seed/workers apply to the Monte Carlo
   cells of the floor table; simulate = 0 emits analytical values only. */
QMIMO_EXPORT qmimo_status qmimo_preset_table2(const char* path, uint64_t min_bit_errors,
                                              uint64_t max_bits, uint64_t seed,
                                              unsigned workers, int simulate);
QMIMO_EXPORT qmimo_status qmimo_preset_degradation(const char* path, double target);

#ifdef __cplusplus
}
#endif

#endif /* QMIMO_H_INCLUDED */
