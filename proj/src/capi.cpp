// Copyright 2026 The qmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmimo/qmimo.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <new>
#include <string>

#include "qmimo/analytics.hpp"
#include "qmimo/error.hpp"
#include "qmimo/harness.hpp"
#include "qmimo/quantizer.hpp"

// Opaque handle types wrap the C++ values directly.
struct qmimo_config_ {
  qmimo::SimConfig cfg;
};
struct qmimo_curve_ {
  qmimo::BerCurve curve;
};
struct qmimo_quantizer_ {
  qmimo::QuantizerSpec spec;
};

namespace {

thread_local std::string g_last_error;

qmimo_status to_status(qmimo::ErrorCode code) {
  using qmimo::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return QMIMO_ERR_INVALID_ARGUMENT;
    case ErrorCode::SingularGram: return QMIMO_ERR_SINGULAR_GRAM;
    case ErrorCode::LengthMismatch: return QMIMO_ERR_LENGTH_MISMATCH;
    case ErrorCode::DimensionMismatch: return QMIMO_ERR_DIMENSION_MISMATCH;
    case ErrorCode::NoConvergence: return QMIMO_ERR_NO_CONVERGENCE;
    case ErrorCode::Unreachable: return QMIMO_ERR_UNREACHABLE;
    case ErrorCode::InfinitePrecision: return QMIMO_ERR_INFINITE_PRECISION;
    case ErrorCode::IoFailure: return QMIMO_ERR_IO;
    case ErrorCode::UsageError: return QMIMO_ERR_USAGE;
  }
  return QMIMO_ERR_INTERNAL;
}

template <class Fn>
qmimo_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return QMIMO_OK;
  } catch (const qmimo::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QMIMO_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QMIMO_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QMIMO_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) {
    qmimo::fail(qmimo::ErrorCode::InvalidArgument, std::string(what) + " is null");
  }
}

qmimo::Resolution resolution_of(unsigned bits) {
  return bits == QMIMO_BITS_INF ? qmimo::Resolution::infinite()
                                : qmimo::Resolution::finite(bits);
}

qmimo::BerQuery query(unsigned m, size_t n, size_t k, unsigned bits, double gamma0) {
  qmimo::BerQuery q;
  q.modulation = m;
  q.antennas = n;
  q.users = k;
  q.params = qmimo::aqnm_params(resolution_of(bits));
  q.gamma0 = gamma0;
  return q;
}

}  // namespace

extern "C" {

const char* qmimo_version(void) { return qmimo::kVersion; }

const char* qmimo_last_error(void) { return g_last_error.c_str(); }

const char* qmimo_status_name(qmimo_status status) {
  switch (status) {
    case QMIMO_OK: return "OK";
    case QMIMO_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case QMIMO_ERR_SINGULAR_GRAM: return "SingularGram";
    case QMIMO_ERR_LENGTH_MISMATCH: return "LengthMismatch";
    case QMIMO_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case QMIMO_ERR_NO_CONVERGENCE: return "NoConvergence";
    case QMIMO_ERR_UNREACHABLE: return "Unreachable";
    case QMIMO_ERR_INFINITE_PRECISION: return "InfinitePrecision";
    case QMIMO_ERR_IO: return "IoFailure";
    case QMIMO_ERR_USAGE: return "UsageError";
    case QMIMO_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

qmimo_status qmimo_config_create(qmimo_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new qmimo_config_{};
  });
}

void qmimo_config_destroy(qmimo_config* cfg) { delete cfg; }

qmimo_status qmimo_config_set_modulation(qmimo_config* cfg, unsigned m) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.modulation = m;
  });
}

qmimo_status qmimo_config_set_link(qmimo_config* cfg, size_t antennas, size_t users) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.antennas = antennas;
    cfg->cfg.users = users;
  });
}

qmimo_status qmimo_config_set_resolution(qmimo_config* cfg, unsigned bits,
                                         qmimo_quantizer_kind kind) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.resolution = resolution_of(bits);
    switch (kind) {
      case QMIMO_QUANTIZER_NONE: cfg->cfg.quantizer.reset(); break;
      case QMIMO_QUANTIZER_UNIFORM: cfg->cfg.quantizer = qmimo::QuantizerKind::Uniform; break;
      case QMIMO_QUANTIZER_LLOYD_MAX: cfg->cfg.quantizer = qmimo::QuantizerKind::LloydMax; break;
      default: qmimo::fail(qmimo::ErrorCode::InvalidArgument, "unknown quantizer kind");
    }
  });
}

qmimo_status qmimo_config_set_snr_grid(qmimo_config* cfg, const double* snr_db,
                                       size_t count) {
  return guarded([&] {
    require(cfg, "cfg");
    if (count > 0) require(snr_db, "snr_db");
    cfg->cfg.snr_db.assign(snr_db, snr_db + count);
  });
}

qmimo_status qmimo_config_set_symbols_per_channel(qmimo_config* cfg, size_t symbols) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.symbols_per_channel = symbols;
  });
}

qmimo_status qmimo_config_set_stopping(qmimo_config* cfg, uint64_t min_bit_errors,
                                       uint64_t max_bits) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.stopping = {min_bit_errors, max_bits};
  });
}

qmimo_status qmimo_config_set_seed(qmimo_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.master_seed = seed;
  });
}

qmimo_status qmimo_config_set_agc(qmimo_config* cfg, qmimo_agc_mode mode) {
  return guarded([&] {
    require(cfg, "cfg");
    switch (mode) {
      case QMIMO_AGC_ANALYTIC: cfg->cfg.agc = qmimo::AgcMode::Analytic; break;
      case QMIMO_AGC_EMPIRICAL: cfg->cfg.agc = qmimo::AgcMode::Empirical; break;
      case QMIMO_AGC_PER_ANTENNA: cfg->cfg.agc = qmimo::AgcMode::PerAntenna; break;
      default: qmimo::fail(qmimo::ErrorCode::InvalidArgument, "unknown AGC mode");
    }
  });
}

qmimo_status qmimo_config_set_workers(qmimo_config* cfg, unsigned workers) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.workers = workers;
  });
}

qmimo_status qmimo_config_validate(const qmimo_config* cfg) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.validate();
  });
}

qmimo_status qmimo_run_sweep(const qmimo_config* cfg, qmimo_curve** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = new qmimo_curve_{qmimo::run_ber_sweep(cfg->cfg)};
  });
}

qmimo_status qmimo_run_trial(const qmimo_config* cfg, size_t snr_index,
                             uint64_t trial_index, uint64_t* bits_sent,
                             uint64_t* bit_errors) {
  return guarded([&] {
    require(cfg, "cfg");
    require(bits_sent, "bits_sent");
    require(bit_errors, "bit_errors");
    const auto r = qmimo::run_trial(cfg->cfg, snr_index, trial_index);
    *bits_sent = r.bits_sent;
    *bit_errors = r.bit_errors;
  });
}

void qmimo_curve_destroy(qmimo_curve* curve) { delete curve; }

size_t qmimo_curve_size(const qmimo_curve* curve) {
  return curve ? curve->curve.points.size() : 0;
}

qmimo_status qmimo_curve_point(const qmimo_curve* curve, size_t index, qmimo_point* out) {
  return guarded([&] {
    require(curve, "curve");
    require(out, "out");
    if (index >= curve->curve.points.size()) {
      qmimo::fail(qmimo::ErrorCode::InvalidArgument, "point index out of range");
    }
    const auto& p = curve->curve.points[index];
    *out = {p.snr_db_per_bit, p.gamma0, p.gamma_q0,
            p.bits_sent, p.bit_errors, p.ber_numerical,
            p.ber_analytical_full, p.ber_analytical_twoterm, p.channel_draws,
            p.singular_redraws, p.saturated ? 1 : 0};
  });
}

qmimo_status qmimo_curve_write_csv(const qmimo_curve* curve, const qmimo_config* cfg,
                                   const char* path) {
  return guarded([&] {
    require(curve, "curve");
    require(cfg, "cfg");
    require(path, "path");
    qmimo::emit_csv(curve->curve, cfg->cfg, path);
  });
}

qmimo_status qmimo_write_plot_script(const char* csv_path, const char* script_path) {
  return guarded([&] {
    require(csv_path, "csv_path");
    require(script_path, "script_path");
    qmimo::write_plot_script(csv_path, script_path);
  });
}

qmimo_status qmimo_aqnm_params(unsigned bits, double* rho, double* alpha) {
  return guarded([&] {
    const auto p = qmimo::aqnm_params(resolution_of(bits));
    if (rho) *rho = p.rho;
    if (alpha) *alpha = p.alpha;
  });
}

qmimo_status qmimo_gamma_q0(double sigma_x2, double sigma_n2, size_t users,
                            double alpha, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qmimo::gamma_q0(sigma_x2, sigma_n2, users, alpha);
  });
}

qmimo_status qmimo_ber_full(unsigned m, size_t antennas, size_t users, unsigned bits,
                            double gamma0, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qmimo::ber_mqam_full(query(m, antennas, users, bits, gamma0));
  });
}

qmimo_status qmimo_ber_twoterm(unsigned m, size_t antennas, size_t users, unsigned bits,
                               double gamma0, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qmimo::ber_mqam_twoterm(query(m, antennas, users, bits, gamma0));
  });
}

qmimo_status qmimo_ber_floor(unsigned m, size_t antennas, size_t users, unsigned bits,
                             double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qmimo::ber_floor(m, antennas, users, qmimo::aqnm_params(resolution_of(bits)));
  });
}

qmimo_status qmimo_snr_for_ber(unsigned m, size_t antennas, size_t users, unsigned bits,
                               double target, double* gamma0) {
  return guarded([&] {
    require(gamma0, "gamma0");
    *gamma0 = qmimo::snr_for_ber(m, antennas, users,
                                 qmimo::aqnm_params(resolution_of(bits)), target);
  });
}

qmimo_status qmimo_ber_degradation(unsigned m, size_t antennas, size_t users,
                                   unsigned bits, double target, double* db) {
  return guarded([&] {
    require(db, "db");
    *db = qmimo::ber_degradation(m, antennas, users, resolution_of(bits), target);
  });
}

qmimo_status qmimo_quantizer_design(unsigned bits, qmimo_quantizer_kind kind,
                                    qmimo_quantizer** out) {
  return guarded([&] {
    require(out, "out");
    if (kind == QMIMO_QUANTIZER_UNIFORM) {
      *out = new qmimo_quantizer_{qmimo::design_uniform(bits)};
    } else if (kind == QMIMO_QUANTIZER_LLOYD_MAX) {
      *out = new qmimo_quantizer_{qmimo::design_lloyd_max(bits)};
    } else {
      qmimo::fail(qmimo::ErrorCode::InvalidArgument, "quantizer kind must not be none");
    }
  });
}

void qmimo_quantizer_destroy(qmimo_quantizer* q) { delete q; }

size_t qmimo_quantizer_levels(const qmimo_quantizer* q, double* levels, size_t capacity) {
  if (!q) return 0;
  const auto& v = q->spec.levels;
  if (levels) std::copy_n(v.begin(), std::min(capacity, v.size()), levels);
  return v.size();
}

size_t qmimo_quantizer_thresholds(const qmimo_quantizer* q, double* thresholds,
                                  size_t capacity) {
  if (!q) return 0;
  const auto& v = q->spec.thresholds;
  if (thresholds) std::copy_n(v.begin(), std::min(capacity, v.size()), thresholds);
  return v.size();
}

double qmimo_quantizer_distortion(const qmimo_quantizer* q) {
  return q ? qmimo::distortion_factor(q->spec) : NAN;
}

double qmimo_quantizer_apply(const qmimo_quantizer* q, double z) {
  return q ? q->spec.apply(z) : NAN;
}

qmimo_status qmimo_quantizer_write_table(const qmimo_quantizer* q, const char* path) {
  return guarded([&] {
    require(q, "q");
    require(path, "path");
    std::ofstream f(path);
    if (!f) qmimo::fail(qmimo::ErrorCode::IoFailure, std::string("cannot open ") + path);
    qmimo::write_quantizer_table(f, q->spec);
    if (!f) qmimo::fail(qmimo::ErrorCode::IoFailure, std::string("write failed: ") + path);
  });
}

qmimo_status qmimo_preset_table2(const char* path, uint64_t min_bit_errors,
                                 uint64_t max_bits, uint64_t seed, unsigned workers,
                                 int simulate) {
  return guarded([&] {
    require(path, "path");
    qmimo::Table2Options opt;
    opt.stopping = {min_bit_errors, max_bits};
    opt.master_seed = seed;
    opt.workers = workers;
    opt.simulate = simulate != 0;
    std::ofstream f(path);
    if (!f) qmimo::fail(qmimo::ErrorCode::IoFailure, std::string("cannot open ") + path);
    const auto cells = qmimo::preset_table2(opt);
    qmimo::write_table2(f, cells, opt);
    if (!f) qmimo::fail(qmimo::ErrorCode::IoFailure, std::string("write failed: ") + path);
  });
}

qmimo_status qmimo_preset_degradation(const char* path, double target) {
  return guarded([&] {
    require(path, "path");
    std::ofstream f(path);
    if (!f) qmimo::fail(qmimo::ErrorCode::IoFailure, std::string("cannot open ") + path);
    const auto rows = qmimo::preset_degradation(target);
    qmimo::write_degradation(f, rows, target);
    if (!f) qmimo::fail(qmimo::ErrorCode::IoFailure, std::string("write failed: ") + path);
  });
}

}  // extern "C"
