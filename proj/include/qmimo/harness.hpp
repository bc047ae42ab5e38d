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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qmimo/channel.hpp"
#include "qmimo/detector.hpp"
#include "qmimo/modem.hpp"
#include "qmimo/quantizer.hpp"

namespace qmimo {

inline constexpr const char* kVersion = "1.0.0";

/// How the quantizer input is normalized before slicing.
///  PerAntenna: sigma_i = sqrt((sigma_x2 sum_k |h_ik|^2 + sigma_n2) / 2), the
///              exact input variance of antenna i given the channel draw.
///  Analytic:   sigma = sqrt((K sigma_x2 + sigma_n2) / 2), averaged over H.
///  Empirical:  per-block RMS of all received components.
enum class AgcMode { Analytic, Empirical, PerAntenna };

const char* to_string(AgcMode mode) noexcept;

struct StoppingRule {
  std::uint64_t min_bit_errors = 500;
  std::uint64_t max_bits = 1'000'000'000;
};

struct SimConfig {
  unsigned modulation = 4;
  std::size_t antennas = 100;
  std::size_t users = 10;
  Resolution resolution = Resolution::infinite();
  std::optional<QuantizerKind> quantizer;  // nullopt iff full precision
  std::vector<double> snr_db;              // Eb/N0 per user, dB
  std::size_t symbols_per_channel = 100;
  StoppingRule stopping;
  std::uint64_t master_seed = 1;
  AgcMode agc = AgcMode::PerAntenna;
  unsigned workers = 0;  // 0: QMIMO_WORKERS, else hardware concurrency

  /// Throws UsageError on an inconsistent configuration.
  void validate() const;

  /// Warnings that do not block a run (e.g. a small error target).
  std::vector<std::string> warnings() const;

  std::string describe() const;
};

struct TrialResult {
  std::uint64_t bits_sent = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t singular_redraws = 0;
};

struct BerPoint {
  double snr_db_per_bit = 0.0;
  double gamma0 = 0.0;
  double gamma_q0 = 0.0;
  std::uint64_t bits_sent = 0;
  std::uint64_t bit_errors = 0;
  double ber_numerical = 0.0;
  double ber_analytical_full = 0.0;
  double ber_analytical_twoterm = 0.0;
  std::uint64_t channel_draws = 0;
  std::uint64_t singular_redraws = 0;
  bool saturated = false;  // max_bits reached before min_bit_errors

  friend bool operator==(const BerPoint&, const BerPoint&) = default;
};

struct BerCurve {
  std::vector<BerPoint> points;
  friend bool operator==(const BerCurve&, const BerCurve&) = default;
};

/// Stream index for one trial at one SNR point.
std::uint64_t trial_stream_index(std::size_t snr_index, std::uint64_t trial_index);

/// Worker count after applying the QMIMO_WORKERS override.
unsigned resolve_workers(unsigned requested);

/// Monte Carlo engine for one configuration. Quantizer design and other
/// per-configuration work happen once in the constructor.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg);

  const SimConfig& config() const noexcept { return cfg_; }
  const Constellation& constellation() const noexcept { return constellation_; }
  const AqnmParams& aqnm() const noexcept { return params_; }
  const std::optional<QuantizerSpec>& quantizer() const noexcept { return spec_; }

  /// One channel draw carrying symbols_per_channel symbol vectors at SNR
  /// point snr_index.
  TrialResult run_trial(std::size_t snr_index, std::uint64_t trial_index) const;

  /// Same at an explicit Eb/N0, independent of the grid.
  TrialResult run_trial_at(double snr_db, std::uint64_t stream_index) const;

  BerPoint run_point(std::size_t snr_index) const;
  BerCurve run_sweep() const;

 private:
  SimConfig cfg_;
  Constellation constellation_;
  AqnmParams params_;
  std::optional<QuantizerSpec> spec_;
  unsigned workers_;
};

TrialResult run_trial(const SimConfig& cfg, std::size_t snr_index,
                      std::uint64_t trial_index);
BerCurve run_ber_sweep(const SimConfig& cfg);

/// CSV: one comment line with the configuration, a header row, then one row
/// per SNR point. Reals carry 17 significant digits.
void write_csv(std::ostream& os, const BerCurve& curve, const SimConfig& cfg);
void emit_csv(const BerCurve& curve, const SimConfig& cfg, const std::string& path);
BerCurve read_csv(std::istream& is);

extern const char* const kCsvHeader;

/// Writes a small matplotlib script that plots a sweep CSV.
void write_plot_script(const std::string& csv_path, const std::string& script_path);

// Presets --------------------------------------------------------------------

struct Table2Options {
  std::size_t antennas = 100;
  std::size_t users = 10;
  double snr_db = 100.0;
  double min_simulated_floor = 1e-6;  // cells below this are not simulated
  StoppingRule stopping{500, 100'000'000};
  std::uint64_t master_seed = 1;
  unsigned workers = 0;
  bool simulate = true;
};

struct Table2Cell {
  unsigned modulation = 0;
  unsigned bits = 0;
  double analytical = 0.0;
  bool simulated = false;
  std::uint64_t bits_sent = 0;
  std::uint64_t bit_errors = 0;
  double numerical = 0.0;
};

std::vector<Table2Cell> preset_table2(const Table2Options& opt = {});
void write_table2(std::ostream& os, const std::vector<Table2Cell>& cells,
                  const Table2Options& opt);

struct DegradationRow {
  unsigned modulation = 0;
  std::size_t antennas = 0;
  std::size_t users = 0;
  unsigned bits = 0;
  std::optional<double> degradation_db;  // nullopt: unreachable
};

std::vector<DegradationRow> preset_degradation(double target = 1e-4);
void write_degradation(std::ostream& os, const std::vector<DegradationRow>& rows,
                       double target);

}  // namespace qmimo
