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

// Command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmimo/qmimo.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(qmimo_status s) {
  switch (s) {
    case QMIMO_OK: return 0;
    case QMIMO_ERR_USAGE:
    case QMIMO_ERR_INVALID_ARGUMENT: return kExitUsage;
    case QMIMO_ERR_IO: return kExitIo;
    default: return kExitRuntime;
  }
}

// Accepts "a:step:b" (inclusive) or a comma-separated list.
std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<double> out;
  auto to_num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad SNR value '" + s + "'");
    }
    if (used != s.size()) throw UsageError("bad SNR value '" + s + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("SNR range must be start:step:stop");
    const double a = to_num(parts[0]);
    const double step = to_num(parts[1]);
    const double b = to_num(parts[2]);
    if (!(step > 0.0) || b < a) throw UsageError("SNR range needs step > 0 and stop >= start");
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_num(p));
  }
  if (out.empty()) throw UsageError("SNR grid is empty");
  return out;
}

unsigned parse_modulation(const std::string& s) {
  if (s == "qpsk" || s == "4qam" || s == "4") return 4;
  if (s == "16qam" || s == "16") return 16;
  if (s == "64qam" || s == "64") return 64;
  throw UsageError("--mod must be qpsk, 16qam or 64qam");
}

qmimo_quantizer_kind parse_quantizer(const std::string& s) {
  if (s == "lloyd" || s == "lloyd_max" || s == "nonuniform") return QMIMO_QUANTIZER_LLOYD_MAX;
  if (s == "uniform") return QMIMO_QUANTIZER_UNIFORM;
  if (s == "none") return QMIMO_QUANTIZER_NONE;
  throw UsageError("--quantizer must be lloyd, uniform or none");
}

unsigned parse_bits(const std::string& s) {
  if (s == "inf" || s == "full") return QMIMO_BITS_INF;
  try {
    std::size_t used = 0;
    const int b = std::stoi(s, &used);
    if (used == s.size() && b >= 1 && b <= 8) return static_cast<unsigned>(b);
  } catch (const std::exception&) {
  }
  throw UsageError("--bits must be 1..8 or inf");
}

int report(qmimo_status s, const char* what) {
  if (s == QMIMO_OK) return 0;
  std::cerr << "qmimo: " << what << ": " << qmimo_status_name(s) << ": "
            << qmimo_last_error() << '\n';
  return exit_code_for(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized massive MIMO uplink BER simulator"};

  std::string mod = "qpsk";
  std::string bits_text = "inf";
  std::optional<std::string> quantizer_text;
  std::size_t antennas = 100;
  std::size_t users = 10;
  std::string snr_text = "-10:1:15";
  std::uint64_t seed = 1;
  std::optional<std::string> out;
  std::optional<std::string> preset;
  std::size_t symbols = 100;
  std::uint64_t min_errors = 500;
  std::uint64_t max_bits = 1'000'000'000;
  std::string agc = "per_antenna";
  unsigned workers = 0;
  double target = 1e-4;
  bool no_simulate = false;
  bool no_plot = false;
  bool dump_quantizer = false;

  app.add_option("--mod", mod, "Modulation: qpsk, 16qam, 64qam");
  app.add_option("--bits", bits_text, "ADC resolution 1..8 or inf");
  app.add_option("--quantizer", quantizer_text, "lloyd, uniform or none");
  app.add_option("--antennas,-N", antennas, "Base-station antennas");
  app.add_option("--users,-K", users, "Single-antenna users");
  app.add_option("--snr", snr_text, "Eb/N0 grid in dB: start:step:stop or a,b,c");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", out, "Output path");
  app.add_option("--preset", preset, "table2 or degradation")
      ->check(CLI::IsMember({"table2", "degradation"}));
  app.add_option("--symbols-per-channel", symbols, "Symbol vectors per channel draw");
  app.add_option("--min-errors", min_errors, "Stop a point after this many bit errors");
  app.add_option("--max-bits", max_bits, "Stop a point after this many bits");
  app.add_option("--agc", agc, "Quantizer input scaling: analytic, empirical or per_antenna")
      ->check(CLI::IsMember({"analytic", "empirical", "per_antenna"}));
  app.add_option("--workers", workers, "Worker threads (0: QMIMO_WORKERS or all cores)");
  app.add_option("--target", target, "Reference BER for the degradation preset");
  app.add_flag("--no-simulate", no_simulate, "table2: analytical columns only");
  app.add_flag("--no-plot", no_plot, "Do not write the plotting script");
  app.add_flag("--dump-quantizer", dump_quantizer,
               "Write the quantizer table for --bits/--quantizer and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (preset && *preset == "table2") {
      const std::string path = out.value_or("table2.csv");
      const int rc = report(qmimo_preset_table2(path.c_str(), min_errors, max_bits, seed,
                                                workers, no_simulate ? 0 : 1),
                            "table2");
      if (rc == 0) std::cout << "wrote " << path << '\n';
      return rc;
    }
    if (preset && *preset == "degradation") {
      const std::string path = out.value_or("degradation.csv");
      const int rc = report(qmimo_preset_degradation(path.c_str(), target), "degradation");
      if (rc == 0) std::cout << "wrote " << path << '\n';
      return rc;
    }

    const unsigned bits = parse_bits(bits_text);
    const qmimo_quantizer_kind kind =
        quantizer_text ? parse_quantizer(*quantizer_text)
                       : (bits == QMIMO_BITS_INF ? QMIMO_QUANTIZER_NONE
                                                 : QMIMO_QUANTIZER_LLOYD_MAX);

    if (dump_quantizer) {
      qmimo_quantizer* q = nullptr;
      if (int rc = report(qmimo_quantizer_design(bits, kind, &q), "quantizer")) return rc;
      const std::string path = out.value_or("quantizer.txt");
      const int rc = report(qmimo_quantizer_write_table(q, path.c_str()), "quantizer");
      qmimo_quantizer_destroy(q);
      if (rc == 0) std::cout << "wrote " << path << '\n';
      return rc;
    }

    const std::vector<double> grid = parse_snr_grid(snr_text);

    qmimo_config* cfg = nullptr;
    if (int rc = report(qmimo_config_create(&cfg), "config")) return rc;
    std::unique_ptr<qmimo_config, decltype(&qmimo_config_destroy)> cfg_guard(
        cfg, &qmimo_config_destroy);

    qmimo_status s = qmimo_config_set_modulation(cfg, parse_modulation(mod));
    if (s == QMIMO_OK) s = qmimo_config_set_link(cfg, antennas, users);
    if (s == QMIMO_OK) s = qmimo_config_set_resolution(cfg, bits, kind);
    if (s == QMIMO_OK) s = qmimo_config_set_snr_grid(cfg, grid.data(), grid.size());
    if (s == QMIMO_OK) s = qmimo_config_set_symbols_per_channel(cfg, symbols);
    if (s == QMIMO_OK) s = qmimo_config_set_stopping(cfg, min_errors, max_bits);
    if (s == QMIMO_OK) s = qmimo_config_set_seed(cfg, seed);
    if (s == QMIMO_OK)
      s = qmimo_config_set_agc(cfg, agc == "empirical"     ? QMIMO_AGC_EMPIRICAL
                                    : agc == "per_antenna" ? QMIMO_AGC_PER_ANTENNA
                                                           : QMIMO_AGC_ANALYTIC);
    if (s == QMIMO_OK) s = qmimo_config_set_workers(cfg, workers);
    if (s == QMIMO_OK) s = qmimo_config_validate(cfg);
    if (int rc = report(s, "invalid configuration")) {
      std::cerr << app.help();
      return rc;
    }
    if (min_errors < 100) {
      std::cerr << "qmimo: warning: --min-errors below 100 gives wide confidence intervals\n";
    }

    qmimo_curve* curve = nullptr;
    if (int rc = report(qmimo_run_sweep(cfg, &curve), "sweep")) return rc;
    std::unique_ptr<qmimo_curve, decltype(&qmimo_curve_destroy)> curve_guard(
        curve, &qmimo_curve_destroy);

    const std::string path = out.value_or("sweep.csv");
    if (int rc = report(qmimo_curve_write_csv(curve, cfg, path.c_str()), "csv")) return rc;
    if (!no_plot) {
      const std::string script = path + ".plot.py";
      if (int rc = report(qmimo_write_plot_script(path.c_str(), script.c_str()), "plot"))
        return rc;
    }

    for (std::size_t i = 0; i < qmimo_curve_size(curve); ++i) {
      qmimo_point p{};
      qmimo_curve_point(curve, i, &p);
      std::printf("%7.2f dB  ber=%.4e  analytical=%.4e  errors=%llu bits=%llu%s\n",
                  p.snr_db_per_bit, p.ber_numerical, p.ber_analytical_full,
                  static_cast<unsigned long long>(p.bit_errors),
                  static_cast<unsigned long long>(p.bits_sent),
                  p.saturated ? "  (budget reached)" : "");
    }
    std::cout << "wrote " << path << '\n';
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "qmimo: usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
}
