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

#include "qmimo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "qmimo/analytics.hpp"
#include "qmimo/error.hpp"

namespace qmimo {

namespace {

constexpr std::uint64_t kMaxSingularRedraws = 100;
constexpr std::size_t kMaxBatchPerWorker = 64;

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string resolution_text(const Resolution& r) {
  return r.is_infinite() ? "inf" : std::to_string(*r.bits);
}

template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
        return;
      }
    }
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace

const char* to_string(AgcMode mode) noexcept {
  switch (mode) {
    case AgcMode::Analytic: return "analytic";
    case AgcMode::Empirical: return "empirical";
    case AgcMode::PerAntenna: return "per_antenna";
  }
  return "unknown";
}

void SimConfig::validate() const {
  auto usage = [](const std::string& m) { fail(ErrorCode::UsageError, m); };
  if (modulation != 4 && modulation != 16 && modulation != 64) {
    usage("modulation must be 4, 16 or 64");
  }
  if (users < 1 || antennas < users) usage("need antennas >= users >= 1");
  if (!resolution.is_infinite() && (*resolution.bits < 1 || *resolution.bits > 8)) {
    usage("bits must be 1..8 or inf");
  }
  if (resolution.is_infinite() != !quantizer.has_value()) {
    usage("quantizer must be 'none' exactly when bits is inf");
  }
  if (snr_db.empty()) usage("SNR grid is empty");
  for (double s : snr_db) {
    if (!std::isfinite(s)) usage("SNR grid values must be finite");
  }
  if (symbols_per_channel < 1) usage("symbols_per_channel must be >= 1");
  if (stopping.min_bit_errors < 1) usage("min_bit_errors must be >= 1");
  if (stopping.max_bits < 1) usage("max_bits must be >= 1");
}

std::vector<std::string> SimConfig::warnings() const {
  std::vector<std::string> w;
  if (stopping.min_bit_errors < 100) {
    w.push_back("min_bit_errors below 100 gives wide confidence intervals");
  }
  if (antennas == users) w.push_back("N == K: analytical columns are undefined");
  return w;
}

std::string SimConfig::describe() const {
  std::ostringstream os;
  os << "M=" << modulation << " N=" << antennas << " K=" << users
     << " bits=" << resolution_text(resolution)
     << " quantizer=" << (quantizer ? to_string(*quantizer) : "none") << " snr_db=";
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    os << (i ? ";" : "") << fmt_short(snr_db[i]);
  }
  os << " symbols_per_channel=" << symbols_per_channel
     << " min_bit_errors=" << stopping.min_bit_errors
     << " max_bits=" << stopping.max_bits << " seed=" << master_seed
     << " agc=" << to_string(agc);
  return os.str();
}

std::uint64_t trial_stream_index(std::size_t snr_index, std::uint64_t trial_index) {
  return (static_cast<std::uint64_t>(snr_index) << 40) ^ trial_index;
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QMIMO_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Simulator::Simulator(SimConfig cfg)
    : cfg_(std::move(cfg)),
      constellation_((cfg_.validate(), cfg_.modulation)),
      params_(aqnm_params(cfg_.resolution)),
      workers_(resolve_workers(cfg_.workers)) {
  if (cfg_.quantizer) spec_ = design_quantizer(*cfg_.resolution.bits, *cfg_.quantizer);
}

TrialResult Simulator::run_trial(std::size_t snr_index, std::uint64_t trial_index) const {
  if (snr_index >= cfg_.snr_db.size()) {
    fail(ErrorCode::InvalidArgument, "SNR index out of range");
  }
  return run_trial_at(cfg_.snr_db[snr_index], trial_stream_index(snr_index, trial_index));
}

TrialResult Simulator::run_trial_at(double snr_db, std::uint64_t stream_index) const {
  const unsigned bps = constellation_.bits_per_symbol();
  const std::size_t k = cfg_.users;
  const std::size_t n = cfg_.antennas;
  const std::size_t block = cfg_.symbols_per_channel;
  const double gamma0 = gamma0_from_ebn0_db(snr_db, bps);
  const LinkParams link{n, k, 1.0, 1.0 / gamma0};

  RngStream rng(cfg_.master_seed, stream_index);
  TrialResult out;

  ComplexMatrix h;
  DetectionMatrix det;
  for (;;) {
    h = draw_channel(link, rng);
    try {
      det = spec_ ? zf_matrix_quantized(h, params_) : zf_matrix(h);
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularGram) throw;
      if (++out.singular_redraws > kMaxSingularRedraws) throw;
    }
  }

  const std::size_t bits_per_vector = k * bps;
  Bits tx(block * bits_per_vector);
  for (std::size_t i = 0; i < tx.size(); i += 64) {
    std::uint64_t word = rng.bits();
    const std::size_t m = std::min<std::size_t>(64, tx.size() - i);
    for (std::size_t j = 0; j < m; ++j, word >>= 1) tx[i + j] = word & 1u;
  }

  // Column s of the block carries symbol vector s.
  const std::span<const std::uint8_t> all(tx);
  ComplexMatrix x(k, block);
  for (std::size_t s = 0; s < block; ++s) {
    const CVector xs = modulate(all.subspan(s * bits_per_vector, bits_per_vector),
                                constellation_);
    for (std::size_t u = 0; u < k; ++u) x(u, s) = xs[u];
  }
  ComplexMatrix y = transmit_block(h, x, link, rng);

  if (spec_) {
    if (cfg_.agc == AgcMode::PerAntenna) {
      for (std::size_t r = 0; r < n; ++r) {
        double gain = 0.0;
        for (const auto& v : h.row(r)) gain += std::norm(v);
        const double sigma = std::sqrt((link.sigma_x2 * gain + link.sigma_n2) / 2.0);
        quantize_in_place(y.row(r), *spec_, sigma);
      }
    } else {
      double sigma = std::sqrt(link.received_power() / 2.0);
      if (cfg_.agc == AgcMode::Empirical) {
        double power = 0.0;
        for (const auto& v : y.entries()) power += std::norm(v);
        sigma = std::sqrt(power / (2.0 * static_cast<double>(block * n)));
      }
      quantize_in_place(y.entries(), *spec_, sigma);
    }
  }

  const ComplexMatrix xhat = detect_block(det, y);
  CVector col(k);
  for (std::size_t s = 0; s < block; ++s) {
    for (std::size_t u = 0; u < k; ++u) col[u] = xhat(u, s);
    const Bits decided = demodulate_hard(col, constellation_);
    out.bit_errors +=
        count_bit_errors(all.subspan(s * bits_per_vector, bits_per_vector), decided);
  }
  out.bits_sent = tx.size();
  return out;
}

BerPoint Simulator::run_point(std::size_t snr_index) const {
  BerPoint p;
  p.snr_db_per_bit = cfg_.snr_db.at(snr_index);
  p.gamma0 = gamma0_from_ebn0_db(p.snr_db_per_bit, constellation_.bits_per_symbol());
  p.gamma_q0 = gamma_q0_from_gamma0(p.gamma0, cfg_.users, params_.alpha);
  if (cfg_.antennas > cfg_.users) {
    const std::size_t d = cfg_.antennas - cfg_.users;
    p.ber_analytical_full = ber_mqam_at(cfg_.modulation, d, p.gamma_q0);
    p.ber_analytical_twoterm = ber_mqam_twoterm_at(cfg_.modulation, d, p.gamma_q0);
  } else {
    p.ber_analytical_full = std::numeric_limits<double>::quiet_NaN();
    p.ber_analytical_twoterm = std::numeric_limits<double>::quiet_NaN();
  }

  // Trials run in batches; results are folded in trial order and the stopping
  // rule is checked after each trial, so the outcome does not depend on the
  // worker count or batch size.
  std::uint64_t first = 0;
  std::size_t batch = workers_;
  bool done = false;
  while (!done) {
    std::vector<TrialResult> results(batch);
    parallel_for(batch, workers_,
                 [&](std::size_t i) { results[i] = run_trial(snr_index, first + i); });
    for (const auto& r : results) {
      p.bits_sent += r.bits_sent;
      p.bit_errors += r.bit_errors;
      p.singular_redraws += r.singular_redraws;
      ++p.channel_draws;
      if (p.bit_errors >= cfg_.stopping.min_bit_errors) {
        done = true;
        break;
      }
      if (p.bits_sent >= cfg_.stopping.max_bits) {
        p.saturated = true;
        done = true;
        break;
      }
    }
    first += batch;
    batch = std::min<std::size_t>(batch * 2, workers_ * kMaxBatchPerWorker);
  }
  p.ber_numerical = static_cast<double>(p.bit_errors) / static_cast<double>(p.bits_sent);
  return p;
}

BerCurve Simulator::run_sweep() const {
  BerCurve c;
  c.points.reserve(cfg_.snr_db.size());
  for (std::size_t i = 0; i < cfg_.snr_db.size(); ++i) c.points.push_back(run_point(i));
  return c;
}

TrialResult run_trial(const SimConfig& cfg, std::size_t snr_index,
                      std::uint64_t trial_index) {
  return Simulator(cfg).run_trial(snr_index, trial_index);
}

BerCurve run_ber_sweep(const SimConfig& cfg) { return Simulator(cfg).run_sweep(); }

// CSV ------------------------------------------------------------------------

const char* const kCsvHeader =
    "snr_db_per_bit,gamma0,gamma_q0,bits_sent,bit_errors,ber_numerical,"
    "ber_analytical_full,ber_analytical_twoterm,channel_draws,singular_redraws,"
    "saturated";

void write_csv(std::ostream& os, const BerCurve& curve, const SimConfig& cfg) {
  os << "# qmimo " << kVersion << " " << cfg.describe()
     << " snr_convention=gamma0=EbN0*log2(M)\n";
  os << kCsvHeader << '\n';
  for (const auto& p : curve.points) {
    os << fmt_real(p.snr_db_per_bit) << ',' << fmt_real(p.gamma0) << ','
       << fmt_real(p.gamma_q0) << ',' << p.bits_sent << ',' << p.bit_errors << ','
       << fmt_real(p.ber_numerical) << ',' << fmt_real(p.ber_analytical_full) << ','
       << fmt_real(p.ber_analytical_twoterm) << ',' << p.channel_draws << ','
       << p.singular_redraws << ',' << (p.saturated ? 1 : 0) << '\n';
  }
}

void emit_csv(const BerCurve& curve, const SimConfig& cfg, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoFailure, "cannot open " + path + " for writing");
  write_csv(f, curve, cfg);
  f.flush();
  if (!f) fail(ErrorCode::IoFailure, "write to " + path + " failed");
}

BerCurve read_csv(std::istream& is) {
  BerCurve curve;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) fail(ErrorCode::IoFailure, "unexpected CSV header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 11) fail(ErrorCode::IoFailure, "malformed CSV row: " + line);
    BerPoint p;
    p.snr_db_per_bit = std::strtod(f[0].c_str(), nullptr);
    p.gamma0 = std::strtod(f[1].c_str(), nullptr);
    p.gamma_q0 = std::strtod(f[2].c_str(), nullptr);
    p.bits_sent = std::strtoull(f[3].c_str(), nullptr, 10);
    p.bit_errors = std::strtoull(f[4].c_str(), nullptr, 10);
    p.ber_numerical = std::strtod(f[5].c_str(), nullptr);
    p.ber_analytical_full = std::strtod(f[6].c_str(), nullptr);
    p.ber_analytical_twoterm = std::strtod(f[7].c_str(), nullptr);
    p.channel_draws = std::strtoull(f[8].c_str(), nullptr, 10);
    p.singular_redraws = std::strtoull(f[9].c_str(), nullptr, 10);
    p.saturated = f[10] == "1";
    curve.points.push_back(p);
  }
  if (!header_seen) fail(ErrorCode::IoFailure, "CSV header missing");
  return curve;
}

void write_plot_script(const std::string& csv_path, const std::string& script_path) {
  std::ofstream f(script_path);
  if (!f) fail(ErrorCode::IoFailure, "cannot open " + script_path + " for writing");
  f << "# Plot a qmimo BER sweep: python3 " << script_path << "\n"
    << "import csv\n"
    << "import matplotlib.pyplot as plt\n\n"
    << "rows = [r for r in csv.DictReader(l for l in open(" << '"' << csv_path << '"'
    << ") if not l.startswith('#'))]\n"
    << "x = [float(r['snr_db_per_bit']) for r in rows]\n"
    << "for col, style in (('ber_numerical', 'o'), ('ber_analytical_full', '-'),\n"
    << "                   ('ber_analytical_twoterm', '--')):\n"
    << "    y = [float(r[col]) for r in rows]\n"
    << "    plt.semilogy(x, [v if v > 0 else float('nan') for v in y], style, label=col)\n"
    << "plt.xlabel('Eb/N0 per user [dB]')\n"
    << "plt.ylabel('BER')\n"
    << "plt.grid(True, which='both')\n"
    << "plt.legend()\n"
    << "plt.savefig(" << '"' << csv_path << ".png\")\n";
  if (!f) fail(ErrorCode::IoFailure, "write to " + script_path + " failed");
}

// Presets --------------------------------------------------------------------

std::vector<Table2Cell> preset_table2(const Table2Options& opt) {
  std::vector<Table2Cell> cells;
  for (unsigned m : {4u, 16u, 64u}) {
    for (unsigned b = 1; b <= 4; ++b) {
      Table2Cell cell;
      cell.modulation = m;
      cell.bits = b;
      cell.analytical = ber_floor(m, opt.antennas, opt.users, aqnm_params(b));
      if (opt.simulate) {
        SimConfig cfg;
        cfg.modulation = m;
        cfg.antennas = opt.antennas;
        cfg.users = opt.users;
        cfg.resolution = Resolution::finite(b);
        cfg.quantizer = QuantizerKind::LloydMax;
        cfg.snr_db = {opt.snr_db};
        cfg.stopping = opt.stopping;
        cfg.master_seed = opt.master_seed;
        cfg.workers = opt.workers;
        // Cells far below the bit budget's resolution get a tenth of it; they
        // are reported as observed counts, not as estimates.
        cell.simulated = cell.analytical >= opt.min_simulated_floor;
        if (!cell.simulated) cfg.stopping.max_bits = std::max<std::uint64_t>(1, opt.stopping.max_bits / 10);
        const BerPoint p = Simulator(cfg).run_point(0);
        cell.bits_sent = p.bits_sent;
        cell.bit_errors = p.bit_errors;
        cell.numerical = p.ber_numerical;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

void write_table2(std::ostream& os, const std::vector<Table2Cell>& cells,
                  const Table2Options& opt) {
  os << "# qmimo " << kVersion << " BER floor table: N=" << opt.antennas
     << " K=" << opt.users << " lloyd_max agc=" << to_string(SimConfig{}.agc)
     << ", numerical at " << fmt_short(opt.snr_db)
     << " dB, min_bit_errors=" << opt.stopping.min_bit_errors
     << " max_bits=" << opt.stopping.max_bits << " seed=" << opt.master_seed << '\n';
  os << "modulation,bits,ber_analytical,ber_numerical,bit_errors,bits_sent,note\n";
  for (const auto& c : cells) {
    os << c.modulation << ',' << c.bits << ',' << fmt_real(c.analytical) << ',';
    if (c.bits_sent == 0) {
      os << ",,,not_simulated\n";
      continue;
    }
    os << fmt_real(c.numerical) << ',' << c.bit_errors << ',' << c.bits_sent << ',';
    if (!c.simulated) {
      os << (c.bit_errors == 0 ? "0_observed_under_budget" : "budget_limited");
    } else if (c.bit_errors < opt.stopping.min_bit_errors) {
      os << "saturated";
    } else {
      os << "ok";
    }
    os << '\n';
  }
}

std::vector<DegradationRow> preset_degradation(double target) {
  std::vector<DegradationRow> rows;
  for (unsigned m : {4u, 16u}) {
    for (std::size_t n : {100u, 200u, 400u}) {
      for (unsigned b = 1; b <= 4; ++b) {
        DegradationRow r{m, n, 10, b, std::nullopt};
        try {
          r.degradation_db = ber_degradation(m, n, 10, Resolution::finite(b), target);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::Unreachable) throw;
        }
        rows.push_back(r);
      }
    }
  }
  return rows;
}

void write_degradation(std::ostream& os, const std::vector<DegradationRow>& rows,
                       double target) {
  os << "# qmimo " << kVersion << " BER degradation at target " << fmt_short(target)
     << ", lloyd_max AQNM parameters\n";
  os << "modulation,antennas,users,bits,degradation_db,reachable\n";
  for (const auto& r : rows) {
    os << r.modulation << ',' << r.antennas << ',' << r.users << ',' << r.bits << ',';
    if (r.degradation_db) {
      os << fmt_real(*r.degradation_db) << ",1\n";
    } else {
      os << ",0\n";
    }
  }
}

}  // namespace qmimo
