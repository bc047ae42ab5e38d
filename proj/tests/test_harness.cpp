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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qmimo/analytics.hpp"
#include "qmimo/error.hpp"
#include "qmimo/harness.hpp"
#include "support.hpp"

using namespace qmimo;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.modulation = 16;
  c.antennas = 32;
  c.users = 4;
  c.resolution = Resolution::finite(2);
  c.quantizer = QuantizerKind::LloydMax;
  c.snr_db = {-6.0, 0.0};
  c.symbols_per_channel = 20;
  c.stopping = {200, 2'000'000};
  c.master_seed = 77;
  return c;
}

ErrorCode code_of(const SimConfig& c) {
  try {
    c.validate();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("configuration validation") {
  CHECK_NOTHROW(small_config().validate());
  SimConfig c = small_config();
  c.quantizer.reset();
  CHECK(code_of(c) == ErrorCode::UsageError);
  c = small_config();
  c.resolution = Resolution::infinite();
  CHECK(code_of(c) == ErrorCode::UsageError);
  c.quantizer.reset();
  CHECK_NOTHROW(c.validate());
  c = small_config();
  c.snr_db.clear();
  CHECK(code_of(c) == ErrorCode::UsageError);
  c = small_config();
  c.snr_db = {NAN};
  CHECK(code_of(c) == ErrorCode::UsageError);
  c = small_config();
  c.modulation = 32;
  CHECK(code_of(c) == ErrorCode::UsageError);
  c = small_config();
  c.users = 40;
  CHECK(code_of(c) == ErrorCode::UsageError);
  c = small_config();
  c.symbols_per_channel = 0;
  CHECK(code_of(c) == ErrorCode::UsageError);
  c = small_config();
  c.stopping.min_bit_errors = 50;
  CHECK_NOTHROW(c.validate());
  CHECK(c.warnings().size() == 1);
  CHECK(small_config().warnings().empty());
  CHECK(small_config().describe().find("agc=per_antenna") != std::string::npos);
}

TEST_CASE("trial stream indices separate SNR points") {
  CHECK(trial_stream_index(0, 5) == 5);
  CHECK(trial_stream_index(1, 5) != trial_stream_index(0, 5));
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("noiseless full-precision link is error-free") {
  SimConfig c;
  c.modulation = 64;
  c.antennas = 16;
  c.users = 4;
  c.snr_db = {250.0};
  c.stopping = {1, 200'000};
  const BerPoint p = Simulator(c).run_point(0);
  CHECK(p.bit_errors == 0);
  CHECK(p.saturated);
  CHECK(p.gamma_q0 == p.gamma0);
}

TEST_CASE("results do not depend on the worker count") {
  SimConfig c = small_config();
  c.workers = 1;
  const BerCurve ref = run_ber_sweep(c);
  for (unsigned w : {2u, 3u, 8u}) {
    c.workers = w;
    CHECK(run_ber_sweep(c) == ref);
  }
  for (std::uint64_t t : {0u, 3u, 17u}) {
    const TrialResult a = run_trial(c, 1, t);
    c.workers = 1;
    const TrialResult b = run_trial(c, 1, t);
    CHECK(a.bits_sent == b.bits_sent);
    CHECK(a.bit_errors == b.bit_errors);
  }
  c.master_seed = 78;
  CHECK_FALSE(run_ber_sweep(c) == ref);
}

TEST_CASE("accounting and stopping invariants") {
  for (auto agc : {AgcMode::PerAntenna, AgcMode::Analytic, AgcMode::Empirical}) {
    SimConfig c = small_config();
    c.agc = agc;
    c.snr_db = {-10.0, -4.0, 2.0, 40.0};
    c.stopping = {150, 400'000};
    const BerCurve curve = run_ber_sweep(c);
    for (const auto& p : curve.points) {
      CHECK(p.bits_sent == p.channel_draws * c.symbols_per_channel * c.users * 4);
      CHECK(p.ber_numerical == static_cast<double>(p.bit_errors) / p.bits_sent);
      CHECK(p.ber_numerical >= 0.0);
      CHECK(p.ber_numerical <= 1.0);
      CHECK(p.gamma_q0 < p.gamma0);
      if (p.saturated) {
        CHECK(p.bits_sent >= c.stopping.max_bits);
        CHECK(p.bit_errors < c.stopping.min_bit_errors);
      } else {
        CHECK(p.bit_errors >= c.stopping.min_bit_errors);
        // The last trial is the one that crossed the threshold.
        CHECK(p.bit_errors - c.stopping.min_bit_errors <
              c.symbols_per_channel * c.users * 4);
      }
    }
  }
}

TEST_CASE("unquantized QPSK agrees with the closed form") {
  SimConfig c;
  c.modulation = 4;
  c.antennas = 100;
  c.users = 10;
  c.snr_db = {-22.0, -19.0, -16.0};
  c.stopping = {500, 50'000'000};
  c.master_seed = 3;
  const BerCurve curve = run_ber_sweep(c);
  for (const auto& p : curve.points) {
    REQUIRE(p.bit_errors >= 500);
    const double tol = test::binomial_3sigma(p.ber_analytical_full,
                                             static_cast<double>(p.bits_sent));
    CHECK(std::abs(p.ber_numerical - p.ber_analytical_full) <= tol);
    CHECK(p.ber_analytical_full == p.ber_analytical_twoterm);
  }
}

TEST_CASE("halving symbols per channel does not shift the BER") {
  SimConfig c = small_config();
  c.snr_db = {-4.0};
  c.stopping = {3000, 100'000'000};
  c.symbols_per_channel = 100;
  const BerPoint a = Simulator(c).run_point(0);
  c.symbols_per_channel = 50;
  const BerPoint b = Simulator(c).run_point(0);
  const double sa = test::binomial_3sigma(a.ber_numerical, a.bits_sent) / 3.0;
  const double sb = test::binomial_3sigma(b.ber_numerical, b.bits_sent) / 3.0;
  CHECK(std::abs(a.ber_numerical - b.ber_numerical) <= 3.0 * std::hypot(sa, sb));
}

TEST_CASE("CSV output") {
  const SimConfig c = small_config();
  const BerCurve curve = run_ber_sweep(c);

  std::ostringstream os;
  write_csv(os, curve, c);
  std::istringstream is(os.str());
  CHECK(read_csv(is) == curve);
  CHECK(os.str().rfind("# qmimo 1.0.0 ", 0) == 0);

  std::ostringstream empty;
  write_csv(empty, BerCurve{}, c);
  std::istringstream lines(empty.str());
  std::string first, second, third;
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(first[0] == '#');
  CHECK(second == kCsvHeader);
  CHECK_FALSE(std::getline(lines, third));

  const auto dir = std::filesystem::temp_directory_path();
  const std::string p1 = (dir / "qmimo_test_a.csv").string();
  const std::string p2 = (dir / "qmimo_test_b.csv").string();
  emit_csv(run_ber_sweep(c), c, p1);
  emit_csv(run_ber_sweep(c), c, p2);
  CHECK(slurp(p1) == slurp(p2));
  CHECK_FALSE(slurp(p1).empty());
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);

  try {
    emit_csv(curve, c, "/nonexistent-dir/x.csv");
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoFailure);
  }
  std::istringstream bad("a,b,c\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(bad), Error);
}

TEST_CASE("plot script stub") {
  const auto path = (std::filesystem::temp_directory_path() / "qmimo_plot.py").string();
  write_plot_script("run.csv", path);
  const std::string s = slurp(path);
  CHECK(s.find("matplotlib") != std::string::npos);
  CHECK(s.find("run.csv") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("floor table preset") {
  Table2Options opt;
  opt.simulate = false;
  const auto cells = preset_table2(opt);
  REQUIRE(cells.size() == 12);
  CHECK(cells[0].modulation == 4);
  CHECK(cells[0].bits == 1);
  CHECK(cells[0].analytical == ber_floor(4, 100, 10, aqnm_params(1u)));
  std::ostringstream os;
  write_table2(os, cells, opt);
  CHECK(os.str().find("not_simulated") != std::string::npos);

  opt.simulate = true;
  opt.antennas = 24;
  opt.users = 4;
  opt.stopping = {20, 40'000};
  const auto sim = preset_table2(opt);
  for (const auto& c : sim) {
    CHECK(c.bits_sent > 0);
    CHECK(c.simulated == (c.analytical >= opt.min_simulated_floor));
    if (!c.simulated) CHECK(c.bits_sent < opt.stopping.max_bits);
  }
  std::ostringstream os2;
  write_table2(os2, sim, opt);
  CHECK(os2.str().find("0_observed_under_budget") != std::string::npos);
}

TEST_CASE("degradation preset") {
  const auto rows = preset_degradation(1e-4);
  REQUIRE(rows.size() == 24);
  std::size_t unreachable = 0;
  for (const auto& r : rows) {
    if (!r.degradation_db) {
      ++unreachable;
      CHECK(r.modulation == 16);
    }
  }
  CHECK(unreachable >= 1);
  std::ostringstream os;
  write_degradation(os, rows, 1e-4);
  CHECK(os.str().find(",0\n") != std::string::npos);
}
