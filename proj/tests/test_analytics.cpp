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

#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "qmimo/analytics.hpp"
#include "qmimo/error.hpp"

using namespace qmimo;
using boost::multiprecision::cpp_bin_float_50;

namespace {

// Diversity term evaluated directly in 50-digit arithmetic.
cpp_bin_float_50 oracle_b(unsigned m, unsigned d, unsigned i, double g) {
  const cpp_bin_float_50 w = cpp_bin_float_50(2 * i + 1) * (2 * i + 1);
  const cpp_bin_float_50 x = 3 * w * cpp_bin_float_50(g);
  const cpp_bin_float_50 mu = sqrt(x / (2 * cpp_bin_float_50(m - 1) + x));
  cpp_bin_float_50 sum = 0;
  for (unsigned j = 0; j <= d; ++j) {
    sum += boost::math::binomial_coefficient<cpp_bin_float_50>(d + j, j) *
           pow((1 + mu) / 2, j);
  }
  return pow((1 - mu) / 2, d + 1) * sum;
}

// The full BER sum with floating-point floors in 50-digit arithmetic.
double oracle_ber(unsigned m, unsigned d, double g) {
  const cpp_bin_float_50 side = sqrt(cpp_bin_float_50(m));
  const unsigned s = static_cast<unsigned>(std::lround(std::sqrt(m)));
  const unsigned l = static_cast<unsigned>(std::lround(std::log2(s)));
  cpp_bin_float_50 total = 0;
  for (unsigned k = 1; k <= l; ++k) {
    const cpp_bin_float_50 p2 = pow(cpp_bin_float_50(2), k - 1);
    const cpp_bin_float_50 upper = (1 - pow(cpp_bin_float_50(2), -int(k))) * side - 1;
    for (unsigned i = 0; i <= upper; ++i) {
      const cpp_bin_float_50 f = floor(i * p2 / side);
      const cpp_bin_float_50 sign = (static_cast<long>(f) % 2 == 0) ? 1 : -1;
      total += sign * (p2 - floor(i * p2 / side + cpp_bin_float_50(0.5))) *
               oracle_b(m, d, i, g);
    }
  }
  return static_cast<double>(2 * total / (side * l));
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("gamma_q0") {
  CHECK(gamma_q0(1.0, 0.25, 10, 1.0) == doctest::Approx(4.0));
  CHECK(gamma_q0(1.0, 0.0, 10, 0.6366) == doctest::Approx(0.6366 / (0.3634 * 10)));
  CHECK(gamma_q0(1.0, 0.0, 10, 0.6366) == doctest::Approx(0.17517).epsilon(1e-4));
  for (std::size_t k = 1; k < 40; ++k) {
    CHECK(gamma_q0(1.0, 0.1, k + 1, 0.8825) < gamma_q0(1.0, 0.1, k, 0.8825));
  }
  CHECK(gamma_q0(1.0, 0.1, 10, 0.8825) < 10.0);
  CHECK(gamma_q0_from_gamma0(std::numeric_limits<double>::infinity(), 10, 0.8825) ==
        doctest::Approx(0.8825 / (0.1175 * 10)));
  CHECK(gamma_q0_from_gamma0(0.0, 10, 0.8825) == 0.0);
  CHECK_THROWS_AS(gamma_q0(1.0, 0.1, 10, 0.0), Error);
  CHECK_THROWS_AS(gamma_q0(1.0, 0.1, 0, 0.5), Error);
}

TEST_CASE("diversity term against a 50-digit oracle") {
  for (unsigned m : {4u, 16u, 64u}) {
    for (unsigned d = 0; d <= 20; ++d) {
      for (unsigned i = 0; i < 4; ++i) {
        for (double g : {1e-3, 0.1, 1.0, 7.5, 100.0, 1e4}) {
          const double want = static_cast<double>(log(oracle_b(m, d, i, g)));
          CHECK(std::abs(log_diversity_term(m, d, i, g) - want) < 1e-10 * std::max(1.0, std::abs(want)));
        }
      }
    }
  }
}

TEST_CASE("full BER against a 50-digit oracle") {
  for (unsigned m : {4u, 16u, 64u}) {
    for (unsigned d : {0u, 1u, 5u, 20u}) {
      for (double g : {0.01, 0.5, 3.0, 40.0, 1e3}) {
        const double want = oracle_ber(m, d, g);
        CHECK(rel(ber_mqam_at(m, d, g), want) < 1e-9);
      }
    }
  }
}

TEST_CASE("BER limits") {
  CHECK(ber_mqam_at(4, 0, 0.0) == 0.5);
  CHECK(ber_mqam_at(4, 10, std::numeric_limits<double>::infinity()) == 0.0);
  for (unsigned m : {4u, 16u, 64u}) {
    double prev = 1.0;
    for (double g = 1e-3; g < 1e4; g *= 1.5) {
      const double b = ber_mqam_at(m, 5, g);
      CHECK(b <= prev);
      CHECK(b >= 0.0);
      prev = b;
    }
  }
  CHECK_THROWS_AS(ber_mqam_at(8, 5, 1.0), Error);
  CHECK_THROWS_AS(ber_mqam_at(4, 5, -1.0), Error);
}

TEST_CASE("two-term form") {
  for (double g : {0.01, 0.3, 2.0, 50.0}) {
    CHECK(ber_mqam_twoterm_at(4, 90, g) == ber_mqam_at(4, 90, g));
  }
  // Mid SNR for 16-QAM, where the full BER sits between 1e-1 and 1e-6.
  for (double g = 0.005; g <= 0.2; g *= 1.25) {
    const double full = ber_mqam_at(16, 90, g);
    if (full < 1e-6 || full > 1e-1) continue;
    CHECK(rel(ber_mqam_twoterm_at(16, 90, g), full) < 0.05);
  }
}

TEST_CASE("queries validate their arguments") {
  BerQuery q;
  q.modulation = 16;
  q.antennas = 100;
  q.users = 10;
  q.params = aqnm_params(3u);
  q.gamma0 = 10.0;
  CHECK(ber_mqam_full(q) ==
        ber_mqam_at(16, 90, gamma_q0_from_gamma0(10.0, 10, q.params.alpha)));
  CHECK(ber_mqam_twoterm(q) ==
        ber_mqam_twoterm_at(16, 90, gamma_q0_from_gamma0(10.0, 10, q.params.alpha)));
  q.antennas = 10;
  CHECK_THROWS_AS(ber_mqam_full(q), Error);
  q.antennas = 100;
  q.gamma0 = -1.0;
  CHECK_THROWS_AS(ber_mqam_full(q), Error);
}

TEST_CASE("BER floors for the tabulated cells") {
  CHECK(rel(ber_floor(4, 100, 10, aqnm_params(1u)), 4.76e-5) < 0.03);
  CHECK(rel(ber_floor(4, 100, 10, aqnm_params(2u)), 1.4e-14) < 0.03);
  CHECK(rel(ber_floor(16, 100, 10, aqnm_params(1u)), 2.84e-2) < 0.03);
  CHECK(rel(ber_floor(64, 100, 10, aqnm_params(1u)), 1.14e-1) < 0.03);
  CHECK(rel(ber_floor(64, 100, 10, aqnm_params(3u)), 1.83e-4) < 0.03);
  CHECK(rel(ber_floor(64, 100, 10, aqnm_params(4u)), 6.59e-11) < 0.03);
  for (unsigned m : {4u, 16u, 64u}) {
    for (unsigned b = 1; b < 8; ++b) {
      CHECK(ber_floor(m, 100, 10, aqnm_params(b + 1)) <
            ber_floor(m, 100, 10, aqnm_params(b)));
    }
  }
  try {
    ber_floor(4, 100, 10, aqnm_params(Resolution::infinite()));
    FAIL("expected InfinitePrecision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfinitePrecision);
  }
}

TEST_CASE("snr_for_ber inverts the BER curve") {
  const AqnmParams p = aqnm_params(2u);
  for (double g : {0.05, 0.3, 1.0}) {
    BerQuery q{16, 100, 10, p, g};
    const double target = ber_mqam_full(q);
    CHECK(rel(snr_for_ber(16, 100, 10, p, target), g) < 1e-6);
  }
  const double ref = snr_for_ber(4, 100, 10, aqnm_params(Resolution::infinite()), 1e-4);
  CHECK(std::isfinite(ref));
  CHECK(ref > 0.0);
  try {
    snr_for_ber(16, 100, 10, aqnm_params(1u), 1e-4);
    FAIL("expected Unreachable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unreachable);
  }
  CHECK_THROWS_AS(snr_for_ber(4, 100, 10, p, 0.9), Error);
}

TEST_CASE("BER degradation") {
  CHECK(ber_degradation(4, 100, 10, Resolution::infinite(), 1e-4) == 0.0);
  CHECK(std::abs(ber_degradation(4, 100, 10, Resolution::finite(2), 1e-4) - 1.5) < 0.3);
  CHECK(std::abs(ber_degradation(4, 100, 10, Resolution::finite(3), 1e-4) - 0.3) < 0.2);
  CHECK(std::abs(ber_degradation(16, 100, 10, Resolution::finite(3), 1e-4) - 1.5) < 0.3);
  CHECK(std::abs(ber_degradation(16, 100, 10, Resolution::finite(4), 1e-4) - 0.3) < 0.2);
  for (unsigned b = 1; b <= 4; ++b) {
    const double d100 = ber_degradation(4, 100, 10, Resolution::finite(b), 1e-4);
    const double d200 = ber_degradation(4, 200, 10, Resolution::finite(b), 1e-4);
    const double d400 = ber_degradation(4, 400, 10, Resolution::finite(b), 1e-4);
    CHECK(d100 > d200);
    CHECK(d200 > d400);
    CHECK(d400 > 0.0);
  }
}
