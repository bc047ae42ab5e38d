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

#include "qmimo/analytics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qmimo/error.hpp"
#include "qmimo/numerics.hpp"

namespace qmimo {

namespace {

constexpr double kBracketLo = 1e-6;
constexpr double kBracketHi = 1e12;
constexpr int kBisectionIterations = 200;

struct QamShape {
  unsigned side;       // sqrt(M)
  unsigned axis_bits;  // log2(sqrt(M))
};

QamShape qam_shape(unsigned m) {
  if (m != 4 && m != 16 && m != 64) {
    fail(ErrorCode::InvalidArgument,
         "modulation must be 4, 16 or 64, got " + std::to_string(m));
  }
  const auto bits = static_cast<unsigned>(std::countr_zero(m));
  return {1u << (bits / 2), bits / 2};
}

void check_link(std::size_t antennas, std::size_t users) {
  if (users < 1 || antennas <= users) {
    fail(ErrorCode::InvalidArgument,
         "closed form needs N > K >= 1, got N=" + std::to_string(antennas) +
             " K=" + std::to_string(users));
  }
}

double ber_at_gamma0(unsigned m, std::size_t n, std::size_t k, double alpha,
                     double gamma0) {
  return ber_mqam_at(m, n - k, gamma_q0_from_gamma0(gamma0, k, alpha));
}

}  // namespace

void BerQuery::validate() const {
  qam_shape(modulation);
  check_link(antennas, users);
  if (!(gamma0 >= 0.0)) fail(ErrorCode::InvalidArgument, "gamma0 must be >= 0");
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  }
}

double gamma_q0(double sigma_x2, double sigma_n2, std::size_t users, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0) || users < 1 || !(sigma_x2 > 0.0) ||
      sigma_n2 < 0.0) {
    fail(ErrorCode::InvalidArgument, "gamma_q0: invalid arguments");
  }
  const double k = static_cast<double>(users);
  return sigma_x2 / (sigma_n2 + (1.0 - alpha) / alpha * (k * sigma_x2 + sigma_n2));
}

double gamma_q0_from_gamma0(double gamma0, std::size_t users, double alpha) {
  if (alpha == 1.0) return gamma0;
  if (std::isinf(gamma0)) return alpha / ((1.0 - alpha) * static_cast<double>(users));
  if (gamma0 == 0.0) return 0.0;
  return gamma_q0(1.0, 1.0 / gamma0, users, alpha);
}

double log_diversity_term(unsigned modulation, std::size_t diversity, unsigned i,
                          double effective_snr) {
  const double c = 2.0 * (modulation - 1.0);
  const double w = (2.0 * i + 1.0) * (2.0 * i + 1.0);
  const double x = 3.0 * w * effective_snr;
  const double mu = std::sqrt(x / (c + x));
  // 1 - mu written without cancellation.
  const double one_minus_mu = (c / (c + x)) / (1.0 + mu);
  const double log_lo = std::log(0.5 * one_minus_mu);
  const double log_hi = std::log(0.5 * (1.0 + mu));

  std::vector<double> terms(diversity + 1);
  for (std::size_t j = 0; j <= diversity; ++j) {
    terms[j] = log_binomial(diversity + j, j) + static_cast<double>(j) * log_hi;
  }
  return static_cast<double>(diversity + 1) * log_lo + log_sum_exp(terms);
}

double ber_mqam_at(unsigned modulation, std::size_t diversity, double effective_snr) {
  const QamShape s = qam_shape(modulation);
  if (!(effective_snr >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "effective SNR must be >= 0");
  }
  if (std::isinf(effective_snr)) return 0.0;

  std::vector<double> log_b;
  auto b_term = [&](unsigned i) {
    while (log_b.size() <= i) {
      log_b.push_back(log_diversity_term(modulation, diversity,
                                         static_cast<unsigned>(log_b.size()),
                                         effective_snr));
    }
    return std::exp(log_b[i]);
  };

  double sum = 0.0;
  for (unsigned k = 1; k <= s.axis_bits; ++k) {
    const unsigned pow2 = 1u << (k - 1);
    // Upper index (1 - 2^-k) sqrt(M) - 1, exact since 2^k divides sqrt(M).
    const unsigned last = s.side - (s.side >> k) - 1;
    for (unsigned i = 0; i <= last; ++i) {
      const unsigned fl = (i * pow2) / s.side;
      const unsigned fl_half = (2 * i * pow2 + s.side) / (2 * s.side);
      const double sign = (fl % 2 == 0) ? 1.0 : -1.0;
      const double weight = static_cast<double>(pow2) - static_cast<double>(fl_half);
      if (weight == 0.0) continue;
      sum += sign * weight * b_term(i);
    }
  }
  const double ber = 2.0 / (s.side * static_cast<double>(s.axis_bits)) * sum;
  return std::clamp(ber, 0.0, 1.0);
}

double ber_mqam_twoterm_at(unsigned modulation, std::size_t diversity,
                           double effective_snr) {
  const QamShape s = qam_shape(modulation);
  if (!(effective_snr >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "effective SNR must be >= 0");
  }
  if (std::isinf(effective_snr)) return 0.0;
  const double norm = s.side * static_cast<double>(s.axis_bits);
  double ber = 2.0 * (s.side - 1.0) / norm *
               std::exp(log_diversity_term(modulation, diversity, 0, effective_snr));
  if (s.side > 2) {
    ber += 2.0 * (s.side - 2.0) / norm *
           std::exp(log_diversity_term(modulation, diversity, 1, effective_snr));
  }
  return std::clamp(ber, 0.0, 1.0);
}

double ber_mqam_full(const BerQuery& q) {
  q.validate();
  return ber_at_gamma0(q.modulation, q.antennas, q.users, q.params.alpha, q.gamma0);
}

double ber_mqam_twoterm(const BerQuery& q) {
  q.validate();
  return ber_mqam_twoterm_at(q.modulation, q.antennas - q.users,
                             gamma_q0_from_gamma0(q.gamma0, q.users, q.params.alpha));
}

double ber_floor(unsigned modulation, std::size_t antennas, std::size_t users,
                 const AqnmParams& params) {
  if (params.resolution.is_infinite() || params.alpha >= 1.0) {
    fail(ErrorCode::InfinitePrecision, "full precision has no BER floor");
  }
  check_link(antennas, users);
  const double gq0 = params.alpha / ((1.0 - params.alpha) * static_cast<double>(users));
  return ber_mqam_at(modulation, antennas - users, gq0);
}

double snr_for_ber(unsigned modulation, std::size_t antennas, std::size_t users,
                   const AqnmParams& params, double target) {
  check_link(antennas, users);
  const double floor = (params.resolution.is_infinite() || params.alpha >= 1.0)
                           ? 0.0
                           : ber_floor(modulation, antennas, users, params);
  if (!(target > floor)) {
    fail(ErrorCode::Unreachable, "target BER " + std::to_string(target) +
                                     " is at or below the floor " +
                                     std::to_string(floor));
  }
  auto ber = [&](double g) {
    return ber_at_gamma0(modulation, antennas, users, params.alpha, g);
  };
  if (!(target < ber(kBracketLo))) {
    fail(ErrorCode::InvalidArgument, "target BER is above the low-SNR limit");
  }
  if (ber(kBracketHi) > target) {
    fail(ErrorCode::Unreachable, "target BER needs gamma0 beyond 1e12");
  }

  // BER decreases in gamma0; bisect in log domain.
  double lo = std::log(kBracketLo);
  double hi = std::log(kBracketHi);
  for (int it = 0; it < kBisectionIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double b = ber(std::exp(mid));
    if (b > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (std::abs(b - target) <= 1e-9 * target) return std::exp(mid);
  }
  return std::exp(0.5 * (lo + hi));
}

double ber_degradation(unsigned modulation, std::size_t antennas, std::size_t users,
                       Resolution resolution, double target) {
  const double reference =
      snr_for_ber(modulation, antennas, users, aqnm_params(Resolution::infinite()), target);
  if (resolution.is_infinite()) return 0.0;
  const double quantized =
      snr_for_ber(modulation, antennas, users, aqnm_params(resolution), target);
  return 10.0 * std::log10(quantized / reference);
}

}  // namespace qmimo
