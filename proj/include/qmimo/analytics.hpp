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

#include <cstddef>

#include "qmimo/quantizer.hpp"

namespace qmimo {

/// Closed-form BER query for ZF detection over i.i.d. Rayleigh fading with
/// N antennas and K users. gamma0 = sigma_x2 / sigma_n2 and may be +inf.
struct BerQuery {
  unsigned modulation = 4;  // M
  std::size_t antennas = 0;
  std::size_t users = 0;
  AqnmParams params;
  double gamma0 = 0.0;

  void validate() const;
};

/// Effective SNR scale after folding quantization noise into the ZF noise:
/// sigma_x2 / (sigma_n2 + (1 - alpha)/alpha * (K sigma_x2 + sigma_n2)).
double gamma_q0(double sigma_x2, double sigma_n2, std::size_t users, double alpha);

/// Same as gamma_q0 with sigma_x2 = 1, written in terms of gamma0. Accepts
/// gamma0 = +inf, giving alpha / ((1 - alpha) K) (or +inf when alpha = 1).
double gamma_q0_from_gamma0(double gamma0, std::size_t users, double alpha);

/// Natural log of the diversity term
///   B(i) = [(1 - mu_i)/2]^{D+1} sum_{j=0}^{D} C(D+j, j) [(1 + mu_i)/2]^j
/// with mu_i = sqrt(3 (2i+1)^2 g / (2(M-1) + 3 (2i+1)^2 g)).
double log_diversity_term(unsigned modulation, std::size_t diversity, unsigned i,
                          double effective_snr);

/// Full M-QAM BER sum at an effective per-stream SNR scale and D = N - K.
double ber_mqam_at(unsigned modulation, std::size_t diversity, double effective_snr);

/// Two dominant terms (i = 0, 1) of the same sum.
double ber_mqam_twoterm_at(unsigned modulation, std::size_t diversity,
                           double effective_snr);

double ber_mqam_full(const BerQuery& q);
double ber_mqam_twoterm(const BerQuery& q);

/// BER as transmit power goes to infinity. Throws InfinitePrecision for b = inf.
double ber_floor(unsigned modulation, std::size_t antennas, std::size_t users,
                 const AqnmParams& params);

/// gamma0 at which ber_mqam_full hits target. Throws Unreachable when the
/// target is at or below the floor.
double snr_for_ber(unsigned modulation, std::size_t antennas, std::size_t users,
                   const AqnmParams& params, double target);

/// Extra SNR in dB needed at resolution b to reach target, relative to
/// full precision.
double ber_degradation(unsigned modulation, std::size_t antennas, std::size_t users,
                       Resolution resolution, double target);

}  // namespace qmimo
