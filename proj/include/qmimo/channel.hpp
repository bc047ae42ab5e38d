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
#include <span>

#include "qmimo/numerics.hpp"

namespace qmimo {

/// Uplink link parameters: N receive antennas, K single-antenna users.
struct LinkParams {
  std::size_t antennas = 0;  // N
  std::size_t users = 0;     // K
  double sigma_x2 = 1.0;     // per-user symbol energy
  double sigma_n2 = 1.0;     // noise variance per antenna

  /// Throws InvalidArgument unless N >= K >= 1 and both powers are positive.
  void validate() const;

  double gamma0() const noexcept { return sigma_x2 / sigma_n2; }

  /// Per-antenna received power K*sigma_x2 + sigma_n2.
  double received_power() const noexcept {
    return static_cast<double>(users) * sigma_x2 + sigma_n2;
  }
};

/// Linear SNR from a dB value.
double db_to_linear(double db);
double linear_to_db(double lin);

/// gamma0 = (Eb/N0) * log2(M) for an Eb/N0 given in dB.
double gamma0_from_ebn0_db(double ebn0_db, unsigned bits_per_symbol);

/// N x K i.i.d. CN(0, 1) Rayleigh channel.
ComplexMatrix draw_channel(const LinkParams& p, RngStream& rng);

/// y = H x + n with n ~ CN(0, sigma_n2 I).
CVector transmit(const ComplexMatrix& h, std::span<const cplx> x,
                 const LinkParams& p, RngStream& rng);

/// Block form: column s of x is one symbol vector; returns H x + noise (N x S).
ComplexMatrix transmit_block(const ComplexMatrix& h, const ComplexMatrix& x,
                             const LinkParams& p, RngStream& rng);

}  // namespace qmimo
