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

#include "qmimo/channel.hpp"

#include <cmath>
#include <string>

#include "qmimo/error.hpp"

namespace qmimo {

void LinkParams::validate() const {
  if (users < 1 || antennas < users) {
    fail(ErrorCode::InvalidArgument,
         "need N >= K >= 1, got N=" + std::to_string(antennas) +
             " K=" + std::to_string(users));
  }
  if (!(sigma_x2 > 0.0) || !(sigma_n2 > 0.0)) {
    fail(ErrorCode::InvalidArgument, "signal and noise powers must be positive");
  }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double gamma0_from_ebn0_db(double ebn0_db, unsigned bits_per_symbol) {
  return db_to_linear(ebn0_db) * static_cast<double>(bits_per_symbol);
}

ComplexMatrix draw_channel(const LinkParams& p, RngStream& rng) {
  return cgauss_matrix(p.antennas, p.users, 1.0, rng);
}

CVector transmit(const ComplexMatrix& h, std::span<const cplx> x,
                 const LinkParams& p, RngStream& rng) {
  if (x.size() != h.cols() || h.rows() != p.antennas) {
    fail(ErrorCode::DimensionMismatch, "transmit: x or H does not match the link");
  }
  CVector y = h * x;
  for (auto& v : y) v += rng.cgauss(p.sigma_n2);
  return y;
}

ComplexMatrix transmit_block(const ComplexMatrix& h, const ComplexMatrix& x,
                             const LinkParams& p, RngStream& rng) {
  if (x.rows() != h.cols() || h.rows() != p.antennas) {
    fail(ErrorCode::DimensionMismatch, "transmit_block: x or H does not match the link");
  }
  ComplexMatrix y = h * x;
  // Noise is drawn column by column so that column s matches transmit() on the
  // same stream.
  for (std::size_t c = 0; c < y.cols(); ++c)
    for (std::size_t r = 0; r < y.rows(); ++r) y(r, c) += rng.cgauss(p.sigma_n2);
  return y;
}

}  // namespace qmimo
