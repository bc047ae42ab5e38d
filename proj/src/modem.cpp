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

#include "qmimo/modem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qmimo/error.hpp"

namespace qmimo {

Constellation::Constellation(unsigned m) : m_(m) {
  if (m != 4 && m != 16 && m != 64) {
    fail(ErrorCode::InvalidArgument,
         "constellation size must be 4, 16 or 64, got " + std::to_string(m));
  }
  bits_ = static_cast<unsigned>(std::countr_zero(m));
  side_ = 1u << (bits_ / 2);

  // PAM levels +-1, +-3, ... scaled so that E|x|^2 = 1 for the square grid.
  const double scale = std::sqrt(3.0 / (2.0 * (m - 1.0)));
  levels_.resize(side_);
  for (unsigned i = 0; i < side_; ++i) {
    levels_[i] = (2.0 * i - (side_ - 1.0)) * scale;
  }
  boundaries_.resize(side_ - 1);
  for (unsigned i = 0; i + 1 < side_; ++i) {
    boundaries_[i] = (2.0 * (i + 1.0) - side_) * scale;
  }
  gray_inv_.resize(side_);
  for (unsigned i = 0; i < side_; ++i) gray_inv_[gray(i)] = i;

  const unsigned half = bits_ / 2;
  points_.resize(m_);
  for (unsigned label = 0; label < m_; ++label) {
    const unsigned gi = label >> half;
    const unsigned gq = label & (side_ - 1);
    points_[label] = {levels_[gray_inv_[gi]], levels_[gray_inv_[gq]]};
  }
}

unsigned Constellation::slice(double v) const noexcept {
  // First boundary strictly greater than v gives the cell index.
  auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), v);
  auto idx = static_cast<unsigned>(it - boundaries_.begin());
  // v sitting on a positive boundary was pushed up; pull it to the inner level.
  if (idx > 0 && v == boundaries_[idx - 1] && v > 0.0) --idx;
  return idx;
}

CVector modulate(std::span<const std::uint8_t> bits, const Constellation& c) {
  const unsigned bps = c.bits_per_symbol();
  if (bits.size() % bps != 0) {
    fail(ErrorCode::LengthMismatch,
         "bit count " + std::to_string(bits.size()) +
             " is not a multiple of " + std::to_string(bps));
  }
  CVector out(bits.size() / bps);
  auto pts = c.points();
  for (std::size_t s = 0; s < out.size(); ++s) {
    unsigned label = 0;
    for (unsigned b = 0; b < bps; ++b) label = (label << 1) | (bits[s * bps + b] & 1u);
    out[s] = pts[label];
  }
  return out;
}

Bits demodulate_hard(std::span<const cplx> symbols, const Constellation& c) {
  const unsigned bps = c.bits_per_symbol();
  const unsigned half = bps / 2;
  Bits out(symbols.size() * bps);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const unsigned gi = Constellation::gray(c.slice(symbols[s].real()));
    const unsigned gq = Constellation::gray(c.slice(symbols[s].imag()));
    const unsigned label = (gi << half) | gq;
    for (unsigned b = 0; b < bps; ++b) {
      out[s * bps + b] = static_cast<std::uint8_t>((label >> (bps - 1 - b)) & 1u);
    }
  }
  return out;
}

std::uint64_t count_bit_errors(std::span<const std::uint8_t> tx,
                               std::span<const std::uint8_t> rx) {
  if (tx.size() != rx.size()) {
    fail(ErrorCode::LengthMismatch, "bit sequences differ in length");
  }
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < tx.size(); ++i) n += (tx[i] != rx[i]);
  return n;
}

}  // namespace qmimo
