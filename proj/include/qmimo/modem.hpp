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
#include <span>
#include <vector>

#include "qmimo/numerics.hpp"

namespace qmimo {

using Bits = std::vector<std::uint8_t>;

/// Square Gray-coded M-QAM with unit average symbol energy.
///
/// A symbol carries log2(M) bits. The first half label the in-phase axis and
/// the second half the quadrature axis; each half is the binary-reflected
/// Gray code of the amplitude index, index 0 being the most negative level.
class Constellation {
 public:
  /// M must be 4, 16 or 64.
  explicit Constellation(unsigned m);

  unsigned size() const noexcept { return m_; }
  unsigned bits_per_symbol() const noexcept { return bits_; }
  unsigned levels_per_axis() const noexcept { return side_; }

  /// Amplitude of PAM index i (0 = most negative).
  double level(unsigned i) const noexcept { return levels_[i]; }
  std::span<const double> levels() const noexcept { return levels_; }

  /// Decision boundaries between consecutive PAM levels.
  std::span<const double> boundaries() const noexcept { return boundaries_; }

  /// All M points, indexed by the integer value of their bit label (MSB first).
  std::span<const cplx> points() const noexcept { return points_; }

  /// Gray label of PAM index i.
  static unsigned gray(unsigned i) noexcept { return i ^ (i >> 1); }

  /// PAM index whose Gray label is g.
  unsigned index_of_gray(unsigned g) const noexcept { return gray_inv_[g]; }

  /// Hard slicer for one axis. A value exactly on a boundary goes to the
  /// level of smaller magnitude; the boundary at zero goes to the positive
  /// side.
  unsigned slice(double v) const noexcept;

 private:
  unsigned m_;
  unsigned bits_;
  unsigned side_;
  std::vector<double> levels_;
  std::vector<double> boundaries_;
  std::vector<unsigned> gray_inv_;
  std::vector<cplx> points_;
};

/// Maps bits to symbols; bit count must be a multiple of log2(M).
CVector modulate(std::span<const std::uint8_t> bits, const Constellation& c);

Bits demodulate_hard(std::span<const cplx> symbols, const Constellation& c);

/// Hamming distance between equal-length bit sequences.
std::uint64_t count_bit_errors(std::span<const std::uint8_t> tx,
                               std::span<const std::uint8_t> rx);

}  // namespace qmimo
