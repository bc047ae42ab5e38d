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

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmimo/numerics.hpp"

namespace qmimo {

enum class QuantizerKind { Uniform, LloydMax };

const char* to_string(QuantizerKind kind) noexcept;

/// Scalar b-bit quantizer normalized to a unit-variance input.
///
/// Cell i is [thresholds[i-1], thresholds[i]) and maps to levels[i]. An input
/// exactly on a threshold belongs to the upper cell, so zero maps to the
/// innermost positive level.
struct QuantizerSpec {
  unsigned bits = 0;
  QuantizerKind kind = QuantizerKind::LloydMax;
  std::vector<double> thresholds;
  std::vector<double> levels;

  double apply(double z) const noexcept;
};

/// Resolution in bits, or full precision.
struct Resolution {
  std::optional<unsigned> bits;  // nullopt = infinite

  static Resolution finite(unsigned b) { return {b}; }
  static Resolution infinite() { return {std::nullopt}; }
  bool is_infinite() const noexcept { return !bits.has_value(); }
};

/// AQNM linearization y_q = alpha*y + n_q.
struct AqnmParams {
  Resolution resolution;
  double rho = 0.0;
  double alpha = 1.0;
};

QuantizerSpec design_lloyd_max(unsigned bits);
QuantizerSpec design_uniform(unsigned bits);
QuantizerSpec design_quantizer(unsigned bits, QuantizerKind kind);

/// E[(Q(z) - z)^2] for standard Gaussian z, by closed-form cell integrals.
double distortion_factor(const QuantizerSpec& spec);

/// Monte Carlo estimate of the same quantity.
double distortion_factor_empirical(const QuantizerSpec& spec, std::size_t samples,
                                   RngStream& rng);

/// Tabulated (rho, alpha) for b <= 5; (pi*sqrt(3)/2) 2^{-2b} beyond.
AqnmParams aqnm_params(Resolution r);
inline AqnmParams aqnm_params(unsigned bits) {
  return aqnm_params(Resolution::finite(bits));
}

/// Quantizes real and imaginary parts independently after normalizing by the
/// per-component standard deviation.
CVector quantize_vector(std::span<const cplx> y, const QuantizerSpec& spec,
                        double component_sigma);
void quantize_in_place(std::span<cplx> y, const QuantizerSpec& spec,
                       double component_sigma);

/// Empirical Bussgang gain B = R_{yq y} R_{yy}^{-1}. Each row of the sample
/// matrices is one draw of the N-vector.
ComplexMatrix estimate_bussgang(const ComplexMatrix& y_samples,
                                const ComplexMatrix& yq_samples);

/// Plain-text table: header comment, then one line per cell.
void write_quantizer_table(std::ostream& os, const QuantizerSpec& spec);

}  // namespace qmimo
