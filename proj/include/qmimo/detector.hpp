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

#include <span>
#include <vector>

#include "qmimo/channel.hpp"
#include "qmimo/numerics.hpp"
#include "qmimo/quantizer.hpp"

namespace qmimo {

/// Zero-forcing detector. Stores A^H (K x N), so that A^H H = I / alpha_used.
struct DetectionMatrix {
  ComplexMatrix a_herm;
  double alpha_used = 1.0;

  /// A = H (H^H H)^{-1} / alpha_used, N x K.
  ComplexMatrix a() const { return a_herm.hermitian(); }
};

DetectionMatrix zf_matrix(const ComplexMatrix& h);

/// Bussgang-compensated ZF: A_q = H (H^H H)^{-1} / alpha.
DetectionMatrix zf_matrix_quantized(const ComplexMatrix& h, const AqnmParams& params);

/// x_hat = A^H y.
CVector detect(const DetectionMatrix& a, std::span<const cplx> y);

/// Column-wise detect() for an N x S block of received vectors.
ComplexMatrix detect_block(const DetectionMatrix& a, const ComplexMatrix& y);

/// Per-user SINR gamma_q0 / [(H^H H)^{-1}]_kk.
std::vector<double> post_detection_sinr(const ComplexMatrix& h, const LinkParams& p,
                                        const AqnmParams& params);

}  // namespace qmimo
