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

#include "qmimo/detector.hpp"

#include "qmimo/analytics.hpp"
#include "qmimo/error.hpp"

namespace qmimo {

namespace {

// A^H = G H^H with G = (H^H H)^{-1} Hermitian.
ComplexMatrix zf_herm(const ComplexMatrix& h, const ComplexMatrix& g, double scale) {
  const std::size_t n = h.rows();
  const std::size_t k = h.cols();
  ComplexMatrix out(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      auto hr = h.row(r);
      cplx s = 0.0;
      for (std::size_t l = 0; l < k; ++l) s += g(i, l) * std::conj(hr[l]);
      out(i, r) = scale * s;
    }
  }
  return out;
}

}  // namespace

DetectionMatrix zf_matrix(const ComplexMatrix& h) {
  return {zf_herm(h, gram_inverse(h), 1.0), 1.0};
}

DetectionMatrix zf_matrix_quantized(const ComplexMatrix& h, const AqnmParams& params) {
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "Bussgang gain must lie in (0, 1]");
  }
  return {zf_herm(h, gram_inverse(h), 1.0 / params.alpha), params.alpha};
}

CVector detect(const DetectionMatrix& a, std::span<const cplx> y) {
  if (y.size() != a.a_herm.cols()) {
    fail(ErrorCode::DimensionMismatch, "detect: y has the wrong length");
  }
  return a.a_herm * y;
}

ComplexMatrix detect_block(const DetectionMatrix& a, const ComplexMatrix& y) {
  if (y.rows() != a.a_herm.cols()) {
    fail(ErrorCode::DimensionMismatch, "detect_block: y has the wrong row count");
  }
  return a.a_herm * y;
}

std::vector<double> post_detection_sinr(const ComplexMatrix& h, const LinkParams& p,
                                        const AqnmParams& params) {
  const ComplexMatrix g = gram_inverse(h);
  const double gq0 = gamma_q0(p.sigma_x2, p.sigma_n2, p.users, params.alpha);
  std::vector<double> out(h.cols());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = gq0 / g(k, k).real();
  return out;
}

}  // namespace qmimo
