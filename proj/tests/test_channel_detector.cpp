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

#include <cmath>

#include "doctest.h"
#include "qmimo/analytics.hpp"
#include "qmimo/channel.hpp"
#include "qmimo/detector.hpp"
#include "qmimo/error.hpp"
#include "qmimo/modem.hpp"

using namespace qmimo;

TEST_CASE("link parameter validation") {
  CHECK_NOTHROW(LinkParams{100, 10}.validate());
  CHECK_THROWS_AS(LinkParams({4, 5}).validate(), Error);
  CHECK_THROWS_AS(LinkParams({4, 0}).validate(), Error);
  CHECK_THROWS_AS(LinkParams({4, 2, 1.0, 0.0}).validate(), Error);
  CHECK(LinkParams{100, 10, 1.0, 0.5}.received_power() == 10.5);
  CHECK(LinkParams{1, 1, 2.0, 0.5}.gamma0() == 4.0);
}

TEST_CASE("SNR conversions") {
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
  CHECK(gamma0_from_ebn0_db(0.0, 2) == doctest::Approx(2.0));
  CHECK(gamma0_from_ebn0_db(10.0, 4) == doctest::Approx(40.0));
}

TEST_CASE("received power matches the model") {
  const LinkParams p{100, 10, 1.0, 0.5};
  RngStream rng(8, 0);
  const Constellation c(16);
  double acc = 0.0;
  const int uses = 10'000;
  for (int t = 0; t < uses; ++t) {
    const ComplexMatrix h = draw_channel(p, rng);
    Bits b(40);
    for (auto& v : b) v = rng.bits() & 1u;
    const CVector y = transmit(h, modulate(b, c), p, rng);
    for (const auto& v : y) acc += std::norm(v);
  }
  CHECK(acc / (uses * 100.0) == doctest::Approx(10.5).epsilon(0.02));
}

TEST_CASE("noiseless and identity channels") {
  const LinkParams p{4, 4, 1.0, 1e-300};
  RngStream rng(2, 0);
  const ComplexMatrix h = draw_channel(p, rng);
  const CVector x{1.0, cplx(0, 1), -1.0, cplx(0.5, 0.5)};
  const CVector y = transmit(h, x, p, rng);
  const CVector hx = h * x;
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(y[i] - hx[i]) < 1e-140);

  const LinkParams q{1, 1, 1.0, 0.25};
  const ComplexMatrix id = ComplexMatrix::identity(1);
  double mean = 0.0, var = 0.0;
  const int n = 100'000;
  for (int t = 0; t < n; ++t) {
    const cplx v = transmit(id, CVector{1.0}, q, rng)[0];
    mean += v.real();
    var += std::norm(v - 1.0);
  }
  CHECK(mean / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(var / n == doctest::Approx(0.25).epsilon(0.02));
  CHECK_THROWS_AS(transmit(h, CVector(3), p, rng), Error);
  CHECK_THROWS_AS(transmit_block(h, ComplexMatrix(3, 2), p, rng), Error);
}

TEST_CASE("block transmission equals per-vector transmission without noise") {
  const LinkParams p{8, 3, 1.0, 1e-300};
  RngStream rng(4, 0);
  const ComplexMatrix h = draw_channel(p, rng);
  const ComplexMatrix x = cgauss_matrix(3, 5, 1.0, rng);
  const ComplexMatrix y = transmit_block(h, x, p, rng);
  CHECK((y - h * x).max_abs() < 1e-140);
}

TEST_CASE("ZF detection") {
  CHECK(zf_matrix(ComplexMatrix::identity(3)).a() == ComplexMatrix::identity(3));
  RngStream rng(6, 0);
  const ComplexMatrix h = cgauss_matrix(16, 4, 1.0, rng);
  const DetectionMatrix a = zf_matrix(h);
  CHECK(a.alpha_used == 1.0);
  CHECK((a.a_herm * h - ComplexMatrix::identity(4)).max_abs() < 1e-10);
  const CVector x{cplx(1, -1), 0.3, cplx(0, 2), -0.7};
  const CVector xhat = detect(a, h * x);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(xhat[i] - x[i]) < 1e-8);
  CHECK_THROWS_AS(detect(a, CVector(15)), Error);
  CHECK_THROWS_AS(detect_block(a, ComplexMatrix(15, 2)), Error);

  ComplexMatrix dup = h;
  for (std::size_t r = 0; r < 16; ++r) dup(r, 3) = dup(r, 1);
  try {
    zf_matrix(dup);
    FAIL("expected SingularGram");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularGram);
  }
}

TEST_CASE("quantized ZF compensates the Bussgang gain") {
  RngStream rng(9, 0);
  const ComplexMatrix h = cgauss_matrix(32, 6, 1.0, rng);
  const DetectionMatrix plain = zf_matrix(h);
  const DetectionMatrix same = zf_matrix_quantized(h, aqnm_params(Resolution::infinite()));
  CHECK(same.a_herm == plain.a_herm);

  AqnmParams half;
  half.alpha = 0.5;
  half.rho = 0.5;
  const DetectionMatrix twice = zf_matrix_quantized(h, half);
  CHECK(twice.a_herm == 2.0 * plain.a_herm);
  CHECK(twice.alpha_used == 0.5);

  for (unsigned b = 1; b <= 5; ++b) {
    const AqnmParams p = aqnm_params(b);
    const DetectionMatrix aq = zf_matrix_quantized(h, p);
    CHECK((p.alpha * (aq.a_herm * h) - ComplexMatrix::identity(6)).max_abs() < 1e-10);
  }

  // Noise-free AQNM mean path: y_q = alpha H x is undone exactly.
  const AqnmParams p1 = aqnm_params(1u);
  const ComplexMatrix x = cgauss_matrix(6, 1, 1.0, rng);
  const ComplexMatrix yq = p1.alpha * (h * x);
  const ComplexMatrix xhat = detect_block(zf_matrix_quantized(h, p1), yq);
  CHECK((xhat - x).max_abs() < 1e-8);

  AqnmParams bad;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(zf_matrix_quantized(h, bad), Error);
}

TEST_CASE("post-detection SINR") {
  const LinkParams unit{1, 1, 1.0, 0.5};
  const auto s1 = post_detection_sinr(ComplexMatrix::identity(1), unit,
                                      aqnm_params(Resolution::infinite()));
  CHECK(s1[0] == doctest::Approx(2.0));

  RngStream rng(10, 0);
  const LinkParams p{100, 10, 1.0, 0.1};
  const ComplexMatrix h = draw_channel(p, rng);
  const auto full = post_detection_sinr(h, p, aqnm_params(Resolution::infinite()));
  const ComplexMatrix g = gram_inverse(h);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(full[k] == doctest::Approx(p.gamma0() / g(k, k).real()));
  }

  const AqnmParams q = aqnm_params(2u);
  const double gq0 = gamma_q0(p.sigma_x2, p.sigma_n2, p.users, q.alpha);
  double acc = 0.0;
  const int draws = 1000;
  for (int t = 0; t < draws; ++t) {
    for (double v : post_detection_sinr(draw_channel(p, rng), p, q)) acc += v;
  }
  CHECK(acc / (draws * 10.0) == doctest::Approx(gq0 * 91.0).epsilon(0.02));
}
