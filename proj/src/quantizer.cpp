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

#include "qmimo/quantizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "qmimo/error.hpp"

namespace qmimo {

namespace {

constexpr unsigned kMaxDesignBits = 8;
constexpr int kMaxLloydSweeps = 10000;
constexpr double kLloydTolerance = 1e-10;

// Distortion factors for Gaussian-optimal quantizers, b = 1..5.
constexpr std::array<double, 5> kRhoTable = {0.3634, 0.1175, 0.03454, 0.009497,
                                             0.002499};

double phi(double x) {
  if (std::isinf(x)) return 0.0;
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// P(a <= Z < b), accurate in both tails.
double prob(double a, double b) {
  const double s = 1.0 / std::numbers::sqrt2;
  if (a >= 0.0) return 0.5 * (std::erfc(a * s) - std::erfc(b * s));
  if (b <= 0.0) return 0.5 * (std::erfc(-b * s) - std::erfc(-a * s));
  return 1.0 - 0.5 * std::erfc(-a * s) - 0.5 * std::erfc(b * s);
}

// E[Z | a <= Z < b].
double cell_mean(double a, double b) { return (phi(a) - phi(b)) / prob(a, b); }

double lower_edge(const QuantizerSpec& q, std::size_t i) {
  return i == 0 ? -INFINITY : q.thresholds[i - 1];
}
double upper_edge(const QuantizerSpec& q, std::size_t i) {
  return i == q.thresholds.size() ? INFINITY : q.thresholds[i];
}

void check_bits(unsigned bits) {
  if (bits < 1 || bits > kMaxDesignBits) {
    fail(ErrorCode::InvalidArgument,
         "quantizer resolution must be 1..8 bits, got " + std::to_string(bits));
  }
}

QuantizerSpec uniform_grid(unsigned bits, double step) {
  const std::size_t n = std::size_t{1} << bits;
  const double half = static_cast<double>(n) / 2.0;
  QuantizerSpec q;
  q.bits = bits;
  q.kind = QuantizerKind::Uniform;
  q.levels.resize(n);
  q.thresholds.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) q.levels[i] = (static_cast<double>(i) - half + 0.5) * step;
  for (std::size_t i = 0; i + 1 < n; ++i)
    q.thresholds[i] = (static_cast<double>(i) + 1.0 - half) * step;
  return q;
}

}  // namespace

const char* to_string(QuantizerKind kind) noexcept {
  return kind == QuantizerKind::Uniform ? "uniform" : "lloyd_max";
}

double QuantizerSpec::apply(double z) const noexcept {
  auto it = std::upper_bound(thresholds.begin(), thresholds.end(), z);
  return levels[static_cast<std::size_t>(it - thresholds.begin())];
}

double distortion_factor(const QuantizerSpec& spec) {
  // Per cell: int (l - z)^2 phi = l^2 P - 2 l (phi(a) - phi(b)) + int z^2 phi,
  // with int_a^b z^2 phi = P + a phi(a) - b phi(b).
  double d = 0.0;
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    const double a = lower_edge(spec, i);
    const double b = upper_edge(spec, i);
    const double l = spec.levels[i];
    const double p = prob(a, b);
    const double aphi = std::isinf(a) ? 0.0 : a * phi(a);
    const double bphi = std::isinf(b) ? 0.0 : b * phi(b);
    d += l * l * p - 2.0 * l * (phi(a) - phi(b)) + p + aphi - bphi;
  }
  return d;
}

double distortion_factor_empirical(const QuantizerSpec& spec, std::size_t samples,
                                   RngStream& rng) {
  double acc = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double z = rng.normal();
    const double e = spec.apply(z) - z;
    acc += e * e;
  }
  return acc / static_cast<double>(samples);
}

QuantizerSpec design_uniform(unsigned bits) {
  check_bits(bits);
  // Golden-section search for the MSE-optimal step.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-3;
  double hi = 4.0;
  auto mse = [bits](double step) { return distortion_factor(uniform_grid(bits, step)); };
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = mse(x1);
  double f2 = mse(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = mse(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = mse(x2);
    }
  }
  return uniform_grid(bits, 0.5 * (lo + hi));
}

QuantizerSpec design_lloyd_max(unsigned bits) {
  QuantizerSpec q = design_uniform(bits);
  q.kind = QuantizerKind::LloydMax;
  const std::size_t n = q.levels.size();
  for (int sweep = 0; sweep < kMaxLloydSweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double t = 0.5 * (q.levels[i] + q.levels[i + 1]);
      moved = std::max(moved, std::abs(t - q.thresholds[i]));
      q.thresholds[i] = t;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double l = cell_mean(lower_edge(q, i), upper_edge(q, i));
      moved = std::max(moved, std::abs(l - q.levels[i]));
      q.levels[i] = l;
    }
    // Enforce exact odd symmetry; the sweep preserves it up to rounding.
    for (std::size_t i = 0; i < n / 2; ++i) {
      const double l = 0.5 * (q.levels[n - 1 - i] - q.levels[i]);
      q.levels[i] = -l;
      q.levels[n - 1 - i] = l;
    }
    for (std::size_t i = 0; i < (n - 1) / 2; ++i) {
      const double t = 0.5 * (q.thresholds[n - 2 - i] - q.thresholds[i]);
      q.thresholds[i] = -t;
      q.thresholds[n - 2 - i] = t;
    }
    q.thresholds[(n - 1) / 2] = 0.0;
    if (moved < kLloydTolerance) return q;
  }
  fail(ErrorCode::NoConvergence,
       "Lloyd iteration did not converge for b=" + std::to_string(bits));
}

QuantizerSpec design_quantizer(unsigned bits, QuantizerKind kind) {
  return kind == QuantizerKind::Uniform ? design_uniform(bits) : design_lloyd_max(bits);
}

AqnmParams aqnm_params(Resolution r) {
  AqnmParams p;
  p.resolution = r;
  if (r.is_infinite()) {
    p.rho = 0.0;
    p.alpha = 1.0;
    return p;
  }
  const unsigned b = *r.bits;
  if (b < 1) fail(ErrorCode::InvalidArgument, "resolution must be at least 1 bit");
  if (b <= kRhoTable.size()) {
    p.rho = kRhoTable[b - 1];
  } else {
    p.rho = std::numbers::pi * std::sqrt(3.0) / 2.0 * std::ldexp(1.0, -2 * static_cast<int>(b));
  }
  p.alpha = 1.0 - p.rho;
  return p;
}

void quantize_in_place(std::span<cplx> y, const QuantizerSpec& spec,
                       double component_sigma) {
  if (!(component_sigma > 0.0)) {
    fail(ErrorCode::InvalidArgument, "component_sigma must be positive");
  }
  const double inv = 1.0 / component_sigma;
  for (auto& v : y) {
    v = {component_sigma * spec.apply(v.real() * inv),
         component_sigma * spec.apply(v.imag() * inv)};
  }
}

CVector quantize_vector(std::span<const cplx> y, const QuantizerSpec& spec,
                        double component_sigma) {
  CVector out(y.begin(), y.end());
  quantize_in_place(out, spec, component_sigma);
  return out;
}

ComplexMatrix estimate_bussgang(const ComplexMatrix& y_samples,
                                const ComplexMatrix& yq_samples) {
  const std::size_t s = y_samples.rows();
  const std::size_t n = y_samples.cols();
  if (yq_samples.rows() != s || yq_samples.cols() != n) {
    fail(ErrorCode::DimensionMismatch, "sample matrices differ in shape");
  }
  if (s < 10 * n) {
    fail(ErrorCode::InvalidArgument,
         "estimate_bussgang needs at least 10*N samples");
  }
  // R_yy = Hs^H Hs with Hs = conj(Y)/sqrt(S), so gram_inverse gives R_yy^{-1}.
  const double norm = 1.0 / std::sqrt(static_cast<double>(s));
  std::vector<cplx> e(y_samples.entries().begin(), y_samples.entries().end());
  for (auto& v : e) v = std::conj(v) * norm;
  const ComplexMatrix ryy_inv = gram_inverse(ComplexMatrix(s, n, std::move(e)));

  ComplexMatrix rqy(n, n);
  for (std::size_t t = 0; t < s; ++t) {
    auto q = yq_samples.row(t);
    auto y = y_samples.row(t);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rqy(i, j) += q[i] * std::conj(y[j]);
  }
  return (1.0 / static_cast<double>(s)) * rqy * ryy_inv;
}

void write_quantizer_table(std::ostream& os, const QuantizerSpec& spec) {
  const auto old = os.precision(17);
  os << "# bits=" << spec.bits << " kind=" << to_string(spec.kind)
     << " rho=" << distortion_factor(spec) << '\n';
  os << "# cell lower_threshold upper_threshold level\n";
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    os << i << ' ' << lower_edge(spec, i) << ' ' << upper_edge(spec, i) << ' '
       << spec.levels[i] << '\n';
  }
  os.precision(old);
}

}  // namespace qmimo
