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

#include "qmimo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qmimo/error.hpp"

namespace qmimo {

namespace {

constexpr double kMaxGramCondition = 1e12;

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    fail(ErrorCode::DimensionMismatch,
         "matrix entry count " + std::to_string(data_.size()) +
             " does not match " + std::to_string(rows) + "x" +
             std::to_string(cols));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::hermitian() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    fail(ErrorCode::DimensionMismatch, "matrix product: inner dimensions differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  const std::size_t n = b.cols();
  // Interleaved re/im arithmetic; std::complex is layout-compatible with double[2].
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto* o = reinterpret_cast<double*>(&out(i, 0));
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double sr = a(i, l).real();
      const double si = a(i, l).imag();
      const auto* br = reinterpret_cast<const double*>(b.row(l).data());
      for (std::size_t j = 0; j < n; ++j) {
        const double xr = br[2 * j];
        const double xi = br[2 * j + 1];
        o[2 * j] += sr * xr - si * xi;
        o[2 * j + 1] += sr * xi + si * xr;
      }
    }
  }
  return out;
}

ComplexMatrix operator*(double s, const ComplexMatrix& a) {
  std::vector<cplx> e(a.entries().begin(), a.entries().end());
  for (auto& v : e) v *= s;
  return ComplexMatrix(a.rows(), a.cols(), std::move(e));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::DimensionMismatch, "matrix difference: shapes differ");
  }
  std::vector<cplx> e(a.entries().begin(), a.entries().end());
  auto be = b.entries();
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= be[i];
  return ComplexMatrix(a.rows(), a.cols(), std::move(e));
}

CVector operator*(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) {
    fail(ErrorCode::DimensionMismatch, "matrix-vector product: size mismatch");
  }
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * x[j];
    out[i] = acc;
  }
  return out;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32)};
  engine_.seed(seq);
}

cplx RngStream::cgauss(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

ComplexMatrix cgauss_matrix(std::size_t rows, std::size_t cols, double variance,
                            RngStream& rng) {
  std::vector<cplx> e(rows * cols);
  for (auto& v : e) v = rng.cgauss(variance);
  return ComplexMatrix(rows, cols, std::move(e));
}

ComplexMatrix gram_inverse(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  const std::size_t k = h.cols();
  if (n < k || k == 0) {
    fail(ErrorCode::DimensionMismatch,
         "gram_inverse needs rows >= cols >= 1, got " + std::to_string(n) + "x" +
             std::to_string(k));
  }

  // Gram = H^H H (k x k, Hermitian).
  ComplexMatrix gram(k, k);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = h.row(r);
    for (std::size_t i = 0; i < k; ++i) {
      const cplx ci = std::conj(row[i]);
      for (std::size_t j = i; j < k; ++j) gram(i, j) += ci * row[j];
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < i; ++j) gram(i, j) = std::conj(gram(j, i));

  // Cholesky: gram = L L^H.
  ComplexMatrix l(k, k);
  double min_pivot = std::numeric_limits<double>::infinity();
  double max_pivot = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double d = gram(j, j).real();
    for (std::size_t p = 0; p < j; ++p) d -= std::norm(l(j, p));
    if (!(d > 0.0)) {
      fail(ErrorCode::SingularGram, "Gram matrix is not positive definite");
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    min_pivot = std::min(min_pivot, ljj);
    max_pivot = std::max(max_pivot, ljj);
    for (std::size_t i = j + 1; i < k; ++i) {
      cplx s = gram(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * std::conj(l(j, p));
      l(i, j) = s / ljj;
    }
  }
  const double cond_est = (max_pivot / min_pivot) * (max_pivot / min_pivot);
  if (cond_est > kMaxGramCondition) {
    fail(ErrorCode::SingularGram,
         "Gram matrix condition estimate " + std::to_string(cond_est) +
             " exceeds 1e12");
  }

  // W = L^{-1} by forward substitution, then G = W^H W.
  ComplexMatrix w(k, k);
  for (std::size_t c = 0; c < k; ++c) {
    w(c, c) = 1.0 / l(c, c);
    for (std::size_t i = c + 1; i < k; ++i) {
      cplx s = 0.0;
      for (std::size_t p = c; p < i; ++p) s -= l(i, p) * w(p, c);
      w(i, c) = s / l(i, i);
    }
  }
  ComplexMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      cplx s = 0.0;
      for (std::size_t p = j; p < k; ++p) s += std::conj(w(p, i)) * w(p, j);
      g(i, j) = s;
    }
    g(i, i) = g(i, i).real();
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = std::conj(g(j, i));
  return g;
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    fail(ErrorCode::InvalidArgument, "log_binomial requires k <= n");
  }
  const std::uint64_t m = std::min(k, n - k);
  double acc = 0.0;
  for (std::uint64_t i = 1; i <= m; ++i) {
    acc += std::log(static_cast<double>(n - m + i) / static_cast<double>(i));
  }
  return acc;
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double hi = *std::max_element(v.begin(), v.end());
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

}  // namespace qmimo
