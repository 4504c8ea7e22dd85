// Copyright 2026 The entpow Authors
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

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "entpow/tensor.hpp"

namespace entpow {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Identifies one independent random stream. Equal specs give equal samples.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  /// A stream nested under this one; child(k) for distinct k are independent
  /// of each other and of the parent.
  SeedSpec child(std::uint64_t k) const {
    return {detail::splitmix64(master_seed ^ detail::splitmix64(stream_index + 0x5851f42d4c957f2dULL)),
            k};
  }

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Sequential sampler over one stream. Not thread safe; give every worker
/// its own SeedSpec.
class RandomStream {
 public:
  explicit RandomStream(SeedSpec seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed.master_seed),
                      static_cast<std::uint32_t>(seed.master_seed >> 32),
                      static_cast<std::uint32_t>(seed.stream_index),
                      static_cast<std::uint32_t>(seed.stream_index >> 32)};
    engine_.seed(seq);
  }

  double normal() { return normal_(engine_); }

  /// Standard complex Gaussian, E|z|^2 = 1.
  Complex complex_normal() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

  ComplexMatrix ginibre(std::size_t rows, std::size_t cols) {
    ComplexMatrix z(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = complex_normal();
    return z;
  }

  /// Uniformly distributed unit vector in C^d.
  ComplexMatrix state(std::size_t d) {
    if (d == 0) throw DimensionError("haar_state: dimension must be positive");
    if (d > kDefaultDimensionCap) throw DimensionError("haar_state: dimension exceeds cap");
    ComplexMatrix psi = ginibre(d, 1);
    while (psi.norm() == 0.0) psi = ginibre(d, 1);
    return psi / psi.norm();
  }

  /// Haar-distributed n x n unitary: QR of a Ginibre matrix with the phases
  /// of R's diagonal moved into Q.
  ComplexMatrix unitary(std::size_t n) {
    if (n == 0) throw DimensionError("haar_unitary: dimension must be positive");
    if (n > kDefaultDimensionCap) throw DimensionError("haar_unitary: dimension exceeds cap");
    ComplexMatrix z = ginibre(n, n);
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(z.rows(), z.cols());
    const auto& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      const Complex diag = r(j, j);
      const double mag = std::abs(diag);
      if (mag > 0.0) q.col(j) *= diag / mag;
    }
    return q;
  }

  std::pair<ComplexMatrix, ComplexMatrix> product_pair(Bipartition part) {
    ComplexMatrix psi1 = state(part.d1());
    ComplexMatrix psi2 = state(part.d2());
    return {std::move(psi1), std::move(psi2)};
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline ComplexMatrix haar_state(std::size_t d, SeedSpec seed) { return RandomStream(seed).state(d); }

inline ComplexMatrix haar_unitary(std::size_t n, SeedSpec seed) { return RandomStream(seed).unitary(n); }

inline std::pair<ComplexMatrix, ComplexMatrix> product_state_pair(Bipartition part, SeedSpec seed) {
  return RandomStream(seed).product_pair(part);
}

}  // namespace entpow
