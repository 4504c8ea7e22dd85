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

#include <complex>
#include <cstddef>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "entpow/errors.hpp"

namespace entpow {

using Complex = std::complex<double>;

/// Dense complex matrix. States are column matrices (d x 1).
using ComplexMatrix = Eigen::MatrixXcd;

/// Largest side length any constructed matrix may have.
inline constexpr std::size_t kDefaultDimensionCap = 2000;

/// Absolute tolerance for structural checks (unitarity, Hermiticity,
/// idempotence, normalization).
inline constexpr double kStructuralTolerance = 1e-10;

/// The factorization H = C^d1 (x) C^d2. Basis index of |a>|b> is a * d2 + b.
class Bipartition {
 public:
  Bipartition(std::size_t d1, std::size_t d2) : d1_(d1), d2_(d2) {
    if (d1 == 0 || d2 == 0) {
      throw DimensionError("bipartition factors must be positive, got (" +
                           std::to_string(d1) + "," + std::to_string(d2) + ")");
    }
  }

  std::size_t d1() const { return d1_; }
  std::size_t d2() const { return d2_; }
  std::size_t dim() const { return d1_ * d2_; }
  std::size_t min_factor() const { return d1_ < d2_ ? d1_ : d2_; }
  std::size_t max_factor() const { return d1_ < d2_ ? d2_ : d1_; }

  std::string str() const {
    return "(" + std::to_string(d1_) + "," + std::to_string(d2_) + ")";
  }

  friend bool operator==(const Bipartition&, const Bipartition&) = default;

 private:
  std::size_t d1_;
  std::size_t d2_;
};

enum class Factor { first, second };

/// Selects a pair exchange on the doubled space H (x) H, whose four tensor
/// factors are ordered (1, 2 | 3, 4) = (first copy | second copy).
enum class PairExchange { t13, t24, t13_t24 };

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + " has non-finite entries");
  }
}

inline void require_square(const ComplexMatrix& m, std::size_t side, const char* what) {
  if (static_cast<std::size_t>(m.rows()) != side || static_cast<std::size_t>(m.cols()) != side) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(side) + "x" +
                         std::to_string(side) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

/// Frobenius norm of U^dagger U - I.
inline double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

inline bool is_unitary(const ComplexMatrix& u, double tol = kStructuralTolerance) {
  return unitarity_defect(u) <= tol;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kStructuralTolerance) {
  return m.rows() == m.cols() && (m - m.adjoint()).norm() <= tol;
}

/// Hilbert-Schmidt inner product tr(A^dagger B).
inline Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("hs_inner: shape mismatch");
  }
  return (a.conjugate().cwiseProduct(b)).sum();
}

/// Kronecker product a (x) b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                          std::size_t cap = kDefaultDimensionCap) {
  const std::size_t rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  const std::size_t cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  if (rows > cap || cols > cap) {
    throw DimensionError("kron: result " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " exceeds dimension cap " + std::to_string(cap));
  }
  ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Reduced matrix of a square operator on H. Keeping `first` traces out
/// factor 2 (the usual tr_2), keeping `second` traces out factor 1.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, Bipartition part, Factor keep) {
  require_square(m, part.dim(), "partial_trace");
  const auto d1 = static_cast<Eigen::Index>(part.d1());
  const auto d2 = static_cast<Eigen::Index>(part.d2());
  if (keep == Factor::first) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Eigen::Index a = 0; a < d1; ++a)
      for (Eigen::Index c = 0; c < d1; ++c)
        for (Eigen::Index b = 0; b < d2; ++b) out(a, c) += m(a * d2 + b, c * d2 + b);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Eigen::Index b = 0; b < d2; ++b)
    for (Eigen::Index e = 0; e < d2; ++e)
      for (Eigen::Index a = 0; a < d1; ++a) out(b, e) += m(a * d2 + b, a * d2 + e);
  return out;
}

/// Permutation matrix on H (x) H exchanging the selected tensor factors.
/// Basis index of |a1 b1 a2 b2> is ((a1 * d2 + b1) * d1 + a2) * d2 + b2.
inline ComplexMatrix pair_exchange(Bipartition part, PairExchange which) {
  const std::size_t d1 = part.d1();
  const std::size_t d2 = part.d2();
  const std::size_t n = part.dim();
  if (n * n > kDefaultDimensionCap) {
    throw DimensionError("pair_exchange: doubled dimension " + std::to_string(n * n) +
                         " exceeds dimension cap");
  }
  const auto index = [&](std::size_t a1, std::size_t b1, std::size_t a2, std::size_t b2) {
    return static_cast<Eigen::Index>(((a1 * d2 + b1) * d1 + a2) * d2 + b2);
  };
  const auto side = static_cast<Eigen::Index>(n * n);
  ComplexMatrix out = ComplexMatrix::Zero(side, side);
  for (std::size_t a1 = 0; a1 < d1; ++a1)
    for (std::size_t b1 = 0; b1 < d2; ++b1)
      for (std::size_t a2 = 0; a2 < d1; ++a2)
        for (std::size_t b2 = 0; b2 < d2; ++b2) {
          Eigen::Index target = 0;
          switch (which) {
            case PairExchange::t13: target = index(a2, b1, a1, b2); break;
            case PairExchange::t24: target = index(a1, b2, a2, b1); break;
            case PairExchange::t13_t24: target = index(a2, b2, a1, b1); break;
          }
          out(target, index(a1, b1, a2, b2)) = 1.0;
        }
  return out;
}

/// (1 - T13) / 2, the projector onto states antisymmetric in factors 1, 3.
inline ComplexMatrix antisym_projector_13(Bipartition part) {
  ComplexMatrix t13 = pair_exchange(part, PairExchange::t13);
  return 0.5 * (ComplexMatrix::Identity(t13.rows(), t13.cols()) - t13);
}

/// (1 + T_ij) / 2 for the exchange selected by `which`.
inline ComplexMatrix sym_projector(Bipartition part, PairExchange which) {
  ComplexMatrix t = pair_exchange(part, which);
  return 0.5 * (ComplexMatrix::Identity(t.rows(), t.cols()) + t);
}

}  // namespace entpow
