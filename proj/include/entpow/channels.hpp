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
#include <utility>
#include <vector>

#include "entpow/entangling.hpp"

namespace entpow {

/// Kraus operators of the two CP maps obtained by fixing the second input
/// factor of a gate to |psi2>:
///   A_j = (<j| on factor 2) U (|psi2> on factor 2),  j < d2,  each d1 x d1
///   At_i = sum_j |j><i| A_j,                          i < d1,  each d2 x d1
struct KrausFamily {
  std::vector<ComplexMatrix> a_ops;
  std::vector<ComplexMatrix> tilde_ops;
  UnitaryGate source_gate;
  ComplexMatrix fixed_state;

  /// X = sum_j A_j A_j^dagger  (d1 x d1)
  ComplexMatrix x() const {
    const auto d1 = static_cast<Eigen::Index>(source_gate.part().d1());
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (const auto& a : a_ops) out.noalias() += a * a.adjoint();
    return out;
  }

  /// X~ = sum_i At_i At_i^dagger  (d2 x d2)
  ComplexMatrix x_tilde() const {
    const auto d2 = static_cast<Eigen::Index>(source_gate.part().d2());
    ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
    for (const auto& a : tilde_ops) out.noalias() += a * a.adjoint();
    return out;
  }

  /// sum_j A_j^dagger A_j; the identity for a trace-preserving map.
  ComplexMatrix completeness() const {
    const auto d1 = static_cast<Eigen::Index>(source_gate.part().d1());
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (const auto& a : a_ops) out.noalias() += a.adjoint() * a;
    return out;
  }
};

inline KrausFamily kraus_from_unitary(const UnitaryGate& u, const ComplexMatrix& psi2,
                                      double tol = kStructuralTolerance) {
  const Bipartition part = u.part();
  const std::size_t d1 = part.d1();
  const std::size_t d2 = part.d2();
  if (static_cast<std::size_t>(psi2.rows()) != d2 || psi2.cols() != 1) {
    throw DimensionError("kraus_from_unitary: fixed state must be " + std::to_string(d2) + "x1");
  }
  require_finite(psi2, "kraus_from_unitary fixed state");
  if (std::abs(psi2.norm() - 1.0) > tol) {
    throw ValidationError("kraus_from_unitary: fixed state is not normalized");
  }
  const auto n1 = static_cast<Eigen::Index>(d1);
  const auto n2 = static_cast<Eigen::Index>(d2);

  std::vector<ComplexMatrix> a_ops(d2, ComplexMatrix::Zero(n1, n1));
  for (std::size_t j = 0; j < d2; ++j)
    for (std::size_t p = 0; p < d1; ++p)
      for (std::size_t a = 0; a < d1; ++a) {
        Complex acc = 0.0;
        for (std::size_t b = 0; b < d2; ++b) acc += u.element(p, j, a, b) * psi2(static_cast<Eigen::Index>(b));
        a_ops[j](static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(a)) = acc;
      }

  std::vector<ComplexMatrix> tilde_ops(d1, ComplexMatrix::Zero(n2, n1));
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j)
      tilde_ops[i].row(static_cast<Eigen::Index>(j)) = a_ops[j].row(static_cast<Eigen::Index>(i));

  return KrausFamily{std::move(a_ops), std::move(tilde_ops), u, psi2};
}

/// Haar average over psi1 of the output linear entropy with psi2 held fixed:
/// 1 - C_d1 (tr X~^2 + tr X^2).
inline double partial_ep(const KrausFamily& k) {
  const ComplexMatrix x = k.x();
  const ComplexMatrix xt = k.x_tilde();
  // X and X~ are Hermitian, so tr M^2 is the squared Frobenius norm.
  return 1.0 - moment_constant(k.source_gate.part().d1()) * (xt.squaredNorm() + x.squaredNorm());
}

/// (d1 - d1/d2) / (d1 + 1), the bound on partial_ep implied by
/// tr X^2 >= d1 and tr X~^2 >= d1^2/d2. For d1 < d2 it exceeds
/// upper_bound(part), which only constrains the average over psi2.
inline double partial_upper_bound(Bipartition part) {
  const double d1 = static_cast<double>(part.d1());
  const double d2 = static_cast<double>(part.d2());
  return (d1 - d1 / d2) / (d1 + 1.0);
}

/// Frobenius distances of Phi(1/d1) = X/d1 from 1/d1 and of
/// Phi~(1/d1) = X~/d1 from 1/d2. Both vanish iff both maps are unital.
inline std::pair<double, double> unitality_gap(const KrausFamily& k) {
  const Bipartition part = k.source_gate.part();
  const auto d1 = static_cast<double>(part.d1());
  const auto d2 = static_cast<double>(part.d2());
  const auto n1 = static_cast<Eigen::Index>(part.d1());
  const auto n2 = static_cast<Eigen::Index>(part.d2());
  const double first = (k.x() / d1 - ComplexMatrix::Identity(n1, n1) / d1).norm();
  const double second = (k.x_tilde() / d1 - ComplexMatrix::Identity(n2, n2) / d2).norm();
  return {first, second};
}

}  // namespace entpow
