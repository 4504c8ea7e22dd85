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
#include <filesystem>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entpow/entangling.hpp"
#include "entpow/gate_io.hpp"

namespace entpow {

inline UnitaryGate make_identity(Bipartition part) {
  const auto n = static_cast<Eigen::Index>(part.dim());
  return UnitaryGate(ComplexMatrix::Identity(n, n), part);
}

/// U |k> = |table[k]> on the d1*d2 computational basis.
inline UnitaryGate make_basis_permutation(Bipartition part, std::span<const std::size_t> table) {
  const std::size_t n = part.dim();
  if (table.size() != n) {
    throw ValidationError("basis permutation: table has " + std::to_string(table.size()) +
                          " entries, expected " + std::to_string(n));
  }
  std::vector<bool> hit(n, false);
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    if (table[k] >= n || hit[table[k]]) {
      throw ValidationError("basis permutation: table is not a bijection on 0.." + std::to_string(n - 1));
    }
    hit[table[k]] = true;
    m(static_cast<Eigen::Index>(table[k]), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return UnitaryGate(std::move(m), part);
}

/// |i>|j> -> |j>|i> on C^d (x) C^d.
inline UnitaryGate make_swap(std::size_t d) {
  const Bipartition part(d, d);
  std::vector<std::size_t> table(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) table[i * d + j] = j * d + i;
  return make_basis_permutation(part, table);
}

/// |0><0| (x) 1 + |1><1| (x) X; factor 1 is the control.
inline UnitaryGate make_cnot() {
  const std::vector<std::size_t> table{0, 1, 3, 2};
  return make_basis_permutation(Bipartition(2, 2), table);
}

inline UnitaryGate make_bilocal(const ComplexMatrix& u1, const ComplexMatrix& u2) {
  if (u1.rows() != u1.cols() || u2.rows() != u2.cols()) {
    throw DimensionError("bilocal: factors must be square");
  }
  if (!is_unitary(u1) || !is_unitary(u2)) throw ValidationError("bilocal: factors must be unitary");
  const Bipartition part(static_cast<std::size_t>(u1.rows()), static_cast<std::size_t>(u2.rows()));
  return UnitaryGate(kron(u1, u2), part);
}

inline ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

/// Z = diag(1, w, ..., w^(d-1)), w = exp(2 pi i / d).
inline ComplexMatrix clock_matrix(std::size_t d) {
  ComplexMatrix z = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) {
    z(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d));
  }
  return z;
}

/// X |k> = |k + 1 mod d>.
inline ComplexMatrix shift_matrix(std::size_t d) {
  ComplexMatrix x = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) {
    x(static_cast<Eigen::Index>((k + 1) % d), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return x;
}

inline std::vector<ComplexMatrix> power_family(const ComplexMatrix& base) {
  std::vector<ComplexMatrix> out;
  ComplexMatrix p = ComplexMatrix::Identity(base.rows(), base.cols());
  for (Eigen::Index k = 0; k < base.rows(); ++k) {
    out.push_back(p);
    p = base * p;
  }
  return out;
}

inline std::vector<ComplexMatrix> clock_family(std::size_t d) { return power_family(clock_matrix(d)); }
inline std::vector<ComplexMatrix> shift_family(std::size_t d) { return power_family(shift_matrix(d)); }

/// Tolerance on |<U_a, U_b>| for a != b in a controlled family.
inline constexpr double kOrthogonalityTolerance = 1e-8;

/// sum_a |a><a| (x) U_a with pairwise Hilbert-Schmidt orthogonal unitaries
/// U_a; defaults to the clock powers Z^a.
inline UnitaryGate make_controlled_family(std::size_t d,
                                          std::optional<std::vector<ComplexMatrix>> unitaries = std::nullopt) {
  if (d < 2) throw ValidationError("controlled family: d must be at least 2");
  const std::vector<ComplexMatrix> family = unitaries ? std::move(*unitaries) : clock_family(d);
  if (family.size() != d) {
    throw ValidationError("controlled family: expected " + std::to_string(d) + " unitaries, got " +
                          std::to_string(family.size()));
  }
  const auto n = static_cast<Eigen::Index>(d);
  for (std::size_t a = 0; a < d; ++a) {
    require_square(family[a], d, "controlled family member");
    if (!is_unitary(family[a])) {
      throw ValidationError("controlled family: member " + std::to_string(a) + " is not unitary");
    }
    for (std::size_t b = 0; b < a; ++b) {
      const double overlap = std::abs(hs_inner(family[b], family[a]));
      if (overlap > kOrthogonalityTolerance) {
        throw ValidationError("controlled family: members " + std::to_string(b) + " and " +
                              std::to_string(a) + " are not Hilbert-Schmidt orthogonal (|<U,V>| = " +
                              std::to_string(overlap) + ")");
      }
    }
  }
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a) m.block(a * n, a * n, n, n) = family[static_cast<std::size_t>(a)];
  return UnitaryGate(std::move(m), Bipartition(d, d));
}

/// d (d - 1) / (d + 1)^2, the value every orthogonal controlled family attains.
inline double controlled_family_value(std::size_t d) {
  const double x = static_cast<double>(d);
  return x * (x - 1.0) / ((x + 1.0) * (x + 1.0));
}

/// |i>|j> -> |i + j mod d>|i - j mod d>; a permutation only for odd d.
inline UnitaryGate make_additive_permutation(std::size_t d) {
  if (d < 3 || d % 2 == 0) {
    throw ValidationError("additive permutation: d must be odd and at least 3 (got " +
                          std::to_string(d) + "); for even d the map is not a bijection");
  }
  std::vector<std::size_t> table(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) table[i * d + j] = ((i + j) % d) * d + (i + d - j) % d;
  return make_basis_permutation(Bipartition(d, d), table);
}

enum class GateKind {
  identity,
  swap,
  cnot,
  controlled_family,
  additive_permutation,
  basis_permutation,
  bilocal_product,
  file
};

enum class ControlledFamily { clock, shift };

/// Declarative gate description resolved by make_gate. Only the fields
/// relevant to `kind` are read.
struct GateSpec {
  GateKind kind = GateKind::identity;
  std::size_t d1 = 2;
  std::size_t d2 = 2;
  ControlledFamily family = ControlledFamily::clock;
  std::vector<std::size_t> table;
  std::vector<ComplexMatrix> components;  // controlled family members, or {u1, u2}
  std::filesystem::path path;
};

inline UnitaryGate make_gate(const GateSpec& spec) {
  switch (spec.kind) {
    case GateKind::identity: return make_identity(Bipartition(spec.d1, spec.d2));
    case GateKind::swap:
      if (spec.d1 != spec.d2) throw ValidationError("swap requires d1 == d2");
      return make_swap(spec.d1);
    case GateKind::cnot:
      if (spec.d1 != 2 || spec.d2 != 2) throw ValidationError("cnot is defined on (2,2) only");
      return make_cnot();
    case GateKind::controlled_family:
      if (spec.d1 != spec.d2) throw ValidationError("controlled family requires d1 == d2");
      if (!spec.components.empty()) return make_controlled_family(spec.d1, spec.components);
      return make_controlled_family(spec.d1, spec.family == ControlledFamily::clock
                                                 ? clock_family(spec.d1)
                                                 : shift_family(spec.d1));
    case GateKind::additive_permutation:
      if (spec.d1 != spec.d2) throw ValidationError("additive permutation requires d1 == d2");
      return make_additive_permutation(spec.d1);
    case GateKind::basis_permutation:
      return make_basis_permutation(Bipartition(spec.d1, spec.d2), spec.table);
    case GateKind::bilocal_product:
      if (spec.components.size() != 2) throw ValidationError("bilocal product needs two factors");
      return make_bilocal(spec.components[0], spec.components[1]);
    case GateKind::file: return load_gate(spec.path);
  }
  throw ValidationError("unknown gate kind");
}

}  // namespace entpow
