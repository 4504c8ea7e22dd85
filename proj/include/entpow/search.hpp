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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "entpow/entangling.hpp"
#include "entpow/gatezoo.hpp"
#include "entpow/parallel.hpp"
#include "entpow/random.hpp"

namespace entpow {

struct OptimizeConfig {
  Bipartition part{2, 2};
  std::size_t restarts = 20;
  std::size_t max_iters = 20000;
  double initial_step = 0.3;
  double step_decay = 0.995;
  double tolerance = 1e-9;  // a restart stops once its step falls below this
  SeedSpec seed{};
  std::size_t threads = 0;

  void validate() const {
    if (restarts == 0 || max_iters == 0) throw ValidationError("optimize: restarts and iterations must be positive");
    if (!(initial_step > 0.0)) throw ValidationError("optimize: initial step must be positive");
    if (!(step_decay > 0.0 && step_decay < 1.0)) throw ValidationError("optimize: step decay must lie in (0,1)");
    if (!(tolerance > 0.0)) throw ValidationError("optimize: tolerance must be positive");
  }
};

struct TracePoint {
  std::size_t iteration = 0;
  double value = 0.0;
};

struct OptimizeResult {
  double best_value = 0.0;
  UnitaryGate best_gate;
  double bound = 0.0;
  double gap_to_bound = 0.0;
  std::size_t iterations_used = 0;  // summed over restarts
  std::size_t best_restart = 0;
  std::vector<TracePoint> trace;     // best value of the winning restart, per acceptance
  double max_candidate_value = 0.0;  // largest value among all evaluated candidates
};

namespace detail {

/// Closest unitary in Frobenius norm (polar factor).
inline ComplexMatrix reunitarize(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Hermitian matrix with Gaussian entries, unit Frobenius norm.
inline ComplexMatrix random_hermitian_direction(RandomStream& rng, std::size_t n) {
  const ComplexMatrix a = rng.ginibre(n, n);
  ComplexMatrix g = 0.5 * (a + a.adjoint());
  return g / g.norm();
}

/// exp(i t G) for Hermitian G via its eigendecomposition.
inline ComplexMatrix expi_hermitian(const ComplexMatrix& g, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(g);
  const Eigen::VectorXcd phases =
      (eig.eigenvalues() * t).unaryExpr([](double x) { return std::polar(1.0, x); });
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

struct RestartOutcome {
  ComplexMatrix gate;
  double value = -1.0;
  std::size_t iterations = 0;
  std::vector<TracePoint> trace;
  double max_candidate = -std::numeric_limits<double>::infinity();
};

inline RestartOutcome run_restart(const OptimizeConfig& cfg, std::size_t restart) {
  const Bipartition part = cfg.part;
  const std::size_t n = part.dim();
  RandomStream rng(cfg.seed.child(restart));
  RestartOutcome out;
  out.gate = rng.unitary(n);
  out.value = closed_form_value(out.gate, part);
  out.max_candidate = out.value;
  out.trace.push_back({0, out.value});
  double step = cfg.initial_step;
  std::size_t accepted = 0;
  std::size_t it = 0;
  while (it < cfg.max_iters && step >= cfg.tolerance) {
    ++it;
    const ComplexMatrix g = random_hermitian_direction(rng, n);
    ComplexMatrix candidate = expi_hermitian(g, step) * out.gate;
    const double v = closed_form_value(candidate, part);
    out.max_candidate = std::max(out.max_candidate, v);
    if (v > out.value) {
      out.gate = std::move(candidate);
      out.value = v;
      out.trace.push_back({it, v});
      if (++accepted % 256 == 0) out.gate = reunitarize(out.gate);
    } else {
      step *= cfg.step_decay;
    }
  }
  out.iterations = it;
  out.gate = reunitarize(out.gate);
  out.value = closed_form_value(out.gate, part);
  return out;
}

}  // namespace detail

/// Random-direction hill climbing on U(d1 d2): U <- exp(i eps G) U with G a
/// random unit-norm Hermitian matrix. Only strict improvements are accepted;
/// each rejection shrinks eps by step_decay. Restart r uses stream
/// seed.child(r); the best restart wins, ties going to the lower index.
inline OptimizeResult maximize_ep(const OptimizeConfig& cfg) {
  cfg.validate();
  const auto outcomes =
      map_tasks(cfg.restarts, cfg.threads, [&](std::size_t r) { return detail::run_restart(cfg, r); });
  std::size_t best = 0;
  std::size_t iterations = 0;
  double max_candidate = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    iterations += outcomes[r].iterations;
    max_candidate = std::max(max_candidate, outcomes[r].max_candidate);
    if (outcomes[r].value > outcomes[best].value) best = r;
  }
  const auto& win = outcomes[best];
  UnitaryGate gate(win.gate, cfg.part);
  const double value = ep_closed(gate).value;
  const double bound = upper_bound(cfg.part);
  return OptimizeResult{value, std::move(gate), bound, bound - value, iterations,
                        best,  win.trace,       max_candidate};
}

/// Default cap on d1 * d2 for exhaustive permutation search (8! tables).
inline constexpr std::size_t kPermutationSearchMaxDim = 8;

struct PermutationMax {
  double value = 0.0;
  std::vector<std::size_t> table;  // U|k> = |table[k]>
};

/// Maximum entangling power over all (d1 d2)! computational-basis
/// permutations, in lexicographic table order; the first table reaching the
/// maximum (within 1e-12) is returned.
inline PermutationMax exhaustive_permutation_max(Bipartition part,
                                                 std::size_t max_dim = kPermutationSearchMaxDim) {
  const std::size_t n = part.dim();
  if (n > max_dim) {
    throw ResourceError("exhaustive permutation search: d1*d2 = " + std::to_string(n) +
                        " exceeds cap " + std::to_string(max_dim));
  }
  std::vector<std::size_t> table(n);
  std::iota(table.begin(), table.end(), std::size_t{0});
  PermutationMax best{-1.0, table};
  const auto side = static_cast<Eigen::Index>(n);
  ComplexMatrix m(side, side);
  do {
    m.setZero();
    for (std::size_t k = 0; k < n; ++k) m(static_cast<Eigen::Index>(table[k]), static_cast<Eigen::Index>(k)) = 1.0;
    const double v = detail::closed_form_value(m, part);
    if (v > best.value + 1e-12) best = {v, table};
  } while (std::next_permutation(table.begin(), table.end()));
  return best;
}

}  // namespace entpow
