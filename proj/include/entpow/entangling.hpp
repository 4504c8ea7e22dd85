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
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entpow/parallel.hpp"
#include "entpow/random.hpp"
#include "entpow/tensor.hpp"

namespace entpow {

/// A unitary on C^d1 (x) C^d2, validated at construction.
class UnitaryGate {
 public:
  UnitaryGate(ComplexMatrix matrix, Bipartition part, double tol = kStructuralTolerance)
      : matrix_(std::move(matrix)), part_(part) {
    require_square(matrix_, part_.dim(), "UnitaryGate");
    require_finite(matrix_, "UnitaryGate");
    const double defect = unitarity_defect(matrix_);
    if (!(defect <= tol)) {
      std::ostringstream msg;
      msg << "matrix is not unitary: ||U^dagger U - I||_F = " << defect << " exceeds tolerance "
          << tol;
      throw ValidationError(msg.str());
    }
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  Bipartition part() const { return part_; }

  /// <p q| U |a b>
  Complex element(std::size_t p, std::size_t q, std::size_t a, std::size_t b) const {
    const std::size_t d2 = part_.d2();
    return matrix_(static_cast<Eigen::Index>(p * d2 + q), static_cast<Eigen::Index>(a * d2 + b));
  }

 private:
  ComplexMatrix matrix_;
  Bipartition part_;
};

enum class Method { closed_form, dense_oracle, monte_carlo };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::dense_oracle: return "dense_oracle";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

struct EntanglingPowerReport {
  double value = 0.0;
  double i0 = 0.0;
  double i1 = 0.0;
  double mean_haar = 0.0;
  double upper_bound = 0.0;
  Method method = Method::closed_form;
  std::optional<std::size_t> mc_samples;
  std::optional<double> mc_stderr;

  double gap_to_bound() const { return upper_bound - value; }
};

/// 1 / (d (d + 1)), the Haar second-moment normalization on C^d.
inline double moment_constant(std::size_t d) {
  const double x = static_cast<double>(d);
  return 1.0 / (x * (x + 1.0));
}

/// Haar average of the entangling power over U(d1 d2).
inline double haar_mean(Bipartition part) {
  const double d1 = static_cast<double>(part.d1());
  const double d2 = static_cast<double>(part.d2());
  return (d1 - 1.0) * (d2 - 1.0) / (d1 * d2 + 1.0);
}

/// Upper bound on the uniform entangling power; symmetric in (d1, d2).
inline double upper_bound(Bipartition part) {
  const double a = static_cast<double>(part.min_factor());
  const double b = static_cast<double>(part.max_factor());
  return (b - b / a) / (b + 1.0);
}

namespace detail {

// 1 - tr(rho^2) written as twice the sum of squared 2x2 minors of the d1 x d2
// amplitude matrix, divided by ||psi||^4. Nonnegative by construction and
// exactly zero whenever every minor vanishes.
inline double linear_entropy_of_amplitudes(const Complex* psi, std::size_t d1, std::size_t d2) {
  double minors = 0.0;
  double norm2 = 0.0;
  for (std::size_t k = 0; k < d1 * d2; ++k) norm2 += std::norm(psi[k]);
  for (std::size_t a = 0; a < d1; ++a)
    for (std::size_t c = a + 1; c < d1; ++c)
      for (std::size_t b = 0; b < d2; ++b)
        for (std::size_t e = b + 1; e < d2; ++e) {
          const Complex m = psi[a * d2 + b] * psi[c * d2 + e] - psi[a * d2 + e] * psi[c * d2 + b];
          minors += std::norm(m);
        }
  return 2.0 * minors / (norm2 * norm2);
}

struct ExchangeOverlaps {
  double s0 = 0.0;  // <U2 T13 U2^dagger, T13>
  double s1 = 0.0;  // <U2 T24 U2^dagger, T13>
};

// Both overlaps are squared Frobenius norms of Gram matrices of reshaped U:
//   s0 = ||Z Z^dagger||^2,  Z[(p,a),(q,b)] = <pq|U|ab>   (d1^2 x d2^2)
//   s1 = ||Y Y^dagger||^2,  Y[(p,b),(q,a)] = <pq|U|ab>   (d1 d2 x d1 d2)
inline ExchangeOverlaps exchange_overlaps(const ComplexMatrix& u, Bipartition part) {
  const auto d1 = static_cast<Eigen::Index>(part.d1());
  const auto d2 = static_cast<Eigen::Index>(part.d2());
  ComplexMatrix z(d1 * d1, d2 * d2);
  ComplexMatrix y(d1 * d2, d1 * d2);
  for (Eigen::Index p = 0; p < d1; ++p)
    for (Eigen::Index q = 0; q < d2; ++q)
      for (Eigen::Index a = 0; a < d1; ++a)
        for (Eigen::Index b = 0; b < d2; ++b) {
          const Complex v = u(p * d2 + q, a * d2 + b);
          z(p * d1 + a, q * d2 + b) = v;
          y(p * d2 + b, q * d1 + a) = v;
        }
  ExchangeOverlaps out;
  if (d1 <= d2) {
    out.s0 = (z * z.adjoint()).squaredNorm();
  } else {
    out.s0 = (z.adjoint() * z).squaredNorm();
  }
  out.s1 = (y * y.adjoint()).squaredNorm();
  return out;
}

inline EntanglingPowerReport closed_form_report(const ComplexMatrix& u, Bipartition part) {
  const double d1 = static_cast<double>(part.d1());
  const double d2 = static_cast<double>(part.d2());
  const ExchangeOverlaps s = exchange_overlaps(u, part);
  EntanglingPowerReport r;
  r.i0 = d1 * d2 * d2 + s.s0;
  r.i1 = d1 * d1 * d2 + s.s1;
  r.value = 1.0 - moment_constant(part.d1()) * moment_constant(part.d2()) * (r.i0 + r.i1);
  r.mean_haar = haar_mean(part);
  r.upper_bound = upper_bound(part);
  r.method = Method::closed_form;
  return r;
}

// Closed-form value without constructing a UnitaryGate; used in inner loops
// where the matrix is unitary by construction.
inline double closed_form_value(const ComplexMatrix& u, Bipartition part) {
  return closed_form_report(u, part).value;
}

}  // namespace detail

/// Linear entropy 1 - tr(rho^2), rho = tr_2 |psi><psi|.
inline double linear_entropy(const ComplexMatrix& state, Bipartition part,
                             double tol = kStructuralTolerance) {
  if (static_cast<std::size_t>(state.rows()) != part.dim() || state.cols() != 1) {
    throw DimensionError("linear_entropy: state must be a " + std::to_string(part.dim()) +
                         "x1 column");
  }
  require_finite(state, "linear_entropy state");
  const double norm = state.norm();
  if (std::abs(norm - 1.0) > tol) {
    std::ostringstream msg;
    msg << "linear_entropy: state is not normalized, ||psi|| = " << norm;
    throw ValidationError(msg.str());
  }
  return detail::linear_entropy_of_amplitudes(state.data(), part.d1(), part.d2());
}

/// Uniform-distribution entangling power by direct contraction of U.
inline EntanglingPowerReport ep_closed(const UnitaryGate& u) {
  return detail::closed_form_report(u.matrix(), u.part());
}

/// Largest d1 * d2 accepted by ep_dense_oracle (doubled space 1296).
inline constexpr std::size_t kDenseOracleMaxDim = 36;

/// Uniform-distribution entangling power from explicit operators on H (x) H:
/// 2 tr[U2 Omega U2^dagger P13^-] with Omega = 4 C_d1 C_d2 P13^+ P24^+.
inline EntanglingPowerReport ep_dense_oracle(const UnitaryGate& u) {
  const Bipartition part = u.part();
  if (part.dim() > kDenseOracleMaxDim) {
    throw DimensionError("ep_dense_oracle: d1*d2 = " + std::to_string(part.dim()) +
                         " exceeds " + std::to_string(kDenseOracleMaxDim));
  }
  const double c = moment_constant(part.d1()) * moment_constant(part.d2());
  const ComplexMatrix t13 = pair_exchange(part, PairExchange::t13);
  const ComplexMatrix t24 = pair_exchange(part, PairExchange::t24);
  const ComplexMatrix omega =
      (4.0 * c) * sym_projector(part, PairExchange::t13) * sym_projector(part, PairExchange::t24);
  const ComplexMatrix p13 = antisym_projector_13(part);
  const ComplexMatrix u2 = kron(u.matrix(), u.matrix());
  const ComplexMatrix u2_adj = u2.adjoint();

  const auto trace_product = [](const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a.cwiseProduct(b.transpose())).sum();
  };

  EntanglingPowerReport r;
  const ComplexMatrix evolved = u2 * omega * u2_adj;
  r.value = 2.0 * trace_product(evolved, p13).real();
  r.i0 = t13.trace().real() + trace_product(u2 * t13 * u2_adj, t13).real();
  r.i1 = t24.trace().real() + trace_product(u2 * t24 * u2_adj, t13).real();
  r.mean_haar = haar_mean(part);
  r.upper_bound = upper_bound(part);
  r.method = Method::dense_oracle;
  return r;
}

/// Samples per independent random stream in Monte Carlo estimates.
inline constexpr std::size_t kMonteCarloBlock = 1024;

/// Mean output linear entropy over Haar-random product inputs. Sample block k
/// draws from seed.child(k); block sums are reduced in block order, so the
/// estimate does not depend on `threads`.
inline EntanglingPowerReport ep_monte_carlo(const UnitaryGate& u, std::size_t n_samples,
                                            SeedSpec seed, std::size_t threads = 0) {
  if (n_samples == 0) throw ValidationError("ep_monte_carlo: n_samples must be positive");
  const Bipartition part = u.part();
  const std::size_t n_blocks = (n_samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  const auto block_moments = map_tasks(n_blocks, threads, [&](std::size_t k) {
    RandomStream rng(seed.child(k));
    const std::size_t begin = k * kMonteCarloBlock;
    const std::size_t end = std::min(n_samples, begin + kMonteCarloBlock);
    Moments m;
    ComplexMatrix out(static_cast<Eigen::Index>(part.dim()), 1);
    for (std::size_t i = begin; i < end; ++i) {
      const auto [psi1, psi2] = rng.product_pair(part);
      out.noalias() = u.matrix() * kron(psi1, psi2);
      const double e = detail::linear_entropy_of_amplitudes(out.data(), part.d1(), part.d2());
      m.sum += e;
      m.sum_sq += e * e;
    }
    return m;
  });
  Moments total;
  for (const auto& m : block_moments) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = total.sum / n;
  double stderr_ = 0.0;
  if (n_samples > 1) {
    const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
    stderr_ = std::sqrt(var / n);
  }
  const auto closed = ep_closed(u);
  EntanglingPowerReport r;
  r.value = mean;
  r.i0 = closed.i0;
  r.i1 = closed.i1;
  r.mean_haar = haar_mean(part);
  r.upper_bound = upper_bound(part);
  r.method = Method::monte_carlo;
  r.mc_samples = n_samples;
  r.mc_stderr = stderr_;
  return r;
}

using ProductStatePair = std::pair<ComplexMatrix, ComplexMatrix>;

/// Plain average of output linear entropies over an explicit list of product
/// inputs (an arbitrary discrete distribution p).
inline double ep_on_states(const UnitaryGate& u, std::span<const ProductStatePair> states) {
  if (states.empty()) throw ValidationError("ep_on_states: state list is empty");
  const Bipartition part = u.part();
  double sum = 0.0;
  for (const auto& [psi1, psi2] : states) {
    if (static_cast<std::size_t>(psi1.rows()) != part.d1() || psi1.cols() != 1 ||
        static_cast<std::size_t>(psi2.rows()) != part.d2() || psi2.cols() != 1) {
      throw DimensionError("ep_on_states: state pair does not match bipartition " + part.str());
    }
    if (std::abs(psi1.norm() - 1.0) > kStructuralTolerance ||
        std::abs(psi2.norm() - 1.0) > kStructuralTolerance) {
      throw ValidationError("ep_on_states: state pair is not normalized");
    }
    sum += linear_entropy(u.matrix() * kron(psi1, psi2), part);
  }
  return sum / static_cast<double>(states.size());
}

}  // namespace entpow
