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
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "entpow/channels.hpp"
#include "entpow/entangling.hpp"
#include "entpow/gatezoo.hpp"
#include "entpow/random.hpp"
#include "entpow/tensor.hpp"

namespace entpow {

/// Value 1 - C_d^2 sum_{i=0,1} I_d(T^i U) with
/// I_d(V) = d^3 + <V (x) V, T13 (V (x) V) T13>, computed with dense operators
/// on the doubled space. Requires d1 == d2.
inline double symmetric_form_value(const UnitaryGate& u) {
  const Bipartition part = u.part();
  if (part.d1() != part.d2()) throw ValidationError("symmetric form requires d1 == d2");
  const std::size_t d = part.d1();
  const ComplexMatrix t13 = pair_exchange(part, PairExchange::t13);
  const ComplexMatrix swap = make_swap(d).matrix();
  const auto i_d = [&](const ComplexMatrix& v) {
    const ComplexMatrix v2 = kron(v, v);
    return std::pow(static_cast<double>(d), 3) + hs_inner(v2, t13 * v2 * t13).real();
  };
  const double c = moment_constant(d);
  return 1.0 - c * c * (i_d(u.matrix()) + i_d(swap * u.matrix()));
}

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return !checks.empty();
  }
};

struct VerifyOptions {
  std::size_t random_gates = 50;
  SeedSpec seed{20260101, 0};
  double tol = kStructuralTolerance;
};

namespace detail {

class CheckRecorder {
 public:
  explicit CheckRecorder(VerifyReport& report) : report_(report) {}

  // Runs `body`, which returns the worst observed deviation; passes when
  // that is within tol. Exceptions count as failures.
  void deviation(const std::string& name, double tol, const std::function<double()>& body) {
    CheckResult r{name, false, ""};
    try {
      const double dev = body();
      r.passed = dev <= tol;
      std::ostringstream s;
      s << "max deviation " << dev << " (tol " << tol << ")";
      r.detail = s.str();
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    report_.checks.push_back(std::move(r));
  }

 private:
  VerifyReport& report_;
};

inline ComplexMatrix bilocal_random(RandomStream& rng, Bipartition part) {
  return kron(rng.unitary(part.d1()), rng.unitary(part.d2()));
}

inline void check_gate_invariants(CheckRecorder& rec, const std::string& label, const UnitaryGate& u,
                                  RandomStream& rng, double tol) {
  const Bipartition part = u.part();
  const double base = ep_closed(u).value;
  rec.deviation(label + ": range 0 <= e <= bound", 1e-9, [&] {
    return std::max({0.0, -base, base - upper_bound(part)});
  });
  rec.deviation(label + ": left bilocal invariance", tol, [&] {
    return std::abs(ep_closed(UnitaryGate(bilocal_random(rng, part) * u.matrix(), part)).value - base);
  });
  rec.deviation(label + ": right bilocal invariance", tol, [&] {
    return std::abs(ep_closed(UnitaryGate(u.matrix() * bilocal_random(rng, part), part)).value - base);
  });
  if (part.d1() == part.d2()) {
    const ComplexMatrix swap = make_swap(part.d1()).matrix();
    rec.deviation(label + ": swap invariance", tol, [&] {
      return std::max(std::abs(ep_closed(UnitaryGate(swap * u.matrix(), part)).value - base),
                      std::abs(ep_closed(UnitaryGate(u.matrix() * swap, part)).value - base));
    });
  }
  if (part.dim() <= kDenseOracleMaxDim) {
    rec.deviation(label + ": closed form equals dense operator route", tol,
                  [&] { return std::abs(ep_dense_oracle(u).value - base); });
  }
}

}  // namespace detail

/// Runs the analytic identity suite. If `user_gate` is given, its invariants
/// are checked as well.
inline VerifyReport run_identity_suite(const VerifyOptions& opt = {},
                                       const std::optional<UnitaryGate>& user_gate = std::nullopt) {
  VerifyReport report;
  detail::CheckRecorder rec(report);
  const double tol = opt.tol;
  RandomStream rng(opt.seed);

  rec.deviation("pair exchange traces and involution", tol, [&] {
    double worst = 0.0;
    for (const Bipartition part : {Bipartition(2, 2), Bipartition(2, 3), Bipartition(3, 2)}) {
      const double d1 = static_cast<double>(part.d1());
      const double d2 = static_cast<double>(part.d2());
      const ComplexMatrix t13 = pair_exchange(part, PairExchange::t13);
      const ComplexMatrix t24 = pair_exchange(part, PairExchange::t24);
      const auto id = ComplexMatrix::Identity(t13.rows(), t13.cols());
      worst = std::max({worst, std::abs(t13.trace().real() - d1 * d2 * d2),
                        std::abs(t24.trace().real() - d1 * d1 * d2), (t13 * t13 - id).norm(),
                        (t13 * t24 - t24 * t13).norm(),
                        std::abs((t13 * t24).trace().real() - d1 * d2)});
    }
    return worst;
  });

  rec.deviation("identity gate: I0 + I1 = d1 d2 (d1+1)(d2+1) and e = 0", tol, [&] {
    double worst = 0.0;
    for (std::size_t d1 = 1; d1 <= 4; ++d1)
      for (std::size_t d2 = 1; d2 <= 4; ++d2) {
        const auto r = ep_closed(make_identity(Bipartition(d1, d2)));
        const double expect = static_cast<double>(d1 * d2 * (d1 + 1) * (d2 + 1));
        worst = std::max({worst, std::abs(r.i0 + r.i1 - expect), std::abs(r.value)});
      }
    return worst;
  });

  rec.deviation("swap gates at d = 2..5 have e = 0", tol, [&] {
    double worst = 0.0;
    for (std::size_t d = 2; d <= 5; ++d) worst = std::max(worst, std::abs(ep_closed(make_swap(d)).value));
    return worst;
  });

  rec.deviation("CNOT has e = 2/9", tol, [&] { return std::abs(ep_closed(make_cnot()).value - 2.0 / 9.0); });

  rec.deviation("controlled families (clock and shift) give d(d-1)/(d+1)^2, d = 2..6", tol, [&] {
    double worst = 0.0;
    for (std::size_t d = 2; d <= 6; ++d) {
      const double expect = controlled_family_value(d);
      worst = std::max(worst, std::abs(ep_closed(make_controlled_family(d, clock_family(d))).value - expect));
      worst = std::max(worst, std::abs(ep_closed(make_controlled_family(d, shift_family(d))).value - expect));
    }
    return worst;
  });

  rec.deviation("additive permutation reaches the bound at d = 3, 5, 7", tol, [&] {
    double worst = 0.0;
    for (std::size_t d : {3u, 5u, 7u}) {
      const double bound = upper_bound(Bipartition(d, d));
      const double expect = (static_cast<double>(d) - 1.0) / (static_cast<double>(d) + 1.0);
      worst = std::max({worst, std::abs(ep_closed(make_additive_permutation(d)).value - bound),
                        std::abs(bound - expect)});
    }
    return worst;
  });

  for (const Bipartition part : {Bipartition(2, 2), Bipartition(2, 3), Bipartition(3, 3), Bipartition(2, 4)}) {
    rec.deviation("closed form equals dense operator route on " + std::to_string(opt.random_gates) +
                      " Haar gates at " + part.str(),
                  tol, [&] {
                    double worst = 0.0;
                    for (std::size_t i = 0; i < opt.random_gates; ++i) {
                      const UnitaryGate u(rng.unitary(part.dim()), part);
                      worst = std::max(worst, std::abs(ep_closed(u).value - ep_dense_oracle(u).value));
                    }
                    return worst;
                  });
  }

  for (const Bipartition part : {Bipartition(2, 2), Bipartition(3, 3)}) {
    rec.deviation("symmetric swap-invariant form at " + part.str(), tol, [&] {
      double worst = 0.0;
      for (std::size_t i = 0; i < 10; ++i) {
        const UnitaryGate u(rng.unitary(part.dim()), part);
        worst = std::max(worst, std::abs(symmetric_form_value(u) - ep_closed(u).value));
      }
      return worst;
    });
  }

  for (const Bipartition part : {Bipartition(2, 2), Bipartition(2, 3), Bipartition(3, 3)}) {
    for (std::size_t i = 0; i < 3; ++i) {
      const UnitaryGate u(rng.unitary(part.dim()), part);
      detail::check_gate_invariants(rec, "Haar gate " + std::to_string(i) + " at " + part.str(), u, rng, tol);
    }
  }

  rec.deviation("Kraus completeness, tr X = tr X~ = d1, and bound mechanics", tol, [&] {
    double worst = 0.0;
    for (const Bipartition part : {Bipartition(2, 2), Bipartition(2, 3), Bipartition(3, 2)}) {
      for (std::size_t i = 0; i < 20; ++i) {
        const UnitaryGate u(rng.unitary(part.dim()), part);
        const auto k = kraus_from_unitary(u, rng.state(part.d2()));
        const double d1 = static_cast<double>(part.d1());
        const double d2 = static_cast<double>(part.d2());
        const auto id = ComplexMatrix::Identity(static_cast<Eigen::Index>(part.d1()),
                                                static_cast<Eigen::Index>(part.d1()));
        const ComplexMatrix x = k.x();
        const ComplexMatrix xt = k.x_tilde();
        worst = std::max({worst, (k.completeness() - id).norm(), std::abs(x.trace().real() - d1),
                          std::abs(xt.trace().real() - d1),
                          std::max(0.0, d1 - x.squaredNorm()),
                          std::max(0.0, d1 * d1 / d2 - xt.squaredNorm()),
                          std::max(0.0, partial_ep(k) - partial_upper_bound(part))});
      }
    }
    return worst;
  });

  if (user_gate) detail::check_gate_invariants(rec, "supplied gate", *user_gate, rng, tol);
  return report;
}

}  // namespace entpow
