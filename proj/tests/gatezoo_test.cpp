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

#include <filesystem>
#include <fstream>

#include "test_support.hpp"

namespace entpow {
namespace {

using testing::basis_state;
using testing::max_abs_diff;

bool is_permutation_matrix(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != Complex(0.0) && m(i, j) != Complex(1.0)) return false;
  return (m.cwiseAbs().rowwise().sum().array() == 1.0).all() && (m.cwiseAbs().colwise().sum().array() == 1.0).all();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("entpow_gatezoo_" + name);
}

void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

TEST(Cnot, ValueInvolutionAndAction) {
  const UnitaryGate u = make_cnot();
  EXPECT_NEAR(ep_closed(u).value, 2.0 / 9.0, 1e-12);
  EXPECT_EQ(u.matrix() * u.matrix(), ComplexMatrix::Identity(4, 4));
  EXPECT_EQ(u.matrix() * kron(basis_state(2, 1), basis_state(2, 0)), kron(basis_state(2, 1), basis_state(2, 1)));
  EXPECT_EQ(u.matrix() * kron(basis_state(2, 0), basis_state(2, 1)), kron(basis_state(2, 0), basis_state(2, 1)));
}

TEST(ControlledFamily, ClockDefaultValues) {
  EXPECT_NEAR(ep_closed(make_controlled_family(2)).value, 2.0 / 9.0, 1e-12);
  EXPECT_NEAR(ep_closed(make_controlled_family(3)).value, 0.375, 1e-12);
  EXPECT_NEAR(ep_closed(make_controlled_family(4)).value, 0.48, 1e-12);
  EXPECT_LT(0.48, upper_bound(Bipartition(4, 4)));
}

TEST(ControlledFamily, ValueDependsOnlyOnOrthogonality) {
  for (std::size_t d = 2; d <= 6; ++d) {
    EXPECT_NEAR(ep_closed(make_controlled_family(d, clock_family(d))).value, controlled_family_value(d), 1e-10);
    EXPECT_NEAR(ep_closed(make_controlled_family(d, shift_family(d))).value, controlled_family_value(d), 1e-10);
    // Ratio to the bound is d/(d+1).
    EXPECT_NEAR(controlled_family_value(d) / upper_bound(Bipartition(d, d)),
                static_cast<double>(d) / static_cast<double>(d + 1), 1e-12);
  }
}

TEST(ControlledFamily, MixedClockShiftFamily) {
  // Z^a X^b over one fixed b per a is still HS-orthogonal when the a differ.
  const std::size_t d = 3;
  std::vector<ComplexMatrix> family;
  for (std::size_t a = 0; a < d; ++a) {
    ComplexMatrix z = ComplexMatrix::Identity(3, 3), x = ComplexMatrix::Identity(3, 3);
    for (std::size_t k = 0; k < a; ++k) z = clock_matrix(d) * z;
    for (std::size_t k = 0; k < (a + 1) % d; ++k) x = shift_matrix(d) * x;
    family.push_back(z * x);
  }
  EXPECT_NEAR(ep_closed(make_controlled_family(d, family)).value, controlled_family_value(d), 1e-10);
}

TEST(ControlledFamily, RejectsInvalidFamilies) {
  std::vector<ComplexMatrix> same(3, ComplexMatrix::Identity(3, 3));
  EXPECT_THROW(make_controlled_family(3, same), ValidationError);
  EXPECT_THROW(make_controlled_family(3, clock_family(2)), ValidationError);
  std::vector<ComplexMatrix> scaled = clock_family(2);
  scaled[1] *= 2.0;
  EXPECT_THROW(make_controlled_family(2, scaled), ValidationError);
  EXPECT_THROW(make_controlled_family(1), ValidationError);
}

TEST(AdditivePermutation, ReachesTheBoundForOddD) {
  EXPECT_NEAR(ep_closed(make_additive_permutation(3)).value, 0.5, 1e-12);
  EXPECT_NEAR(ep_closed(make_additive_permutation(3)).value, upper_bound(Bipartition(3, 3)), 1e-12);
  EXPECT_NEAR(ep_closed(make_additive_permutation(5)).value, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(ep_closed(make_additive_permutation(7)).value, upper_bound(Bipartition(7, 7)), 1e-12);
}

TEST(AdditivePermutation, MapsBasisStatesBySumAndDifference) {
  const std::size_t d = 5;
  const UnitaryGate u = make_additive_permutation(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const ComplexMatrix out = u.matrix() * kron(basis_state(d, i), basis_state(d, j));
      EXPECT_EQ(out, kron(basis_state(d, (i + j) % d), basis_state(d, (i + d - j) % d)));
    }
}

TEST(AdditivePermutation, RejectsEvenD) {
  EXPECT_THROW(make_additive_permutation(4), ValidationError);
  EXPECT_THROW(make_additive_permutation(2), ValidationError);
  EXPECT_THROW(make_additive_permutation(1), ValidationError);
}

TEST(OtherGates, SwapBilocalAndIdentityTable) {
  EXPECT_NEAR(ep_closed(make_swap(2)).value, 0.0, 1e-12);
  EXPECT_NEAR(ep_closed(make_bilocal(hadamard(), hadamard())).value, 0.0, 1e-12);
  const std::vector<std::size_t> id{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(make_basis_permutation(Bipartition(2, 3), id).matrix(), make_identity(Bipartition(2, 3)).matrix());
}

TEST(OtherGates, RejectsBadInputs) {
  const std::vector<std::size_t> repeated{0, 0, 2, 3};
  const std::vector<std::size_t> short_table{0, 1, 2};
  const std::vector<std::size_t> out_of_range{0, 1, 2, 4};
  EXPECT_THROW(make_basis_permutation(Bipartition(2, 2), repeated), ValidationError);
  EXPECT_THROW(make_basis_permutation(Bipartition(2, 2), short_table), ValidationError);
  EXPECT_THROW(make_basis_permutation(Bipartition(2, 2), out_of_range), ValidationError);
  EXPECT_THROW(make_bilocal(2.0 * hadamard(), hadamard()), ValidationError);
}

TEST(Constructors, AllOutputsAreUnitaryAndPermutationsAreZeroOne) {
  EXPECT_TRUE(is_permutation_matrix(make_cnot().matrix()));
  for (std::size_t d = 2; d <= 5; ++d) EXPECT_TRUE(is_permutation_matrix(make_swap(d).matrix()));
  for (std::size_t d : {3u, 5u, 7u}) EXPECT_TRUE(is_permutation_matrix(make_additive_permutation(d).matrix()));
  for (std::size_t d = 2; d <= 6; ++d) {
    EXPECT_TRUE(is_unitary(make_controlled_family(d).matrix()));
    EXPECT_TRUE(is_permutation_matrix(make_controlled_family(d, shift_family(d)).matrix()));
  }
  EXPECT_TRUE(is_unitary(make_bilocal(hadamard(), clock_matrix(3)).matrix()));
}

TEST(GateSpec, ResolvesEveryKind) {
  GateSpec s;
  s.kind = GateKind::cnot;
  EXPECT_EQ(make_gate(s).matrix(), make_cnot().matrix());
  s = {};
  s.kind = GateKind::swap;
  s.d1 = s.d2 = 3;
  EXPECT_EQ(make_gate(s).matrix(), make_swap(3).matrix());
  s.kind = GateKind::additive_permutation;
  EXPECT_EQ(make_gate(s).matrix(), make_additive_permutation(3).matrix());
  s.kind = GateKind::controlled_family;
  s.family = ControlledFamily::shift;
  EXPECT_EQ(make_gate(s).matrix(), make_controlled_family(3, shift_family(3)).matrix());
  s.kind = GateKind::identity;
  s.d1 = 2;
  EXPECT_EQ(make_gate(s).part(), Bipartition(2, 3));
  s.kind = GateKind::basis_permutation;
  s.table = {1, 0, 2, 3, 4, 5};
  EXPECT_EQ(make_gate(s).matrix()(0, 1), Complex(1.0));
  s.kind = GateKind::bilocal_product;
  s.components = {hadamard(), hadamard()};
  EXPECT_EQ(make_gate(s).matrix(), kron(hadamard(), hadamard()));
  s.kind = GateKind::swap;
  EXPECT_THROW(make_gate(s), ValidationError);
}

TEST(GateFile, RoundTripsThroughJson) {
  const auto path = temp_file("roundtrip.json");
  const UnitaryGate u(haar_unitary(6, {71, 0}), Bipartition(3, 2));
  save_gate(path, u);
  const UnitaryGate back = load_gate(path);
  EXPECT_EQ(back.part(), u.part());
  EXPECT_EQ(back.matrix(), u.matrix());
  GateSpec s;
  s.kind = GateKind::file;
  s.path = path;
  EXPECT_EQ(make_gate(s).matrix(), u.matrix());
}

TEST(GateFile, ReadsTheDocumentedLayout) {
  const auto path = temp_file("layout.json");
  write_file(path, R"({"d1": 2, "d2": 2, "matrix": [
    [[1,0],[0,0],[0,0],[0,0]],
    [[0,0],[1,0],[0,0],[0,0]],
    [[0,0],[0,0],[0,0],[1,0]],
    [[0,0],[0,0],[1,0],[0,0]]]})");
  EXPECT_EQ(load_gate(path).matrix(), make_cnot().matrix());
}

TEST(GateFile, MalformedFilesAreValidationErrors) {
  const auto path = temp_file("bad.json");
  for (const std::string& text : {
           std::string("not json"),
           std::string(R"({"d1": 2, "matrix": [[[1,0]]]})"),
           std::string(R"({"d1": 2, "d2": 2, "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]})"),
           std::string(R"({"d1": 1, "d2": 2, "matrix": [[[1,0],[0,0]],[[0,0]]]})"),
           std::string(R"({"d1": 1, "d2": 2, "matrix": [[[1,0],[0,0]],[[0,0],["x",0]]]})"),
           std::string(R"({"d1": 1, "d2": 2, "matrix": [[[1,0],[0,0]],[[0,0],[2,0]]]})"),
           std::string(R"({"d1": -1, "d2": 2, "matrix": [[[1,0]]]})"),
       }) {
    write_file(path, text);
    EXPECT_THROW(load_gate(path), ValidationError) << text;
  }
}

TEST(GateFile, MissingFileIsAnIoError) {
  EXPECT_THROW(load_gate(temp_file("does_not_exist.json")), IoError);
  EXPECT_THROW(save_gate("/nonexistent_dir/x.json", make_cnot()), IoError);
}

}  // namespace
}  // namespace entpow
