#include <gtest/gtest.h>

#include <cmath>

#include "qss/gates.hpp"
#include "qss/json_io.hpp"
#include "qss/protocol.hpp"
#include "qss/qcore.hpp"

namespace qss {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector random_state(std::vector<Label> labels, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> amps(std::size_t{1} << labels.size());
  double norm = 0.0;
  for (auto& a : amps) {
    a = {g(rng), g(rng)};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector::from_amplitudes(std::move(labels), std::move(amps));
}

UnitaryMatrix random_unitary(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix m(dim, dim);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Matrix> qr(m);
  return UnitaryMatrix::checked(qr.householderQ() * Matrix::Identity(dim, dim));
}

TEST(NewRegister, GroundStates) {
  auto one = new_register({"a"});
  ASSERT_EQ(one.dim(), 2u);
  EXPECT_EQ(one.amplitude(0), Complex(1));
  EXPECT_EQ(one.amplitude(1), Complex(0));

  auto two = new_register({"a", "b"});
  ASSERT_EQ(two.dim(), 4u);
  EXPECT_EQ(two.amplitude(0), Complex(1));

  auto five = new_register({"a", "b", "c", "m1", "m2"});
  ASSERT_EQ(five.dim(), 32u);
  EXPECT_EQ(five.amplitude(0), Complex(1));
  EXPECT_DOUBLE_EQ(five.norm_squared(), 1.0);
}

TEST(NewRegister, RejectsBadLabels) {
  EXPECT_THROW(new_register({}), std::invalid_argument);
  EXPECT_THROW(new_register({"a", "a"}), std::invalid_argument);
  EXPECT_THROW(new_register(std::vector<Label>(13, "x")), std::invalid_argument);
}

TEST(ApplyUnitary, ClassicalCnotRow) {
  auto s = apply_unitary(new_register({"a", "m1"}), gates::pauli_x(), {"a"});
  s = apply_unitary(std::move(s), gates::cnot(), {"a", "m1"});
  EXPECT_NEAR(std::abs(s.amplitude(3)), 1.0, 1e-12);
}

TEST(ApplyUnitary, HadamardOnZero) {
  auto s = apply_unitary(new_register({"a"}), gates::hadamard(), {"a"});
  EXPECT_NEAR(s.amplitude(0).real(), kInvSqrt2, 1e-12);
  EXPECT_NEAR(s.amplitude(1).real(), kInvSqrt2, 1e-12);
}

TEST(ApplyUnitary, HadamardCubedTogglesGhz) {
  auto ghz = make_carrier(CarrierKind::GHZ, {"a", "b", "c"});
  for (const Label& l : {"a", "b", "c"}) ghz.apply(gates::hadamard(), {l});
  EXPECT_NEAR(fidelity(ghz, make_carrier(CarrierKind::EvenParity, {"a", "b", "c"})), 1.0, 1e-12);
}

TEST(ApplyUnitary, RejectsDimensionMismatchAndUnknownLabel) {
  auto s = new_register({"a", "b"});
  EXPECT_THROW(s.apply(gates::cnot(), {"a"}), std::invalid_argument);
  EXPECT_THROW(s.apply(gates::hadamard(), {"z"}), std::out_of_range);
  EXPECT_THROW(s.apply(gates::cnot(), {"a", "a"}), std::invalid_argument);
}

TEST(ApplyUnitary, TargetOrderIsBigEndian) {
  // CNOT with control b: |a b⟩ = |01⟩ → |11⟩.
  auto s = apply_unitary(new_register({"a", "b"}), gates::pauli_x(), {"b"});
  s.apply(gates::cnot(), {"b", "a"});
  EXPECT_NEAR(std::abs(s.amplitude(3)), 1.0, 1e-12);
}

TEST(ApplyUnitary, PreservesNorm) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    auto s = random_state({"a", "b", "c", "d"}, rng);
    s.apply(random_unitary(4, rng), {"c", "a"});
    s.apply(gates::h_theta(uniform01(rng) * 6.0), {"d"});
    s.apply(gates::cnot(), {"b", "d"});
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
  }
}

TEST(ApplyUnitary, DisjointTargetsCommute) {
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_state({"a", "b", "c"}, rng);
    const auto m = random_unitary(2, rng);
    const auto n = random_unitary(4, rng);
    auto x = apply_unitary(apply_unitary(s, m, {"a"}), n, {"c", "b"});
    auto y = apply_unitary(apply_unitary(s, n, {"c", "b"}), m, {"a"});
    EXPECT_LT((x.to_eigen() - y.to_eigen()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Measure, DefiniteOutcome) {
  Rng rng(1);
  auto [bit, post] = measure(apply_unitary(new_register({"a"}), gates::pauli_x(), {"a"}), "a", rng);
  EXPECT_EQ(bit, 1);
  EXPECT_NEAR(std::abs(post.amplitude(1)), 1.0, 1e-12);
}

TEST(Measure, BellStatistics) {
  Rng rng(2024);
  const auto bell = make_bell(BellKind::PhiPlus, {"x", "y"});
  int zeros = 0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) {
    auto [first, post] = measure(bell, "x", rng);
    auto [second, _] = measure(std::move(post), "y", rng);
    ASSERT_EQ(first, second);
    zeros += first == 0;
  }
  const double p0 = static_cast<double>(zeros) / n;
  EXPECT_GE(p0, 0.47);
  EXPECT_LE(p0, 0.53);
}

TEST(Measure, EvenMessageXorIsQ) {
  Rng rng(3);
  for (int q : {0, 1}) {
    for (int t = 0; t < 200; ++t) {
      auto s = encode_message(Parity::Even, q, {"m1", "m2"});
      const int x1 = s.measure("m1", rng);
      const int x2 = s.measure("m2", rng);
      EXPECT_EQ(x1 ^ x2, q);
    }
  }
}

TEST(ReducedDensity, BellMarginalIsMaximallyMixed) {
  const auto rho = reduced_density(make_bell(BellKind::PhiPlus, {"x", "y"}), {"x"});
  EXPECT_LT((rho.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ReducedDensity, ProductKeepsFactor) {
  const auto s = apply_unitary(new_register({"x", "y"}), gates::hadamard(), {"y"});
  const auto rho = reduced_density(s, {"y"});
  EXPECT_LT((rho.matrix() - Matrix::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ReducedDensity, OddRoundInFlightMarginal) {
  for (int q : {0, 1}) {
    ProtocolSession session(ProtocolConfig{});
    session.encode_round(q);
    const auto rho = reduced_density(session.state(), {"m1", "m2"});
    Matrix expected = Matrix::Zero(4, 4);
    expected(q ? 3 : 0, q ? 3 : 0) = 0.5;
    expected(q ? 0 : 3, q ? 0 : 3) = 0.5;
    EXPECT_LT((rho.matrix() - expected).cwiseAbs().maxCoeff(), 1e-12) << "q=" << q;
  }
}

TEST(ReducedDensity, RandomStatesGiveDensityMatrices) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto s = random_state({"a", "b", "c", "d"}, rng);
    const auto rho = reduced_density(s, {"d", "b"});
    EXPECT_LT(rho.hermiticity_defect(), 1e-12);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    EXPECT_GT(rho.min_eigenvalue(), -1e-12);
  }
}

TEST(ReducedDensity, RejectsUnknownLabel) {
  EXPECT_THROW(reduced_density(new_register({"a"}), {"b"}), std::out_of_range);
}

TEST(Fidelity, Examples) {
  Rng rng(6);
  const auto psi = random_state({"a", "b"}, rng);
  EXPECT_NEAR(fidelity(psi, psi), 1.0, 1e-12);
  const auto zero = new_register({"a"});
  const auto one = apply_unitary(zero, gates::pauli_x(), {"a"});
  EXPECT_NEAR(fidelity(zero, one), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(make_carrier(CarrierKind::GHZ, {"a", "b", "c"}),
                       make_carrier(CarrierKind::EvenParity, {"a", "b", "c"})),
              0.125, 1e-12);  // ⟨GHZ|E⟩ = 1/(2√2)
  EXPECT_THROW(fidelity(zero, new_register({"a", "b"})), std::invalid_argument);
}

TEST(TraceDistance, Examples) {
  const auto zero = reduced_density(new_register({"a"}), {"a"});
  const auto one = reduced_density(apply_unitary(new_register({"a"}), gates::pauli_x(), {"a"}), {"a"});
  EXPECT_NEAR(trace_distance(zero, zero), 0.0, 1e-12);
  EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-12);
  EXPECT_THROW(trace_distance(zero, reduced_density(new_register({"a", "b"}), {"a", "b"})),
               std::invalid_argument);
}

TEST(TraceDistance, HonestMarginalsHideQ) {
  for (int round : {1, 2}) {
    std::vector<DensityMatrix> marginals;
    for (int q : {0, 1}) {
      ProtocolSession session(ProtocolConfig{});
      Rng rng(1);
      if (round == 2) {
        session.encode_round(0);
        session.deliver_and_decode(rng);
        session.toggle_carrier();
      }
      session.encode_round(q);
      marginals.push_back(reduced_density(session.state(), {"m1", "m2"}));
    }
    EXPECT_LT(trace_distance(marginals[0], marginals[1]), 1e-12) << "round " << round;
  }
}

TEST(StateJson, RoundTrip) {
  Rng rng(8);
  const auto s = random_state({"a", "b", "m1"}, rng);
  const auto back = json::load_state(json::dump_state(s));
  EXPECT_EQ(back.labels(), s.labels());
  EXPECT_LT((back.to_eigen() - s.to_eigen()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(StateVector, FromAmplitudesValidates) {
  EXPECT_THROW(StateVector::from_amplitudes({"a"}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(StateVector::from_amplitudes({"a"}, {1.0}), std::invalid_argument);
}

}  // namespace
}  // namespace qss
