#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qss/gates.hpp"

namespace qss {
namespace {

constexpr double kPi = std::numbers::pi;
const std::array<Label, 3> kAbc{"a", "b", "c"};

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

StateVector apply_triple(StateVector s, const UnitaryMatrix& a, const UnitaryMatrix& b, const UnitaryMatrix& c) {
  s.apply(a, {"a"});
  s.apply(b, {"b"});
  s.apply(c, {"c"});
  return s;
}

TEST(HTheta, ZeroIsHadamard) {
  EXPECT_LT(max_abs(gates::h_theta(0.0).matrix() - gates::hadamard().matrix()), 1e-15);
}

TEST(HTheta, ActionOnZero) {
  const double t = 0.83;
  const auto s = apply_unitary(new_register({"a"}), gates::h_theta(t), {"a"});
  const Complex expected = std::polar(1.0 / std::sqrt(2.0), t);
  EXPECT_LT(std::abs(s.amplitude(0) - expected), 1e-12);
  EXPECT_LT(std::abs(s.amplitude(1) - expected), 1e-12);
}

TEST(HTheta, UnitaryForSampledAngles) {
  EXPECT_LT(max_abs((gates::h_theta(1.3).adjoint() * gates::h_theta(1.3)).matrix() - Matrix::Identity(2, 2)),
            1e-12);
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const double t = (uniform01(rng) - 0.5) * 40.0;
    EXPECT_LT(unitarity_defect(gates::h_theta(t).matrix()), 1e-12);
  }
  EXPECT_THROW(gates::h_theta(std::nan("")), std::invalid_argument);
  EXPECT_THROW(gates::h_theta(INFINITY), std::invalid_argument);
}

TEST(HThetaInverse, IsAdjoint) {
  EXPECT_LT(max_abs(gates::h_theta_inverse(0.0).matrix() - gates::hadamard().matrix()), 1e-15);
  Rng rng(22);
  for (int i = 0; i < 50; ++i) {
    const double t = uniform01(rng) * 2 * kPi;
    EXPECT_LT(max_abs((gates::h_theta_inverse(t) * gates::h_theta(t)).matrix() - Matrix::Identity(2, 2)), 1e-12);
  }
}

TEST(Carriers, Amplitudes) {
  const auto ghz = make_carrier(CarrierKind::GHZ, kAbc);
  for (std::size_t i = 0; i < 8; ++i) {
    const double expected = (i == 0 || i == 7) ? 1.0 / std::sqrt(2.0) : 0.0;
    EXPECT_NEAR(ghz.amplitude(i).real(), expected, 1e-15);
  }
  const auto e = make_carrier(CarrierKind::EvenParity, kAbc);
  for (std::size_t i = 0; i < 8; ++i) {
    const double expected = std::popcount(i) % 2 == 0 ? 0.5 : 0.0;
    EXPECT_NEAR(e.amplitude(i).real(), expected, 1e-15);
  }
  const auto h = gates::hadamard();
  EXPECT_NEAR(fidelity(ghz, apply_triple(e, h, h, h)), 1.0, 1e-12);
  EXPECT_THROW(make_carrier(CarrierKind::GHZ, {"a", "a", "c"}), std::invalid_argument);
}

TEST(Bell, NamedStatesAndOrthonormality) {
  const auto phi = make_bell(BellKind::PhiPlus, {"x", "y"});
  EXPECT_NEAR(phi.amplitude(0).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(phi.amplitude(3).real(), 1 / std::sqrt(2.0), 1e-15);
  const auto psi = make_bell(BellKind::PsiMinus, {"x", "y"});
  EXPECT_NEAR(psi.amplitude(1).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(psi.amplitude(2).real(), -1 / std::sqrt(2.0), 1e-15);
  const BellKind kinds[] = {BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus};
  for (auto i : kinds)
    for (auto j : kinds)
      EXPECT_NEAR(std::abs(bell_vector(i).dot(bell_vector(j))), i == j ? 1.0 : 0.0, 1e-15);
}

TEST(ToggleIdentity, PlainBothDirections) {
  const auto h = gates::hadamard();
  const auto ghz = make_carrier(CarrierKind::GHZ, kAbc);
  const auto e = make_carrier(CarrierKind::EvenParity, kAbc);
  EXPECT_NEAR(fidelity(apply_triple(ghz, h, h, h), e), 1.0, 1e-10);
  EXPECT_NEAR(fidelity(apply_triple(e, h, h, h), ghz), 1.0, 1e-10);
}

TEST(ToggleIdentity, RandomConstrainedTriples) {
  Rng rng(23);
  const auto ghz = make_carrier(CarrierKind::GHZ, kAbc);
  const auto e = make_carrier(CarrierKind::EvenParity, kAbc);
  for (int i = 0; i < 200; ++i) {
    const auto t = ThetaTriple::from_pair(uniform01(rng) * 2 * kPi, uniform01(rng) * 2 * kPi);
    const auto fwd = apply_triple(ghz, gates::h_theta(t.a()), gates::h_theta(t.b()), gates::h_theta(t.c()));
    EXPECT_GE(fidelity(fwd, e), 1.0 - 1e-10);
    const auto back = apply_triple(e, gates::h_theta_inverse(t.a()), gates::h_theta_inverse(t.b()),
                                   gates::h_theta_inverse(t.c()));
    EXPECT_GE(fidelity(back, ghz), 1.0 - 1e-10);
  }
}

TEST(ToggleIdentity, ConstraintIsNecessary) {
  Rng rng(24);
  const auto ghz = make_carrier(CarrierKind::GHZ, kAbc);
  const auto e = make_carrier(CarrierKind::EvenParity, kAbc);
  for (int i = 0; i < 200; ++i) {
    const double ta = uniform01(rng) * 2 * kPi;
    const double tb = uniform01(rng) * 2 * kPi;
    const double sum = 0.1 + uniform01(rng) * (2 * kPi - 0.2);
    const double tc = sum - ta - tb;
    const auto fwd = apply_triple(ghz, gates::h_theta(ta), gates::h_theta(tb), gates::h_theta(tc));
    EXPECT_LT(fidelity(fwd, e), 1.0 - 1e-6) << "sum " << sum;
  }
}

TEST(ThetaTriple, SumRule) {
  EXPECT_NO_THROW(ThetaTriple::make(0.7, 1.1, 2 * kPi - 1.8));
  EXPECT_NO_THROW(ThetaTriple::make(0.7, 1.1, -1.8));
  EXPECT_THROW(ThetaTriple::make(0.7, 1.1, 2 * kPi - 0.8), std::invalid_argument);
  EXPECT_THROW(ThetaTriple::make(std::nan(""), 0, 0), std::invalid_argument);
  const auto t = ThetaTriple::from_pair(0.7, 1.1);
  EXPECT_LT(angle_sum_residual(t.a(), t.b(), t.c()), 1e-12);
}

TEST(ThetaTriple, HardenedValidation) {
  EXPECT_TRUE(ThetaTriple::from_pair(0.7, 1.1).is_hardened());
  EXPECT_THROW(ThetaTriple::make(0, 0, 0).validate_hardened(), std::invalid_argument);
  EXPECT_THROW(ThetaTriple::from_pair(kPi, 0.5).validate_hardened(), std::invalid_argument);
  EXPECT_THROW(ThetaTriple::from_pair(0.5, kPi - 0.5).validate_hardened(), std::invalid_argument);
}

TEST(TransposeDegeneracy, HoldsOnlyAtZeroAndPi) {
  EXPECT_LT(max_abs(gates::h_theta(-0.0).matrix() - gates::h_theta(0.0).transpose().matrix()), 1e-12);
  EXPECT_LT(max_abs(gates::h_theta(-kPi).matrix() - gates::h_theta(kPi).transpose().matrix()), 1e-12);
  Rng rng(25);
  for (int i = 0; i < 100; ++i) {
    double t = uniform01(rng) * 2 * kPi;
    if (ThetaTriple::degeneracy_distance(t) < 1e-2) continue;
    EXPECT_GT(transpose_identity_defect(t), 1e-3) << "theta " << t;
  }
}

TEST(BellDecompose, Examples) {
  const auto c = bell_decompose(make_bell(BellKind::PhiPlus, {"x", "y"}), "x", "y");
  EXPECT_NEAR(std::abs(c[0]), 1.0, 1e-12);
  const auto d = bell_decompose(apply_unitary(new_register({"x", "y"}), gates::pauli_x(), {"y"}), "x", "y");
  EXPECT_NEAR(std::abs(d[0]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d[1]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d[2]), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(d[3]), 1 / std::sqrt(2.0), 1e-12);
}

TEST(BellDecompose, WorksInsideLargerRegister) {
  const auto s = make_bell(BellKind::PsiMinus, {"x", "y"}).tensor(new_register({"z"}));
  const auto c = bell_decompose(s.permuted(std::vector<Label>{"x", "z", "y"}), "x", "y");
  EXPECT_NEAR(std::abs(c[3]), 1.0, 1e-12);
  double total = 0;
  for (auto z : c) total += std::norm(z);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(BellDecompose, RejectsEntangledPair) {
  const auto ghz = make_carrier(CarrierKind::GHZ, kAbc);
  EXPECT_THROW(bell_decompose(ghz, "a", "b"), EntangledPairError);
}

TEST(PhaseHelpers, EqualUpToPhase) {
  const Vector v = bell_vector(BellKind::PsiPlus);
  EXPECT_TRUE(equal_up_to_phase(v, v * std::polar(1.0, 2.1)));
  EXPECT_FALSE(equal_up_to_phase(v, bell_vector(BellKind::PsiMinus)));
}

}  // namespace
}  // namespace qss
