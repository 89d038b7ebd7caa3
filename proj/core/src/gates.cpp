#include "qss/gates.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace qss {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

void require_finite(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("angle must be finite");
  }
}

}  // namespace

std::string_view to_string(BellKind kind) {
  switch (kind) {
    case BellKind::PhiPlus: return "phi+";
    case BellKind::PhiMinus: return "phi-";
    case BellKind::PsiPlus: return "psi+";
    case BellKind::PsiMinus: return "psi-";
  }
  return "?";
}

std::string_view to_string(CarrierKind kind) {
  return kind == CarrierKind::GHZ ? "ghz" : "even";
}

namespace gates {

UnitaryMatrix identity(std::size_t num_qubits) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
  return UnitaryMatrix::checked(Matrix::Identity(d, d));
}

UnitaryMatrix pauli_x() { return UnitaryMatrix::checked(mat2(0, 1, 1, 0)); }
UnitaryMatrix pauli_y() { return UnitaryMatrix::checked(mat2(0, Complex(0, -1), Complex(0, 1), 0)); }
UnitaryMatrix pauli_z() { return UnitaryMatrix::checked(mat2(1, 0, 0, -1)); }

UnitaryMatrix hadamard() {
  return UnitaryMatrix::checked(kInvSqrt2 * mat2(1, 1, 1, -1), 1e-12);
}

UnitaryMatrix cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return UnitaryMatrix::checked(std::move(m));
}

UnitaryMatrix h_theta(double theta) {
  require_finite(theta);
  const Complex p = std::polar(1.0, theta);
  const Complex n = std::polar(1.0, -theta);
  return UnitaryMatrix::checked(kInvSqrt2 * mat2(p, n, p, -n), 1e-12);
}

UnitaryMatrix h_theta_inverse(double theta) { return h_theta(theta).adjoint(); }

}  // namespace gates

// --- ThetaTriple -----------------------------------------------------------

double wrap_angle(double theta) {
  require_finite(theta);
  double r = std::fmod(theta, kTwoPi);
  if (r < 0) r += kTwoPi;
  // fmod of a value just below a multiple of 2π can round up to 2π.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_sum_residual(double theta_a, double theta_b, double theta_c) {
  const double s = wrap_angle(theta_a + theta_b + theta_c);
  return std::min(s, kTwoPi - s);
}

ThetaTriple ThetaTriple::make(double theta_a, double theta_b, double theta_c,
                              double sum_tolerance) {
  require_finite(theta_a);
  require_finite(theta_b);
  require_finite(theta_c);
  const double residual = angle_sum_residual(theta_a, theta_b, theta_c);
  if (residual > sum_tolerance) {
    throw std::invalid_argument("theta angles must sum to 0 mod 2pi (off by " +
                                std::to_string(residual) + ")");
  }
  return ThetaTriple(wrap_angle(theta_a), wrap_angle(theta_b), wrap_angle(theta_c));
}

ThetaTriple ThetaTriple::from_pair(double theta_a, double theta_b) {
  require_finite(theta_a);
  require_finite(theta_b);
  return ThetaTriple(wrap_angle(theta_a), wrap_angle(theta_b), wrap_angle(-theta_a - theta_b));
}

double ThetaTriple::degeneracy_distance(double theta) {
  const double t = wrap_angle(theta);
  const double to_zero = std::min(t, kTwoPi - t);
  return std::min(to_zero, std::abs(t - std::numbers::pi));
}

bool ThetaTriple::is_hardened() const {
  return degeneracy_distance(a_) > kHardenedMargin && degeneracy_distance(b_) > kHardenedMargin &&
         degeneracy_distance(c_) > kHardenedMargin;
}

void ThetaTriple::validate_hardened() const {
  const std::array<std::pair<const char*, double>, 3> angles{{{"theta_a", a_}, {"theta_b", b_}, {"theta_c", c_}}};
  for (const auto& [name, value] : angles) {
    if (degeneracy_distance(value) <= kHardenedMargin) {
      throw std::invalid_argument(std::string(name) +
                                  " is degenerate (within 1e-6 of 0 or pi); H(-theta) and "
                                  "H(theta)^T coincide there");
    }
  }
}

// --- named states ----------------------------------------------------------

StateVector make_carrier(CarrierKind kind, const std::array<Label, 3>& labels) {
  std::vector<Complex> amps(8);
  if (kind == CarrierKind::GHZ) {
    amps[0b000] = amps[0b111] = kInvSqrt2;
  } else {
    amps[0b000] = amps[0b110] = amps[0b101] = amps[0b011] = 0.5;
  }
  return StateVector::from_amplitudes({labels.begin(), labels.end()}, std::move(amps));
}

Vector bell_vector(BellKind kind) {
  Vector v = Vector::Zero(4);
  switch (kind) {
    case BellKind::PhiPlus: v(0) = kInvSqrt2; v(3) = kInvSqrt2; break;
    case BellKind::PhiMinus: v(0) = kInvSqrt2; v(3) = -kInvSqrt2; break;
    case BellKind::PsiPlus: v(1) = kInvSqrt2; v(2) = kInvSqrt2; break;
    case BellKind::PsiMinus: v(1) = kInvSqrt2; v(2) = -kInvSqrt2; break;
  }
  return v;
}

StateVector make_bell(BellKind kind, const std::array<Label, 2>& labels) {
  const Vector v = bell_vector(kind);
  return StateVector::from_amplitudes({labels.begin(), labels.end()},
                                      std::vector<Complex>(v.data(), v.data() + v.size()));
}

namespace {

constexpr std::array<BellKind, 4> kBellOrder{BellKind::PhiPlus, BellKind::PhiMinus,
                                             BellKind::PsiPlus, BellKind::PsiMinus};

BellCoefficients project_bell(const Vector& pair) {
  BellCoefficients out{};
  for (std::size_t k = 0; k < 4; ++k) out[k] = bell_vector(kBellOrder[k]).dot(pair);
  return out;
}

}  // namespace

BellCoefficients bell_decompose(const StateVector& state, const Label& first, const Label& second) {
  if (state.num_qubits() == 2) {
    const std::array<Label, 2> order{first, second};
    return project_bell(state.permuted(order).to_eigen());
  }
  const DensityMatrix rho = reduced_density(state, {first, second});
  if (rho.purity() < 1.0 - 1e-10) {
    throw EntangledPairError("pair (" + first + ", " + second +
                             ") is entangled with the rest of the register");
  }
  const Matrix herm = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  const Vector pair = solver.eigenvectors().col(3);
  BellCoefficients coeffs = project_bell(pair);
  std::size_t largest = 0;
  for (std::size_t k = 1; k < 4; ++k) {
    if (std::abs(coeffs[k]) > std::abs(coeffs[largest])) largest = k;
  }
  const Complex phase = std::abs(coeffs[largest]) > 0 ? std::conj(coeffs[largest]) / std::abs(coeffs[largest])
                                                      : Complex(1.0);
  for (auto& c : coeffs) c *= phase;
  return coeffs;
}

double bell_fidelity(const StateVector& state, const Label& first, const Label& second,
                     BellKind kind) {
  return reduced_density(state, {first, second}).expectation(bell_vector(kind));
}

std::pair<BellKind, double> nearest_bell(const StateVector& state, const Label& first,
                                         const Label& second) {
  const DensityMatrix rho = reduced_density(state, {first, second});
  std::pair<BellKind, double> best{BellKind::PhiPlus, -1.0};
  for (BellKind kind : kBellOrder) {
    const double f = rho.expectation(bell_vector(kind));
    if (f > best.second) best = {kind, f};
  }
  return best;
}

// --- phase-insensitive comparisons -----------------------------------------

double phase_insensitive_distance(const Matrix& x, const Matrix& y) {
  const Complex denom = y.cwiseAbs2().sum();
  const Complex lambda = std::abs(denom) > 0 ? (y.conjugate().cwiseProduct(x)).sum() / denom : Complex(0.0);
  return (x - lambda * y).cwiseAbs().maxCoeff();
}

double transpose_identity_defect(double theta) {
  return phase_insensitive_distance(gates::h_theta(-theta).matrix(), gates::h_theta(theta).transpose().matrix());
}

bool equal_up_to_phase(const Vector& x, const Vector& y, double tolerance) {
  if (x.size() != y.size()) return false;
  const Complex overlap = y.dot(x);  // ⟨y|x⟩
  const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (x - phase * y).cwiseAbs().maxCoeff() < tolerance;
}

}  // namespace qss
