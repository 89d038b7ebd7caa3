#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "qss/qcore.hpp"

namespace qss {

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };
enum class CarrierKind { GHZ, EvenParity };

std::string_view to_string(BellKind kind);
std::string_view to_string(CarrierKind kind);

/// True for Ψ±, whose computational-basis outcomes are anti-correlated.
constexpr bool is_psi(BellKind kind) {
  return kind == BellKind::PsiPlus || kind == BellKind::PsiMinus;
}

constexpr CarrierKind other(CarrierKind kind) {
  return kind == CarrierKind::GHZ ? CarrierKind::EvenParity : CarrierKind::GHZ;
}

namespace gates {

UnitaryMatrix identity(std::size_t num_qubits = 1);
UnitaryMatrix pauli_x();
UnitaryMatrix pauli_y();
UnitaryMatrix pauli_z();
UnitaryMatrix hadamard();

/// Controlled-NOT with the control as the first (most significant) target.
UnitaryMatrix cnot();

/// (1/√2)[[e^{iθ}, e^{−iθ}], [e^{iθ}, −e^{−iθ}]]. Equals hadamard() at θ = 0.
UnitaryMatrix h_theta(double theta);

/// Conjugate transpose of h_theta(theta).
UnitaryMatrix h_theta_inverse(double theta);

}  // namespace gates

/// Public angle parameters of the θ-hardened protocol, reduced mod 2π.
/// The three angles always sum to 0 mod 2π.
class ThetaTriple {
 public:
  /// Throws std::invalid_argument if any angle is non-finite or the sum is not
  /// 0 mod 2π within `sum_tolerance`.
  static ThetaTriple make(double theta_a, double theta_b, double theta_c,
                          double sum_tolerance = 1e-12);

  /// Derives θc = −θa − θb mod 2π, so the sum constraint holds by construction.
  static ThetaTriple from_pair(double theta_a, double theta_b);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

  /// Distance of `theta` from the nearest point of {0, π} on the circle.
  static double degeneracy_distance(double theta);

  /// Each angle must lie farther than kHardenedMargin from {0, π}. At those
  /// points H(−θ) and H(θ)ᵀ coincide up to a scalar.
  bool is_hardened() const;

  /// Throws std::invalid_argument naming the first offending angle.
  void validate_hardened() const;

  static constexpr double kHardenedMargin = 1e-6;

 private:
  ThetaTriple(double a, double b, double c) : a_(a), b_(b), c_(c) {}
  double a_;
  double b_;
  double c_;
};

/// Reduces an angle into [0, 2π).
double wrap_angle(double theta);

/// Circular distance of `sum` from 0 mod 2π.
double angle_sum_residual(double theta_a, double theta_b, double theta_c);

StateVector make_carrier(CarrierKind kind, const std::array<Label, 3>& labels);
StateVector make_bell(BellKind kind, const std::array<Label, 2>& labels);

/// Amplitudes of `kind` over |00⟩, |01⟩, |10⟩, |11⟩.
Vector bell_vector(BellKind kind);

/// Coefficients of a two-qubit state in the (Φ+, Φ−, Ψ+, Ψ−) basis.
using BellCoefficients = std::array<Complex, 4>;

/// Bell-basis coefficients of the pair (first, second).
///
/// When the register holds exactly these two qubits the amplitudes are used
/// directly. Otherwise the pair must be pure (purity > 1 − 1e−10): its state is
/// recovered from the dominant eigenvector of the reduced density matrix, with
/// the global phase fixed so the largest coefficient is real and positive.
/// Throws EntangledPairError when the pair is entangled with the rest.
BellCoefficients bell_decompose(const StateVector& state, const Label& first, const Label& second);

/// ⟨B|ρ|B⟩ for the reduced state of (first, second). Works for mixed pairs.
double bell_fidelity(const StateVector& state, const Label& first, const Label& second,
                     BellKind kind);

/// The Bell state closest to the pair and its fidelity.
std::pair<BellKind, double> nearest_bell(const StateVector& state, const Label& first,
                                         const Label& second);

struct EntangledPairError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// min over complex λ of ‖x − λy‖_max, with λ from the Frobenius projection.
double phase_insensitive_distance(const Matrix& x, const Matrix& y);

/// ‖H(−θ) − λH(θ)ᵀ‖_max for the best scalar λ.
double transpose_identity_defect(double theta);

/// True when x and y agree up to one global phase within `tolerance` (max norm).
bool equal_up_to_phase(const Vector& x, const Vector& y, double tolerance = kUnitaryTolerance);

}  // namespace qss
