#pragma once

// Dense state-vector engine.
//
// Bit ordering is big-endian over labels: the label at position 0 of a
// register is the most significant bit of the amplitude index. For the
// register {a, b, c} the basis ket |a b c> lives at index 4a + 2b + c.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qss {

using Complex = std::complex<double>;
using Label = std::string;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

inline constexpr std::size_t kMaxQubits = 12;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;

/// Uniform double in [0, 1) built from the top 53 bits of one draw, so
/// transcripts do not depend on the standard library's distributions.
double uniform01(Rng& rng);

/// Fair coin from one draw.
int random_bit(Rng& rng);

/// Square complex matrix whose dimension is a power of two.
class UnitaryMatrix {
 public:
  /// Wraps `m` after checking the shape and ‖M†M − I‖_max < `tolerance`.
  static UnitaryMatrix checked(Matrix m, double tolerance = kUnitaryTolerance);

  /// Wraps `m` after checking the shape only. Used for synthesized matrices,
  /// whose unitarity defect is measured and reported separately.
  static UnitaryMatrix unchecked(Matrix m);

  const Matrix& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t num_qubits() const;

  UnitaryMatrix adjoint() const;
  UnitaryMatrix transpose() const;
  UnitaryMatrix conjugate() const;

  /// Kronecker product, `*this` on the more significant factor.
  UnitaryMatrix kron(const UnitaryMatrix& rhs) const;

  friend UnitaryMatrix operator*(const UnitaryMatrix& lhs, const UnitaryMatrix& rhs);

 private:
  explicit UnitaryMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// ‖M†M − I‖_max.
double unitarity_defect(const Matrix& m);

class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix rho);

  const Matrix& matrix() const { return rho_; }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }

  double trace() const;
  double purity() const;
  /// ‖ρ − ρ†‖_max.
  double hermiticity_defect() const;
  double min_eigenvalue() const;

  /// ⟨v|ρ|v⟩ for a normalized vector of matching dimension.
  double expectation(const Vector& v) const;

 private:
  Matrix rho_;
};

class StateVector {
 public:
  /// |0…0⟩ over `labels`, in the stated order (new_register).
  static StateVector zeros(std::vector<Label> labels);

  /// Builds a state from explicit amplitudes. Throws unless the size is
  /// 2^len(labels) and the vector is normalized within kNormTolerance.
  static StateVector from_amplitudes(std::vector<Label> labels, std::vector<Complex> amps);

  std::size_t num_qubits() const { return labels_.size(); }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Label>& labels() const { return labels_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  Complex amplitude(std::size_t index) const { return amps_.at(index); }

  bool has_label(std::string_view label) const;
  /// Position of `label` in the register; throws std::out_of_range when absent.
  std::size_t position(std::string_view label) const;

  double norm_squared() const;

  /// In-place gate application. `m` acts on `targets` with targets[0] as the
  /// most significant bit of the gate's index; identity elsewhere.
  void apply(const UnitaryMatrix& m, std::span<const Label> targets);
  void apply(const UnitaryMatrix& m, std::initializer_list<Label> targets);

  /// Projective computational-basis measurement with collapse.
  int measure(std::string_view target, Rng& rng);

  /// Probability that `target` reads 1.
  double probability_one(std::string_view target) const;

  void relabel(std::string_view from, Label to);

  /// Appends a fresh |0⟩ qubit as the least significant bit.
  void append_qubit(Label label);

  /// Tensor product, `*this` on the more significant side.
  StateVector tensor(const StateVector& rhs) const;

  /// Reorders the register to `order` (a permutation of labels()).
  StateVector permuted(std::span<const Label> order) const;

  Vector to_eigen() const;

 private:
  StateVector(std::vector<Label> labels, std::vector<Complex> amps);

  std::size_t bit_of(std::size_t position) const { return num_qubits() - 1 - position; }

  std::vector<Label> labels_;
  std::vector<Complex> amps_;
};

// Value-returning forms of the core operations.

StateVector new_register(std::vector<Label> labels);

StateVector apply_unitary(StateVector state, const UnitaryMatrix& m, std::span<const Label> targets);
StateVector apply_unitary(StateVector state, const UnitaryMatrix& m,
                          std::initializer_list<Label> targets);

std::pair<int, StateVector> measure(StateVector state, std::string_view target, Rng& rng);

/// Partial trace onto `keep`; keep[0] is the most significant bit of the result.
DensityMatrix reduced_density(const StateVector& state, std::span<const Label> keep);
DensityMatrix reduced_density(const StateVector& state, std::initializer_list<Label> keep);

/// |⟨x|y⟩|². Both states must share the same label order.
double fidelity(const StateVector& x, const StateVector& y);

Complex inner_product(const StateVector& x, const StateVector& y);

/// ½‖p − q‖₁ from the eigenvalues of p − q.
double trace_distance(const DensityMatrix& p, const DensityMatrix& q);

}  // namespace qss
