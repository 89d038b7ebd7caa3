#include "qss/qcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include <Eigen/Eigenvalues>

namespace qss {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_labels(const std::vector<Label>& labels) {
  if (labels.empty()) {
    throw std::invalid_argument("register needs at least one qubit label");
  }
  if (labels.size() > kMaxQubits) {
    throw std::invalid_argument("register exceeds " + std::to_string(kMaxQubits) + " qubits");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& label : labels) {
    if (label.empty()) {
      throw std::invalid_argument("qubit labels must be non-empty");
    }
    if (!seen.insert(label).second) {
      throw std::invalid_argument("duplicate qubit label '" + label + "'");
    }
  }
}

void check_square_power_of_two(const Matrix& m) {
  if (m.rows() != m.cols() || !is_power_of_two(static_cast<std::size_t>(m.rows()))) {
    throw std::invalid_argument("gate matrix must be square with power-of-two dimension");
  }
}

}  // namespace

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int random_bit(Rng& rng) { return static_cast<int>(rng() >> 63); }

// --- UnitaryMatrix ---------------------------------------------------------

double unitarity_defect(const Matrix& m) {
  const Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

UnitaryMatrix UnitaryMatrix::checked(Matrix m, double tolerance) {
  check_square_power_of_two(m);
  const double defect = unitarity_defect(m);
  if (!(defect < tolerance)) {
    throw std::invalid_argument("matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
  return UnitaryMatrix(std::move(m));
}

UnitaryMatrix UnitaryMatrix::unchecked(Matrix m) {
  check_square_power_of_two(m);
  return UnitaryMatrix(std::move(m));
}

std::size_t UnitaryMatrix::num_qubits() const {
  return static_cast<std::size_t>(std::countr_zero(dim()));
}

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(m_.adjoint()); }
UnitaryMatrix UnitaryMatrix::transpose() const { return UnitaryMatrix(m_.transpose()); }
UnitaryMatrix UnitaryMatrix::conjugate() const { return UnitaryMatrix(m_.conjugate()); }

UnitaryMatrix UnitaryMatrix::kron(const UnitaryMatrix& rhs) const {
  const auto n = m_.rows();
  const auto k = rhs.m_.rows();
  Matrix out(n * k, n * k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.block(i * k, j * k, k, k) = m_(i, j) * rhs.m_;
    }
  }
  return UnitaryMatrix(std::move(out));
}

UnitaryMatrix operator*(const UnitaryMatrix& lhs, const UnitaryMatrix& rhs) {
  if (lhs.dim() != rhs.dim()) {
    throw std::invalid_argument("gate product dimension mismatch");
  }
  return UnitaryMatrix(lhs.m_ * rhs.m_);
}

// --- DensityMatrix ---------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
}

double DensityMatrix::trace() const { return rho_.trace().real(); }

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::hermiticity_defect() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::expectation(const Vector& v) const {
  if (v.size() != rho_.rows()) {
    throw std::invalid_argument("expectation vector dimension mismatch");
  }
  return (v.adjoint() * rho_ * v)(0, 0).real();
}

// --- StateVector -----------------------------------------------------------

StateVector::StateVector(std::vector<Label> labels, std::vector<Complex> amps)
    : labels_(std::move(labels)), amps_(std::move(amps)) {}

StateVector StateVector::zeros(std::vector<Label> labels) {
  check_labels(labels);
  std::vector<Complex> amps(std::size_t{1} << labels.size());
  amps[0] = 1.0;
  return StateVector(std::move(labels), std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<Label> labels, std::vector<Complex> amps) {
  check_labels(labels);
  if (amps.size() != (std::size_t{1} << labels.size())) {
    throw std::invalid_argument("amplitude count does not match 2^qubits");
  }
  StateVector s(std::move(labels), std::move(amps));
  if (std::abs(s.norm_squared() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("amplitudes are not normalized");
  }
  return s;
}

bool StateVector::has_label(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t StateVector::position(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw std::out_of_range("unknown qubit label '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

void StateVector::apply(const UnitaryMatrix& m, std::initializer_list<Label> targets) {
  apply(m, std::span<const Label>(targets.begin(), targets.size()));
}

void StateVector::apply(const UnitaryMatrix& m, std::span<const Label> targets) {
  const std::size_t k = targets.size();
  if (k == 0 || m.dim() != (std::size_t{1} << k)) {
    throw std::invalid_argument("gate dimension does not match target count");
  }
  std::vector<std::size_t> masks(k);
  std::size_t target_mask = 0;
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t bit = std::size_t{1} << bit_of(position(targets[t]));
    if (target_mask & bit) {
      throw std::invalid_argument("gate targets must be distinct");
    }
    target_mask |= bit;
    // targets[0] is the most significant bit of the gate's local index.
    masks[k - 1 - t] = bit;
  }

  const std::size_t sub = m.dim();
  std::vector<std::size_t> offsets(sub);
  for (std::size_t j = 0; j < sub; ++j) {
    std::size_t off = 0;
    for (std::size_t t = 0; t < k; ++t) {
      if (j & (std::size_t{1} << t)) off |= masks[t];
    }
    offsets[j] = off;
  }

  const Matrix& g = m.matrix();
  std::vector<Complex> in(sub);
  for (std::size_t base = 0; base < amps_.size(); ++base) {
    if (base & target_mask) continue;
    for (std::size_t j = 0; j < sub; ++j) in[j] = amps_[base | offsets[j]];
    for (std::size_t i = 0; i < sub; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < sub; ++j) {
        acc += g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * in[j];
      }
      amps_[base | offsets[i]] = acc;
    }
  }
}

double StateVector::probability_one(std::string_view target) const {
  const std::size_t bit = std::size_t{1} << bit_of(position(target));
  double p1 = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) p1 += std::norm(amps_[i]);
  }
  return p1;
}

int StateVector::measure(std::string_view target, Rng& rng) {
  const std::size_t bit = std::size_t{1} << bit_of(position(target));
  const double p1 = std::clamp(probability_one(target), 0.0, 1.0);
  const int outcome = uniform01(rng) < p1 ? 1 : 0;
  const double keep_p = outcome ? p1 : 1.0 - p1;
  const double scale = 1.0 / std::sqrt(keep_p);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const bool one = (i & bit) != 0;
    amps_[i] = (one == (outcome == 1)) ? amps_[i] * scale : Complex{0.0, 0.0};
  }
  return outcome;
}

void StateVector::relabel(std::string_view from, Label to) {
  const std::size_t pos = position(from);
  if (to.empty() || (has_label(to) && to != from)) {
    throw std::invalid_argument("relabel target '" + to + "' is empty or already in use");
  }
  labels_[pos] = std::move(to);
}

void StateVector::append_qubit(Label label) {
  auto labels = labels_;
  labels.push_back(std::move(label));
  check_labels(labels);
  std::vector<Complex> amps(amps_.size() * 2);
  for (std::size_t i = 0; i < amps_.size(); ++i) amps[2 * i] = amps_[i];
  labels_ = std::move(labels);
  amps_ = std::move(amps);
}

StateVector StateVector::tensor(const StateVector& rhs) const {
  auto labels = labels_;
  labels.insert(labels.end(), rhs.labels_.begin(), rhs.labels_.end());
  check_labels(labels);
  std::vector<Complex> amps(amps_.size() * rhs.amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    for (std::size_t j = 0; j < rhs.amps_.size(); ++j) {
      amps[i * rhs.amps_.size() + j] = amps_[i] * rhs.amps_[j];
    }
  }
  return StateVector(std::move(labels), std::move(amps));
}

StateVector StateVector::permuted(std::span<const Label> order) const {
  if (order.size() != labels_.size()) {
    throw std::invalid_argument("permutation must list every label once");
  }
  std::vector<Label> labels(order.begin(), order.end());
  check_labels(labels);
  const std::size_t n = labels_.size();
  std::vector<std::size_t> src_bit(n);
  for (std::size_t p = 0; p < n; ++p) src_bit[p] = bit_of(position(order[p]));
  std::vector<Complex> amps(amps_.size());
  for (std::size_t dst = 0; dst < amps.size(); ++dst) {
    std::size_t src = 0;
    for (std::size_t p = 0; p < n; ++p) {
      if (dst & (std::size_t{1} << (n - 1 - p))) src |= std::size_t{1} << src_bit[p];
    }
    amps[dst] = amps_[src];
  }
  return StateVector(std::move(labels), std::move(amps));
}

Vector StateVector::to_eigen() const {
  Vector v(static_cast<Eigen::Index>(amps_.size()));
  for (std::size_t i = 0; i < amps_.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps_[i];
  return v;
}

// --- free functions --------------------------------------------------------

StateVector new_register(std::vector<Label> labels) { return StateVector::zeros(std::move(labels)); }

StateVector apply_unitary(StateVector state, const UnitaryMatrix& m, std::span<const Label> targets) {
  state.apply(m, targets);
  return state;
}

StateVector apply_unitary(StateVector state, const UnitaryMatrix& m,
                          std::initializer_list<Label> targets) {
  state.apply(m, targets);
  return state;
}

std::pair<int, StateVector> measure(StateVector state, std::string_view target, Rng& rng) {
  const int bit = state.measure(target, rng);
  return {bit, std::move(state)};
}

DensityMatrix reduced_density(const StateVector& state, std::initializer_list<Label> keep) {
  return reduced_density(state, std::span<const Label>(keep.begin(), keep.size()));
}

DensityMatrix reduced_density(const StateVector& state, std::span<const Label> keep) {
  if (keep.empty()) {
    throw std::invalid_argument("reduced_density needs at least one kept label");
  }
  // Move the kept labels to the front; the amplitude array then reads as a
  // (2^k × 2^(n−k)) row-major matrix Ψ and ρ = Ψ Ψ†.
  for (const auto& label : keep) state.position(label);
  std::vector<Label> order(keep.begin(), keep.end());
  for (const auto& label : state.labels()) {
    if (std::find(keep.begin(), keep.end(), label) == keep.end()) order.push_back(label);
  }
  const StateVector front = state.permuted(order);
  const auto rows = static_cast<Eigen::Index>(std::size_t{1} << keep.size());
  const auto cols = static_cast<Eigen::Index>(front.dim()) / rows;
  const auto amps = front.amplitudes();
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> psi(
      amps.data(), rows, cols);
  return DensityMatrix(psi * psi.adjoint());
}

Complex inner_product(const StateVector& x, const StateVector& y) {
  if (x.labels() != y.labels()) {
    throw std::invalid_argument("inner product needs identical label order");
  }
  Complex acc = 0.0;
  const auto xa = x.amplitudes();
  const auto ya = y.amplitudes();
  for (std::size_t i = 0; i < xa.size(); ++i) acc += std::conj(xa[i]) * ya[i];
  return acc;
}

double fidelity(const StateVector& x, const StateVector& y) {
  return std::clamp(std::norm(inner_product(x, y)), 0.0, 1.0);
}

double trace_distance(const DensityMatrix& p, const DensityMatrix& q) {
  if (p.dim() != q.dim()) {
    throw std::invalid_argument("trace distance dimension mismatch");
  }
  const Matrix diff = p.matrix() - q.matrix();
  const Matrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * solver.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

}  // namespace qss
