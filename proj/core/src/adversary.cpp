#include "qss/adversary.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace qss {

namespace {

constexpr double kSynthesisTolerance = 1e-6;

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Reorders a five-qubit state to (b, m1, m2 | a, c) and views it as 8×4.
RowMajor as_bob_by_ac(const StateVector& s) {
  const std::array<Label, 5> order{labels::kBob, labels::kToBob, labels::kToCharlie, labels::kAlice,
                                   labels::kCharlie};
  const StateVector p = s.permuted(order);
  const auto amps = p.amplitudes();
  return Eigen::Map<const RowMajor>(amps.data(), 8, 4);
}

StateVector blank_state(const Vector& blank) {
  if (blank.size() != 2) {
    throw std::invalid_argument("counterfeit blank must be a single-qubit state");
  }
  return StateVector::from_amplitudes({labels::kToCharlie}, {blank(0), blank(1)});
}

Vector kron2(const Matrix& a, const Matrix& b, const Vector& v) {
  Matrix k(4, 4);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) k.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
  return k * v;
}

void require_split(const ProtocolSession& session) {
  if (!session.state().has_label(labels::kBobKept)) {
    throw std::logic_error("no entanglement split has been executed on this session");
  }
}

}  // namespace

std::string_view to_string(PatternHypothesis h) {
  switch (h) {
    case PatternHypothesis::Unknown: return "unknown";
    case PatternHypothesis::PhiPattern: return "phi";
    case PatternHypothesis::PsiPattern: return "psi";
  }
  return "?";
}

std::string_view to_string(MaintenancePolicy p) {
  switch (p) {
    case MaintenancePolicy::KnownThetaU: return "u";
    case MaintenancePolicy::KnownThetaV: return "v";
    case MaintenancePolicy::RandomGuess: return "random";
    case MaintenancePolicy::PlainHadamard: return "plain";
  }
  return "?";
}

std::string_view to_string(MaintenanceChoice c) {
  switch (c) {
    case MaintenanceChoice::U: return "U";
    case MaintenanceChoice::V: return "V";
    case MaintenanceChoice::Plain: return "plain";
  }
  return "?";
}

// --- synthesis -------------------------------------------------------------

StateVector split_input_state(int q2) {
  StateVector s = make_carrier(CarrierKind::EvenParity, {labels::kAlice, labels::kBob, labels::kCharlie})
                      .tensor(encode_message(Parity::Even, q2, {labels::kToBob, labels::kToCharlie}));
  s.apply(gates::cnot(), {labels::kAlice, labels::kToBob});
  return s;
}

StateVector split_target_state(int q2, const Vector& blank) {
  if (q2 != 0 && q2 != 1) {
    throw std::invalid_argument("q2 must be 0 or 1");
  }
  const BellKind kind = q2 == 0 ? BellKind::PhiPlus : BellKind::PsiPlus;
  const StateVector s = make_bell(kind, {labels::kAlice, labels::kToBob})
                            .tensor(make_bell(kind, {labels::kBob, labels::kCharlie}))
                            .tensor(blank_state(blank));
  const std::array<Label, 5> order{labels::kAlice, labels::kBob, labels::kCharlie, labels::kToBob,
                                   labels::kToCharlie};
  return s.permuted(order);
}

SplitUnitary synthesize_split_unitary() {
  Vector zero = Vector::Zero(2);
  zero(0) = 1.0;
  return synthesize_split_unitary(zero);
}

SplitUnitary synthesize_split_unitary(const Vector& blank) {
  std::array<StateVector, 2> inputs{split_input_state(0), split_input_state(1)};
  std::array<StateVector, 2> targets{split_target_state(0, blank), split_target_state(1, blank)};

  // Unknown u = 8r + j is U(r, j). Constraint q, output row r, (a,c) column k:
  // Σ_j U(r, j) In_q(j, k) = Out_q(r, k).
  Matrix system = Matrix::Zero(64, 64);
  Vector rhs(64);
  for (int q = 0; q < 2; ++q) {
    const RowMajor in = as_bob_by_ac(inputs[q]);
    const RowMajor out = as_bob_by_ac(targets[q]);
    for (int r = 0; r < 8; ++r) {
      for (int k = 0; k < 4; ++k) {
        const int eq = 32 * q + 4 * r + k;
        for (int j = 0; j < 8; ++j) system(eq, 8 * r + j) = in(j, k);
        rhs(eq) = out(r, k);
      }
    }
  }
  const Vector solution = system.completeOrthogonalDecomposition().solve(rhs);
  Matrix u(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int j = 0; j < 8; ++j) u(r, j) = solution(8 * r + j);

  // The least-squares solution is an isometry on the constrained subspace and
  // zero elsewhere. Map the unused input directions onto the unused outputs.
  Eigen::JacobiSVD<Matrix> partial(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = partial.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < 0.5) u += partial.matrixU().col(i) * partial.matrixV().col(i).adjoint();
  }

  // Polar projection onto the nearest unitary.
  Eigen::JacobiSVD<Matrix> polar(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix unitary = polar.matrixU() * polar.matrixV().adjoint();

  SplitUnitary result{UnitaryMatrix::unchecked(unitary), {0.0, 0.0}, unitarity_defect(unitary)};
  for (int q = 0; q < 2; ++q) {
    const StateVector mapped =
        apply_unitary(inputs[q], result.matrix, {labels::kBob, labels::kToBob, labels::kToCharlie});
    result.residuals[q] = (mapped.to_eigen() - targets[q].to_eigen()).norm();
    if (!(result.residuals[q] < kSynthesisTolerance)) {
      throw SynthesisError("split constraint for q2=" + std::to_string(q) + " (" +
                           (q == 0 ? "phi+ x phi+" : "psi+ x psi+") + ") violated: residual " +
                           std::to_string(result.residuals[q]));
    }
  }
  if (!(result.unitarity_defect < kSynthesisTolerance)) {
    throw SynthesisError("synthesized split matrix is not unitary: defect " +
                         std::to_string(result.unitarity_defect));
  }
  return result;
}

// --- AttackState -----------------------------------------------------------

AttackState::AttackState(MaintenancePolicy policy, int blank_bit)
    : policy_(policy),
      blank_bit_(blank_bit),
      predicted_phi_(bell_vector(BellKind::PhiPlus)),
      predicted_psi_(bell_vector(BellKind::PsiPlus)) {}

const Vector& AttackState::predicted_pair(PatternHypothesis h) const {
  return h == PatternHypothesis::PsiPattern ? predicted_psi_ : predicted_phi_;
}

int AttackState::predicted_flip(PatternHypothesis h) const {
  const Vector& v = predicted_pair(h);
  return std::norm(v(1)) + std::norm(v(2)) > 0.5 ? 1 : 0;
}

std::optional<int> AttackState::learned_bit_if_recorded(int round_index) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(),
                               [&](const RoundEntry& e) { return e.round_index == round_index; });
  if (it == entries_.end()) return std::nullopt;
  const int flip = hypothesis_ == PatternHypothesis::PsiPattern ? it->flip_psi : it->flip_phi;
  return it->raw_bit ^ flip;
}

int AttackState::learned_bit(int round_index) const {
  const auto bit = learned_bit_if_recorded(round_index);
  if (!bit) {
    throw std::out_of_range("Bob has no record of round " + std::to_string(round_index));
  }
  return *bit;
}

MaintenanceChoice AttackState::choose(int round_index, Rng& rng) {
  switch (policy_) {
    case MaintenancePolicy::KnownThetaU: return MaintenanceChoice::U;
    case MaintenancePolicy::KnownThetaV: return MaintenanceChoice::V;
    case MaintenancePolicy::PlainHadamard: return MaintenanceChoice::Plain;
    case MaintenancePolicy::RandomGuess: break;
  }
  // One coin per round pair: drawn at the inverse step after an even round
  // and reused for the forward step that follows.
  if (toggle_direction_after(round_index) == ToggleDirection::Inverse || !pair_choice_) {
    pair_choice_ = random_bit(rng) ? MaintenanceChoice::V : MaintenanceChoice::U;
    return *pair_choice_;
  }
  const MaintenanceChoice c = *pair_choice_;
  pair_choice_.reset();
  return c;
}

void AttackState::record(RoundEntry entry) { entries_.push_back(entry); }

void AttackState::update_predictions(const UnitaryMatrix& alice_op, const UnitaryMatrix& bob_kept_op) {
  predicted_phi_ = kron2(alice_op.matrix(), bob_kept_op.matrix(), predicted_phi_);
  predicted_psi_ = kron2(alice_op.matrix(), bob_kept_op.matrix(), predicted_psi_);
}

void AttackState::set_hypothesis(PatternHypothesis h) {
  if (hypothesis_ != PatternHypothesis::Unknown && h != hypothesis_) {
    throw std::logic_error("a resolved pattern hypothesis cannot change");
  }
  hypothesis_ = h;
}

// --- attack steps ----------------------------------------------------------

AttackState execute_split(ProtocolSession& session, const SplitUnitary& su, MaintenancePolicy policy,
                          int blank_bit) {
  if (session.round_index() != 2 || !session.has_pending_round()) {
    throw std::logic_error("the split runs on round 2 after encoding and before delivery");
  }
  if (session.state().has_label(labels::kBobKept) || session.state().num_qubits() != 5) {
    throw std::logic_error("register is not in the five-qubit honest shape");
  }
  if (su.matrix.dim() != 8) {
    throw std::invalid_argument("split unitary must act on three qubits");
  }
  session.apply(su.matrix, {labels::kBob, labels::kToBob, labels::kToCharlie});
  session.relabel(labels::kToBob, labels::kBobKept);
  session.append_qubit(labels::kToBob);
  return AttackState(policy, blank_bit);
}

std::pair<int, int> deliver_split_round(ProtocolSession& session, AttackState& attack, Rng& rng) {
  require_split(session);
  if (session.round_index() != 2 || !session.has_pending_round()) {
    throw std::logic_error("the counterfeit delivery belongs to the split round");
  }
  const auto cx = gates::cnot();
  session.apply(cx, {labels::kBob, labels::kToCharlie});
  session.apply(cx, {labels::kCharlie, labels::kToCharlie});
  const int charlie = session.measure_and_reset(labels::kToCharlie, rng);
  const int bob_claim = attack.blank_bit();
  // Under Phi the round-2 bit was 0, under Psi it was 1.
  attack.record({2, 0, 0, 1});
  session.finish_round(bob_claim, charlie);
  return {bob_claim, charlie};
}

std::pair<UnitaryMatrix, UnitaryMatrix> maintenance_gates(const ProtocolConfig& config,
                                                          MaintenanceChoice choice,
                                                          ToggleDirection direction) {
  if (choice == MaintenanceChoice::Plain) return {gates::hadamard(), gates::hadamard()};
  const double ta = config.angles ? config.angles->a() : 0.0;
  const double tc = config.angles ? config.angles->c() : 0.0;
  UnitaryMatrix kept = choice == MaintenanceChoice::U ? gates::h_theta(-ta) : gates::h_theta(ta).transpose();
  UnitaryMatrix bob = choice == MaintenanceChoice::U ? gates::h_theta(-tc) : gates::h_theta(tc).transpose();
  if (direction == ToggleDirection::Inverse) return {kept.adjoint(), bob.adjoint()};
  return {kept, bob};
}

void maintain_carriers(ProtocolSession& session, AttackState& attack, MaintenanceChoice choice) {
  require_split(session);
  const ToggleDirection dir = session.current_direction();
  const double ta = session.config().angles ? session.config().angles->a() : 0.0;
  session.toggle_alice_and_charlie();
  auto [kept, bob] = maintenance_gates(session.config(), choice, dir);
  session.apply(kept, {labels::kBobKept});
  session.apply(bob, {labels::kBob});
  session.advance_round();
  attack.update_predictions(toggle_gate(session.config().variant, ta, dir), kept);
}

DecodeForwardResult attack_decode_and_forward(ProtocolSession& session, AttackState& attack, Rng& rng) {
  require_split(session);
  if (session.round_index() < 3 || !session.has_pending_round()) {
    throw std::logic_error("decode-and-forward needs an encoded round after the split");
  }
  const auto cx = gates::cnot();
  const bool odd = parity_of(session.round_index()) == Parity::Odd;
  session.apply(cx, {labels::kBobKept, labels::kToBob});
  if (odd) session.apply(cx, {labels::kBobKept, labels::kToCharlie});

  const int x1 = session.measure_and_reset(labels::kToBob, rng);
  const int raw = odd ? x1 : x1 ^ session.measure(labels::kToCharlie, rng);

  // Counterfeit for Charlie, routed through the (b, c) fraud carrier.
  session.apply(cx, {labels::kBob, labels::kToCharlie});
  session.apply(cx, {labels::kCharlie, labels::kToCharlie});
  const int charlie = session.measure_and_reset(labels::kToCharlie, rng);

  const int round = session.round_index();
  attack.record({round, raw, attack.predicted_flip(PatternHypothesis::PhiPattern),
                 attack.predicted_flip(PatternHypothesis::PsiPattern)});
  const int learned = attack.learned_bit(round);
  // Even rounds: Charlie's bit carries the same pair flip as Bob's, so the
  // first message qubit alone completes the XOR.
  const int claim = odd ? learned : x1;
  session.finish_round(claim, charlie);
  return {learned, claim, charlie};
}

AttackState resolve_pattern(AttackState attack, int round_index, int alice_bit) {
  const auto& entries = attack.entries();
  const auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const AttackState::RoundEntry& e) { return e.round_index == round_index; });
  if (it == entries.end()) {
    throw std::out_of_range("Bob has no record of announced round " + std::to_string(round_index));
  }
  if (attack.hypothesis() != PatternHypothesis::Unknown || it->flip_phi == it->flip_psi) {
    return attack;
  }
  const bool phi_consistent = (it->raw_bit ^ it->flip_phi) == alice_bit;
  attack.set_hypothesis(phi_consistent ? PatternHypothesis::PhiPattern : PatternHypothesis::PsiPattern);
  return attack;
}

bool fraud_carriers_intact(const ProtocolSession& session, double tolerance) {
  require_split(session);
  const auto& s = session.state();
  return nearest_bell(s, labels::kAlice, labels::kBobKept).second >= 1.0 - tolerance &&
         nearest_bell(s, labels::kBob, labels::kCharlie).second >= 1.0 - tolerance;
}

namespace {

// Probability that the pair reads with odd parity.
double odd_parity_probability(const StateVector& s, const Label& x, const Label& y) {
  const Matrix& rho = reduced_density(s, {x, y}).matrix();
  return rho(1, 1).real() + rho(2, 2).real();
}

}  // namespace

bool fraud_carriers_decodable(const ProtocolSession& session, double tolerance) {
  require_split(session);
  const auto& s = session.state();
  const double p_ab = odd_parity_probability(s, labels::kAlice, labels::kBobKept);
  const double p_bc = odd_parity_probability(s, labels::kBob, labels::kCharlie);
  auto deterministic = [&](double p) { return p < tolerance || p > 1.0 - tolerance; };
  return deterministic(p_ab) && deterministic(p_bc) && ((p_ab > 0.5) == (p_bc > 0.5));
}

double pattern_fidelity(const StateVector& state, BellKind kind_ab, BellKind kind_bc) {
  const DensityMatrix rho =
      reduced_density(state, {labels::kAlice, labels::kBobKept, labels::kBob, labels::kCharlie});
  const Vector ab = bell_vector(kind_ab);
  const Vector bc = bell_vector(kind_bc);
  Vector joint(16);
  for (Eigen::Index i = 0; i < 4; ++i) joint.segment(4 * i, 4) = ab(i) * bc;
  return rho.expectation(joint);
}

}  // namespace qss
