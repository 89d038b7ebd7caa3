#pragma once

// Bob's entanglement-splitting attack.
//
// In round 2 Bob intercepts both message qubits and applies an 8×8 unitary on
// (b, m1, m2) that turns the even-parity carrier into two Bell pairs: one he
// shares with Alice through the retained qubit b̃ (old m1), one he shares with
// Charlie through b. Which pair of Bell states results depends on the round-2
// secret bit, which Bob does not know.

#include <array>
#include <optional>
#include <vector>

#include "qss/gates.hpp"
#include "qss/protocol.hpp"

namespace qss {

enum class PatternHypothesis { Unknown, PhiPattern, PsiPattern };
enum class MaintenancePolicy { KnownThetaU, KnownThetaV, RandomGuess, PlainHadamard };
enum class MaintenanceChoice { U, V, Plain };

std::string_view to_string(PatternHypothesis h);
std::string_view to_string(MaintenancePolicy p);
std::string_view to_string(MaintenanceChoice c);

struct SynthesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SplitUnitary {
  /// Acts on (b, m1, m2), b most significant.
  UnitaryMatrix matrix;
  /// ‖(U ⊗ I_ac)|in_q⟩ − |out_q⟩‖₂ for q = 0, 1.
  std::array<double, 2> residuals;
  double unitarity_defect;
};

/// The round-2 global state over (a, b, c, m1, m2): even-parity carrier with
/// the even-round message for `q2` entangled by CNOT(a→m1).
StateVector split_input_state(int q2);

/// The post-split target over (a, b, c, m1, m2): Φ+(a,m1)⊗Φ+(b,c)⊗|s⟩(m2)
/// for q2 = 0, Ψ+(a,m1)⊗Ψ+(b,c)⊗|s⟩(m2) for q2 = 1.
StateVector split_target_state(int q2, const Vector& blank);

/// Solves the 64-unknown linear system U ⊗ I_ac |in_q⟩ = |out_q⟩ (q = 0, 1)
/// in the minimum-norm least-squares sense, completes the unconstrained
/// subspace with an orthonormal map, and projects onto the unitary group with
/// the polar factor. Throws SynthesisError if a residual exceeds 1e−6.
SplitUnitary synthesize_split_unitary(const Vector& blank);
SplitUnitary synthesize_split_unitary();

/// Bob's classical bookkeeping for one attacked session.
class AttackState {
 public:
  struct RoundEntry {
    int round_index = 0;
    /// Bob's decoded bit assuming the (a, b̃) pair is correlated.
    int raw_bit = 0;
    /// Complement to apply under each hypothesis.
    int flip_phi = 0;
    int flip_psi = 0;
  };

  AttackState(MaintenancePolicy policy, int blank_bit);

  PatternHypothesis hypothesis() const { return hypothesis_; }
  MaintenancePolicy policy() const { return policy_; }
  const Label& kept_label() const { return labels::kBobKept; }
  const std::vector<RoundEntry>& entries() const { return entries_; }
  int blank_bit() const { return blank_bit_; }

  /// The ideal (a, b̃) pair state predicted under each hypothesis, over
  /// |00⟩, |01⟩, |10⟩, |11⟩ with a most significant.
  const Vector& predicted_pair(PatternHypothesis h) const;

  /// 1 when the predicted pair under `h` is anti-correlated in the
  /// computational basis (more weight on |01⟩, |10⟩).
  int predicted_flip(PatternHypothesis h) const;

  /// Raw bit corrected under the current hypothesis; Unknown reads as Phi.
  int learned_bit(int round_index) const;
  std::optional<int> learned_bit_if_recorded(int round_index) const;

  /// Picks U, V or Plain for the maintenance step after `round_index`.
  MaintenanceChoice choose(int round_index, Rng& rng);

  void record(RoundEntry entry);
  void update_predictions(const UnitaryMatrix& alice_op, const UnitaryMatrix& bob_kept_op);
  void set_hypothesis(PatternHypothesis h);

 private:
  MaintenancePolicy policy_;
  int blank_bit_;
  PatternHypothesis hypothesis_ = PatternHypothesis::Unknown;
  Vector predicted_phi_;
  Vector predicted_psi_;
  std::vector<RoundEntry> entries_;
  std::optional<MaintenanceChoice> pair_choice_;
};

/// Applies `su` on (b, m1, m2) in round 2, renames m1 to b̃ (kept by Bob) and
/// adds a fresh m1 for later rounds; m2 now holds the counterfeit blank.
/// The session must be at round 2 with the round encoded and undelivered.
AttackState execute_split(ProtocolSession& session, const SplitUnitary& su,
                          MaintenancePolicy policy, int blank_bit = 0);

/// Delivers the round-2 counterfeit: Bob routes m2 through the (b, c) fraud
/// carrier with CNOT(b→m2) and Charlie decodes it as usual. Bob commits the
/// blank bit as his claim, which always satisfies the even-round XOR check.
/// Returns (bob_claim, charlie_bit).
std::pair<int, int> deliver_split_round(ProtocolSession& session, AttackState& attack, Rng& rng);

/// Alice and Charlie apply their honest toggles while Bob applies `choice` on
/// (b̃, b). Plain: H on both. U: H(−θa) on b̃, H(−θc) on b. V: H(θa)ᵀ on b̃,
/// H(θc)ᵀ on b. Inverse-direction steps use the inverses of these operators.
void maintain_carriers(ProtocolSession& session, AttackState& attack, MaintenanceChoice choice);

/// Bob's single-qubit maintenance gates for the kept qubit and for b.
std::pair<UnitaryMatrix, UnitaryMatrix> maintenance_gates(const ProtocolConfig& config,
                                                          MaintenanceChoice choice,
                                                          ToggleDirection direction);

struct DecodeForwardResult {
  int bob_learned_bit = 0;
  int bob_claim = 0;
  int charlie_bit = 0;
};

/// Bob intercepts both message qubits of an encoded round ≥ 3, disentangles
/// them with b̃, reads the bit, and forwards m2 to Charlie through the (b, c)
/// fraud carrier. The round is recorded in the session with Bob's claim.
DecodeForwardResult attack_decode_and_forward(ProtocolSession& session, AttackState& attack, Rng& rng);

/// Uses Alice's announced bit for `round_index` to fix the pattern hypothesis.
/// Announcements where both hypotheses predict the same bit leave it Unknown.
/// Throws std::out_of_range if Bob has no record of the round.
AttackState resolve_pattern(AttackState attack, int round_index, int alice_bit);

/// True when (a, b̃) and (b, c) are each a Bell state within `tolerance`.
bool fraud_carriers_intact(const ProtocolSession& session, double tolerance = 1e-10);

/// True when both pairs have a deterministic computational-basis parity
/// (within `tolerance`) and the two parities agree. This is what Bob's
/// disentangling and the routed counterfeit need, and it is weaker than
/// fraud_carriers_intact: (|00⟩ + e^{iφ}|11⟩)/√2 is decodable for any φ.
bool fraud_carriers_decodable(const ProtocolSession& session, double tolerance = 1e-10);

/// Pair fidelity product F(a b̃, kind_ab) · F(b c, kind_bc).
double pattern_fidelity(const StateVector& state, BellKind kind_ab, BellKind kind_bc);

}  // namespace qss
