#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qss/gates.hpp"
#include "qss/qcore.hpp"

namespace qss {

enum class Variant { Plain, Theta };
enum class AnnounceOrder { AliceFirst, BobLast };
enum class Parity { Odd, Even };

std::string_view to_string(Variant v);
std::string_view to_string(AnnounceOrder o);
std::string_view to_string(Parity p);

constexpr Parity parity_of(int round_index) { return round_index % 2 == 1 ? Parity::Odd : Parity::Even; }

/// Register labels shared by every session.
namespace labels {
inline const Label kAlice = "a";
inline const Label kBob = "b";
inline const Label kCharlie = "c";
inline const Label kToBob = "m1";
inline const Label kToCharlie = "m2";
/// Bob's retained copy of m1 after an entanglement split.
inline const Label kBobKept = "bt";
}  // namespace labels

struct ProtocolConfig {
  Variant variant = Variant::Plain;
  std::optional<ThetaTriple> angles;
  int num_rounds = 10;
  std::uint64_t rng_seed = 1;
  double announce_fraction = 0.2;
  AnnounceOrder announce_order = AnnounceOrder::BobLast;

  /// Throws std::invalid_argument with a distinct message per violation.
  void validate() const;
};

struct RoundRecord {
  int round_index = 0;
  int q = 0;
  int bob_bit = 0;
  int charlie_bit = 0;
  /// Fidelity of (a, b, c) with the pre-encoding carrier after delivery.
  double carrier_fidelity_after = 0.0;

  Parity parity() const { return parity_of(round_index); }
};

struct Transcript {
  std::vector<RoundRecord> records;
  /// Fidelity of (a, b, c) with the expected carrier after the last toggle.
  double final_carrier_fidelity = 1.0;
};

/// Toggle direction in the θ variant: forward after odd rounds (GHZ → E),
/// inverse after even rounds (E → GHZ). The plain variant is self-inverse.
enum class ToggleDirection { Forward, Inverse };

constexpr ToggleDirection toggle_direction_after(int round_index) {
  return parity_of(round_index) == Parity::Odd ? ToggleDirection::Forward : ToggleDirection::Inverse;
}

/// The single-qubit operator a party with angle `theta` applies at a toggle.
UnitaryMatrix toggle_gate(Variant variant, double theta, ToggleDirection direction);

/// Message-qubit preparation for one round, before entangling with the carrier.
/// Odd: |qq⟩. Even: (|q0⟩ + |q̄1⟩)/√2.
StateVector encode_message(Parity parity, int q, const std::array<Label, 2>& labels);

/// One run of the three-party protocol over the register {a, b, c, m1, m2}.
///
/// A round is encode_round → deliver_and_decode → toggle_carrier. The
/// session also exposes the register primitives the adversary needs to act
/// on intercepted qubits.
class ProtocolSession {
 public:
  explicit ProtocolSession(ProtocolConfig config);

  const ProtocolConfig& config() const { return config_; }
  const StateVector& state() const { return state_; }
  CarrierKind carrier_kind() const { return carrier_kind_; }
  int round_index() const { return round_index_; }
  const std::vector<RoundRecord>& records() const { return records_; }
  bool has_pending_round() const { return pending_q_.has_value(); }
  std::optional<int> pending_q() const { return pending_q_; }

  /// Alice prepares the message for q on (m1, m2) and entangles it with her
  /// carrier qubit: CNOT(a→m1) and CNOT(a→m2) on odd rounds, CNOT(a→m1) only
  /// on even rounds.
  void encode_round(int q);

  /// Bob applies CNOT(b→m1), Charlie CNOT(c→m2); both measure. Odd rounds
  /// yield bob = charlie = q, even rounds bob ⊕ charlie = q. Message qubits
  /// are reset to |00⟩ and the round is recorded.
  std::pair<int, int> deliver_and_decode(Rng& rng);

  /// All three parties apply their toggle gates (H⊗3, or the θ triple in the
  /// direction fixed by the round just finished). Advances round_index.
  void toggle_carrier();

  /// Alice's and Charlie's halves of a toggle only. Bob's half is left to the
  /// caller; used when Bob is maintaining split carriers instead.
  void toggle_alice_and_charlie();

  /// Toggle direction for the round just finished.
  ToggleDirection current_direction() const { return toggle_direction_after(round_index_); }

  /// Fidelity of the reduced (a, b, c) state with the named carrier.
  double carrier_fidelity(CarrierKind kind) const;

  // Register primitives used by the adversary. Each one documents a physical
  // action of some party on qubits it holds.
  void apply(const UnitaryMatrix& m, std::span<const Label> targets);
  void apply(const UnitaryMatrix& m, std::initializer_list<Label> targets);
  int measure(const Label& target, Rng& rng);
  /// Measures then flips back to |0⟩; returns the outcome.
  int measure_and_reset(const Label& target, Rng& rng);
  void relabel(const Label& from, Label to);
  void append_qubit(Label label);

  /// Records a round whose delivery was carried out by the caller.
  void finish_round(int bob_bit, int charlie_bit);

  /// Marks the carrier as toggled and advances the round without touching
  /// the register. Pairs with toggle_alice_and_charlie.
  void advance_round();

 private:
  void check_messages_reset() const;

  ProtocolConfig config_;
  StateVector state_;
  CarrierKind carrier_kind_ = CarrierKind::GHZ;
  int round_index_ = 1;
  std::optional<int> pending_q_;
  std::vector<RoundRecord> records_;
};

/// Runs `secret_bits.size()` honest rounds; the size must equal
/// config.num_rounds. Measurement randomness comes from config.rng_seed.
Transcript run_protocol(const ProtocolConfig& config, std::span<const int> secret_bits);

}  // namespace qss
