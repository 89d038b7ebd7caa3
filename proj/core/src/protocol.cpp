#include "qss/protocol.hpp"

#include <cmath>

namespace qss {

std::string_view to_string(Variant v) { return v == Variant::Plain ? "plain" : "theta"; }

std::string_view to_string(AnnounceOrder o) {
  return o == AnnounceOrder::AliceFirst ? "alice-first" : "bob-last";
}

std::string_view to_string(Parity p) { return p == Parity::Odd ? "odd" : "even"; }

void ProtocolConfig::validate() const {
  if (num_rounds < 0) {
    throw std::invalid_argument("num_rounds must be non-negative");
  }
  if (!(announce_fraction > 0.0 && announce_fraction <= 1.0)) {
    throw std::invalid_argument("announce_fraction must lie in (0, 1]");
  }
  if (variant == Variant::Theta) {
    if (!angles) {
      throw std::invalid_argument("theta variant requires an angle triple");
    }
    angles->validate_hardened();
  }
}

UnitaryMatrix toggle_gate(Variant variant, double theta, ToggleDirection direction) {
  if (variant == Variant::Plain) return gates::hadamard();
  return direction == ToggleDirection::Forward ? gates::h_theta(theta) : gates::h_theta_inverse(theta);
}

StateVector encode_message(Parity parity, int q, const std::array<Label, 2>& labels) {
  if (q != 0 && q != 1) {
    throw std::invalid_argument("secret bit must be 0 or 1");
  }
  std::vector<Complex> amps(4);
  const int qbar = 1 - q;
  if (parity == Parity::Odd) {
    amps[static_cast<std::size_t>(3 * q)] = 1.0;  // |qq⟩
  } else {
    const double r = 1.0 / std::sqrt(2.0);
    amps[static_cast<std::size_t>(2 * q)] = r;         // |q0⟩
    amps[static_cast<std::size_t>(2 * qbar + 1)] = r;  // |q̄1⟩
  }
  return StateVector::from_amplitudes({labels[0], labels[1]}, std::move(amps));
}

ProtocolSession::ProtocolSession(ProtocolConfig config)
    : config_(std::move(config)),
      state_(make_carrier(CarrierKind::GHZ, {labels::kAlice, labels::kBob, labels::kCharlie})
                 .tensor(StateVector::zeros({labels::kToBob, labels::kToCharlie}))) {
  config_.validate();
}

void ProtocolSession::check_messages_reset() const {
  for (const auto& m : {labels::kToBob, labels::kToCharlie}) {
    if (state_.probability_one(m) > 1e-10) {
      throw std::logic_error("message qubit " + m + " is not reset to |0>");
    }
  }
}

void ProtocolSession::encode_round(int q) {
  if (q != 0 && q != 1) {
    throw std::invalid_argument("secret bit must be 0 or 1");
  }
  if (pending_q_) {
    throw std::logic_error("round " + std::to_string(round_index_) + " is already encoded");
  }
  check_messages_reset();

  const auto& m1 = labels::kToBob;
  const auto& m2 = labels::kToCharlie;
  const auto x = gates::pauli_x();
  const auto cx = gates::cnot();
  if (parity_of(round_index_) == Parity::Odd) {
    if (q) {
      state_.apply(x, {m1});
      state_.apply(x, {m2});
    }
    state_.apply(cx, {labels::kAlice, m1});
    state_.apply(cx, {labels::kAlice, m2});
  } else {
    state_.apply(gates::hadamard(), {m2});
    state_.apply(cx, {m2, m1});
    if (q) state_.apply(x, {m1});
    state_.apply(cx, {labels::kAlice, m1});
  }
  pending_q_ = q;
}

std::pair<int, int> ProtocolSession::deliver_and_decode(Rng& rng) {
  if (!pending_q_) {
    throw std::logic_error("no encoded round to deliver");
  }
  const auto cx = gates::cnot();
  state_.apply(cx, {labels::kBob, labels::kToBob});
  state_.apply(cx, {labels::kCharlie, labels::kToCharlie});
  const int bob = measure_and_reset(labels::kToBob, rng);
  const int charlie = measure_and_reset(labels::kToCharlie, rng);
  finish_round(bob, charlie);
  return {bob, charlie};
}

void ProtocolSession::finish_round(int bob_bit, int charlie_bit) {
  if (!pending_q_) {
    throw std::logic_error("no encoded round to finish");
  }
  records_.push_back(RoundRecord{round_index_, *pending_q_, bob_bit, charlie_bit,
                                 carrier_fidelity(carrier_kind_)});
  pending_q_.reset();
}

void ProtocolSession::toggle_alice_and_charlie() {
  if (pending_q_) {
    throw std::logic_error("cannot toggle the carrier while a round is in flight");
  }
  const auto dir = current_direction();
  const double ta = config_.angles ? config_.angles->a() : 0.0;
  const double tc = config_.angles ? config_.angles->c() : 0.0;
  state_.apply(toggle_gate(config_.variant, ta, dir), {labels::kAlice});
  state_.apply(toggle_gate(config_.variant, tc, dir), {labels::kCharlie});
}

void ProtocolSession::toggle_carrier() {
  toggle_alice_and_charlie();
  const double tb = config_.angles ? config_.angles->b() : 0.0;
  state_.apply(toggle_gate(config_.variant, tb, current_direction()), {labels::kBob});
  advance_round();
}

void ProtocolSession::advance_round() {
  if (pending_q_) {
    throw std::logic_error("cannot advance while a round is in flight");
  }
  carrier_kind_ = other(carrier_kind_);
  ++round_index_;
}

double ProtocolSession::carrier_fidelity(CarrierKind kind) const {
  const auto carrier = make_carrier(kind, {labels::kAlice, labels::kBob, labels::kCharlie});
  return reduced_density(state_, {labels::kAlice, labels::kBob, labels::kCharlie})
      .expectation(carrier.to_eigen());
}

void ProtocolSession::apply(const UnitaryMatrix& m, std::span<const Label> targets) {
  state_.apply(m, targets);
}

void ProtocolSession::apply(const UnitaryMatrix& m, std::initializer_list<Label> targets) {
  state_.apply(m, targets);
}

int ProtocolSession::measure(const Label& target, Rng& rng) { return state_.measure(target, rng); }

int ProtocolSession::measure_and_reset(const Label& target, Rng& rng) {
  const int bit = state_.measure(target, rng);
  if (bit) state_.apply(gates::pauli_x(), {target});
  return bit;
}

void ProtocolSession::relabel(const Label& from, Label to) { state_.relabel(from, std::move(to)); }

void ProtocolSession::append_qubit(Label label) { state_.append_qubit(std::move(label)); }

Transcript run_protocol(const ProtocolConfig& config, std::span<const int> secret_bits) {
  if (secret_bits.size() != static_cast<std::size_t>(config.num_rounds)) {
    throw std::invalid_argument("expected " + std::to_string(config.num_rounds) + " secret bits, got " +
                                std::to_string(secret_bits.size()));
  }
  ProtocolSession session(config);
  Rng rng(config.rng_seed);
  for (int q : secret_bits) {
    session.encode_round(q);
    session.deliver_and_decode(rng);
    session.toggle_carrier();
  }
  Transcript t;
  t.records = session.records();
  t.final_carrier_fidelity = session.carrier_fidelity(session.carrier_kind());
  return t;
}

}  // namespace qss
