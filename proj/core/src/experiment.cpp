#include "qss/experiment.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace qss {

std::string_view to_string(AttackMode m) { return m == AttackMode::None ? "none" : "split"; }

void ExperimentSpec::validate() const {
  protocol.validate();
  if (trials < 1) {
    throw std::invalid_argument("trials must be at least 1");
  }
  if (tolerance < 0) {
    throw std::invalid_argument("detection tolerance must be non-negative");
  }
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

const SplitUnitary& default_split_unitary() {
  static const SplitUnitary su = synthesize_split_unitary();
  return su;
}

}  // namespace

TrialResult run_trial(const ExperimentSpec& spec, std::uint64_t seed) {
  ProtocolConfig config = spec.protocol;
  config.rng_seed = seed;
  ProtocolSession session(config);
  Rng rng(seed);

  const int n = config.num_rounds;
  std::vector<int> secret(static_cast<std::size_t>(n));
  for (auto& q : secret) q = random_bit(rng);

  TrialResult out;
  out.seed = seed;
  std::optional<AttackState> attack;

  for (int r = 1; r <= n; ++r) {
    session.encode_round(secret[static_cast<std::size_t>(r - 1)]);
    if (spec.attack == AttackMode::Split && r == 2) {
      attack = execute_split(session, default_split_unitary(), spec.policy);
      deliver_split_round(session, *attack, rng);
    } else if (attack) {
      attack_decode_and_forward(session, *attack, rng);
    } else {
      session.deliver_and_decode(rng);
    }

    if (attack) {
      const bool before = fraud_carriers_intact(session);
      const MaintenanceChoice choice = attack->choose(r, rng);
      maintain_carriers(session, *attack, choice);
      if (before) {
        ++out.maintenance_steps;
        if (fraud_carriers_intact(session)) ++out.maintenance_survived;
      }
      if (fraud_carriers_decodable(session)) ++out.maintenance_decodable;
    } else {
      session.toggle_carrier();
    }
  }

  out.transcript.records = session.records();
  out.transcript.final_carrier_fidelity = session.carrier_fidelity(session.carrier_kind());
  out.split_executed = attack.has_value();

  if (n > 0) {
    const std::vector<int> rounds = select_rounds(config.announce_fraction, n, rng);
    out.announcements = honest_announcements(out.transcript, rounds);
    if (attack && config.announce_order == AnnounceOrder::BobLast) {
      // Bob speaks after Alice and Charlie and repeats whatever passes.
      for (auto& a : out.announcements) {
        if (a.round_index < 2) continue;
        a.bob_claim = parity_of(a.round_index) == Parity::Odd ? a.alice_bit : a.alice_bit ^ a.charlie_claim;
      }
    }
    if (attack) {
      for (const auto& a : out.announcements) {
        if (a.round_index >= 2) *attack = resolve_pattern(std::move(*attack), a.round_index, a.alice_bit);
      }
    }
  }
  out.report = evaluate(out.transcript, out.announcements, spec.tolerance);

  double fsum = 0.0;
  for (const auto& rec : out.transcript.records) fsum += rec.carrier_fidelity_after;
  out.mean_carrier_fidelity = n > 0 ? fsum / n : out.transcript.final_carrier_fidelity;

  if (attack) {
    out.hypothesis = attack->hypothesis();
    if (out.hypothesis != PatternHypothesis::Unknown) {
      for (const auto& rec : out.transcript.records) {
        const int learned = rec.round_index == 1 ? rec.bob_bit : attack->learned_bit(rec.round_index);
        ++out.bob_recoverable;
        if (learned == rec.q) ++out.bob_recovered;
      }
    }
  }
  return out;
}

ExperimentReport aggregate(std::span<const TrialResult> results) {
  ExperimentReport rep;
  double fsum = 0.0;
  for (const auto& t : results) {
    ++rep.trials;
    if (t.report.verdict == Verdict::CheatingDetected) ++rep.detected;
    rep.announced += t.report.announced_count;
    rep.odd_announced += t.report.odd_announced;
    rep.even_announced += t.report.even_announced;
    rep.odd_mismatches += t.report.odd_mismatches;
    rep.even_mismatches += t.report.even_mismatches;
    for (int r : t.report.mismatched_rounds) {
      if (r <= 2) ++rep.early_mismatches;
    }
    fsum += t.mean_carrier_fidelity;
    if (t.split_executed && t.hypothesis != PatternHypothesis::Unknown) ++rep.resolved_trials;
    rep.bob_recovered += t.bob_recovered;
    rep.bob_recoverable += t.bob_recoverable;
    rep.maintenance_steps += t.maintenance_steps;
    rep.maintenance_survived += t.maintenance_survived;
    if (t.split_executed) rep.maintenance_total += std::max(0, static_cast<int>(t.transcript.records.size()) - 1);
    rep.maintenance_decodable += t.maintenance_decodable;
  }
  auto ratio = [](double num, double den) { return den > 0 ? num / den : 0.0; };
  rep.detection_probability = ratio(rep.detected, rep.trials);
  rep.mismatch_rate = ratio(static_cast<double>(rep.odd_mismatches + rep.even_mismatches),
                            static_cast<double>(rep.announced));
  rep.odd_error_rate = ratio(static_cast<double>(rep.odd_mismatches), static_cast<double>(rep.odd_announced));
  rep.even_error_rate = ratio(static_cast<double>(rep.even_mismatches), static_cast<double>(rep.even_announced));
  rep.mean_carrier_fidelity = ratio(fsum, rep.trials);
  rep.bob_recovery_rate = ratio(static_cast<double>(rep.bob_recovered), static_cast<double>(rep.bob_recoverable));
  rep.carrier_survival_rate =
      ratio(static_cast<double>(rep.maintenance_survived), static_cast<double>(rep.maintenance_steps));
  rep.carrier_decodable_rate =
      ratio(static_cast<double>(rep.maintenance_decodable), static_cast<double>(rep.maintenance_total));
  return rep;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, std::vector<TrialResult>* keep_trials) {
  spec.validate();
  // Build the shared split matrix before the workers start.
  if (spec.attack == AttackMode::Split) default_split_unitary();

  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<TrialResult> results(trials);
  unsigned workers = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      try {
        results[i] = run_trial(spec, trial_seed(spec.protocol.rng_seed, i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentReport rep = aggregate(results);
  if (keep_trials) *keep_trials = std::move(results);
  return rep;
}

std::vector<SweepPoint> run_sweep(const ExperimentSpec& base, std::span<const ThetaTriple> grid) {
  std::vector<SweepPoint> out;
  out.reserve(grid.size());
  for (const auto& angles : grid) {
    ExperimentSpec spec = base;
    spec.protocol.variant = Variant::Theta;
    spec.protocol.angles = angles;
    out.push_back({angles, run_experiment(spec)});
  }
  return out;
}

ThetaTriple symmetric_triple(double x) { return ThetaTriple::from_pair(x, -2.0 * x); }

}  // namespace qss
