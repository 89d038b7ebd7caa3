#pragma once

// Monte Carlo harness: independent seeded trials of the honest protocol or of
// the split attack, followed by a public-announcement check.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qss/adversary.hpp"
#include "qss/detection.hpp"
#include "qss/protocol.hpp"

namespace qss {

enum class AttackMode { None, Split };

std::string_view to_string(AttackMode m);

struct ExperimentSpec {
  ProtocolConfig protocol;
  AttackMode attack = AttackMode::None;
  MaintenancePolicy policy = MaintenancePolicy::RandomGuess;
  int trials = 1;
  int tolerance = 0;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  std::string output_path;
  std::string transcripts_path;

  /// Throws std::invalid_argument with a distinct message per violation.
  void validate() const;
};

struct TrialResult {
  std::uint64_t seed = 0;
  Transcript transcript;
  std::vector<Announcement> announcements;
  DetectionReport report;
  double mean_carrier_fidelity = 0.0;
  // Split attack only.
  bool split_executed = false;
  PatternHypothesis hypothesis = PatternHypothesis::Unknown;
  int bob_recovered = 0;
  int bob_recoverable = 0;
  int maintenance_steps = 0;
  int maintenance_survived = 0;
  /// Maintenance steps after which both pairs were still decodable.
  int maintenance_decodable = 0;
};

/// Seed for trial `index` of an experiment seeded with `base` (splitmix64).
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index);

/// One complete session: secret bits, rounds, announcement, verdict.
TrialResult run_trial(const ExperimentSpec& spec, std::uint64_t seed);

struct ExperimentReport {
  int trials = 0;
  int detected = 0;
  double detection_probability = 0.0;
  long announced = 0;
  long odd_announced = 0;
  long even_announced = 0;
  long odd_mismatches = 0;
  long even_mismatches = 0;
  double mismatch_rate = 0.0;
  double odd_error_rate = 0.0;
  double even_error_rate = 0.0;
  double mean_carrier_fidelity = 0.0;
  // Split attack only.
  int resolved_trials = 0;
  long bob_recovered = 0;
  long bob_recoverable = 0;
  double bob_recovery_rate = 0.0;
  long maintenance_steps = 0;
  long maintenance_survived = 0;
  double carrier_survival_rate = 0.0;
  long maintenance_total = 0;
  long maintenance_decodable = 0;
  double carrier_decodable_rate = 0.0;
  /// Mismatches in rounds 1–2, which precede any post-split interference.
  long early_mismatches = 0;
};

/// Sums trial outcomes in index order. Aggregation only adds counts, so the
/// result does not depend on which worker ran which trial.
ExperimentReport aggregate(std::span<const TrialResult> results);

/// Runs spec.trials trials on a worker pool. When `keep_trials` is set the
/// per-trial results are returned through it, ordered by trial index.
ExperimentReport run_experiment(const ExperimentSpec& spec, std::vector<TrialResult>* keep_trials = nullptr);

struct SweepPoint {
  ThetaTriple angles;
  ExperimentReport report;
};

/// run_experiment at each angle triple, θ variant, every other field from `base`.
std::vector<SweepPoint> run_sweep(const ExperimentSpec& base, std::span<const ThetaTriple> grid);

/// The triple (x, −2x, x): θa = θc = x, θb derived.
ThetaTriple symmetric_triple(double x);

}  // namespace qss
