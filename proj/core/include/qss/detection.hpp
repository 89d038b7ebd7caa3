#pragma once

#include <span>
#include <vector>

#include "qss/protocol.hpp"

namespace qss {

struct Announcement {
  int round_index = 0;
  int alice_bit = 0;
  int bob_claim = 0;
  int charlie_claim = 0;
};

enum class Verdict { Clean, CheatingDetected };

std::string_view to_string(Verdict v);

struct DetectionReport {
  int announced_count = 0;
  int odd_announced = 0;
  int even_announced = 0;
  int odd_mismatches = 0;
  int even_mismatches = 0;
  double mismatch_rate = 0.0;
  Verdict verdict = Verdict::Clean;
  /// Rounds that failed the check, ascending.
  std::vector<int> mismatched_rounds;

  int total_mismatches() const { return odd_mismatches + even_mismatches; }
};

/// ⌈fraction · num_rounds⌉ distinct round indices in [1, num_rounds], drawn
/// uniformly without replacement and returned in ascending order.
std::vector<int> select_rounds(double fraction, int num_rounds, Rng& rng);

/// Announcements in which every party reports its recorded bit.
std::vector<Announcement> honest_announcements(const Transcript& transcript, std::span<const int> rounds);

/// Odd rounds fail when either claim differs from Alice's bit; even rounds
/// fail when the XOR of the claims differs. CheatingDetected iff the total
/// exceeds `tolerance`. Throws std::out_of_range on a dangling round index.
DetectionReport evaluate(const Transcript& transcript, std::span<const Announcement> announcements,
                         int tolerance = 0);

}  // namespace qss
