#include "qss/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qss {

std::string_view to_string(Verdict v) { return v == Verdict::Clean ? "clean" : "cheating_detected"; }

std::vector<int> select_rounds(double fraction, int num_rounds, Rng& rng) {
  if (num_rounds <= 0) {
    throw std::invalid_argument("cannot select announced rounds from an empty transcript");
  }
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("announce_fraction must lie in (0, 1]");
  }
  // Guard against 0.2 * 10 landing a hair above 2.
  const auto count = static_cast<std::size_t>(std::ceil(fraction * num_rounds - 1e-9));
  std::vector<int> pool(static_cast<std::size_t>(num_rounds));
  std::iota(pool.begin(), pool.end(), 1);
  // Partial Fisher–Yates with our own bounded draws (portable across stdlibs).
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t span = pool.size() - i;
    const std::size_t j = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(span));
    std::swap(pool[i], pool[std::min(j, pool.size() - 1)]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

namespace {

const RoundRecord& find_record(const Transcript& transcript, int round_index) {
  const auto it = std::find_if(transcript.records.begin(), transcript.records.end(),
                               [&](const RoundRecord& r) { return r.round_index == round_index; });
  if (it == transcript.records.end()) {
    throw std::out_of_range("announcement references round " + std::to_string(round_index) +
                            " which is not in the transcript");
  }
  return *it;
}

}  // namespace

std::vector<Announcement> honest_announcements(const Transcript& transcript, std::span<const int> rounds) {
  std::vector<Announcement> out;
  out.reserve(rounds.size());
  for (int r : rounds) {
    const RoundRecord& rec = find_record(transcript, r);
    out.push_back({r, rec.q, rec.bob_bit, rec.charlie_bit});
  }
  return out;
}

DetectionReport evaluate(const Transcript& transcript, std::span<const Announcement> announcements,
                         int tolerance) {
  DetectionReport report;
  for (const auto& a : announcements) {
    const RoundRecord& rec = find_record(transcript, a.round_index);
    ++report.announced_count;
    if (rec.parity() == Parity::Odd) {
      ++report.odd_announced;
      if (a.bob_claim != a.alice_bit || a.charlie_claim != a.alice_bit) {
        ++report.odd_mismatches;
        report.mismatched_rounds.push_back(a.round_index);
      }
    } else {
      ++report.even_announced;
      if ((a.bob_claim ^ a.charlie_claim) != a.alice_bit) {
        ++report.even_mismatches;
        report.mismatched_rounds.push_back(a.round_index);
      }
    }
  }
  std::sort(report.mismatched_rounds.begin(), report.mismatched_rounds.end());
  report.mismatch_rate =
      report.announced_count ? static_cast<double>(report.total_mismatches()) / report.announced_count : 0.0;
  report.verdict = report.total_mismatches() > tolerance ? Verdict::CheatingDetected : Verdict::Clean;
  return report;
}

}  // namespace qss
