#pragma once

// Wire formats. Everything is exchanged as JSON text so the installed headers
// carry no JSON-library dependency.

#include <string>
#include <string_view>

#include "qss/adversary.hpp"
#include "qss/detection.hpp"
#include "qss/experiment.hpp"
#include "qss/identities.hpp"

namespace qss::json {

/// {"labels": [...], "amps": [[re, im], ...]} in index order.
std::string dump_state(const StateVector& state);
StateVector load_state(std::string_view text);

/// {"round": i, "parity": "odd|even", "q": b, "bob": b, "charlie": b, "carrier_fidelity": x}
std::string round_record_line(const RoundRecord& record);
/// One round_record_line per record, each terminated by '\n'.
std::string transcript_lines(const Transcript& transcript);

/// {"announced": n, "odd_mismatches": x, "even_mismatches": y, "rate": r, "verdict": "clean|cheating_detected"}
std::string detection_report(const DetectionReport& report);

/// {"matrix": [[[re, im], ...], ...], "residuals": [r0, r1], "unitarity_defect": d}
std::string split_unitary(const SplitUnitary& su);

/// Aggregate report of a `run` invocation, including the spec that produced it.
std::string experiment_report(const ExperimentSpec& spec, const ExperimentReport& report);

std::string sweep_json(const ExperimentSpec& base, std::span<const SweepPoint> points);
std::string sweep_csv(std::span<const SweepPoint> points);

std::string identity_suite(std::span<const IdentityCheck> checks);

}  // namespace qss::json
