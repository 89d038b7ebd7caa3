#include "qss/json_io.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace qss::json {

using nlohmann::ordered_json;

namespace {

ordered_json complex_pair(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json spec_json(const ExperimentSpec& spec) {
  ordered_json j;
  j["variant"] = to_string(spec.protocol.variant);
  if (spec.protocol.angles) {
    j["theta"] = {spec.protocol.angles->a(), spec.protocol.angles->b(), spec.protocol.angles->c()};
  }
  j["rounds"] = spec.protocol.num_rounds;
  j["seed"] = spec.protocol.rng_seed;
  j["announce_frac"] = spec.protocol.announce_fraction;
  j["order"] = to_string(spec.protocol.announce_order);
  j["attack"] = to_string(spec.attack);
  j["policy"] = to_string(spec.policy);
  j["trials"] = spec.trials;
  j["tolerance"] = spec.tolerance;
  return j;
}

ordered_json report_json(const ExperimentReport& r, AttackMode attack) {
  ordered_json j;
  j["trials"] = r.trials;
  j["detected"] = r.detected;
  j["detection_probability"] = r.detection_probability;
  j["announced"] = r.announced;
  j["odd_mismatches"] = r.odd_mismatches;
  j["even_mismatches"] = r.even_mismatches;
  j["mismatch_rate"] = r.mismatch_rate;
  j["odd_error_rate"] = r.odd_error_rate;
  j["even_error_rate"] = r.even_error_rate;
  j["mean_carrier_fidelity"] = r.mean_carrier_fidelity;
  if (attack == AttackMode::Split) {
    j["resolved_trials"] = r.resolved_trials;
    j["bob_recovery_rate"] = r.bob_recovery_rate;
    j["carrier_survival_rate"] = r.carrier_survival_rate;
    j["carrier_decodable_rate"] = r.carrier_decodable_rate;
    j["early_mismatches"] = r.early_mismatches;
  }
  return j;
}

}  // namespace

std::string dump_state(const StateVector& state) {
  ordered_json j;
  j["labels"] = state.labels();
  ordered_json amps = ordered_json::array();
  for (const auto& a : state.amplitudes()) amps.push_back(complex_pair(a));
  j["amps"] = std::move(amps);
  return j.dump();
}

StateVector load_state(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<Label> labels = j.at("labels").get<std::vector<Label>>();
  std::vector<Complex> amps;
  for (const auto& pair : j.at("amps")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw std::invalid_argument("each amplitude must be a [re, im] pair");
    }
    amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return StateVector::from_amplitudes(std::move(labels), std::move(amps));
}

std::string round_record_line(const RoundRecord& r) {
  ordered_json j;
  j["round"] = r.round_index;
  j["parity"] = to_string(r.parity());
  j["q"] = r.q;
  j["bob"] = r.bob_bit;
  j["charlie"] = r.charlie_bit;
  j["carrier_fidelity"] = r.carrier_fidelity_after;
  return j.dump();
}

std::string transcript_lines(const Transcript& transcript) {
  std::string out;
  for (const auto& r : transcript.records) {
    out += round_record_line(r);
    out += '\n';
  }
  return out;
}

std::string detection_report(const DetectionReport& report) {
  ordered_json j;
  j["announced"] = report.announced_count;
  j["odd_mismatches"] = report.odd_mismatches;
  j["even_mismatches"] = report.even_mismatches;
  j["rate"] = report.mismatch_rate;
  j["verdict"] = to_string(report.verdict);
  return j.dump();
}

std::string split_unitary(const SplitUnitary& su) {
  ordered_json rows = ordered_json::array();
  const Matrix& m = su.matrix.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_pair(m(r, c)));
    rows.push_back(std::move(row));
  }
  ordered_json j;
  j["matrix"] = std::move(rows);
  j["residuals"] = {su.residuals[0], su.residuals[1]};
  j["unitarity_defect"] = su.unitarity_defect;
  return j.dump();
}

std::string experiment_report(const ExperimentSpec& spec, const ExperimentReport& report) {
  ordered_json j;
  j["spec"] = spec_json(spec);
  j["report"] = report_json(report, spec.attack);
  return j.dump(2);
}

std::string sweep_json(const ExperimentSpec& base, std::span<const SweepPoint> points) {
  ordered_json j;
  j["spec"] = spec_json(base);
  j["spec"].erase("theta");
  j["spec"]["variant"] = to_string(Variant::Theta);
  ordered_json rows = ordered_json::array();
  for (const auto& p : points) {
    ordered_json row;
    row["theta"] = {p.angles.a(), p.angles.b(), p.angles.c()};
    row["detection_probability"] = p.report.detection_probability;
    row["mismatch_rate"] = p.report.mismatch_rate;
    row["odd_error_rate"] = p.report.odd_error_rate;
    row["even_error_rate"] = p.report.even_error_rate;
    row["carrier_survival_rate"] = p.report.carrier_survival_rate;
    row["carrier_decodable_rate"] = p.report.carrier_decodable_rate;
    rows.push_back(std::move(row));
  }
  j["points"] = std::move(rows);
  return j.dump(2);
}

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::ostringstream os;
  os << "theta_a,theta_b,theta_c,detection_probability,mismatch_rate,odd_error_rate,even_error_rate,"
        "carrier_survival_rate,carrier_decodable_rate\n";
  os << std::setprecision(17);
  for (const auto& p : points) {
    os << p.angles.a() << ',' << p.angles.b() << ',' << p.angles.c() << ',' << p.report.detection_probability << ','
       << p.report.mismatch_rate << ',' << p.report.odd_error_rate << ',' << p.report.even_error_rate << ','
       << p.report.carrier_survival_rate << ',' << p.report.carrier_decodable_rate << '\n';
  }
  return os.str();
}

std::string identity_suite(std::span<const IdentityCheck> checks) {
  ordered_json arr = ordered_json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    all = all && c.passed;
  }
  ordered_json j;
  j["passed"] = all;
  j["checks"] = std::move(arr);
  return j.dump(2);
}

}  // namespace qss::json
