#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qss/experiment.hpp"
#include "qss/identities.hpp"
#include "qss/json_io.hpp"

namespace qss::cli {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag values as given; unset fields fall back to the config file, then to
// built-in defaults.
struct RunOptions {
  std::optional<int> rounds;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::vector<double> theta;
  std::optional<std::string> attack;
  std::optional<std::string> policy;
  std::optional<double> announce_frac;
  std::optional<std::string> order;
  std::optional<int> trials;
  std::optional<int> tolerance;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::optional<std::string> transcripts;
  std::optional<std::string> config;
};

template <typename E>
E parse_enum(const std::string& what, const std::string& value, const std::map<std::string, E>& table) {
  const auto it = table.find(value);
  if (it == table.end()) {
    std::string expected;
    for (const auto& [k, _] : table) expected += (expected.empty() ? "" : "|") + k;
    throw ConfigError("unknown " + what + " '" + value + "' (expected " + expected + ")");
  }
  return it->second;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw IoError("failed writing '" + path + "'");
}

void merge_config_file(RunOptions& o) {
  if (!o.config) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(*o.config));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  static const std::vector<std::string> known{"rounds", "seed",   "variant",   "theta",       "attack",
                                              "policy", "announce_frac", "order", "trials", "tolerance",
                                              "threads", "out", "transcripts"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  try {
    auto take = [&](auto& field, const char* key) {
      using T = typename std::remove_reference_t<decltype(field)>::value_type;
      if (!field && j.contains(key)) field = j.at(key).get<T>();
    };
    take(o.rounds, "rounds");
    take(o.seed, "seed");
    take(o.variant, "variant");
    take(o.attack, "attack");
    take(o.policy, "policy");
    take(o.announce_frac, "announce_frac");
    take(o.order, "order");
    take(o.trials, "trials");
    take(o.tolerance, "tolerance");
    take(o.threads, "threads");
    take(o.out, "out");
    take(o.transcripts, "transcripts");
    if (o.theta.empty() && j.contains("theta")) o.theta = j.at("theta").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file has a field of the wrong type: " + std::string(e.what()));
  }
}

ThetaTriple theta_from_values(const std::vector<double>& v) {
  if (v.size() == 2) return ThetaTriple::from_pair(v[0], v[1]);
  if (v.size() == 3) return ThetaTriple::make(v[0], v[1], v[2], 1e-9);
  throw ConfigError("--theta takes two angles (theta_c derived) or three");
}

ExperimentSpec build_spec(RunOptions o) {
  merge_config_file(o);
  ExperimentSpec spec;
  auto& p = spec.protocol;
  p.num_rounds = o.rounds.value_or(100);
  p.rng_seed = o.seed.value_or(1);
  p.variant = parse_enum<Variant>("variant", o.variant.value_or("plain"),
                                  {{"plain", Variant::Plain}, {"theta", Variant::Theta}});
  p.announce_fraction = o.announce_frac.value_or(0.2);
  p.announce_order = parse_enum<AnnounceOrder>(
      "order", o.order.value_or("bob-last"),
      {{"alice-first", AnnounceOrder::AliceFirst}, {"bob-last", AnnounceOrder::BobLast}});
  spec.attack = parse_enum<AttackMode>("attack", o.attack.value_or("none"),
                                       {{"none", AttackMode::None}, {"split", AttackMode::Split}});
  spec.policy = parse_enum<MaintenancePolicy>("policy", o.policy.value_or("random"),
                                              {{"u", MaintenancePolicy::KnownThetaU},
                                               {"v", MaintenancePolicy::KnownThetaV},
                                               {"random", MaintenancePolicy::RandomGuess},
                                               {"plain", MaintenancePolicy::PlainHadamard}});
  spec.trials = o.trials.value_or(1);
  spec.tolerance = o.tolerance.value_or(0);
  spec.threads = o.threads.value_or(0);
  spec.output_path = o.out.value_or("");
  spec.transcripts_path = o.transcripts.value_or("");
  if (!o.theta.empty()) {
    try {
      p.angles = theta_from_values(o.theta);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

void add_run_flags(CLI::App& cmd, RunOptions& o) {
  cmd.add_option("--rounds", o.rounds, "rounds per session (default 100)");
  cmd.add_option("--seed", o.seed, "base RNG seed (default 1)");
  cmd.add_option("--variant", o.variant, "plain|theta (default plain)");
  cmd.add_option("--theta", o.theta, "theta_a theta_b [theta_c]; theta_c = -a-b mod 2pi when omitted")
      ->expected(2, 3);
  cmd.add_option("--attack", o.attack, "none|split (default none)");
  cmd.add_option("--policy", o.policy, "u|v|random|plain maintenance policy (default random)");
  cmd.add_option("--announce-frac", o.announce_frac, "fraction of rounds announced (default 0.2)");
  cmd.add_option("--order", o.order, "alice-first|bob-last (default bob-last)");
  cmd.add_option("--trials", o.trials, "independent sessions (default 1)");
  cmd.add_option("--tolerance", o.tolerance, "mismatches tolerated before a cheating verdict (default 0)");
  cmd.add_option("--threads", o.threads, "worker threads (default: hardware concurrency)");
  cmd.add_option("--out", o.out, "write the JSON report here instead of standard output");
  cmd.add_option("--config", o.config, "JSON file mirroring these flags; flags take precedence");
}

void print_summary(std::ostream& os, const ExperimentSpec& spec, const ExperimentReport& r) {
  os << std::fixed << std::setprecision(4);
  os << "variant=" << to_string(spec.protocol.variant) << " attack=" << to_string(spec.attack)
     << " trials=" << r.trials << " rounds=" << spec.protocol.num_rounds << '\n';
  os << "  detection probability  " << r.detection_probability << " (" << r.detected << '/' << r.trials << ")\n";
  os << "  mismatch rate          " << r.mismatch_rate << " over " << r.announced << " announced bits\n";
  os << "  odd / even error rate  " << r.odd_error_rate << " / " << r.even_error_rate << '\n';
  os << "  mean carrier fidelity  " << r.mean_carrier_fidelity << '\n';
  if (spec.attack == AttackMode::Split) {
    os << "  bob recovery rate      " << r.bob_recovery_rate << " (" << r.resolved_trials << " trials resolved)\n";
    os << "  carrier survival rate  " << r.carrier_survival_rate << '\n';
    os << "  carrier decodable rate " << r.carrier_decodable_rate << '\n';
  }
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  const ExperimentSpec spec = build_spec(opts);
  std::vector<TrialResult> trials;
  const ExperimentReport report = run_experiment(spec, spec.transcripts_path.empty() ? nullptr : &trials);
  const std::string json = json::experiment_report(spec, report) + "\n";
  if (!spec.transcripts_path.empty()) {
    std::string lines;
    for (const auto& t : trials) lines += json::transcript_lines(t.transcript);
    write_file(spec.transcripts_path, lines);
  }
  if (spec.output_path.empty()) {
    out << json;
    print_summary(err, spec, report);
  } else {
    write_file(spec.output_path, json);
    print_summary(out, spec, report);
  }
  return kSuccess;
}

int cmd_verify(const std::vector<double>& theta, bool as_json, std::ostream& out) {
  double ta = 0.7, tb = 1.1, tc = 2.0 * std::numbers::pi - 1.8;
  if (theta.size() == 2) {
    ta = theta[0];
    tb = theta[1];
    tc = -ta - tb;
  } else if (theta.size() == 3) {
    ta = theta[0];
    tb = theta[1];
    tc = theta[2];
  } else if (!theta.empty()) {
    throw ConfigError("--theta takes two angles (theta_c derived) or three");
  }
  const auto checks = run_identity_suite(ta, tb, tc);
  const bool all = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  if (as_json) {
    out << json::identity_suite(checks) << '\n';
  } else {
    out << "identity suite at theta = (" << ta << ", " << tb << ", " << tc << ")\n";
    for (const auto& c : checks) out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
    out << (all ? "all identities hold\n" : "some identities FAILED\n");
  }
  return all ? kSuccess : kIdentityFailure;
}

int cmd_synthesize(const std::string& blank, const std::string& path, std::ostream& out) {
  Vector s = Vector::Zero(2);
  if (blank == "0") {
    s(0) = 1.0;
  } else if (blank == "1") {
    s(1) = 1.0;
  } else if (blank == "+") {
    s(0) = s(1) = 1.0 / std::sqrt(2.0);
  } else {
    throw ConfigError("unknown blank state '" + blank + "' (expected 0|1|+)");
  }
  const std::string json = json::split_unitary(synthesize_split_unitary(s)) + "\n";
  if (path.empty()) {
    out << json;
  } else {
    write_file(path, json);
    out << "wrote split unitary to " << path << '\n';
  }
  return kSuccess;
}

int cmd_sweep(RunOptions opts, const std::vector<double>& symmetric, const std::vector<std::string>& points,
              const std::string& format, std::ostream& out) {
  if (format != "csv" && format != "json") throw ConfigError("unknown format '" + format + "' (expected csv|json)");
  std::vector<ThetaTriple> grid;
  for (double x : symmetric) grid.push_back(symmetric_triple(x));
  for (const auto& p : points) {
    const auto colon = p.find(':');
    if (colon == std::string::npos) throw ConfigError("grid point '" + p + "' must be theta_a:theta_b");
    try {
      grid.push_back(ThetaTriple::from_pair(std::stod(p.substr(0, colon)), std::stod(p.substr(colon + 1))));
    } catch (const std::logic_error&) {
      throw ConfigError("grid point '" + p + "' is not numeric");
    }
  }
  if (grid.empty()) {
    for (double x : {0.01, 0.1, 0.5, 1.0, 2.0 * std::numbers::pi / 3.0}) grid.push_back(symmetric_triple(x));
  }
  if (!opts.attack) opts.attack = "split";
  if (!opts.trials) opts.trials = 200;
  if (!opts.variant) opts.variant = "theta";
  if (opts.theta.empty()) opts.theta = {grid.front().a(), grid.front().b(), grid.front().c()};
  const std::string path = opts.out.value_or("");
  ExperimentSpec base = build_spec(opts);
  for (const auto& t : grid) {
    try {
      t.validate_hardened();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  const auto results = run_sweep(base, grid);
  const std::string text = format == "csv" ? json::sweep_csv(results) : json::sweep_json(base, results) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
    out << "wrote " << results.size() << " grid points to " << path << '\n';
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reusable-carrier quantum secret sharing: protocol, split attack, detection"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "run Monte Carlo trials and write an aggregate report");
  add_run_flags(*run_cmd, run_opts);
  run_cmd->add_option("--transcripts", run_opts.transcripts, "write per-round JSON lines for every trial here");

  std::vector<double> verify_theta;
  bool verify_json = false;
  auto* verify_cmd = app.add_subcommand("verify", "check the protocol and attack identities numerically");
  verify_cmd->add_option("--theta", verify_theta, "theta_a theta_b [theta_c], used as given")->expected(2, 3);
  verify_cmd->add_flag("--json", verify_json, "print the results as JSON");

  std::string blank = "0";
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synthesize", "synthesize the entanglement-splitting unitary");
  synth_cmd->add_option("--blank", blank, "counterfeit blank state 0|1|+ (default 0)");
  synth_cmd->add_option("--out", synth_out, "write the JSON here instead of standard output");

  RunOptions sweep_opts;
  std::vector<double> symmetric;
  std::vector<std::string> points;
  std::string format = "csv";
  auto* sweep_cmd = app.add_subcommand("sweep", "detection probability across an angle grid");
  add_run_flags(*sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--symmetric", symmetric, "grid points (x, -2x, x)");
  sweep_cmd->add_option("--point", points, "grid point theta_a:theta_b, theta_c derived");
  sweep_cmd->add_option("--format", format, "csv|json (default csv)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run_opts, out, err);
    if (*verify_cmd) return cmd_verify(verify_theta, verify_json, out);
    if (*synth_cmd) return cmd_synthesize(blank, synth_out, out);
    if (*sweep_cmd) return cmd_sweep(sweep_opts, symmetric, points, format, out);
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  }
  return kInvalidConfig;
}

}  // namespace qss::cli
