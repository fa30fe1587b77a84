// Copyright 2026 The ghzlocc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ghzlocc/analysis.hpp"
#include "json.hpp"

namespace ghzlocc::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

std::string fmt_distance(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.3e", value);
  return buffer;
}

ProtocolOptions fault_options(const std::string& inject) {
  ProtocolOptions options;
  if (inject == "skip-bob-x") options.skip_bob_x = true;
  if (inject == "skip-charlie-x") options.skip_charlie_x = true;
  if (inject == "skip-alice-z") options.skip_alice_z = true;
  return options;
}

struct TrialInputs {
  DiagonalBlockOp u;
  DiagonalBlockOp v;
  StateVector initial;
  std::uint64_t u_seed;
  std::uint64_t v_seed;
  std::uint64_t state_seed;
};

// The same per-trial seed derivation as resource_comparison, so a trial
// that fails one command can be replayed by the others.
TrialInputs make_trial(const RunConfig& config, int trial) {
  const std::uint64_t u_seed = derive_seed(config.seed, 3 * trial);
  const std::uint64_t v_seed = derive_seed(config.seed, 3 * trial + 1);
  const std::uint64_t state_seed = derive_seed(config.seed, 3 * trial + 2);
  Rng state_rng(state_seed);
  return {haar_random_blocks(config.block_qubits_u, u_seed),
          haar_random_blocks(config.block_qubits_v, v_seed),
          random_state(1 + config.block_qubits_u + config.block_qubits_v,
                       state_rng),
          u_seed,
          v_seed,
          state_seed};
}

ProtocolReport run_protocol(const RunConfig& config, const TrialInputs& in,
                            RunMode mode, const ProtocolOptions& options) {
  const std::uint64_t protocol_seed = derive_seed(in.state_seed, 1);
  if (config.protocol == "two-bell") {
    return two_bell_baseline(in.u, in.v, in.initial, mode, protocol_seed,
                             options);
  }
  return ghz_protocol(in.u, in.v, in.initial, mode, protocol_seed, options);
}

struct SweepResult {
  int schedules_checked = 0;
  double max_deviation = 0.0;
};

// Reruns the trial under both serial orders and 10 sampled interleavings of
// the Bob/Charlie segments and measures how far any branch drifts from the
// canonical run. Exactness demands zero drift.
SweepResult sweep_trial(const TrialInputs& in, const ProtocolReport& base,
                        RunMode mode, const ProtocolOptions& fault,
                        std::uint64_t sweep_seed) {
  const std::vector<Schedule> schedules =
      bob_charlie_interleavings(6, 6, 10, sweep_seed);
  SweepResult result{static_cast<int>(schedules.size()), 0.0};
  for (const Schedule& schedule : schedules) {
    ProtocolOptions options = fault;
    options.middle_schedule = schedule;
    if (mode == RunMode::Sampled) {
      // Replay the branch the canonical run landed on.
      std::vector<int> force;
      for (const auto& [tag, bit] : base.branches.front().outcomes) {
        force.push_back(bit);
      }
      options.force = std::move(force);
    }
    const ProtocolReport rerun =
        ghz_protocol(in.u, in.v, in.initial, mode, 0, options);
    for (std::size_t k = 0; k < base.branches.size(); ++k) {
      const StateDistance d = state_distance(base.branches[k].final_state,
                                             rerun.branches[k].final_state);
      result.max_deviation = std::max(result.max_deviation, d.exact_distance);
    }
  }
  return result;
}

const OutcomeBranch& branch_by_label(const ProtocolReport& report,
                                     const std::string& label) {
  for (const OutcomeBranch& branch : report.branches) {
    if (branch.label() == label) return branch;
  }
  return report.branches.front();
}

ordered_json config_json(const RunConfig& config) {
  ordered_json doc;
  doc["command"] = config.command;
  doc["protocol"] = config.protocol;
  doc["dims"] = ordered_json::array(
      {config.block_qubits_u, config.block_qubits_v});
  doc["trials"] = config.trials;
  doc["seed"] = config.seed;
  doc["mode"] = config.mode;
  doc["format"] = config.format;
  doc["schedule_sweep"] = config.schedule_sweep;
  doc["inject_fault"] = config.inject_fault;
  return doc;
}

ordered_json tally_json(const ResourceTally& tally) {
  ordered_json doc;
  doc["ghz_consumed"] = tally.ghz_consumed;
  doc["bell_consumed"] = tally.bell_consumed;
  doc["cbits"] = tally.cbits;
  doc["raw_directed_messages"] = tally.raw_directed_messages;
  return doc;
}

ordered_json transcript_json(const std::vector<TranscriptEvent>& events) {
  ordered_json lines = ordered_json::array();
  for (const TranscriptEvent& event : events) {
    lines.push_back(format_event(event));
  }
  return lines;
}

std::string tally_text(const ResourceTally& tally) {
  return "tally: ghz=" + std::to_string(tally.ghz_consumed) +
         " bell=" + std::to_string(tally.bell_consumed) +
         " cbits=" + std::to_string(tally.cbits) +
         " raw=" + std::to_string(tally.raw_directed_messages);
}

void emit(const RunConfig& config, const ordered_json& machine_doc,
          const std::string& text, std::ostream& out) {
  if (config.format == "machine") {
    out << machine_doc.dump(2) << '\n';
  } else {
    out << text;
  }
}

int run_verify(const RunConfig& config, std::ostream& out) {
  const double tolerance = kVerificationTol;
  const ProtocolOptions fault = fault_options(config.inject_fault);
  const RunMode mode =
      config.mode == "sampled" ? RunMode::Sampled : RunMode::Enumerate;

  ordered_json doc;
  doc["config"] = config_json(config);
  doc["tolerance"] = tolerance;
  ordered_json trial_rows = ordered_json::array();

  std::string text = "verify protocol=" + config.protocol + " dims=" +
                     std::to_string(config.block_qubits_u) + "," +
                     std::to_string(config.block_qubits_v) +
                     " trials=" + std::to_string(config.trials) +
                     " seed=" + std::to_string(config.seed) +
                     " mode=" + config.mode +
                     " sweep=" + (config.schedule_sweep ? "on" : "off") +
                     " fault=" + config.inject_fault + "\n";

  double overall_max = 0.0;
  ResourceTally tally{};
  bool all_pass = true;
  std::optional<ordered_json> failure;
  std::string failure_text;

  for (int trial = 0; trial < config.trials && all_pass; ++trial) {
    const TrialInputs in = make_trial(config, trial);
    const ProtocolReport report = run_protocol(config, in, mode, fault);
    const Verdict verdict = verify_report(report, tolerance);
    tally = report.tally;
    overall_max = std::max(overall_max, verdict.max_exact_distance);

    std::optional<SweepResult> sweep;
    if (config.schedule_sweep) {
      sweep = sweep_trial(in, report, mode, fault,
                          derive_seed(config.seed, 900000 + trial));
    }
    const bool sweep_ok = !sweep || sweep->max_deviation < tolerance;
    const bool trial_pass = verdict.pass && sweep_ok;

    ordered_json row;
    row["trial"] = trial;
    row["u_seed"] = in.u_seed;
    row["v_seed"] = in.v_seed;
    row["state_seed"] = in.state_seed;
    row["branches"] = report.branches.size();
    row["max_exact_distance"] = verdict.max_exact_distance;
    row["min_fidelity"] = verdict.min_fidelity;
    row["probability_sum"] = verdict.probability_sum;
    if (sweep.has_value()) {
      row["schedules_checked"] = sweep->schedules_checked;
      row["max_schedule_deviation"] = sweep->max_deviation;
    }
    row["pass"] = trial_pass;
    trial_rows.push_back(row);

    text += "trial " + std::to_string(trial) +
            ": max_distance=" + fmt_distance(verdict.max_exact_distance) +
            " prob_sum=" + fmt(verdict.probability_sum);
    if (sweep.has_value()) {
      text += " schedule_deviation=" + fmt_distance(sweep->max_deviation) +
              " (" + std::to_string(sweep->schedules_checked) + " schedules)";
    }
    text += trial_pass ? " pass\n" : " FAIL\n";

    if (!trial_pass) {
      all_pass = false;
      const OutcomeBranch& worst = branch_by_label(report, verdict.worst_branch);
      std::string reason = verdict.failure_reason;
      if (!sweep_ok) {
        if (!reason.empty()) reason += "; ";
        reason += "final state drifts by " + fmt_distance(sweep->max_deviation) +
                  " across interleavings";
      }
      ordered_json fail;
      fail["trial"] = trial;
      fail["u_seed"] = in.u_seed;
      fail["v_seed"] = in.v_seed;
      fail["state_seed"] = in.state_seed;
      fail["branch"] = worst.label();
      fail["reason"] = reason;
      fail["transcript"] = transcript_json(worst.transcript);
      failure = std::move(fail);

      failure_text = "failing trial " + std::to_string(trial) +
                     ": u_seed=" + std::to_string(in.u_seed) +
                     " v_seed=" + std::to_string(in.v_seed) +
                     " state_seed=" + std::to_string(in.state_seed) + "\n" +
                     "reason: " + reason + "\n" +
                     "transcript of branch " + worst.label() + ":\n" +
                     format_transcript(worst.transcript);
    }
  }

  doc["trials_run"] = trial_rows;
  doc["tally"] = tally_json(tally);
  doc["max_exact_distance"] = overall_max;
  doc["pass"] = all_pass;
  if (failure.has_value()) doc["failure"] = *failure;

  text += tally_text(tally) + "\n";
  text += "overall max distance " + fmt_distance(overall_max) + "\n";
  if (!failure_text.empty()) text += failure_text;
  text += all_pass ? "PASS\n" : "FAIL\n";

  emit(config, doc, text, out);
  return all_pass ? 0 : 1;
}

int run_enumerate(const RunConfig& config, std::ostream& out) {
  const double tolerance = kVerificationTol;
  const ProtocolOptions fault = fault_options(config.inject_fault);
  const TrialInputs in = make_trial(config, 0);
  const ProtocolReport report =
      run_protocol(config, in, RunMode::Enumerate, fault);
  const Verdict verdict = verify_report(report, tolerance);

  std::optional<SweepResult> sweep;
  if (config.schedule_sweep) {
    sweep = sweep_trial(in, report, RunMode::Enumerate, fault,
                        derive_seed(config.seed, 900000));
  }
  const bool sweep_ok = !sweep || sweep->max_deviation < tolerance;
  const bool pass = verdict.pass && sweep_ok;

  ordered_json doc;
  doc["config"] = config_json(config);
  doc["tolerance"] = tolerance;
  doc["u_seed"] = in.u_seed;
  doc["v_seed"] = in.v_seed;
  doc["state_seed"] = in.state_seed;
  ordered_json branch_rows = ordered_json::array();

  std::string text = "enumerate protocol=" + config.protocol + " dims=" +
                     std::to_string(config.block_qubits_u) + "," +
                     std::to_string(config.block_qubits_v) +
                     " seed=" + std::to_string(config.seed) +
                     " fault=" + config.inject_fault + "\n";

  for (const OutcomeBranch& branch : report.branches) {
    const StateDistance d =
        state_distance(branch.final_state, report.oracle_state);
    ordered_json row;
    row["branch"] = branch.label();
    ordered_json bits;
    for (const auto& [tag, bit] : branch.outcomes) bits[tag] = bit;
    row["outcomes"] = bits;
    row["probability"] = branch.probability;
    row["exact_distance"] = d.exact_distance;
    row["fidelity"] = d.fidelity;
    branch_rows.push_back(row);

    text += "branch " + branch.label() +
            "  probability=" + fmt(branch.probability) +
            "  distance=" + fmt_distance(d.exact_distance) + "\n";
  }

  doc["branches"] = branch_rows;
  doc["probability_sum"] = verdict.probability_sum;
  doc["tally"] = tally_json(report.tally);
  doc["max_exact_distance"] = verdict.max_exact_distance;
  if (sweep.has_value()) {
    doc["schedules_checked"] = sweep->schedules_checked;
    doc["max_schedule_deviation"] = sweep->max_deviation;
  }
  doc["pass"] = pass;

  text += "probability sum " + fmt(verdict.probability_sum) + "\n";
  text += tally_text(report.tally) + "\n";
  text += "max distance " + fmt_distance(verdict.max_exact_distance) + "\n";
  if (sweep.has_value()) {
    text += "schedule deviation " + fmt_distance(sweep->max_deviation) +
            " over " + std::to_string(sweep->schedules_checked) +
            " schedules\n";
  }

  if (!pass) {
    const OutcomeBranch& worst = branch_by_label(report, verdict.worst_branch);
    std::string reason = verdict.failure_reason;
    if (!sweep_ok) {
      if (!reason.empty()) reason += "; ";
      reason += "final state drifts by " + fmt_distance(sweep->max_deviation) +
                " across interleavings";
    }
    ordered_json fail;
    fail["branch"] = worst.label();
    fail["reason"] = reason;
    fail["transcript"] = transcript_json(worst.transcript);
    doc["failure"] = fail;
    text += "reason: " + reason + "\n";
    text += "transcript of branch " + worst.label() + ":\n" +
            format_transcript(worst.transcript);
  }
  text += pass ? "PASS\n" : "FAIL\n";

  emit(config, doc, text, out);
  return pass ? 0 : 1;
}

int run_lower_bound(const RunConfig& config, std::ostream& out) {
  const double tolerance = kVerificationTol;
  const LowerBoundReport report = lower_bound_demo();
  const bool pass = report.max_exact_distance < tolerance &&
                    std::abs(report.output_entropy_alice - 1.0) < tolerance &&
                    std::abs(report.output_entropy_bob - 1.0) < tolerance &&
                    std::abs(report.output_entropy_charlie - 1.0) < tolerance &&
                    std::abs(report.resource_entropy_ghz - 1.0) < tolerance &&
                    std::abs(report.resource_entropy_two_bell - 2.0) <
                        tolerance &&
                    report.output_matches_resource;

  ordered_json doc;
  doc["config"] = config_json(config);
  doc["tolerance"] = tolerance;
  doc["max_exact_distance"] = report.max_exact_distance;
  doc["min_fidelity"] = report.min_fidelity;
  ordered_json output_entropy;
  output_entropy["alice"] = report.output_entropy_alice;
  output_entropy["bob"] = report.output_entropy_bob;
  output_entropy["charlie"] = report.output_entropy_charlie;
  doc["output_entropy"] = output_entropy;
  ordered_json resource_entropy;
  resource_entropy["ghz"] = report.resource_entropy_ghz;
  resource_entropy["two_bell"] = report.resource_entropy_two_bell;
  doc["resource_entropy"] = resource_entropy;
  doc["output_matches_resource"] = report.output_matches_resource;
  doc["pass"] = pass;

  std::string text = "lower-bound\n";
  text += "branch outputs vs target: max distance " +
          fmt_distance(report.max_exact_distance) + ", min fidelity " +
          fmt(report.min_fidelity) + "\n";
  text += "output entropy: alice=" + fmt(report.output_entropy_alice) +
          " bob=" + fmt(report.output_entropy_bob) +
          " charlie=" + fmt(report.output_entropy_charlie) + "\n";
  text += "resource entropy: ghz=" + fmt(report.resource_entropy_ghz) +
          " two_bell=" + fmt(report.resource_entropy_two_bell) + "\n";
  text += std::string("output entanglement equals consumed resource: ") +
          (report.output_matches_resource ? "yes" : "no") + "\n";
  text += pass ? "PASS\n" : "FAIL\n";

  emit(config, doc, text, out);
  return pass ? 0 : 1;
}

int run_compare(const RunConfig& config, std::ostream& out) {
  const double tolerance = kVerificationTol;
  ordered_json doc;
  doc["config"] = config_json(config);
  doc["tolerance"] = tolerance;

  std::string text = "compare dims=" + std::to_string(config.block_qubits_u) +
                     "," + std::to_string(config.block_qubits_v) +
                     " trials=" + std::to_string(config.trials) +
                     " seed=" + std::to_string(config.seed) + "\n";

  ComparisonReport report;
  try {
    report = resource_comparison(config.block_qubits_u, config.block_qubits_v,
                                 config.trials, config.seed);
  } catch (const std::runtime_error& error) {
    ordered_json fail;
    fail["message"] = error.what();
    fail["replay"] = "rerun the verify command with the same --dims and "
                     "--seed for per-branch transcripts";
    doc["pass"] = false;
    doc["failure"] = fail;
    text += std::string("error: ") + error.what() + "\n";
    text += "rerun the verify command with the same --dims and --seed for "
            "per-branch transcripts\n";
    text += "FAIL\n";
    emit(config, doc, text, out);
    return 1;
  }

  ordered_json rows = ordered_json::array();
  text += "scheme                    ghz bell  ebits cbits simulated\n";
  for (const ResourceRow& row : report.rows) {
    ordered_json row_doc;
    row_doc["scheme"] = std::string(scheme_name(row.scheme));
    row_doc["ghz"] = row.ghz;
    row_doc["bell"] = row.bell;
    row_doc["ebits_alice_vs_rest"] = row.ebits_alice_vs_rest;
    row_doc["cbits"] = row.cbits;
    row_doc["simulated"] = row.simulated;
    rows.push_back(row_doc);

    char line[96];
    std::snprintf(line, sizeof line, "%-24s %4d %4d %6.3f %5d %s\n",
                  std::string(scheme_name(row.scheme)).c_str(), row.ghz,
                  row.bell, row.ebits_alice_vs_rest, row.cbits,
                  row.simulated ? "yes" : "no");
    text += line;
  }
  doc["rows"] = rows;
  ordered_json max_distance;
  max_distance["ghz_protocol"] = report.max_exact_distance_ghz;
  max_distance["two_bell"] = report.max_exact_distance_two_bell;
  doc["max_exact_distance"] = max_distance;
  doc["pass"] = true;

  text += "max distance: ghz=" + fmt_distance(report.max_exact_distance_ghz) +
          " two_bell=" + fmt_distance(report.max_exact_distance_two_bell) +
          "\n";
  text += "PASS\n";

  emit(config, doc, text, out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  RunConfig config;
  std::string dims_text = "1,1";

  CLI::App app{"Simulator and verifier for implementing two consecutive "
               "nonlocal block operations with one shared three-party "
               "entangled state and three classical bits"};
  app.name("ghzlocc");
  app.add_option("command,--command", config.command,
                 "verify | enumerate | lower-bound | compare")
      ->required()
      ->check(CLI::IsMember({"verify", "enumerate", "lower-bound", "compare"}));
  app.add_option("--protocol", config.protocol,
                 "which implementation to run: ghz | two-bell")
      ->check(CLI::IsMember({"ghz", "two-bell"}))
      ->capture_default_str();
  app.add_option("--dims", dims_text, "block sizes N,M, each in [1,3]")
      ->capture_default_str();
  app.add_option("--trials", config.trials, "random trials to run")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  app.add_option("--seed", config.seed, "base seed for all derived seeds")
      ->capture_default_str();
  app.add_option("--mode", config.mode, "sampled | enumerate")
      ->check(CLI::IsMember({"sampled", "enumerate"}))
      ->capture_default_str();
  app.add_option("--format", config.format, "text | machine")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();
  app.add_flag("--schedule-sweep", config.schedule_sweep,
               "rerun each trial under interleaved Bob/Charlie schedules and "
               "require identical outputs");
  app.add_option("--inject-fault", config.inject_fault,
                 "drop one classical correction (testing hook): none | "
                 "skip-bob-x | skip-charlie-x | skip-alice-z")
      ->check(CLI::IsMember(
          {"none", "skip-bob-x", "skip-charlie-x", "skip-alice-z"}))
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& error) {
    err << "error: " << error.what() << "\n\n" << app.help();
    return 2;
  }

  char extra = '\0';
  if (std::sscanf(dims_text.c_str(), "%d,%d%c", &config.block_qubits_u,
                  &config.block_qubits_v, &extra) != 2) {
    err << "error: --dims takes N,M (got '" << dims_text << "')\n";
    return 2;
  }
  if (config.block_qubits_u < 1 || config.block_qubits_u > 3 ||
      config.block_qubits_v < 1 || config.block_qubits_v > 3) {
    err << "error: --dims components must lie in [1,3] (got " << dims_text
        << ")\n";
    return 2;
  }
  if (config.schedule_sweep &&
      (config.protocol != "ghz" ||
       (config.command != "verify" && config.command != "enumerate"))) {
    err << "error: --schedule-sweep applies to the ghz protocol's verify and "
           "enumerate commands only\n";
    return 2;
  }
  if (config.inject_fault != "none" && config.command != "verify" &&
      config.command != "enumerate") {
    err << "error: --inject-fault applies to verify and enumerate only\n";
    return 2;
  }

  try {
    if (config.command == "verify") return run_verify(config, out);
    if (config.command == "enumerate") return run_enumerate(config, out);
    if (config.command == "lower-bound") return run_lower_bound(config, out);
    return run_compare(config, out);
  } catch (const std::exception& error) {
    err << "error: " << error.what() << '\n';
    return 1;
  }
}

}  // namespace ghzlocc::cli
