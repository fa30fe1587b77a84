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

#include "ghzlocc/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ghzlocc {

namespace {

struct BranchRun {
  OutcomeBranch branch;
  ResourceTally tally;
};

std::string format_distance(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3e", value);
  return buffer;
}

double product_of_measure_probabilities(
    const std::vector<TranscriptEvent>& transcript) {
  double probability = 1.0;
  for (const TranscriptEvent& event : transcript) {
    if (event.kind == EventKind::LocalMeasure) probability *= event.probability;
  }
  return probability;
}

void check_initial(const DiagonalBlockOp& u, const DiagonalBlockOp& v,
                   const StateVector& initial) {
  const int wanted = 1 + u.block_qubits() + v.block_qubits();
  if (initial.num_qubits() != wanted) {
    throw std::invalid_argument(
        "initial state has " + std::to_string(initial.num_qubits()) +
        " qubits; the blocks need " + std::to_string(wanted) +
        " (control + both registers)");
  }
}

std::array<std::optional<int>, 4> forced_from_options(
    RunMode mode, const ProtocolOptions& options, std::size_t count) {
  std::array<std::optional<int>, 4> forced{};
  if (!options.force.has_value()) return forced;
  if (mode == RunMode::Enumerate) {
    throw std::invalid_argument(
        "forced outcomes apply to sampled mode only; enumerate mode already "
        "forces every combination");
  }
  if (options.force->size() != count) {
    throw std::invalid_argument("expected " + std::to_string(count) +
                                " forced outcomes, got " +
                                std::to_string(options.force->size()));
  }
  for (std::size_t i = 0; i < count; ++i) {
    const int bit = (*options.force)[i];
    if (bit != 0 && bit != 1) {
      throw std::invalid_argument("forced outcomes must be 0 or 1");
    }
    forced[i] = bit;
  }
  return forced;
}

std::size_t index_of(PartyId party) { return static_cast<std::size_t>(party); }

BranchRun run_ghz_once(const DiagonalBlockOp& u, const DiagonalBlockOp& v,
                       const StateVector& initial, std::uint64_t seed,
                       const std::array<std::optional<int>, 4>& forced,
                       const ProtocolOptions& options) {
  const int n = u.block_qubits();
  const int m = v.block_qubits();

  std::vector<PartyId> owners{PartyId::Alice};
  owners.insert(owners.end(), n, PartyId::Bob);
  owners.insert(owners.end(), m, PartyId::Charlie);
  LoccWorld world(initial, owners, seed);

  const std::vector<WireId> resource = world.install_resource(
      ResourceKind::Ghz, {PartyId::Alice, PartyId::Bob, PartyId::Charlie},
      "setup");
  const WireId wire_a = 0;
  const WireId ancilla_a = resource[0];
  const WireId ancilla_b = resource[1];
  const WireId ancilla_c = resource[2];

  std::vector<WireId> bob_wires{ancilla_b};
  for (int i = 0; i < n; ++i) bob_wires.push_back(1 + i);
  std::vector<WireId> charlie_wires{ancilla_c};
  for (int i = 0; i < m; ++i) charlie_wires.push_back(1 + n + i);

  PartyProgram alice{PartyId::Alice, {}};
  alice.steps.push_back(
      Step::gate(cnot(), {wire_a, ancilla_a}, "step 1", "CNOT"));
  alice.steps.push_back(Step::measure(ancilla_a, "a", forced[0], "step 1"));
  alice.steps.push_back(
      Step::send("a", "a", {PartyId::Bob, PartyId::Charlie}, "step 1"));
  alice.steps.push_back(Step::receive("b", "step 5"));
  alice.steps.push_back(Step::receive("c", "step 5"));
  if (!options.skip_alice_z) {
    alice.steps.push_back(Step::gate_if(bits_differ("b", "c"), pauli_z(),
                                        {wire_a}, "step 5", "Z"));
  }

  PartyProgram bob{PartyId::Bob, {}};
  bob.steps.push_back(Step::receive("a", "step 2"));
  if (!options.skip_bob_x) {
    bob.steps.push_back(
        Step::gate_if(bit_is("a", 1), pauli_x(), {ancilla_b}, "step 2", "X"));
  }
  bob.steps.push_back(
      Step::gate(embed_diagonal_block(u), bob_wires, "step 3", "U"));
  bob.steps.push_back(Step::gate(hadamard(), {ancilla_b}, "step 4", "H"));
  bob.steps.push_back(Step::measure(ancilla_b, "b", forced[1], "step 4"));
  bob.steps.push_back(Step::send("b", "b", {PartyId::Alice}, "step 4"));

  PartyProgram charlie{PartyId::Charlie, {}};
  charlie.steps.push_back(Step::receive("a", "step 2'"));
  if (!options.skip_charlie_x) {
    charlie.steps.push_back(
        Step::gate_if(bit_is("a", 1), pauli_x(), {ancilla_c}, "step 2'", "X"));
  }
  charlie.steps.push_back(
      Step::gate(embed_diagonal_block(v), charlie_wires, "step 3'", "V"));
  charlie.steps.push_back(Step::gate(hadamard(), {ancilla_c}, "step 4'", "H"));
  charlie.steps.push_back(Step::measure(ancilla_c, "c", forced[2], "step 4'"));
  charlie.steps.push_back(Step::send("c", "c", {PartyId::Alice}, "step 4'"));

  Schedule schedule(3, PartyId::Alice);
  if (options.middle_schedule.has_value()) {
    schedule.insert(schedule.end(), options.middle_schedule->begin(),
                    options.middle_schedule->end());
  } else {
    schedule.insert(schedule.end(), 6, PartyId::Bob);
    schedule.insert(schedule.end(), 6, PartyId::Charlie);
  }
  schedule.insert(schedule.end(), 3, PartyId::Alice);

  InterleavedRun finished =
      run_interleaved(std::move(world), {alice, bob, charlie}, schedule);
  audit_transcript(finished.world.transcript());

  OutcomeBranch branch{
      {{"a", finished.memory[index_of(PartyId::Alice)].at("a")},
       {"b", finished.memory[index_of(PartyId::Bob)].at("b")},
       {"c", finished.memory[index_of(PartyId::Charlie)].at("c")}},
      product_of_measure_probabilities(finished.world.transcript()),
      finished.world.state(),
      finished.world.transcript()};
  return {std::move(branch), finished.world.tally()};
}

BranchRun run_baseline_once(const DiagonalBlockOp& u, const DiagonalBlockOp& v,
                            const StateVector& initial, std::uint64_t seed,
                            const std::array<std::optional<int>, 4>& forced,
                            const ProtocolOptions& options) {
  const int n = u.block_qubits();
  const int m = v.block_qubits();

  std::vector<PartyId> owners{PartyId::Alice};
  owners.insert(owners.end(), n, PartyId::Bob);
  owners.insert(owners.end(), m, PartyId::Charlie);
  LoccWorld world(initial, owners, seed);
  const WireId wire_a = 0;

  // Round 1: Alice and Bob implement u across their Bell pair.
  const std::vector<WireId> bell1 = world.install_resource(
      ResourceKind::Bell, {PartyId::Alice, PartyId::Bob}, "round 1 setup");
  std::vector<WireId> bob_wires{bell1[1]};
  for (int i = 0; i < n; ++i) bob_wires.push_back(1 + i);

  PartyProgram alice1{PartyId::Alice, {}};
  alice1.steps.push_back(
      Step::gate(cnot(), {wire_a, bell1[0]}, "round 1 step 1", "CNOT"));
  alice1.steps.push_back(
      Step::measure(bell1[0], "a1", forced[0], "round 1 step 1"));
  alice1.steps.push_back(
      Step::send("a1", "a1", {PartyId::Bob}, "round 1 step 1"));
  alice1.steps.push_back(Step::receive("b1", "round 1 step 5"));
  if (!options.skip_alice_z) {
    // With a single partner the closing correction degenerates to Z iff the
    // partner's ancilla read 1.
    alice1.steps.push_back(Step::gate_if(bit_is("b1", 1), pauli_z(), {wire_a},
                                         "round 1 step 5", "Z"));
  }

  PartyProgram bob{PartyId::Bob, {}};
  bob.steps.push_back(Step::receive("a1", "round 1 step 2"));
  if (!options.skip_bob_x) {
    bob.steps.push_back(Step::gate_if(bit_is("a1", 1), pauli_x(), {bell1[1]},
                                      "round 1 step 2", "X"));
  }
  bob.steps.push_back(
      Step::gate(embed_diagonal_block(u), bob_wires, "round 1 step 3", "U"));
  bob.steps.push_back(
      Step::gate(hadamard(), {bell1[1]}, "round 1 step 4", "H"));
  bob.steps.push_back(
      Step::measure(bell1[1], "b1", forced[1], "round 1 step 4"));
  bob.steps.push_back(
      Step::send("b1", "b1", {PartyId::Alice}, "round 1 step 4"));

  Schedule schedule1(3, PartyId::Alice);
  schedule1.insert(schedule1.end(), 6, PartyId::Bob);
  schedule1.insert(schedule1.end(), 2, PartyId::Alice);
  InterleavedRun round1 =
      run_interleaved(std::move(world), {alice1, bob}, schedule1);

  // Round 2: Alice and Charlie implement v across a fresh Bell pair.
  const std::vector<WireId> bell2 = round1.world.install_resource(
      ResourceKind::Bell, {PartyId::Alice, PartyId::Charlie}, "round 2 setup");
  std::vector<WireId> charlie_wires{bell2[1]};
  for (int i = 0; i < m; ++i) charlie_wires.push_back(1 + n + i);

  PartyProgram alice2{PartyId::Alice, {}};
  alice2.steps.push_back(
      Step::gate(cnot(), {wire_a, bell2[0]}, "round 2 step 1", "CNOT"));
  alice2.steps.push_back(
      Step::measure(bell2[0], "a2", forced[2], "round 2 step 1"));
  alice2.steps.push_back(
      Step::send("a2", "a2", {PartyId::Charlie}, "round 2 step 1"));
  alice2.steps.push_back(Step::receive("c2", "round 2 step 5"));
  if (!options.skip_alice_z) {
    alice2.steps.push_back(Step::gate_if(bit_is("c2", 1), pauli_z(), {wire_a},
                                         "round 2 step 5", "Z"));
  }

  PartyProgram charlie{PartyId::Charlie, {}};
  charlie.steps.push_back(Step::receive("a2", "round 2 step 2"));
  if (!options.skip_charlie_x) {
    charlie.steps.push_back(Step::gate_if(bit_is("a2", 1), pauli_x(),
                                          {bell2[1]}, "round 2 step 2", "X"));
  }
  charlie.steps.push_back(Step::gate(embed_diagonal_block(v), charlie_wires,
                                     "round 2 step 3", "V"));
  charlie.steps.push_back(
      Step::gate(hadamard(), {bell2[1]}, "round 2 step 4", "H"));
  charlie.steps.push_back(
      Step::measure(bell2[1], "c2", forced[3], "round 2 step 4"));
  charlie.steps.push_back(
      Step::send("c2", "c2", {PartyId::Alice}, "round 2 step 4"));

  Schedule schedule2(3, PartyId::Alice);
  schedule2.insert(schedule2.end(), 6, PartyId::Charlie);
  schedule2.insert(schedule2.end(), 2, PartyId::Alice);
  InterleavedRun round2 =
      run_interleaved(std::move(round1.world), {alice2, charlie}, schedule2);
  audit_transcript(round2.world.transcript());

  OutcomeBranch branch{
      {{"a1", round1.memory[index_of(PartyId::Alice)].at("a1")},
       {"b1", round1.memory[index_of(PartyId::Bob)].at("b1")},
       {"a2", round2.memory[index_of(PartyId::Alice)].at("a2")},
       {"c2", round2.memory[index_of(PartyId::Charlie)].at("c2")}},
      product_of_measure_probabilities(round2.world.transcript()),
      round2.world.state(),
      round2.world.transcript()};
  return {std::move(branch), round2.world.tally()};
}

template <typename RunOnce>
ProtocolReport enumerate_or_sample(const DiagonalBlockOp& u,
                                   const DiagonalBlockOp& v,
                                   const StateVector& initial, RunMode mode,
                                   std::uint64_t seed,
                                   const ProtocolOptions& options,
                                   int num_measurements, RunOnce run_once) {
  check_initial(u, v, initial);
  const StateVector oracle = StateVector::assume_normalized(
      compose_w(u, v).matrix() * initial.amplitudes());

  std::vector<OutcomeBranch> branches;
  ResourceTally tally{};
  if (mode == RunMode::Enumerate) {
    forced_from_options(mode, options, num_measurements);  // rejects `force`
    const int combinations = 1 << num_measurements;
    for (int index = 0; index < combinations; ++index) {
      std::array<std::optional<int>, 4> forced{};
      for (int bit = 0; bit < num_measurements; ++bit) {
        forced[bit] = (index >> (num_measurements - 1 - bit)) & 1;
      }
      BranchRun run = run_once(initial, derive_seed(seed, index), forced);
      tally = run.tally;
      branches.push_back(std::move(run.branch));
    }
  } else {
    const auto forced = forced_from_options(mode, options, num_measurements);
    BranchRun run = run_once(initial, seed, forced);
    tally = run.tally;
    branches.push_back(std::move(run.branch));
  }

  double max_distance = 0.0;
  double min_fidelity = 1.0;
  for (const OutcomeBranch& branch : branches) {
    const StateDistance d = state_distance(branch.final_state, oracle);
    max_distance = std::max(max_distance, d.exact_distance);
    min_fidelity = std::min(min_fidelity, d.fidelity);
  }
  return {std::move(branches), oracle, max_distance, min_fidelity, tally,
          mode};
}

}  // namespace

int OutcomeBranch::bit(const std::string& tag) const {
  for (const auto& [name, value] : outcomes) {
    if (name == tag) return value;
  }
  throw std::invalid_argument("no outcome tagged '" + tag +
                              "' in this branch");
}

std::string OutcomeBranch::label() const {
  std::string out;
  for (const auto& [name, value] : outcomes) {
    if (!out.empty()) out += ' ';
    out += name + "=" + std::to_string(value);
  }
  return out;
}

ProtocolReport ghz_protocol(const DiagonalBlockOp& u, const DiagonalBlockOp& v,
                            const StateVector& initial, RunMode mode,
                            std::uint64_t seed,
                            const ProtocolOptions& options) {
  return enumerate_or_sample(
      u, v, initial, mode, seed, options, 3,
      [&](const StateVector& start, std::uint64_t run_seed,
          const std::array<std::optional<int>, 4>& forced) {
        return run_ghz_once(u, v, start, run_seed, forced, options);
      });
}

ProtocolReport two_bell_baseline(const DiagonalBlockOp& u,
                                 const DiagonalBlockOp& v,
                                 const StateVector& initial, RunMode mode,
                                 std::uint64_t seed,
                                 const ProtocolOptions& options) {
  if (options.middle_schedule.has_value()) {
    throw std::invalid_argument(
        "the two-Bell baseline runs its rounds sequentially and accepts no "
        "schedule override");
  }
  return enumerate_or_sample(
      u, v, initial, mode, seed, options, 4,
      [&](const StateVector& start, std::uint64_t run_seed,
          const std::array<std::optional<int>, 4>& forced) {
        return run_baseline_once(u, v, start, run_seed, forced, options);
      });
}

ControlDecomposition decompose_on_control(const StateVector& state) {
  if (state.num_qubits() < 2) {
    throw std::invalid_argument(
        "decomposing on the control wire needs at least 2 qubits");
  }
  const Eigen::Index half = state.dim() / 2;
  const Eigen::VectorXcd top = state.amplitudes().head(half);
  const Eigen::VectorXcd bottom = state.amplitudes().tail(half);
  ControlDecomposition out{top.norm(), std::nullopt, bottom.norm(),
                           std::nullopt};
  if (out.alpha0 > kAlgebraTol) {
    out.xi0 = StateVector::normalized(top / out.alpha0);
  }
  if (out.alpha1 > kAlgebraTol) {
    out.xi1 = StateVector::normalized(bottom / out.alpha1);
  }
  return out;
}

Verdict verify_report(const ProtocolReport& report, double tolerance) {
  if (report.branches.empty()) {
    return {false, 0.0, 0.0, 0.0, "", "no branches recorded"};
  }

  double max_distance = -1.0;
  double min_fidelity = 1.0;
  double probability_sum = 0.0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < report.branches.size(); ++i) {
    const StateDistance d =
        state_distance(report.branches[i].final_state, report.oracle_state);
    if (d.exact_distance > max_distance) {
      max_distance = d.exact_distance;
      worst = i;
    }
    min_fidelity = std::min(min_fidelity, d.fidelity);
    probability_sum += report.branches[i].probability;
  }

  Verdict verdict{true,
                  max_distance,
                  min_fidelity,
                  probability_sum,
                  report.branches[worst].label(),
                  ""};
  if (max_distance >= tolerance) {
    verdict.pass = false;
    verdict.failure_reason = "branch " + verdict.worst_branch +
                             " deviates from the oracle by " +
                             format_distance(max_distance);
  }
  if (report.mode == RunMode::Enumerate &&
      std::abs(probability_sum - 1.0) >= tolerance) {
    verdict.pass = false;
    if (!verdict.failure_reason.empty()) verdict.failure_reason += "; ";
    verdict.failure_reason += "branch probabilities sum to " +
                              format_distance(probability_sum) +
                              " instead of 1";
  }
  return verdict;
}

std::vector<Schedule> bob_charlie_interleavings(int bob_steps,
                                                int charlie_steps, int sampled,
                                                std::uint64_t seed) {
  if (bob_steps < 0 || charlie_steps < 0 || sampled < 0) {
    throw std::invalid_argument("step and sample counts must be nonnegative");
  }
  std::vector<Schedule> schedules;
  Schedule bob_first(bob_steps, PartyId::Bob);
  bob_first.insert(bob_first.end(), charlie_steps, PartyId::Charlie);
  Schedule charlie_first(charlie_steps, PartyId::Charlie);
  charlie_first.insert(charlie_first.end(), bob_steps, PartyId::Bob);
  schedules.push_back(std::move(bob_first));
  schedules.push_back(std::move(charlie_first));

  Rng rng(seed);
  for (int s = 0; s < sampled; ++s) {
    int bob_left = bob_steps;
    int charlie_left = charlie_steps;
    Schedule merged;
    while (bob_left + charlie_left > 0) {
      // Taking Bob with probability bob_left / (bob_left + charlie_left)
      // makes every merge of the two sequences equally likely.
      const double threshold =
          static_cast<double>(bob_left) / (bob_left + charlie_left);
      if (sample_uniform(rng) < threshold) {
        merged.push_back(PartyId::Bob);
        --bob_left;
      } else {
        merged.push_back(PartyId::Charlie);
        --charlie_left;
      }
    }
    schedules.push_back(std::move(merged));
  }
  return schedules;
}

}  // namespace ghzlocc
