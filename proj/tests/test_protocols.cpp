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

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "ghzlocc/gates.hpp"
#include "ghzlocc/locc.hpp"
#include "ghzlocc/protocols.hpp"
#include "ghzlocc/qstate.hpp"
#include "test_support.hpp"

namespace ghzlocc {
namespace {

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using test::max_amplitude_gap;

DiagonalBlockOp identity_blocks(int n) {
  return DiagonalBlockOp(identity_gate(n), identity_gate(n));
}

DiagonalBlockOp ix_blocks() {
  return DiagonalBlockOp(identity_gate(1), pauli_x());
}

StateVector plus_zero_zero() {
  const double root_half = std::sqrt(0.5);
  return tensor_product(
      make_state((Eigen::VectorXcd(2) << root_half, root_half).finished()),
      basis_state(2, 0));
}

/// The protocol's target, built the long way: u on (control, B-register)
/// followed by v on (control, C-register).
StateVector sequential_target(const DiagonalBlockOp& u,
                              const DiagonalBlockOp& v,
                              const StateVector& initial) {
  const int n = u.block_qubits();
  const int m = v.block_qubits();
  std::vector<int> u_wires{0};
  for (int i = 0; i < n; ++i) u_wires.push_back(1 + i);
  std::vector<int> v_wires{0};
  for (int i = 0; i < m; ++i) v_wires.push_back(1 + n + i);
  const StateVector after_u =
      apply_gate(initial, embed_diagonal_block(u), u_wires);
  return apply_gate(after_u, embed_diagonal_block(v), v_wires);
}

TEST_CASE("identity blocks leave every branch at the initial state") {
  Rng rng(301);
  const StateVector initial = random_state(3, rng);
  const ProtocolReport report = ghz_protocol(
      identity_blocks(1), identity_blocks(1), initial, RunMode::Enumerate);
  REQUIRE(report.branches.size() == 8);
  REQUIRE(report.max_exact_distance < 1e-10);
  REQUIRE(max_amplitude_gap(report.oracle_state, initial) < 1e-12);
}

TEST_CASE("two controlled flips turn a shared plus state into a triple") {
  const ProtocolReport report = ghz_protocol(ix_blocks(), ix_blocks(),
                                             plus_zero_zero(),
                                             RunMode::Enumerate);
  REQUIRE(max_amplitude_gap(report.oracle_state, ghz_state()) < 1e-12);
  for (const OutcomeBranch& branch : report.branches) {
    REQUIRE(max_amplitude_gap(branch.final_state, ghz_state()) < 1e-10);
  }
  REQUIRE(report.tally == ResourceTally{1, 0, 3, 4});
}

TEST_CASE("every branch carries probability one eighth") {
  const ProtocolReport report = ghz_protocol(ix_blocks(), ix_blocks(),
                                             plus_zero_zero(),
                                             RunMode::Enumerate);
  double sum = 0.0;
  std::set<std::string> labels;
  for (const OutcomeBranch& branch : report.branches) {
    REQUIRE_THAT(branch.probability, WithinAbs(0.125, 1e-12));
    sum += branch.probability;
    labels.insert(branch.label());
  }
  REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));
  REQUIRE(labels.size() == 8);  // all three-bit outcome combinations distinct
  REQUIRE(labels.count("a=0 b=0 c=0") == 1);
  REQUIRE(labels.count("a=1 b=1 c=1") == 1);
}

TEST_CASE("branch outcomes are ordered and addressable by tag") {
  const ProtocolReport report = ghz_protocol(ix_blocks(), ix_blocks(),
                                             plus_zero_zero(),
                                             RunMode::Enumerate);
  const OutcomeBranch& branch = report.branches.front();
  REQUIRE(branch.outcomes.size() == 3);
  REQUIRE(branch.outcomes[0].first == "a");
  REQUIRE(branch.outcomes[1].first == "b");
  REQUIRE(branch.outcomes[2].first == "c");
  REQUIRE(branch.bit("a") == branch.outcomes[0].second);
  REQUIRE_THROWS_AS(branch.bit("nope"), std::invalid_argument);
}

TEST_CASE("random blocks of every supported shape reach the target exactly") {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 3; ++m) {
      const DiagonalBlockOp u = haar_random_blocks(n, derive_seed(400, n));
      const DiagonalBlockOp v =
          haar_random_blocks(m, derive_seed(500, static_cast<std::uint64_t>(m)));
      Rng rng(derive_seed(600, static_cast<std::uint64_t>(n * 4 + m)));
      const StateVector initial = random_state(1 + n + m, rng);

      const ProtocolReport report =
          ghz_protocol(u, v, initial, RunMode::Enumerate);
      REQUIRE(report.branches.size() == 8);
      REQUIRE(report.max_exact_distance < 1e-10);
      REQUIRE(report.min_fidelity > 1.0 - 1e-10);
      REQUIRE(max_amplitude_gap(report.oracle_state,
                                sequential_target(u, v, initial)) < 1e-12);
      REQUIRE(report.tally == ResourceTally{1, 0, 3, 4});
    }
  }
}

TEST_CASE("branch transcripts replay cleanly through the audit") {
  const ProtocolReport report = ghz_protocol(ix_blocks(), ix_blocks(),
                                             plus_zero_zero(),
                                             RunMode::Enumerate);
  for (const OutcomeBranch& branch : report.branches) {
    REQUIRE_NOTHROW(audit_transcript(branch.transcript));
    REQUIRE_FALSE(branch.transcript.empty());
  }
}

TEST_CASE("the initial state must match the block shapes") {
  Rng rng(9);
  REQUIRE_THROWS_AS(ghz_protocol(identity_blocks(1), identity_blocks(1),
                                 random_state(4, rng), RunMode::Enumerate),
                    std::invalid_argument);
}

TEST_CASE("sampled runs are seed-deterministic") {
  const DiagonalBlockOp u = haar_random_blocks(1, 21);
  const DiagonalBlockOp v = haar_random_blocks(1, 22);
  Rng rng(23);
  const StateVector initial = random_state(3, rng);

  const ProtocolReport first = ghz_protocol(u, v, initial, RunMode::Sampled, 99);
  const ProtocolReport second =
      ghz_protocol(u, v, initial, RunMode::Sampled, 99);
  REQUIRE(first.branches.size() == 1);
  REQUIRE(first.branches[0].outcomes == second.branches[0].outcomes);
  REQUIRE(max_amplitude_gap(first.branches[0].final_state,
                            second.branches[0].final_state) == 0.0);
  REQUIRE(first.max_exact_distance < 1e-10);
}

TEST_CASE("forced outcomes steer a sampled run") {
  ProtocolOptions options;
  options.force = std::vector<int>{1, 0, 1};
  const ProtocolReport report =
      ghz_protocol(ix_blocks(), ix_blocks(), plus_zero_zero(), RunMode::Sampled,
                   0, options);
  REQUIRE(report.branches.size() == 1);
  REQUIRE(report.branches[0].label() == "a=1 b=0 c=1");
  REQUIRE(report.max_exact_distance < 1e-10);
}

TEST_CASE("forcing rejects malformed requests") {
  ProtocolOptions options;
  options.force = std::vector<int>{1, 0, 1};
  REQUIRE_THROWS_AS(ghz_protocol(ix_blocks(), ix_blocks(), plus_zero_zero(),
                                 RunMode::Enumerate, 0, options),
                    std::invalid_argument);

  options.force = std::vector<int>{1, 0};
  REQUIRE_THROWS_AS(ghz_protocol(ix_blocks(), ix_blocks(), plus_zero_zero(),
                                 RunMode::Sampled, 0, options),
                    std::invalid_argument);

  options.force = std::vector<int>{1, 0, 2};
  REQUIRE_THROWS_AS(ghz_protocol(ix_blocks(), ix_blocks(), plus_zero_zero(),
                                 RunMode::Sampled, 0, options),
                    std::invalid_argument);
}

TEST_CASE("the two-Bell baseline reaches the same target at double cost") {
  const DiagonalBlockOp u = haar_random_blocks(2, 31);
  const DiagonalBlockOp v = haar_random_blocks(1, 32);
  Rng rng(33);
  const StateVector initial = random_state(4, rng);

  const ProtocolReport baseline =
      two_bell_baseline(u, v, initial, RunMode::Enumerate);
  REQUIRE(baseline.branches.size() == 16);
  REQUIRE(baseline.max_exact_distance < 1e-10);
  REQUIRE(baseline.tally == ResourceTally{0, 2, 4, 4});
  REQUIRE(max_amplitude_gap(baseline.oracle_state,
                            sequential_target(u, v, initial)) < 1e-12);

  double sum = 0.0;
  for (const OutcomeBranch& branch : baseline.branches) {
    REQUIRE_THAT(branch.probability, WithinAbs(1.0 / 16.0, 1e-12));
    REQUIRE(branch.outcomes.size() == 4);
    sum += branch.probability;
    REQUIRE_NOTHROW(audit_transcript(branch.transcript));
  }
  REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));

  const OutcomeBranch& front = baseline.branches.front();
  REQUIRE(front.outcomes[0].first == "a1");
  REQUIRE(front.outcomes[1].first == "b1");
  REQUIRE(front.outcomes[2].first == "a2");
  REQUIRE(front.outcomes[3].first == "c2");
}

TEST_CASE("the baseline has no middle segment to reschedule") {
  ProtocolOptions options;
  options.middle_schedule = Schedule{PartyId::Bob, PartyId::Charlie};
  REQUIRE_THROWS_AS(two_bell_baseline(ix_blocks(), ix_blocks(),
                                      plus_zero_zero(), RunMode::Enumerate, 0,
                                      options),
                    std::invalid_argument);
}

TEST_CASE("middle-segment schedules do not change any branch") {
  const DiagonalBlockOp u = haar_random_blocks(1, 41);
  const DiagonalBlockOp v = haar_random_blocks(1, 42);
  Rng rng(43);
  const StateVector initial = random_state(3, rng);

  const ProtocolReport base = ghz_protocol(u, v, initial, RunMode::Enumerate);
  for (const Schedule& schedule : bob_charlie_interleavings(6, 6, 3, 44)) {
    ProtocolOptions options;
    options.middle_schedule = schedule;
    const ProtocolReport swept =
        ghz_protocol(u, v, initial, RunMode::Enumerate, 0, options);
    REQUIRE(swept.branches.size() == base.branches.size());
    for (std::size_t i = 0; i < base.branches.size(); ++i) {
      REQUIRE(swept.branches[i].outcomes == base.branches[i].outcomes);
      REQUIRE(max_amplitude_gap(swept.branches[i].final_state,
                                base.branches[i].final_state) < 1e-10);
    }
  }
}

/// Labels of enumerate-mode branches whose final state misses the oracle.
std::set<std::string> failing_labels(const ProtocolReport& report) {
  std::set<std::string> labels;
  for (const OutcomeBranch& branch : report.branches) {
    if (state_distance(branch.final_state, report.oracle_state)
            .exact_distance > 1e-6) {
      labels.insert(branch.label());
    }
  }
  return labels;
}

TEST_CASE("dropping a correction breaks exactly the branches that need it") {
  const DiagonalBlockOp u = haar_random_blocks(1, 51);
  const DiagonalBlockOp v = haar_random_blocks(1, 52);
  Rng rng(53);
  const StateVector initial = random_state(3, rng);

  SECTION("without Bob's conditional X, every a=1 branch is wrong") {
    ProtocolOptions options;
    options.skip_bob_x = true;
    const ProtocolReport report =
        ghz_protocol(u, v, initial, RunMode::Enumerate, 0, options);
    REQUIRE_FALSE(verify_report(report, kVerificationTol).pass);
    for (const OutcomeBranch& branch : report.branches) {
      const bool needs_fix = branch.bit("a") == 1;
      const bool failed = failing_labels(report).count(branch.label()) == 1;
      REQUIRE(failed == needs_fix);
    }
  }

  SECTION("without Charlie's conditional X, every a=1 branch is wrong") {
    ProtocolOptions options;
    options.skip_charlie_x = true;
    const ProtocolReport report =
        ghz_protocol(u, v, initial, RunMode::Enumerate, 0, options);
    for (const OutcomeBranch& branch : report.branches) {
      const bool needs_fix = branch.bit("a") == 1;
      const bool failed = failing_labels(report).count(branch.label()) == 1;
      REQUIRE(failed == needs_fix);
    }
  }

  SECTION("without the final Z, branches with an odd parity check are wrong") {
    ProtocolOptions options;
    options.skip_alice_z = true;
    const ProtocolReport report =
        ghz_protocol(u, v, initial, RunMode::Enumerate, 0, options);
    for (const OutcomeBranch& branch : report.branches) {
      const bool needs_fix = (branch.bit("b") ^ branch.bit("c")) == 1;
      const bool failed = failing_labels(report).count(branch.label()) == 1;
      REQUIRE(failed == needs_fix);
    }
  }
}

TEST_CASE("control decomposition splits on the first wire") {
  SECTION("a product state puts all weight on one side") {
    const ControlDecomposition d =
        decompose_on_control(tensor_product(basis_state(1, 0), bell_state()));
    REQUIRE_THAT(d.alpha0, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(d.alpha1, WithinAbs(0.0, 1e-12));
    REQUIRE(d.xi0.has_value());
    REQUIRE_FALSE(d.xi1.has_value());
    REQUIRE(max_amplitude_gap(*d.xi0, bell_state()) < 1e-12);
  }

  SECTION("the three-party state splits evenly into basis kets") {
    const ControlDecomposition d = decompose_on_control(ghz_state());
    const double root_half = std::sqrt(0.5);
    REQUIRE_THAT(d.alpha0, WithinAbs(root_half, 1e-12));
    REQUIRE_THAT(d.alpha1, WithinAbs(root_half, 1e-12));
    REQUIRE(max_amplitude_gap(*d.xi0, basis_state(2, 0)) < 1e-12);
    REQUIRE(max_amplitude_gap(*d.xi1, basis_state(2, 3)) < 1e-12);
  }

  SECTION("weights are real and the pieces rebuild the state") {
    Rng rng(61);
    for (int repeat = 0; repeat < 5; ++repeat) {
      const StateVector state = random_state(3, rng);
      const ControlDecomposition d = decompose_on_control(state);
      REQUIRE(d.alpha0 >= 0.0);
      REQUIRE(d.alpha1 >= 0.0);
      REQUIRE_THAT(d.alpha0 * d.alpha0 + d.alpha1 * d.alpha1,
                   WithinAbs(1.0, 1e-12));

      Eigen::VectorXcd rebuilt(state.dim());
      rebuilt.head(state.dim() / 2) = d.alpha0 * d.xi0->amplitudes();
      rebuilt.tail(state.dim() / 2) = d.alpha1 * d.xi1->amplitudes();
      REQUIRE(max_amplitude_gap(rebuilt, state.amplitudes()) < 1e-12);
    }
  }

  SECTION("a single qubit has no register to factor") {
    REQUIRE_THROWS_AS(decompose_on_control(basis_state(1, 0)),
                      std::invalid_argument);
  }
}

TEST_CASE("report verification flags the worst branch") {
  const DiagonalBlockOp u = haar_random_blocks(1, 71);
  const DiagonalBlockOp v = haar_random_blocks(1, 72);
  Rng rng(73);
  const StateVector initial = random_state(3, rng);
  ProtocolReport report = ghz_protocol(u, v, initial, RunMode::Enumerate);

  const Verdict good = verify_report(report, kVerificationTol);
  REQUIRE(good.pass);
  REQUIRE(good.failure_reason.empty());
  REQUIRE_THAT(good.probability_sum, WithinAbs(1.0, 1e-10));
  REQUIRE_FALSE(good.worst_branch.empty());

  // Corrupt one branch; the verdict must name it.
  report.branches[3].final_state = basis_state(3, 5);
  const Verdict bad = verify_report(report, kVerificationTol);
  REQUIRE_FALSE(bad.pass);
  REQUIRE(bad.worst_branch == report.branches[3].label());
  REQUIRE_FALSE(bad.failure_reason.empty());
  REQUIRE(bad.max_exact_distance > 0.1);

  report.branches.clear();
  const Verdict empty = verify_report(report, kVerificationTol);
  REQUIRE_FALSE(empty.pass);
  REQUIRE_THAT(empty.failure_reason, ContainsSubstring("no branches"));
}

TEST_CASE("interleaving schedules cover both serial orders plus samples") {
  const std::vector<Schedule> schedules = bob_charlie_interleavings(6, 6, 10, 5);
  REQUIRE(schedules.size() == 12);

  const Schedule bob_first(6, PartyId::Bob);
  REQUIRE(std::equal(bob_first.begin(), bob_first.end(),
                     schedules[0].begin()));
  REQUIRE(schedules[0][6] == PartyId::Charlie);
  REQUIRE(schedules[1][0] == PartyId::Charlie);
  REQUIRE(schedules[1][6] == PartyId::Bob);

  for (const Schedule& schedule : schedules) {
    REQUIRE(schedule.size() == 12);
    REQUIRE(std::count(schedule.begin(), schedule.end(), PartyId::Bob) == 6);
    REQUIRE(std::count(schedule.begin(), schedule.end(), PartyId::Charlie) ==
            6);
    REQUIRE(std::count(schedule.begin(), schedule.end(), PartyId::Alice) == 0);
  }

  REQUIRE(bob_charlie_interleavings(6, 6, 10, 5) == schedules);
  REQUIRE(bob_charlie_interleavings(6, 6, 10, 6) != schedules);

  const std::vector<Schedule> asym = bob_charlie_interleavings(2, 5, 4, 7);
  REQUIRE(asym.size() == 6);
  for (const Schedule& schedule : asym) {
    REQUIRE(std::count(schedule.begin(), schedule.end(), PartyId::Bob) == 2);
    REQUIRE(std::count(schedule.begin(), schedule.end(), PartyId::Charlie) ==
            5);
  }
}

}  // namespace
}  // namespace ghzlocc
