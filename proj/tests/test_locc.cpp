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
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "ghzlocc/gates.hpp"
#include "ghzlocc/locc.hpp"
#include "ghzlocc/qstate.hpp"
#include "test_support.hpp"

namespace ghzlocc {
namespace {

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using test::max_amplitude_gap;

constexpr PartyId kAlice = PartyId::Alice;
constexpr PartyId kBob = PartyId::Bob;
constexpr PartyId kCharlie = PartyId::Charlie;

TEST_CASE("installing a three-party resource shares one entangled triple") {
  LoccWorld world(7);
  const std::vector<WireId> wires =
      world.install_resource(ResourceKind::Ghz, {kAlice, kBob, kCharlie});

  REQUIRE(wires.size() == 3);
  REQUIRE(world.num_wires() == 3);
  REQUIRE(world.owner(wires[0]) == kAlice);
  REQUIRE(world.owner(wires[1]) == kBob);
  REQUIRE(world.owner(wires[2]) == kCharlie);
  REQUIRE(max_amplitude_gap(world.state(), ghz_state()) < 1e-12);
  REQUIRE(world.tally() == ResourceTally{1, 0, 0, 0});
  REQUIRE(world.transcript().size() == 1);
  REQUIRE(world.transcript().front().kind == EventKind::ResourceClaim);
}

TEST_CASE("installing a pair into an occupied world extends the register") {
  LoccWorld world(basis_state(1, 0), {kAlice});
  const std::vector<WireId> wires =
      world.install_resource(ResourceKind::Bell, {kBob, kCharlie});

  REQUIRE(world.num_wires() == 3);
  REQUIRE(wires == std::vector<WireId>{1, 2});
  const double root_half = std::sqrt(0.5);
  REQUIRE_THAT(std::abs(world.state().amplitude(0)),
               WithinAbs(root_half, 1e-12));
  REQUIRE_THAT(std::abs(world.state().amplitude(3)),
               WithinAbs(root_half, 1e-12));
  REQUIRE(world.tally() == ResourceTally{0, 1, 0, 0});
}

TEST_CASE("resource installation validates its owner list") {
  LoccWorld world;
  REQUIRE_THROWS_AS(world.install_resource(ResourceKind::Ghz, {kAlice, kBob}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      world.install_resource(ResourceKind::Bell, {kAlice, kBob, kCharlie}),
      std::invalid_argument);
  REQUIRE_THROWS_AS(world.install_resource(ResourceKind::Bell, {kBob, kBob}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(world.state(), LoccError);
}

TEST_CASE("a world built from an initial state checks the owner count") {
  REQUIRE_THROWS_AS(LoccWorld(bell_state(), {kAlice}), std::invalid_argument);
}

TEST_CASE("local gates act on owned wires only") {
  LoccWorld world;
  const std::vector<WireId> wires =
      world.install_resource(ResourceKind::Ghz, {kAlice, kBob, kCharlie});

  world.local_apply(kAlice, pauli_x(), {wires[0]});
  REQUIRE(max_amplitude_gap(world.state(),
                            apply_gate(ghz_state(), pauli_x(), {0})) < 1e-12);

  REQUIRE_THROWS_AS(world.local_apply(kAlice, pauli_x(), {wires[1]}),
                    OwnershipViolation);
  // A two-qubit gate may not straddle parties even if one wire is local.
  REQUIRE_THROWS_AS(world.local_apply(kBob, cnot(), {wires[1], wires[2]}),
                    OwnershipViolation);
}

TEST_CASE("measurement retires the wire and shifts later positions") {
  LoccWorld world;
  const std::vector<WireId> wires =
      world.install_resource(ResourceKind::Ghz, {kAlice, kBob, kCharlie});
  REQUIRE(world.wire_position(wires[2]) == 2);

  const LoccWorld::LocalMeasurement result =
      world.local_measure(kBob, wires[1], 1);
  REQUIRE(result.outcome == 1);
  REQUIRE_THAT(result.probability, WithinAbs(0.5, 1e-12));

  REQUIRE(world.num_wires() == 2);
  REQUIRE_FALSE(world.is_live(wires[1]));
  REQUIRE(world.wires_of(kBob).empty());
  REQUIRE(world.wire_position(wires[2]) == 1);
  REQUIRE_THROWS_AS(world.wire_position(wires[1]), std::invalid_argument);
  REQUIRE_THROWS_AS(world.owner(wires[1]), std::invalid_argument);
  REQUIRE(max_amplitude_gap(world.state(), basis_state(2, 3)) < 1e-12);

  REQUIRE_THROWS_AS(world.local_measure(kAlice, wires[1], 0),
                    OwnershipViolation);
}

TEST_CASE("the last live wire cannot be retired") {
  LoccWorld world(basis_state(1, 0), {kAlice});
  REQUIRE_THROWS_AS(world.local_measure(kAlice, 0, 0), LoccError);
}

TEST_CASE("classical messages are tagged, counted, and tag-filtered") {
  LoccWorld world;
  world.install_resource(ResourceKind::Ghz, {kAlice, kBob, kCharlie});

  world.send_classical({kAlice, {kBob, kCharlie}, 1, "a"});
  REQUIRE(world.tally() == ResourceTally{1, 0, 1, 2});
  REQUIRE(world.has_message(kBob, "a"));
  REQUIRE(world.has_message(kCharlie, "a"));
  REQUIRE_FALSE(world.has_message(kAlice, "a"));

  world.send_classical({kAlice, {kBob}, 0, "z"});
  REQUIRE(world.tally() == ResourceTally{1, 0, 2, 3});

  // Receiving by tag skips unrelated queued messages.
  REQUIRE(world.receive_classical(kBob, "z") == 0);
  REQUIRE(world.receive_classical(kBob, "a") == 1);
  REQUIRE_FALSE(world.has_message(kBob, "a"));
  REQUIRE(world.receive_classical(kCharlie, "a") == 1);

  REQUIRE_THROWS_AS(world.receive_classical(kBob, "a"), CausalityFault);
  REQUIRE_THROWS_AS(world.receive_classical(kCharlie, "never"), CausalityFault);
}

TEST_CASE("malformed classical messages are rejected") {
  LoccWorld world;
  world.install_resource(ResourceKind::Ghz, {kAlice, kBob, kCharlie});
  REQUIRE_THROWS_AS(world.send_classical({kAlice, {}, 0, "t"}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(world.send_classical({kAlice, {kAlice}, 0, "t"}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(world.send_classical({kAlice, {kBob, kBob}, 0, "t"}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(world.send_classical({kAlice, {kBob}, 2, "t"}),
                    std::invalid_argument);
}

LoccWorld bell_world(std::vector<WireId>& wires) {
  LoccWorld world;
  wires = world.install_resource(ResourceKind::Bell, {kAlice, kBob});
  return world;
}

std::vector<PartyProgram> collapse_and_fix(const std::vector<WireId>& wires,
                                           int forced) {
  std::vector<PartyProgram> programs(2);
  programs[0].party = kAlice;
  programs[0].steps.push_back(Step::measure(wires[0], "m", forced, "collapse"));
  programs[0].steps.push_back(Step::send("m", "m", {kBob}, "announce"));
  programs[1].party = kBob;
  programs[1].steps.push_back(Step::receive("m", "hear"));
  programs[1].steps.push_back(
      Step::gate_if(bit_is("m", 1), pauli_x(), {wires[1]}, "fix", "X"));
  return programs;
}

TEST_CASE("interleaved programs complete and update party memory") {
  std::vector<WireId> wires;
  LoccWorld world = bell_world(wires);

  InterleavedRun run = run_interleaved(
      std::move(world), collapse_and_fix(wires, 1),
      {kAlice, kAlice, kBob, kBob});

  REQUIRE(max_amplitude_gap(run.world.state(), basis_state(1, 0)) < 1e-12);
  REQUIRE(run.memory[static_cast<std::size_t>(kBob)].at("m") == 1);
  REQUIRE(run.memory[static_cast<std::size_t>(kAlice)].at("m") == 1);
  REQUIRE_THROWS_AS(run.memory[static_cast<std::size_t>(kBob)].at("nope"),
                    LoccError);
}

TEST_CASE("a blocked receive is deferred, not failed") {
  std::vector<WireId> wires;
  LoccWorld world = bell_world(wires);

  // Bob is scheduled first but his receive cannot run yet; the scheduler must
  // fall through to Alice and come back.
  InterleavedRun run = run_interleaved(
      std::move(world), collapse_and_fix(wires, 1),
      {kBob, kBob, kAlice, kAlice, kBob, kBob});
  REQUIRE(max_amplitude_gap(run.world.state(), basis_state(1, 0)) < 1e-12);
}

TEST_CASE("a short schedule falls back to round-robin") {
  std::vector<WireId> wires;
  LoccWorld world = bell_world(wires);
  InterleavedRun run =
      run_interleaved(std::move(world), collapse_and_fix(wires, 1), {});
  REQUIRE(max_amplitude_gap(run.world.state(), basis_state(1, 0)) < 1e-12);
}

TEST_CASE("a conditional gate whose condition is false leaves no trace") {
  std::vector<WireId> wires;
  LoccWorld world = bell_world(wires);
  InterleavedRun run = run_interleaved(
      std::move(world), collapse_and_fix(wires, 0), {kAlice, kAlice, kBob, kBob});

  REQUIRE(max_amplitude_gap(run.world.state(), basis_state(1, 0)) < 1e-12);
  const auto& transcript = run.world.transcript();
  REQUIRE(std::none_of(transcript.begin(), transcript.end(),
                       [](const TranscriptEvent& e) {
                         return e.actor == kBob && e.kind == EventKind::LocalGate;
                       }));
}

TEST_CASE("different realizable schedules agree on the outcome") {
  std::vector<Schedule> schedules = {
      {kAlice, kAlice, kBob, kBob},
      {kBob, kAlice, kBob, kAlice, kBob},
      {},
  };
  std::vector<Eigen::VectorXcd> finals;
  for (const Schedule& schedule : schedules) {
    std::vector<WireId> wires;
    LoccWorld world = bell_world(wires);
    InterleavedRun run =
        run_interleaved(std::move(world), collapse_and_fix(wires, 1), schedule);
    finals.push_back(run.world.state().amplitudes());
    REQUIRE(run.world.tally() == ResourceTally{0, 1, 1, 1});
  }
  REQUIRE(max_amplitude_gap(finals[0], finals[1]) < 1e-12);
  REQUIRE(max_amplitude_gap(finals[0], finals[2]) < 1e-12);
}

TEST_CASE("an unsatisfiable receive reports who is stuck on what") {
  std::vector<WireId> wires;
  LoccWorld world = bell_world(wires);

  std::vector<PartyProgram> programs(1);
  programs[0].party = kBob;
  programs[0].steps.push_back(Step::receive("ghost", "wait"));

  try {
    run_interleaved(std::move(world), programs, {kBob});
    FAIL("expected DeadlockError");
  } catch (const DeadlockError& error) {
    REQUIRE(error.blocked.size() == 1);
    REQUIRE(error.blocked[0].first == kBob);
    REQUIRE(error.blocked[0].second == "ghost");
    REQUIRE_THAT(error.what(), ContainsSubstring("Bob"));
    REQUIRE_THAT(error.what(), ContainsSubstring("ghost"));
  }
}

std::vector<TranscriptEvent> protocol_transcript() {
  std::vector<WireId> wires;
  LoccWorld world = bell_world(wires);
  InterleavedRun run = run_interleaved(
      std::move(world), collapse_and_fix(wires, 1), {kAlice, kAlice, kBob, kBob});
  return run.world.transcript();
}

TEST_CASE("a faithful transcript passes the audit") {
  REQUIRE_NOTHROW(audit_transcript(protocol_transcript()));
}

TEST_CASE("the audit rejects a gate on a foreign wire") {
  std::vector<TranscriptEvent> events = protocol_transcript();
  auto gate_event =
      std::find_if(events.begin(), events.end(), [](const TranscriptEvent& e) {
        return e.kind == EventKind::LocalGate;
      });
  REQUIRE(gate_event != events.end());
  gate_event->wires = {0};  // Alice's wire, but the actor is Bob
  REQUIRE_THROWS_AS(audit_transcript(events), LoccError);
}

TEST_CASE("the audit rejects a receive with no matching send") {
  std::vector<TranscriptEvent> events = protocol_transcript();
  auto receive_event =
      std::find_if(events.begin(), events.end(), [](const TranscriptEvent& e) {
        return e.kind == EventKind::Receive;
      });
  REQUIRE(receive_event != events.end());

  SECTION("altered bit") {
    receive_event->bit ^= 1;
    REQUIRE_THROWS_AS(audit_transcript(events), LoccError);
  }
  SECTION("receive reordered before the send") {
    auto send_event = std::find_if(
        events.begin(), events.end(),
        [](const TranscriptEvent& e) { return e.kind == EventKind::Send; });
    std::iter_swap(send_event, receive_event);
    REQUIRE_THROWS_AS(audit_transcript(events), LoccError);
  }
  SECTION("the same send consumed twice") {
    events.push_back(*receive_event);
    REQUIRE_THROWS_AS(audit_transcript(events), LoccError);
  }
}

TEST_CASE("the audit rejects a wire claimed twice") {
  std::vector<TranscriptEvent> events = protocol_transcript();
  events.push_back(events.front());  // replay the resource claim
  REQUIRE_THROWS_AS(audit_transcript(events), LoccError);
}

TEST_CASE("the audit rejects acting on a retired wire") {
  std::vector<TranscriptEvent> events = protocol_transcript();
  TranscriptEvent late_gate;
  late_gate.actor = kAlice;
  late_gate.kind = EventKind::LocalGate;
  late_gate.step_label = "late";
  late_gate.detail = "X";
  late_gate.wires = {0};  // Alice measured wire 0 earlier in this transcript
  REQUIRE(std::any_of(events.begin(), events.end(), [](const TranscriptEvent& e) {
    return e.kind == EventKind::LocalMeasure && e.wires == std::vector<WireId>{0};
  }));
  events.push_back(late_gate);
  REQUIRE_THROWS_AS(audit_transcript(events), LoccError);
}

TEST_CASE("event formatting is stable") {
  TranscriptEvent gate;
  gate.actor = kAlice;
  gate.kind = EventKind::LocalGate;
  gate.step_label = "step 1";
  gate.detail = "CNOT";
  gate.wires = {0, 3};
  REQUIRE(format_event(gate) == "Alice\tlocal_gate\tstep 1\tgate=CNOT wires=[0,3]");

  TranscriptEvent measure;
  measure.actor = kBob;
  measure.kind = EventKind::LocalMeasure;
  measure.wires = {4};
  measure.bit = 1;
  measure.probability = 0.5;
  REQUIRE(format_event(measure) ==
          "Bob\tlocal_measure\t-\twire=4 outcome=1 probability=0.5");

  TranscriptEvent send;
  send.actor = kAlice;
  send.kind = EventKind::Send;
  send.step_label = "step 1";
  send.detail = "a";
  send.parties = {kBob, kCharlie};
  send.bit = 0;
  REQUIRE(format_event(send) ==
          "Alice\tsend\tstep 1\ttag=a bit=0 to=[Bob,Charlie]");

  TranscriptEvent claim;
  claim.actor = kAlice;
  claim.kind = EventKind::ResourceClaim;
  claim.step_label = "setup";
  claim.detail = "ghz";
  claim.wires = {0, 1, 2};
  claim.parties = {kAlice, kBob, kCharlie};
  REQUIRE(format_event(claim) ==
          "Alice\tresource_claim\tsetup\tkind=ghz wires=[0,1,2] "
          "owners=[Alice,Bob,Charlie]");

  REQUIRE(format_transcript({gate, send}) ==
          format_event(gate) + "\n" + format_event(send) + "\n");
}

}  // namespace
}  // namespace ghzlocc
