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

#ifndef GHZLOCC_PROTOCOLS_HPP_
#define GHZLOCC_PROTOCOLS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghzlocc/gates.hpp"
#include "ghzlocc/locc.hpp"
#include "ghzlocc/qstate.hpp"

namespace ghzlocc {

enum class RunMode {
  // One run, measurement outcomes drawn from the world's rng.
  Sampled,
  // One run per forced outcome combination: 8 branches for the GHZ
  // protocol, 16 for the two-Bell baseline.
  Enumerate,
};

/// Optional protocol mutations and overrides, for fault-injection tests and
/// schedule sweeps. Defaults run the protocol faithfully.
struct ProtocolOptions {
  // Drop the conditional X on Bob's ancilla (GHZ protocol) or on the
  // round-1 partner ancilla (baseline).
  bool skip_bob_x = false;
  // Drop the conditional X on Charlie's ancilla, or round 2 of the baseline.
  bool skip_charlie_x = false;
  // Drop Alice's conditional Z correction (both rounds for the baseline).
  bool skip_alice_z = false;
  // Forced measurement outcomes in measurement order (GHZ: a, b, c;
  // baseline: a1, b1, a2, c2). Sampled mode only.
  std::optional<std::vector<int>> force;
  // Turn order for the Bob/Charlie segment of the GHZ protocol, between
  // Alice's opening and closing turns. The baseline rejects this: its two
  // rounds are inherently sequential.
  std::optional<Schedule> middle_schedule;
};

/// One protocol execution path: the measurement outcomes that label it, its
/// probability, the surviving register, and the event transcript.
struct OutcomeBranch {
  // (tag, bit) in measurement order: a, b, c for the GHZ protocol.
  std::vector<std::pair<std::string, int>> outcomes;
  // Product of the recorded probabilities of this branch's measurements.
  double probability;
  StateVector final_state;
  std::vector<TranscriptEvent> transcript;

  int bit(const std::string& tag) const;
  /// Space-separated "tag=bit" label, e.g. "a=0 b=1 c=1".
  std::string label() const;
};

struct ProtocolReport {
  std::vector<OutcomeBranch> branches;
  // What every branch must equal: the composite operation applied directly
  // to the initial state.
  StateVector oracle_state;
  double max_exact_distance;
  double min_fidelity;
  ResourceTally tally;
  RunMode mode;
};

/// Runs the three-party protocol: the parties share one GHZ state, Alice
/// entangles her data qubit with her ancilla and broadcasts the measured
/// bit, Bob and Charlie correct their ancillas, apply their block
/// operations, and send back their ancilla measurements, and Alice closes
/// with a conditional Z. Every branch's final state equals
/// compose_w(u, v) applied to `initial`, exactly, not only up to phase.
///
/// `initial` lives on 1 + N + M wires: Alice's control qubit first, then
/// Bob's N-qubit register, then Charlie's M-qubit register.
ProtocolReport ghz_protocol(const DiagonalBlockOp& u, const DiagonalBlockOp& v,
                            const StateVector& initial, RunMode mode,
                            std::uint64_t seed = 0,
                            const ProtocolOptions& options = {});

/// Runs the bipartite specialization twice in sequence: round 1 consumes a
/// Bell pair between Alice and Bob and implements u, round 2 consumes a
/// Bell pair between Alice and Charlie and implements v. Same oracle as
/// ghz_protocol; 16 branches in enumerate mode; tally shows two Bell pairs
/// and four classical bits.
ProtocolReport two_bell_baseline(const DiagonalBlockOp& u,
                                 const DiagonalBlockOp& v,
                                 const StateVector& initial, RunMode mode,
                                 std::uint64_t seed = 0,
                                 const ProtocolOptions& options = {});

/// Writes `state` as alpha0 |0>|xi0> + alpha1 |1>|xi1> on the first wire,
/// with alpha_i real and nonnegative and xi_i normalized (relative phases
/// absorbed into xi_i). A branch with alpha_i below kAlgebraTol has no
/// defined xi_i.
struct ControlDecomposition {
  double alpha0;
  std::optional<StateVector> xi0;
  double alpha1;
  std::optional<StateVector> xi1;
};

ControlDecomposition decompose_on_control(const StateVector& state);

/// Pass/fail summary of a report: every branch within `tolerance` of the
/// oracle, and (in enumerate mode) branch probabilities summing to 1.
struct Verdict {
  bool pass;
  double max_exact_distance;
  double min_fidelity;
  double probability_sum;
  // Label of the branch farthest from the oracle; empty if no branches.
  std::string worst_branch;
  // Empty when passing.
  std::string failure_reason;
};

Verdict verify_report(const ProtocolReport& report, double tolerance);

/// Turn orders for the middle segment of the GHZ protocol: both serial
/// orders (all of Bob then all of Charlie, and the reverse), followed by
/// `sampled` random interleavings drawn uniformly over the ways to merge
/// the two step sequences.
std::vector<Schedule> bob_charlie_interleavings(int bob_steps,
                                                int charlie_steps, int sampled,
                                                std::uint64_t seed);

}  // namespace ghzlocc

#endif  // GHZLOCC_PROTOCOLS_HPP_
