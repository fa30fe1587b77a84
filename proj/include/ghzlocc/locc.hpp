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

#ifndef GHZLOCC_LOCC_HPP_
#define GHZLOCC_LOCC_HPP_

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ghzlocc/qstate.hpp"

namespace ghzlocc {

enum class PartyId { Alice = 0, Bob = 1, Charlie = 2 };

inline constexpr std::array<PartyId, 3> kAllParties = {
    PartyId::Alice, PartyId::Bob, PartyId::Charlie};

std::string_view party_name(PartyId party);

enum class ResourceKind { Ghz, Bell };

/// Stable handle for a qubit in a LoccWorld. Handles survive register
/// shrinkage; positions in the global state are looked up at use time.
using WireId = int;

struct ClassicalMessage {
  PartyId sender;
  std::vector<PartyId> recipients;
  int bit;
  std::string tag;
};

struct ResourceTally {
  int ghz_consumed = 0;
  int bell_consumed = 0;
  // One per message, a broadcast counted once.
  int cbits = 0;
  // One per (sender, recipient) pair.
  int raw_directed_messages = 0;

  friend bool operator==(const ResourceTally&, const ResourceTally&) = default;
};

enum class EventKind { LocalGate, LocalMeasure, Send, Receive, ResourceClaim };

std::string_view event_kind_name(EventKind kind);

struct TranscriptEvent {
  PartyId actor;
  EventKind kind;
  std::string step_label;
  // Gate name, resource kind, or message tag.
  std::string detail;
  // Wires touched; for resource claims, parallel to `parties` (one owner per
  // new wire).
  std::vector<WireId> wires;
  // Resource owners, message recipients, or the sender of a received message.
  std::vector<PartyId> parties;
  int bit = -1;
  double probability = -1.0;
};

/// One event per line, tab-separated: actor, kind, step label, payload.
std::string format_event(const TranscriptEvent& event);
std::string format_transcript(const std::vector<TranscriptEvent>& events);

/// Replays a transcript and rechecks the locality and causality rules: local
/// events may touch only wires owned by the actor at event time, and every
/// receive must be covered by an earlier matching send. Throws LoccError on
/// the first violation.
void audit_transcript(const std::vector<TranscriptEvent>& events);

struct LoccError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A party acted on a wire it does not own.
struct OwnershipViolation : LoccError {
  using LoccError::LoccError;
};

/// A receive ran before the matching send existed.
struct CausalityFault : LoccError {
  using LoccError::LoccError;
};

/// No runnable step remained while programs were still unfinished.
struct DeadlockError : LoccError {
  DeadlockError(const std::string& what,
                std::vector<std::pair<PartyId, std::string>> blocked_parties)
      : LoccError(what), blocked(std::move(blocked_parties)) {}

  // (party, awaited tag) for every party stuck at a receive.
  std::vector<std::pair<PartyId, std::string>> blocked;
};

/// The shared physics of three parties restricted to local operations and
/// classical messages. Owns the global state, the wire ownership map, the
/// per-party mailboxes, the event transcript, and the resource tally.
class LoccWorld {
 public:
  /// World with no wires yet; resources may be installed into it.
  explicit LoccWorld(std::uint64_t seed = 0);

  /// World whose register starts as `initial`, with wire i owned by
  /// owners[i]. Wire ids 0..n-1 match the initial state's wire order.
  LoccWorld(const StateVector& initial, const std::vector<PartyId>& owners,
            std::uint64_t seed = 0);

  /// Extends the register by a shared resource state (GHZ: three distinct
  /// owners, Bell: two) and returns the new wire ids, one per owner in order.
  std::vector<WireId> install_resource(ResourceKind kind,
                                       const std::vector<PartyId>& owners,
                                       std::string_view step_label = "setup");

  /// Applies a gate to wires that must all be owned by `party`.
  void local_apply(PartyId party, const Unitary& gate,
                   const std::vector<WireId>& wires,
                   std::string_view step_label = "",
                   std::string_view gate_label = "");

  struct LocalMeasurement {
    int outcome;
    double probability;
  };

  /// Measures an owned wire in the computational basis and retires it from
  /// the register and the ownership map.
  LocalMeasurement local_measure(PartyId party, WireId wire,
                                 std::optional<int> forced_outcome = {},
                                 std::string_view step_label = "");

  /// Delivers one classical bit to every recipient's mailbox. Counts one
  /// cbit per message and one raw directed message per recipient.
  void send_classical(const ClassicalMessage& message,
                      std::string_view step_label = "");

  /// Dequeues the first mailbox message carrying `tag`. Receiving a tag that
  /// was never sent is a causality fault.
  int receive_classical(PartyId party, const std::string& tag,
                        std::string_view step_label = "");

  bool has_message(PartyId party, const std::string& tag) const;

  int num_wires() const { return static_cast<int>(layout_.size()); }
  bool is_live(WireId wire) const { return ownership_.count(wire) != 0; }
  bool owns(PartyId party, WireId wire) const;
  PartyId owner(WireId wire) const;
  std::vector<WireId> wires_of(PartyId party) const;
  /// Position of a live wire in the register, counted from the most
  /// significant bit.
  int wire_position(WireId wire) const;

  const StateVector& state() const;
  const ResourceTally& tally() const { return tally_; }
  const std::vector<TranscriptEvent>& transcript() const { return transcript_; }
  Rng& rng() { return rng_; }

 private:
  void log(TranscriptEvent event) { transcript_.push_back(std::move(event)); }

  std::optional<StateVector> state_;
  std::vector<WireId> layout_;  // register order, most significant bit first
  std::map<WireId, PartyId> ownership_;
  std::array<std::deque<ClassicalMessage>, 3> mailbox_;
  std::vector<TranscriptEvent> transcript_;
  ResourceTally tally_;
  WireId next_wire_ = 0;
  Rng rng_;
};

/// Classical bits a party has measured or received, by name.
struct PartyMemory {
  std::map<std::string, int> bits;

  int at(const std::string& name) const;
};

/// One atomic action in a party program. Conditions are evaluated against
/// the party's own classical memory only, never against another party's
/// records.
class Step {
 public:
  using Condition = std::function<bool(const PartyMemory&)>;

  static Step gate(Unitary gate, std::vector<WireId> wires,
                   std::string step_label, std::string gate_label);
  static Step gate_if(Condition condition, Unitary gate,
                      std::vector<WireId> wires, std::string step_label,
                      std::string gate_label);
  static Step measure(WireId wire, std::string result_name,
                      std::optional<int> forced_outcome,
                      std::string step_label);
  static Step send(std::string tag, std::string value_name,
                   std::vector<PartyId> recipients, std::string step_label);
  static Step receive(std::string tag, std::string step_label);

  /// False only for a receive whose message has not arrived yet.
  bool ready(const LoccWorld& world, PartyId self) const;
  void run(LoccWorld& world, PartyId self, PartyMemory& memory) const;
  /// Tag a blocked receive waits for, empty otherwise.
  std::string awaiting() const;

 private:
  struct GateAction {
    Unitary gate;
    std::vector<WireId> wires;
    std::string gate_label;
    Condition condition;  // may be null: unconditional
  };
  struct MeasureAction {
    WireId wire;
    std::string result_name;
    std::optional<int> forced_outcome;
  };
  struct SendAction {
    std::string tag;
    std::string value_name;
    std::vector<PartyId> recipients;
  };
  struct ReceiveAction {
    std::string tag;
  };

  using Action =
      std::variant<GateAction, MeasureAction, SendAction, ReceiveAction>;

  Step(std::string label, Action action)
      : label_(std::move(label)), action_(std::move(action)) {}

  std::string label_;
  Action action_;
};

inline Step::Condition bit_is(std::string name, int value) {
  return [name = std::move(name), value](const PartyMemory& memory) {
    return memory.at(name) == value;
  };
}

inline Step::Condition bits_differ(std::string first, std::string second) {
  return [first = std::move(first),
          second = std::move(second)](const PartyMemory& memory) {
    return (memory.at(first) ^ memory.at(second)) == 1;
  };
}

struct PartyProgram {
  PartyId party;
  std::vector<Step> steps;
};

/// A proposed total order of party turns. Tokens only pick which party moves
/// next; each party's own step order is fixed by its program.
using Schedule = std::vector<PartyId>;

struct InterleavedRun {
  LoccWorld world;
  std::array<PartyMemory, 3> memory;
};

/// Executes the programs one atomic step at a time, following the schedule
/// where possible. A party whose next step is a receive without a pending
/// message is blocked; its turn is deferred and retried after others
/// advance, so the run completes exactly when the schedule is causally
/// realizable. Steps beyond the schedule's length run round-robin. Throws
/// DeadlockError, naming the blocked parties and awaited tags, if no
/// runnable step remains.
InterleavedRun run_interleaved(LoccWorld world,
                               const std::vector<PartyProgram>& programs,
                               const Schedule& schedule);

}  // namespace ghzlocc

#endif  // GHZLOCC_LOCC_HPP_
