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

#include "ghzlocc/locc.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace ghzlocc {

namespace {

std::size_t party_index(PartyId party) { return static_cast<std::size_t>(party); }

std::string join_wires(const std::vector<WireId>& wires) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < wires.size(); ++i) {
    if (i != 0) out << ',';
    out << wires[i];
  }
  out << ']';
  return out.str();
}

std::string join_parties(const std::vector<PartyId>& parties) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < parties.size(); ++i) {
    if (i != 0) out << ',';
    out << party_name(parties[i]);
  }
  out << ']';
  return out.str();
}

void validate_message(const ClassicalMessage& message) {
  if (message.recipients.empty()) {
    throw std::invalid_argument("classical message needs at least one recipient");
  }
  std::set<PartyId> seen;
  for (PartyId r : message.recipients) {
    if (r == message.sender) {
      throw std::invalid_argument("a party cannot message itself");
    }
    if (!seen.insert(r).second) {
      throw std::invalid_argument("duplicate recipient in classical message");
    }
  }
  if (message.bit != 0 && message.bit != 1) {
    throw std::invalid_argument("classical message bit must be 0 or 1");
  }
}

}  // namespace

std::string_view party_name(PartyId party) {
  switch (party) {
    case PartyId::Alice:
      return "Alice";
    case PartyId::Bob:
      return "Bob";
    case PartyId::Charlie:
      return "Charlie";
  }
  return "?";
}

std::string_view event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::LocalGate:
      return "local_gate";
    case EventKind::LocalMeasure:
      return "local_measure";
    case EventKind::Send:
      return "send";
    case EventKind::Receive:
      return "receive";
    case EventKind::ResourceClaim:
      return "resource_claim";
  }
  return "?";
}

std::string format_event(const TranscriptEvent& event) {
  std::ostringstream out;
  out << party_name(event.actor) << '\t' << event_kind_name(event.kind) << '\t'
      << (event.step_label.empty() ? "-" : event.step_label) << '\t';
  switch (event.kind) {
    case EventKind::LocalGate:
      out << "gate=" << event.detail << " wires=" << join_wires(event.wires);
      break;
    case EventKind::LocalMeasure: {
      char prob[32];
      std::snprintf(prob, sizeof prob, "%.12g", event.probability);
      out << "wire=" << event.wires.front() << " outcome=" << event.bit
          << " probability=" << prob;
      break;
    }
    case EventKind::Send:
      out << "tag=" << event.detail << " bit=" << event.bit
          << " to=" << join_parties(event.parties);
      break;
    case EventKind::Receive:
      out << "tag=" << event.detail << " bit=" << event.bit
          << " from=" << party_name(event.parties.front());
      break;
    case EventKind::ResourceClaim:
      out << "kind=" << event.detail << " wires=" << join_wires(event.wires)
          << " owners=" << join_parties(event.parties);
      break;
  }
  return out.str();
}

std::string format_transcript(const std::vector<TranscriptEvent>& events) {
  std::string out;
  for (const TranscriptEvent& event : events) {
    out += format_event(event);
    out += '\n';
  }
  return out;
}

void audit_transcript(const std::vector<TranscriptEvent>& events) {
  std::map<WireId, PartyId> ownership;
  struct SentMessage {
    std::string tag;
    int bit;
    PartyId sender;
    std::vector<PartyId> recipients;
    std::set<PartyId> consumed;
  };
  std::vector<SentMessage> sent;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const TranscriptEvent& event = events[i];
    const std::string where = "transcript event " + std::to_string(i) + ": ";
    switch (event.kind) {
      case EventKind::ResourceClaim: {
        if (event.wires.size() != event.parties.size()) {
          throw LoccError(where + "resource claim owner list malformed");
        }
        for (std::size_t j = 0; j < event.wires.size(); ++j) {
          if (!ownership.emplace(event.wires[j], event.parties[j]).second) {
            throw LoccError(where + "wire claimed twice");
          }
        }
        break;
      }
      case EventKind::LocalGate:
      case EventKind::LocalMeasure: {
        for (WireId wire : event.wires) {
          auto it = ownership.find(wire);
          if (it == ownership.end()) {
            throw LoccError(where + std::string(party_name(event.actor)) +
                            " touched retired or unknown wire " +
                            std::to_string(wire));
          }
          if (it->second != event.actor) {
            throw LoccError(where + std::string(party_name(event.actor)) +
                            " touched wire " + std::to_string(wire) +
                            " owned by " + std::string(party_name(it->second)));
          }
        }
        if (event.kind == EventKind::LocalMeasure) {
          ownership.erase(event.wires.front());
        }
        break;
      }
      case EventKind::Send:
        sent.push_back({event.detail, event.bit, event.actor, event.parties, {}});
        break;
      case EventKind::Receive: {
        bool matched = false;
        for (SentMessage& message : sent) {
          if (message.tag != event.detail || message.bit != event.bit) continue;
          if (event.parties.empty() || message.sender != event.parties.front())
            continue;
          const bool addressed =
              std::find(message.recipients.begin(), message.recipients.end(),
                        event.actor) != message.recipients.end();
          if (!addressed || message.consumed.count(event.actor) != 0) continue;
          message.consumed.insert(event.actor);
          matched = true;
          break;
        }
        if (!matched) {
          throw LoccError(where + std::string(party_name(event.actor)) +
                          " received tag '" + event.detail +
                          "' with no matching earlier send");
        }
        break;
      }
    }
  }
}

LoccWorld::LoccWorld(std::uint64_t seed) : rng_(seed) {}

LoccWorld::LoccWorld(const StateVector& initial,
                     const std::vector<PartyId>& owners, std::uint64_t seed)
    : state_(initial), rng_(seed) {
  if (static_cast<int>(owners.size()) != initial.num_qubits()) {
    throw std::invalid_argument("owner list must name one party per wire");
  }
  for (std::size_t i = 0; i < owners.size(); ++i) {
    const WireId wire = next_wire_++;
    layout_.push_back(wire);
    ownership_.emplace(wire, owners[i]);
  }
  log({owners.empty() ? PartyId::Alice : owners.front(),
       EventKind::ResourceClaim, "setup", "initial", layout_, owners});
}

std::vector<WireId> LoccWorld::install_resource(
    ResourceKind kind, const std::vector<PartyId>& owners,
    std::string_view step_label) {
  const std::size_t expected = kind == ResourceKind::Ghz ? 3 : 2;
  if (owners.size() != expected) {
    throw std::invalid_argument(
        std::string(kind == ResourceKind::Ghz ? "ghz" : "bell") +
        " resource needs exactly " + std::to_string(expected) + " owners");
  }
  std::set<PartyId> distinct(owners.begin(), owners.end());
  if (distinct.size() != owners.size()) {
    throw std::invalid_argument("resource owners must be distinct parties");
  }

  const StateVector resource =
      kind == ResourceKind::Ghz ? ghz_state() : bell_state();
  state_ = state_.has_value() ? tensor_product(*state_, resource) : resource;

  std::vector<WireId> wires;
  for (PartyId owner : owners) {
    const WireId wire = next_wire_++;
    layout_.push_back(wire);
    ownership_.emplace(wire, owner);
    wires.push_back(wire);
  }
  if (kind == ResourceKind::Ghz) {
    ++tally_.ghz_consumed;
  } else {
    ++tally_.bell_consumed;
  }
  log({owners.front(), EventKind::ResourceClaim, std::string(step_label),
       kind == ResourceKind::Ghz ? "ghz" : "bell", wires, owners});
  return wires;
}

void LoccWorld::local_apply(PartyId party, const Unitary& gate,
                            const std::vector<WireId>& wires,
                            std::string_view step_label,
                            std::string_view gate_label) {
  std::vector<int> positions;
  positions.reserve(wires.size());
  for (WireId wire : wires) {
    if (!owns(party, wire)) {
      throw OwnershipViolation(std::string(party_name(party)) +
                               " may not act on wire " + std::to_string(wire) +
                               ": not a local qubit");
    }
    positions.push_back(wire_position(wire));
  }
  state_ = apply_gate(state(), gate, positions);
  log({party, EventKind::LocalGate, std::string(step_label),
       std::string(gate_label.empty() ? "U" : gate_label), wires, {}});
}

LoccWorld::LocalMeasurement LoccWorld::local_measure(
    PartyId party, WireId wire, std::optional<int> forced_outcome,
    std::string_view step_label) {
  if (!owns(party, wire)) {
    throw OwnershipViolation(std::string(party_name(party)) +
                             " may not measure wire " + std::to_string(wire) +
                             ": not a local qubit");
  }
  if (layout_.size() < 2) {
    throw LoccError("cannot retire the last live wire of the world");
  }
  const int position = wire_position(wire);
  MeasurementResult result =
      measure_computational(state(), position, rng_, forced_outcome);
  state_ = std::move(result.post_state);
  layout_.erase(layout_.begin() + position);
  ownership_.erase(wire);
  TranscriptEvent event{party,     EventKind::LocalMeasure,
                        std::string(step_label), "",
                        {wire},    {}};
  event.bit = result.outcome;
  event.probability = result.probability;
  log(std::move(event));
  return {result.outcome, result.probability};
}

void LoccWorld::send_classical(const ClassicalMessage& message,
                               std::string_view step_label) {
  validate_message(message);
  for (PartyId recipient : message.recipients) {
    mailbox_[party_index(recipient)].push_back(message);
  }
  tally_.cbits += 1;
  tally_.raw_directed_messages += static_cast<int>(message.recipients.size());
  TranscriptEvent event{message.sender, EventKind::Send,
                        std::string(step_label), message.tag,
                        {},             message.recipients};
  event.bit = message.bit;
  log(std::move(event));
}

int LoccWorld::receive_classical(PartyId party, const std::string& tag,
                                 std::string_view step_label) {
  auto& queue = mailbox_[party_index(party)];
  auto it = std::find_if(queue.begin(), queue.end(),
                         [&](const ClassicalMessage& m) { return m.tag == tag; });
  if (it == queue.end()) {
    throw CausalityFault(std::string(party_name(party)) +
                         " received tag '" + tag + "' before any send");
  }
  const ClassicalMessage message = *it;
  queue.erase(it);
  TranscriptEvent event{party, EventKind::Receive, std::string(step_label),
                        tag,   {},                 {message.sender}};
  event.bit = message.bit;
  log(std::move(event));
  return message.bit;
}

bool LoccWorld::has_message(PartyId party, const std::string& tag) const {
  const auto& queue = mailbox_[party_index(party)];
  return std::any_of(queue.begin(), queue.end(),
                     [&](const ClassicalMessage& m) { return m.tag == tag; });
}

bool LoccWorld::owns(PartyId party, WireId wire) const {
  auto it = ownership_.find(wire);
  return it != ownership_.end() && it->second == party;
}

PartyId LoccWorld::owner(WireId wire) const {
  auto it = ownership_.find(wire);
  if (it == ownership_.end()) {
    throw std::invalid_argument("wire " + std::to_string(wire) +
                                " is retired or unknown");
  }
  return it->second;
}

std::vector<WireId> LoccWorld::wires_of(PartyId party) const {
  std::vector<WireId> wires;
  for (WireId wire : layout_) {
    if (owns(party, wire)) wires.push_back(wire);
  }
  return wires;
}

int LoccWorld::wire_position(WireId wire) const {
  auto it = std::find(layout_.begin(), layout_.end(), wire);
  if (it == layout_.end()) {
    throw std::invalid_argument("wire " + std::to_string(wire) +
                                " is retired or unknown");
  }
  return static_cast<int>(it - layout_.begin());
}

const StateVector& LoccWorld::state() const {
  if (!state_.has_value()) {
    throw LoccError("world holds no qubits yet");
  }
  return *state_;
}

int PartyMemory::at(const std::string& name) const {
  auto it = bits.find(name);
  if (it == bits.end()) {
    throw LoccError("no classical bit named '" + name + "' in party memory");
  }
  return it->second;
}

Step Step::gate(Unitary gate, std::vector<WireId> wires, std::string step_label,
                std::string gate_label) {
  return Step(std::move(step_label),
              GateAction{std::move(gate), std::move(wires),
                         std::move(gate_label), nullptr});
}

Step Step::gate_if(Condition condition, Unitary gate, std::vector<WireId> wires,
                   std::string step_label, std::string gate_label) {
  return Step(std::move(step_label),
              GateAction{std::move(gate), std::move(wires),
                         std::move(gate_label), std::move(condition)});
}

Step Step::measure(WireId wire, std::string result_name,
                   std::optional<int> forced_outcome, std::string step_label) {
  return Step(std::move(step_label),
              MeasureAction{wire, std::move(result_name), forced_outcome});
}

Step Step::send(std::string tag, std::string value_name,
                std::vector<PartyId> recipients, std::string step_label) {
  return Step(std::move(step_label),
              SendAction{std::move(tag), std::move(value_name),
                         std::move(recipients)});
}

Step Step::receive(std::string tag, std::string step_label) {
  return Step(std::move(step_label), ReceiveAction{std::move(tag)});
}

bool Step::ready(const LoccWorld& world, PartyId self) const {
  if (const auto* receive = std::get_if<ReceiveAction>(&action_)) {
    return world.has_message(self, receive->tag);
  }
  return true;
}

void Step::run(LoccWorld& world, PartyId self, PartyMemory& memory) const {
  if (const auto* gate = std::get_if<GateAction>(&action_)) {
    if (gate->condition && !gate->condition(memory)) return;
    world.local_apply(self, gate->gate, gate->wires, label_, gate->gate_label);
  } else if (const auto* measure = std::get_if<MeasureAction>(&action_)) {
    const auto result =
        world.local_measure(self, measure->wire, measure->forced_outcome, label_);
    memory.bits[measure->result_name] = result.outcome;
  } else if (const auto* send = std::get_if<SendAction>(&action_)) {
    world.send_classical(
        {self, send->recipients, memory.at(send->value_name), send->tag},
        label_);
  } else if (const auto* receive = std::get_if<ReceiveAction>(&action_)) {
    memory.bits[receive->tag] = world.receive_classical(self, receive->tag, label_);
  }
}

std::string Step::awaiting() const {
  if (const auto* receive = std::get_if<ReceiveAction>(&action_)) {
    return receive->tag;
  }
  return "";
}

InterleavedRun run_interleaved(LoccWorld world,
                               const std::vector<PartyProgram>& programs,
                               const Schedule& schedule) {
  std::array<std::deque<const Step*>, 3> pending;
  for (const PartyProgram& program : programs) {
    auto& queue = pending[party_index(program.party)];
    for (const Step& step : program.steps) queue.push_back(&step);
  }
  std::array<PartyMemory, 3> memory;
  std::deque<PartyId> tokens(schedule.begin(), schedule.end());

  auto runnable = [&](PartyId party) {
    const auto& queue = pending[party_index(party)];
    return !queue.empty() && queue.front()->ready(world, party);
  };
  auto run_front = [&](PartyId party) {
    auto& queue = pending[party_index(party)];
    const Step* step = queue.front();
    queue.pop_front();
    step->run(world, party, memory[party_index(party)]);
  };
  auto steps_remain = [&] {
    return std::any_of(pending.begin(), pending.end(),
                       [](const auto& q) { return !q.empty(); });
  };

  while (steps_remain()) {
    // Prefer the earliest schedule token whose party can move; blocked
    // tokens stay queued and are retried once other parties advance.
    bool ran = false;
    for (auto it = tokens.begin(); it != tokens.end(); ++it) {
      if (pending[party_index(*it)].empty()) continue;
      if (!runnable(*it)) continue;
      const PartyId party = *it;
      tokens.erase(it);
      run_front(party);
      ran = true;
      break;
    }
    if (ran) continue;

    // Schedule exhausted or fully blocked: fall back to round-robin.
    for (PartyId party : kAllParties) {
      if (runnable(party)) {
        run_front(party);
        ran = true;
        break;
      }
    }
    if (ran) continue;

    std::vector<std::pair<PartyId, std::string>> blocked;
    std::string description = "deadlock:";
    for (PartyId party : kAllParties) {
      const auto& queue = pending[party_index(party)];
      if (queue.empty()) continue;
      const std::string tag = queue.front()->awaiting();
      blocked.emplace_back(party, tag);
      description += " " + std::string(party_name(party)) + " awaits '" + tag + "'";
    }
    throw DeadlockError(description, std::move(blocked));
  }
  return {std::move(world), std::move(memory)};
}

}  // namespace ghzlocc
