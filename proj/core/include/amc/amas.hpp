#pragma once

// Asynchronous multi-agent systems: networks of agent automata with
// repertoires of choices. Shared events (same name in several agents'
// alphabets) synchronize; everything downstream (global model building,
// strategy checking, reductions) works on the validated structures here.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace amc {

using AgentId = uint32_t;
using LocalId = uint32_t;
using EventId = uint32_t;
using PropId = uint32_t;

// The silent event: always id 0, name "epsilon". It belongs to no agent.
inline constexpr EventId kEpsilon = 0;
inline constexpr const char* kEpsilonName = "epsilon";

// Dense string interner; ids are assigned in first-seen order so that
// serialization and hashing stay reproducible across runs.
class Interner {
public:
  uint32_t intern(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
  }
  std::optional<uint32_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& name(uint32_t id) const { return names_.at(id); }
  uint32_t size() const { return static_cast<uint32_t>(names_.size()); }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, uint32_t> index_;
};

// A choice: nonempty set of events the agent commits to. Events are kept
// sorted so equal choices compare equal.
struct Choice {
  std::vector<EventId> events;

  bool contains(EventId e) const {
    for (EventId x : events)
      if (x == e) return true;
    return false;
  }
  bool operator==(const Choice&) const = default;
};

struct LocalTransition {
  LocalId from;
  EventId event;
  LocalId to;
  bool operator==(const LocalTransition&) const = default;
};

struct AgentModule {
  std::string name;
  std::vector<std::string> local_names;  // dense LocalId -> name, declaration order
  LocalId initial = 0;
  std::vector<EventId> events;  // declaration order, global ids
  // repertoire[l] is the nonempty ordered list of choices at local state l;
  // choice order is significant (it fixes the strategy enumeration order).
  std::vector<std::vector<Choice>> repertoire;
  std::vector<LocalTransition> transitions;
  std::vector<PropId> props;                    // props declared by this agent
  std::vector<std::vector<PropId>> valuation;   // valuation[l], sorted

  uint32_t local_count() const { return static_cast<uint32_t>(local_names.size()); }
  bool has_event(EventId e) const {
    for (EventId x : events)
      if (x == e) return true;
    return false;
  }
  // Successors of (l, e); the local relation is a partial function on valid
  // user input, but expansions assembled by the kbsc module may be
  // relational, so callers get all targets.
  std::vector<LocalId> successors(LocalId l, EventId e) const {
    std::vector<LocalId> out;
    for (const auto& t : transitions)
      if (t.from == l && t.event == e) out.push_back(t.to);
    return out;
  }
};

struct Amas {
  std::vector<AgentModule> agents;
  Interner events;  // id 0 is always epsilon
  Interner props;   // global proposition table
  // owners[e] = sorted agent ids whose alphabet contains e; owners[epsilon]
  // is empty.
  std::vector<std::vector<AgentId>> owners;

  uint32_t agent_count() const { return static_cast<uint32_t>(agents.size()); }
  // Recomputes the owners table; call after any structural edit.
  void finalize();
  std::optional<AgentId> agent_by_name(const std::string& n) const {
    for (AgentId i = 0; i < agents.size(); ++i)
      if (agents[i].name == n) return i;
    return std::nullopt;
  }
};

struct Diagnostic {
  AgentId agent;         // offending agent, or UINT32_MAX for system-level
  std::string location;  // human-readable locus, e.g. "state q0"
  std::string rule;      // short rule id, e.g. "empty choice"
  std::string message;

  static constexpr AgentId kSystem = UINT32_MAX;
};

// Checks every AMAS structural invariant: initial state declared,
// transition events covered by the repertoire, per-(state,event)
// determinism, repertoires total with nonempty choices over the agent's own
// alphabet, propositions disjoint across agents, epsilon never declared.
// Returns an empty list iff the AMAS is valid.
std::vector<Diagnostic> validate(const Amas& amas);

// Agent(e): the set of agents whose alphabet contains e; empty for epsilon.
// Throws std::invalid_argument for an id that was never interned.
const std::vector<AgentId>& agents_of(const Amas& amas, EventId e);

std::string format_diagnostic(const Amas& amas, const Diagnostic& d);

}  // namespace amc
