#pragma once

// Execution semantics: the I/O iCGS induced by an AMAS. Global states are
// tuples of local states; transitions carry the full tuple of agents'
// choices (the input) and the executed event (the output). A choice tuple
// that enables no proper event contributes a silent self-loop, so the model
// is serial by construction.

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "amc/amas.hpp"

namespace amc {

using StateId = uint32_t;
using GlobalState = std::vector<LocalId>;

class LimitError : public std::runtime_error {
public:
  LimitError(std::string what, uint64_t limit)
      : std::runtime_error(std::move(what)), limit_(limit) {}
  uint64_t limit() const { return limit_; }

private:
  uint64_t limit_;
};

// Transition input: per agent, the index of the selected choice within the
// repertoire at the source state's local component. Tuples are interned.
using ChoiceTuple = std::vector<uint8_t>;

struct Transition {
  StateId src;
  uint32_t tuple;  // index into Ioicgs::tuple_table
  EventId event;   // kEpsilon for silent self-loops
  StateId dst;
};

struct BuildLimits {
  uint64_t max_states = 2'000'000;
};

struct Ioicgs {
  std::shared_ptr<const Amas> amas;
  std::vector<GlobalState> states;  // breadth-first discovery order
  StateId initial = 0;
  std::vector<Transition> transitions;     // grouped by src
  std::vector<uint32_t> trans_begin;       // CSR: transitions of s are [trans_begin[s], trans_begin[s+1])
  std::vector<ChoiceTuple> tuple_table;
  std::vector<std::vector<PropId>> state_props;  // union of local valuations, sorted

  uint32_t state_count() const { return static_cast<uint32_t>(states.size()); }
  uint32_t transition_count() const { return static_cast<uint32_t>(transitions.size()); }
  uint32_t eps_loop_count() const {
    uint32_t n = 0;
    for (const auto& t : transitions) n += (t.event == kEpsilon);
    return n;
  }
  std::pair<uint32_t, uint32_t> row(StateId s) const {
    return {trans_begin[s], trans_begin[s + 1]};
  }
  const ChoiceTuple& tuple_of(const Transition& t) const { return tuple_table[t.tuple]; }
};

// Enumerates every transition of Def-style semantics from the given global
// state: for each full choice tuple, the proper events it fires, or a
// silent self-loop if it fires none. Used by the model builder and by the
// partial-order reducer.
void for_each_transition(
    const Amas& amas, const GlobalState& g,
    const std::function<void(const ChoiceTuple&, EventId, const GlobalState&)>& fn);

// Fixed-point exploration from the initial global state. Throws LimitError
// ("model too large") past limits.max_states.
Ioicgs build_model(std::shared_ptr<const Amas> amas, const BuildLimits& limits = {});

// Events with at least one outgoing transition at g.
std::vector<EventId> enabled(const Ioicgs& m, StateId g);

// Events enabled by a partial choice assignment: only transitions whose
// tuple agrees with the assignment count. Each entry maps an agent to a
// choice index valid at g's local component; throws if out of range.
std::vector<EventId> enabled_by(const Ioicgs& m, StateId g,
                                const std::vector<std::pair<AgentId, uint32_t>>& partial);

// Same, but the choice is given by value; throws "choice not in repertoire"
// if an assigned choice is not in the agent's repertoire at g.
std::vector<EventId> enabled_by_choice(const Ioicgs& m, StateId g,
                                       const std::vector<std::pair<AgentId, Choice>>& partial);

std::optional<StateId> find_state(const Ioicgs& m, const GlobalState& g);

}  // namespace amc
