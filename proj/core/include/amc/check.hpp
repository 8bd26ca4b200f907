#pragma once

// Memoryless-strategy model checking. A strategy fixes one choice per local
// state of each coalition agent; its outcome is a pruned subgraph of the
// model whose infinite paths are exactly the outcome paths. Goals are
// checked universally over that subgraph with until/release fixpoints.

#include <optional>

#include "amc/formula.hpp"
#include "amc/model.hpp"

namespace amc {

enum class OutcomeMode { Std, React };

// One choice index per local state of each coalition agent. Agents are
// sorted; choice[k][l] indexes agents[k]'s repertoire at local state l.
struct StrategyIr {
  std::vector<AgentId> agents;
  std::vector<std::vector<uint32_t>> choice;

  uint32_t choice_at(AgentId agent, LocalId l) const {
    for (size_t k = 0; k < agents.size(); ++k)
      if (agents[k] == agent) return choice[k][l];
    throw std::invalid_argument("agent not in coalition");
  }
};

// Pruned-transition view over a model; states/transitions outside the
// reachable outcome are masked off.
struct OutcomeGraph {
  const Ioicgs* model = nullptr;
  std::vector<uint8_t> state_in;
  std::vector<uint8_t> trans_in;

  uint32_t states_kept() const {
    uint32_t n = 0;
    for (uint8_t b : state_in) n += b;
    return n;
  }
  uint32_t transitions_kept() const {
    uint32_t n = 0;
    for (uint8_t b : trans_in) n += b;
    return n;
  }
};

// Validates sigma against the coalition's repertoires.
void validate_strategy(const Amas& amas, const StrategyIr& sigma);

// Std: keep transitions whose tuple agrees with sigma on the coalition.
// React: additionally drop silent loops at states where the strategy
// enables a proper event. Restricted to states reachable from the initial
// state through kept transitions.
OutcomeGraph outcome_subgraph(const Ioicgs& m, const StrategyIr& sigma, OutcomeMode mode);

// True iff every infinite path of the subgraph from the initial state
// satisfies the goal. sat_* are per-state evaluations of the operands.
bool holds_on_all_paths(const OutcomeGraph& g, TemporalOp op, const std::vector<uint8_t>& sat_lhs,
                        const std::vector<uint8_t>& sat_rhs);

// Minimal rooted graph for the same universal checks outside a model
// context (transducer products, oracles).
struct PathGraph {
  StateId initial = 0;
  std::vector<std::vector<StateId>> succ;
  std::vector<std::vector<PropId>> props;  // sorted per state
};

bool holds_on_all_paths(const PathGraph& g, TemporalOp op, const BExpr& lhs, const BExpr& rhs);

std::vector<uint8_t> eval_bexpr_states(const Ioicgs& m, const BExpr& e);

struct CheckLimits {
  uint64_t max_strategies = 10'000'000;
};

struct ModalityOutcome {
  bool holds = false;
  std::optional<StrategyIr> witness;  // first witness in canonical order
  uint64_t strategies_tried = 0;
};

struct CheckResult {
  bool verdict = false;
  std::vector<ModalityOutcome> modalities;  // syntactic order
};

// Evaluates an sATL formula at the initial state. Each modality enumerates
// the coalition's joint strategies in lexicographic (agent, local state,
// choice index) order and reports the first witness. Throws LimitError
// ("enumeration too large") if the strategy space exceeds the limit.
CheckResult check_ir(const Ioicgs& m, const Formula& f, OutcomeMode mode,
                     const CheckLimits& limits = {});

// Total number of joint strategies of the coalition.
uint64_t strategy_space_size(const Amas& amas, const std::vector<AgentId>& coalition);

// Canonical enumeration helper: strategy with all-zero choice indices.
StrategyIr first_strategy(const Amas& amas, const std::vector<AgentId>& coalition);
// Advances to the lexicographic successor; false when wrapped around.
bool next_strategy(const Amas& amas, StrategyIr& sigma);

std::string render_strategy(const Amas& amas, const StrategyIr& sigma);

}  // namespace amc
