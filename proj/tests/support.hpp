#pragma once

// Shared test fixtures and independent oracles. The reference transition
// oracle re-derives the execution semantics directly from the agent
// modules; the lasso oracle evaluates goals positionally on ultimately
// periodic paths. Both stay independent of the library's model builder and
// fixpoint checker so they can cross-validate them.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "amc/check.hpp"
#include "amc/dsl.hpp"
#include "amc/gen.hpp"
#include "amc/model.hpp"

namespace amc::test {

inline std::shared_ptr<const Amas> asvr(uint32_t n, uint32_t k) {
  return std::make_shared<Amas>(parse_amas(gen_asvr(n, k)));
}

// Two agents, one private invisible step each; the classic commuting
// diamond.
inline const char* kDiamondSrc = R"(
agent Left {
  states: l0, l1;
  init: l0;
  events: a;
  transitions: l0 -a-> l1;
  repertoire: l0: [{a}]; l1: [{a}];
}
agent Right {
  states: r0, r1;
  init: r0;
  events: b;
  transitions: r0 -b-> r1;
  repertoire: r0: [{b}]; r1: [{b}];
}
)";

// Same shape with labeled targets, so both steps are visible once the
// labels are observed.
inline const char* kLabeledDiamondSrc = R"(
agent Left {
  states: l0, l1;
  init: l0;
  events: a;
  transitions: l0 -a-> l1;
  repertoire: l0: [{a}]; l1: [{a}];
  labels: l1: pa;
}
agent Right {
  states: r0, r1;
  init: r0;
  events: b;
  transitions: r0 -b-> r1;
  repertoire: r0: [{b}]; r1: [{b}];
  labels: r1: pb;
}
)";

struct RefTransition {
  std::vector<uint32_t> tuple;  // choice index per agent
  EventId event;
  GlobalState dst;
};

// Literal reading of the execution semantics: a proper event fires for a
// tuple iff every owner selected it and can locally execute it; a tuple
// firing nothing yields a silent self-loop.
inline std::vector<RefTransition> ref_transitions(const Amas& amas, const GlobalState& g) {
  std::vector<RefTransition> out;
  const uint32_t n = amas.agent_count();
  std::vector<uint32_t> radix(n), tuple(n, 0);
  for (uint32_t i = 0; i < n; ++i)
    radix[i] = static_cast<uint32_t>(amas.agents[i].repertoire[g[i]].size());
  for (;;) {
    bool fired = false;
    for (EventId alpha = 1; alpha < amas.events.size(); ++alpha) {
      const auto& owners = amas.owners[alpha];
      if (owners.empty()) continue;
      bool ok = true;
      for (AgentId j : owners) {
        const Choice& cj = amas.agents[j].repertoire[g[j]][tuple[j]];
        ok &= cj.contains(alpha);
        ok &= !amas.agents[j].successors(g[j], alpha).empty();
      }
      if (!ok) continue;
      fired = true;
      GlobalState dst = g;
      for (AgentId j : owners) dst[j] = amas.agents[j].successors(g[j], alpha).front();
      out.push_back({tuple, alpha, dst});
    }
    if (!fired) out.push_back({tuple, kEpsilon, g});
    uint32_t i = n;
    while (i-- > 0) {
      if (++tuple[i] < radix[i]) break;
      tuple[i] = 0;
      if (i == 0) return out;
    }
  }
}

// Allowed steps of an outcome path at one state, derived from the outcome
// definitions only: the event must be enabled by a tuple agreeing with the
// strategy; under the reactive semantics a silent step additionally needs
// the strategy to enable nothing else.
inline std::vector<std::pair<EventId, StateId>> outcome_steps(const Ioicgs& m, StateId s,
                                                              const StrategyIr& sigma,
                                                              OutcomeMode mode) {
  std::set<EventId> agreeing;
  auto [b, e] = m.row(s);
  for (uint32_t k = b; k < e; ++k) {
    const Transition& t = m.transitions[k];
    const ChoiceTuple& tuple = m.tuple_of(t);
    bool ok = true;
    for (size_t j = 0; j < sigma.agents.size(); ++j)
      ok &= tuple[sigma.agents[j]] == sigma.choice[j][m.states[s][sigma.agents[j]]];
    if (ok) agreeing.insert(t.event);
  }
  bool drop_eps = mode == OutcomeMode::React &&
                  !(agreeing.size() == 1 && *agreeing.begin() == kEpsilon);
  std::vector<std::pair<EventId, StateId>> steps;
  for (uint32_t k = b; k < e; ++k) {
    const Transition& t = m.transitions[k];
    if (!agreeing.count(t.event)) continue;
    if (t.event == kEpsilon && drop_eps) continue;
    steps.push_back({t.event, t.dst});
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

struct Lasso {
  std::vector<StateId> stem;  // states before the loop entry
  std::vector<StateId> loop;  // loop states; the last one steps back to loop[0]
};

// All walks from `init` that close at their first revisited state, within
// the budget. `truncated` reports an unclosed walk hitting the cap.
inline std::vector<Lasso> enumerate_lassos(const std::vector<std::vector<StateId>>& succ,
                                           StateId init, uint32_t max_len, uint64_t budget,
                                           bool* truncated) {
  std::vector<Lasso> out;
  std::vector<int64_t> pos(succ.size(), -1);
  std::vector<StateId> walk{init};
  pos[init] = 0;
  struct Fr {
    StateId s;
    size_t next;
  };
  std::vector<Fr> stack{{init, 0}};
  *truncated = false;
  while (!stack.empty()) {
    Fr& f = stack.back();
    if (f.next >= succ[f.s].size()) {
      pos[f.s] = -1;
      walk.pop_back();
      stack.pop_back();
      continue;
    }
    StateId d = succ[f.s][f.next++];
    if (budget-- == 0) {
      *truncated = true;
      break;
    }
    if (pos[d] >= 0) {
      Lasso l;
      size_t j = static_cast<size_t>(pos[d]);
      l.stem.assign(walk.begin(), walk.begin() + static_cast<long>(j));
      l.loop.assign(walk.begin() + static_cast<long>(j), walk.end());
      out.push_back(std::move(l));
    } else if (walk.size() >= max_len) {
      *truncated = true;
    } else {
      walk.push_back(d);
      pos[d] = static_cast<int64_t>(walk.size()) - 1;
      stack.push_back({d, 0});
    }
  }
  return out;
}

// Positional goal evaluation on the ultimately periodic path stem.loop^w.
inline bool goal_on_lasso(const Ioicgs& m, const Lasso& l, const Goal& goal) {
  std::vector<StateId> line = l.stem;
  // Unrolling the loop twice covers every first-occurrence position.
  for (int rep = 0; rep < 2; ++rep) line.insert(line.end(), l.loop.begin(), l.loop.end());
  auto sat = [&](size_t i, const BExpr& e) { return eval_bexpr(e, m.state_props[line[i]]); };
  const size_t horizon = l.stem.size() + l.loop.size();
  switch (goal.op) {
    case TemporalOp::Finally:
      for (size_t i = 0; i < horizon; ++i)
        if (sat(i, goal.rhs)) return true;
      return false;
    case TemporalOp::Globally:
      for (size_t i = 0; i < horizon; ++i)
        if (!sat(i, goal.rhs)) return false;
      return true;
    case TemporalOp::Until:
      for (size_t i = 0; i < horizon; ++i) {
        if (sat(i, goal.rhs)) return true;
        if (!sat(i, goal.lhs)) return false;
      }
      return false;
    case TemporalOp::Release:
      for (size_t i = 0; i < horizon; ++i) {
        if (!sat(i, goal.rhs)) return false;
        if (sat(i, goal.lhs)) return true;
      }
      return true;
  }
  return false;
}

struct NaiveVerdict {
  bool decided = false;
  bool value = false;
};

// Naive modality check: enumerate strategies; for each, enumerate the
// outcome subrelation's lassos and evaluate the goal positionally on every
// one. Complete whenever no enumeration was truncated.
inline NaiveVerdict naive_check_modality(const Ioicgs& m, const Formula& f, OutcomeMode mode,
                                         uint64_t lasso_budget = 2'000'000) {
  NaiveVerdict v;
  v.decided = true;
  StrategyIr sigma = first_strategy(*m.amas, f.coalition);
  do {
    std::vector<std::vector<StateId>> succ(m.state_count());
    for (StateId s = 0; s < m.state_count(); ++s)
      for (auto [e, d] : outcome_steps(m, s, sigma, mode)) succ[s].push_back(d);
    for (auto& vv : succ) {
      std::sort(vv.begin(), vv.end());
      vv.erase(std::unique(vv.begin(), vv.end()), vv.end());
    }
    bool truncated = false;
    std::vector<Lasso> lassos =
        enumerate_lassos(succ, m.initial, m.state_count() + 1, lasso_budget, &truncated);
    if (truncated) {
      v.decided = false;
      return v;
    }
    bool all_good = true;
    for (const Lasso& l : lassos)
      if (!goal_on_lasso(m, l, f.goal)) {
        all_good = false;
        break;
      }
    if (all_good) {
      v.value = true;
      return v;
    }
  } while (next_strategy(*m.amas, sigma));
  v.value = false;
  return v;
}

}  // namespace amc::test
