#pragma once

// Partial-order reduction. The reducer explores the AMAS depth-first and,
// where a single opponent agent's enabled events are all private and
// invisible, expands only those (the ample set); silent loops are always
// re-added and any ample transition closing a DFS-stack cycle forces full
// expansion. The exact C1 validator and the bounded stuttering oracle
// cross-check the heuristic on the full model.

#include "amc/check.hpp"
#include "amc/formula.hpp"
#include "amc/model.hpp"

namespace amc {

struct ReductionContext {
  std::vector<AgentId> coalition;  // agents whose events are always visible
  std::vector<PropId> props;       // observed propositions
};

// True iff no coalition agent owns the event and no transition labeled with
// it changes the observed valuation. The silent event is always invisible.
bool invisible(const Ioicgs& m, const ReductionContext& ctx, EventId e);

// Independent: owner sets disjoint and not both visible.
bool independent(const Ioicgs& m, const ReductionContext& ctx, EventId a, EventId b);

struct AmpleDecision {
  StateId state;
  bool full;                    // true when the state was fully expanded
  AgentId agent = 0;            // the ample agent when !full
  std::vector<EventId> events;  // E(g); empty for deadlock states
};

struct ReducedModel {
  std::shared_ptr<const Amas> amas;
  Ioicgs model;
  std::vector<AmpleDecision> decisions;  // one per reduced state, id order
};

// Builds the reduced model directly from the AMAS without constructing the
// full state space.
ReducedModel reduce(std::shared_ptr<const Amas> amas, const ReductionContext& ctx,
                    const BuildLimits& limits = {});

struct C1Result {
  bool holds = true;
  // On failure: the events along a path from g that executes a dependent
  // event before any member of E.
  std::vector<EventId> counterexample;
};

// Exact check of the ample condition C1 at state g of the full model:
// explore using only transitions labeled outside E; no traversed label may
// be dependent on a member of E.
C1Result validate_c1(const Ioicgs& m, const ReductionContext& ctx, StateId g,
                     const std::vector<EventId>& ample);

enum class StutterVerdict { True, False, Inconclusive };

struct StutterResult {
  StutterVerdict verdict = StutterVerdict::Inconclusive;
  // For False: a lasso of the full model (stem + loop state ids) whose
  // destuttered valuation word no reduced-model lasso realizes.
  std::vector<StateId> witness_stem;
  std::vector<StateId> witness_loop;
  uint64_t lassos_checked = 0;
};

// Bounded stuttering-equivalence oracle: enumerates the full model's lassos
// that close within `bound` steps and requires the submodel to realize each
// destuttered PV-projected valuation word. True needs every walk of the
// full model to close a lasso within the bound; otherwise Inconclusive.
// False refutes stuttering path equivalence.
StutterResult stutter_equiv_bounded(const Ioicgs& m, const Ioicgs& sub,
                                    const ReductionContext& ctx, uint32_t bound,
                                    uint64_t step_budget = 50'000'000);

struct VerdictComparison {
  std::string formula;
  bool full_verdict;
  bool reduced_verdict;
  bool agree;
};

struct CompareReport {
  std::vector<VerdictComparison> rows;
  uint32_t disagreements = 0;
  uint32_t full_states = 0;
  uint32_t reduced_states = 0;
};

// Checks every formula on the full and the reduced model and reports
// disagreements (the preservation theorems predict none for formulas whose
// coalitions and propositions stay inside the context).
CompareReport compare_verdicts(std::shared_ptr<const Amas> amas, const ReductionContext& ctx,
                               const std::vector<Formula>& formulas, OutcomeMode mode,
                               const BuildLimits& build_limits = {},
                               const CheckLimits& check_limits = {});

// Submodel conditions of the reduced-model definition, checked
// structurally: states/transitions subsets, valuation restriction.
bool is_submodel(const Ioicgs& sub, const Ioicgs& full);

}  // namespace amc
