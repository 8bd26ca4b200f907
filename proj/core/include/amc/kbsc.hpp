#pragma once

// Knowledge-based subset construction. A model is projected onto each
// agent, keeping that agent's part of every transition label; the
// projection is then determinized into an automaton over "knowledge
// states" (epsilon-closed, observation-homogeneous sets of global states).
// The collection of the per-agent expansions is again an AMAS; checking a
// memoryless strategy there yields a finite-memory strategy of the original
// game, which is the sound-but-incomplete route to perfect-recall checking.

#include "amc/check.hpp"
#include "amc/model.hpp"

namespace amc {

struct ProjEdge {
  EventId event;  // kEpsilon when the move is invisible to the agent
  StateId dst;
  bool operator==(const ProjEdge&) const = default;
};

struct Projection {
  AgentId agent = 0;
  const Ioicgs* model = nullptr;
  // edges[g][c]: projected transitions from g when the agent selects choice
  // index c of its repertoire at g's local component. Deduplicated.
  std::vector<std::vector<std::vector<ProjEdge>>> edges;
  // Label-stripped epsilon adjacency used by closures; deduplicated union
  // over all choices.
  std::vector<std::vector<StateId>> eps_adj;
};

Projection project(const Ioicgs& m, AgentId agent);

// Least superset of q closed under epsilon-labeled projected transitions,
// sorted. The choice label on epsilon edges is ignored: a move that does
// not involve the agent exists under every choice the agent could make.
std::vector<StateId> eps_closure(const Projection& p, const std::vector<StateId>& q);

struct AgentExpansion {
  AgentId agent = 0;
  // knowledge[k] is the sorted set of global states the agent considers
  // possible; all of them share the same local component loc[k].
  std::vector<std::vector<StateId>> knowledge;
  std::vector<LocalId> loc;
  // succ[k][c]: successor knowledge states reachable under choice c, as
  // (observed local state, knowledge id), sorted by local state. This is
  // the memory-update table of the extracted transducers.
  std::vector<std::vector<std::vector<std::pair<LocalId, uint32_t>>>> succ;
  // The expansion packaged as an agent module: local states are knowledge
  // states, repertoire and valuation are lifted through loc.
  AgentModule module;
};

AgentExpansion expand(const Projection& p);

struct ExpandedAmas {
  std::shared_ptr<const Amas> source;
  std::shared_ptr<const Ioicgs> source_model;
  std::shared_ptr<Amas> amas;  // agents are the expansions; events and props unchanged
  std::vector<AgentExpansion> expansions;
};

// Projects and expands every agent and assembles the expanded game.
ExpandedAmas assemble_expanded(std::shared_ptr<const Amas> source,
                               std::shared_ptr<const Ioicgs> model);

// The local-state tuple identified by an expanded global state.
GlobalState loc_of(const ExpandedAmas& ex, const GlobalState& expanded_state);

struct IntersectionResult {
  bool holds = true;
  std::optional<StateId> counterexample;  // expanded-model state id
};

// For every reachable expanded state, the intersection of its component
// knowledge sets must be exactly the singleton of its loc tuple.
IntersectionResult check_intersection(const ExpandedAmas& ex, const Ioicgs& mk);

// Replays a choice-tuple trace: every execution of the original model
// driven by the trace must be matched, step for step (same tuple, same
// output), by the expanded model through states whose loc is the original
// state. Throws if the trace is not executable in the original model.
bool simulate_check(const Ioicgs& m, const ExpandedAmas& ex, const Ioicgs& mk,
                    const std::vector<ChoiceTuple>& trace);

// Verifies the replay property for every executable choice-tuple trace up
// to the given depth.
bool simulate_check_exhaustive(const Ioicgs& m, const ExpandedAmas& ex, const Ioicgs& mk,
                               uint32_t depth);

class OffStrategyError : public std::runtime_error {
public:
  explicit OffStrategyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Finite-memory strategy as a deterministic transducer: memory states are
// the agent's knowledge states, inputs are observed local states, outputs
// are choices. The update function is partial; feeding an observation it
// does not cover reports an off-strategy error.
struct TransducerIf {
  AgentId agent = 0;
  uint32_t initial = 0;
  std::vector<LocalId> memory_loc;                              // loc per memory state
  std::vector<uint32_t> output;                                 // choice index at loc
  std::vector<std::vector<std::pair<LocalId, uint32_t>>> delta; // sorted by observation

  // Stuttering-invariant update: the current observation maps to the same
  // memory state.
  uint32_t step(uint32_t q, LocalId observed) const;
  bool has_step(uint32_t q, LocalId observed) const;
};

// sigma_k maps the expansion's knowledge states to choice indices.
TransducerIf extract_transducer(const AgentExpansion& exp, const std::vector<uint32_t>& sigma_k);

enum class SoundVerdict { SatisfiedSound, Unknown };

struct SoundResult {
  SoundVerdict verdict = SoundVerdict::Unknown;
  std::vector<TransducerIf> witnesses;  // one per coalition agent when satisfied
  std::shared_ptr<ExpandedAmas> expanded;
  std::shared_ptr<Ioicgs> expanded_model;
};

// Sound-but-incomplete check for perfect-recall/finite-memory satisfaction
// under the standard outcome semantics: model-check the expanded game with
// memoryless strategies; a positive answer transfers, a negative one means
// Unknown. Every candidate witness is verified by replaying its transducers
// on the original model before it is accepted: a knowledge refinement that
// leaves the observation unchanged cannot drive the stuttering-invariant
// memory update, so an unverified expanded-game witness may fail to
// transfer (see tests for a four-state example). The formula must be a
// single strategic modality. Passing the reactive mode throws (its
// preservation is only conjectured).
SoundResult check_iR_sound(std::shared_ptr<const Amas> amas, const Formula& f,
                           OutcomeMode mode = OutcomeMode::Std,
                           const BuildLimits& build_limits = {},
                           const CheckLimits& check_limits = {});

// Same procedure over an already-assembled expansion and its model.
SoundResult check_iR_sound_on(std::shared_ptr<ExpandedAmas> expanded,
                              std::shared_ptr<Ioicgs> expanded_model, const Formula& f,
                              OutcomeMode mode = OutcomeMode::Std,
                              const CheckLimits& check_limits = {});

// Product of the model with the coalition's transducers: transitions whose
// tuple disagrees with the transducer outputs are pruned, memory evolves by
// observation. Used to cross-validate SatisfiedSound verdicts by running
// the universal goal check on the result.
struct TransducerProduct {
  PathGraph graph;
  std::vector<StateId> base_state;  // product state -> original model state
  bool update_always_defined = true;
};

TransducerProduct transducer_product(const Ioicgs& m, const std::vector<TransducerIf>& zs);

std::string render_transducer(const Amas& amas, const TransducerIf& z,
                              const AgentExpansion& exp);

}  // namespace amc
