#include "amc/kbsc.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace amc {

Projection project(const Ioicgs& m, AgentId agent) {
  if (agent >= m.amas->agent_count()) throw std::invalid_argument("unknown agent");
  Projection p;
  p.agent = agent;
  p.model = &m;
  p.edges.resize(m.state_count());
  p.eps_adj.resize(m.state_count());

  const Amas& amas = *m.amas;
  for (StateId s = 0; s < m.state_count(); ++s) {
    uint32_t nchoices =
        static_cast<uint32_t>(amas.agents[agent].repertoire[m.states[s][agent]].size());
    p.edges[s].resize(nchoices);
  }
  for (const Transition& t : m.transitions) {
    const ChoiceTuple& tuple = m.tuple_of(t);
    uint32_t c = tuple[agent];
    const Choice& ch = amas.agents[agent].repertoire[m.states[t.src][agent]][c];
    // The agent's part of the label survives; everything it cannot observe
    // becomes a silent edge (and then links indistinguishable states).
    EventId label = (t.event != kEpsilon && ch.contains(t.event)) ? t.event : kEpsilon;
    p.edges[t.src][c].push_back({label, t.dst});
    if (label == kEpsilon) p.eps_adj[t.src].push_back(t.dst);
  }
  for (auto& per_state : p.edges)
    for (auto& v : per_state) {
      std::sort(v.begin(), v.end(), [](const ProjEdge& a, const ProjEdge& b) {
        return std::tie(a.event, a.dst) < std::tie(b.event, b.dst);
      });
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  for (auto& v : p.eps_adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return p;
}

std::vector<StateId> eps_closure(const Projection& p, const std::vector<StateId>& q) {
  std::vector<uint8_t> in(p.model->state_count(), 0);
  std::deque<StateId> work;
  for (StateId s : q) {
    if (s >= p.model->state_count()) throw std::invalid_argument("state outside model");
    if (!in[s]) {
      in[s] = 1;
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    StateId s = work.front();
    work.pop_front();
    for (StateId d : p.eps_adj[s])
      if (!in[d]) {
        in[d] = 1;
        work.push_back(d);
      }
  }
  std::vector<StateId> out;
  for (StateId s = 0; s < in.size(); ++s)
    if (in[s]) out.push_back(s);
  return out;
}

namespace {

// 64-bit FNV-1a over the canonical member list; knowledge states are named
// by this digest when the expansion is serialized.
uint64_t digest_of(const std::vector<StateId>& members) {
  uint64_t h = 1469598103934665603ull;
  for (StateId s : members) {
    for (int b = 0; b < 4; ++b) {
      h ^= (s >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string knowledge_name(const std::vector<StateId>& members, const std::string& loc_name) {
  std::ostringstream os;
  os << "k_" << loc_name << "_" << std::hex << digest_of(members);
  return os.str();
}

}  // namespace

AgentExpansion expand(const Projection& p) {
  const Ioicgs& m = *p.model;
  const Amas& amas = *m.amas;
  const AgentModule& src = amas.agents[p.agent];

  AgentExpansion ex;
  ex.agent = p.agent;

  std::map<std::vector<StateId>, uint32_t> index;
  auto intern = [&](std::vector<StateId> members) -> uint32_t {
    auto it = index.find(members);
    if (it != index.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(ex.knowledge.size());
    LocalId loc = m.states[members.front()][p.agent];
    index.emplace(members, id);
    ex.knowledge.push_back(std::move(members));
    ex.loc.push_back(loc);
    return id;
  };

  intern(eps_closure(p, {m.initial}));

  std::vector<std::vector<std::pair<EventId, uint32_t>>> tk;  // T_i^K edges per state

  for (uint32_t k = 0; k < ex.knowledge.size(); ++k) {
    const std::vector<StateId> members = ex.knowledge[k];
    const LocalId loc = ex.loc[k];
    const uint32_t nchoices = static_cast<uint32_t>(src.repertoire[loc].size());
    tk.resize(ex.knowledge.size());
    ex.succ.resize(ex.knowledge.size());
    ex.succ[k].resize(nchoices);

    for (uint32_t c = 0; c < nchoices; ++c) {
      // 2(a): proper-event successors of the knowledge set under choice c.
      std::vector<StateId> succ_set;
      for (StateId q : members)
        for (const ProjEdge& e : p.edges[q][c])
          if (e.event != kEpsilon) succ_set.push_back(e.dst);
      std::sort(succ_set.begin(), succ_set.end());
      succ_set.erase(std::unique(succ_set.begin(), succ_set.end()), succ_set.end());
      if (succ_set.empty()) continue;
      // 2(b): close under silent moves; 2(c): split into observation
      // classes (members of one class share the agent's local component).
      std::vector<StateId> closed = eps_closure(p, succ_set);
      std::map<LocalId, std::vector<StateId>> classes;
      for (StateId s : closed) classes[m.states[s][p.agent]].push_back(s);
      // 2(d)+(e): intern each class and connect it by every witnessing
      // event; several events between the same pair are all kept.
      for (auto& [l2, cls] : classes) {
        uint32_t id = intern(cls);
        ex.succ[k][c].push_back({l2, id});
        std::set<EventId> labels;
        for (StateId q : members)
          for (const ProjEdge& e : p.edges[q][c])
            if (e.event != kEpsilon &&
                std::binary_search(cls.begin(), cls.end(), e.dst))
              labels.insert(e.event);
        tk.resize(ex.knowledge.size());
        for (EventId ev : labels) tk[k].push_back({ev, id});
      }
    }
  }
  tk.resize(ex.knowledge.size());
  ex.succ.resize(ex.knowledge.size());

  // Package as an agent module over knowledge states.
  AgentModule mod;
  mod.name = src.name;
  mod.initial = 0;
  mod.events = src.events;
  mod.props = src.props;
  std::set<std::string> used_names;
  for (uint32_t k = 0; k < ex.knowledge.size(); ++k) {
    std::string name = knowledge_name(ex.knowledge[k], src.local_names[ex.loc[k]]);
    while (!used_names.insert(name).second) name += "_x";  // digest collision
    mod.local_names.push_back(name);
    mod.repertoire.push_back(src.repertoire[ex.loc[k]]);
    mod.valuation.push_back(ex.loc[k] < src.valuation.size() ? src.valuation[ex.loc[k]]
                                                             : std::vector<PropId>{});
  }
  for (uint32_t k = 0; k < tk.size(); ++k) {
    std::sort(tk[k].begin(), tk[k].end());
    tk[k].erase(std::unique(tk[k].begin(), tk[k].end()), tk[k].end());
    for (auto& [ev, dst] : tk[k]) mod.transitions.push_back({k, ev, dst});
  }
  ex.module = std::move(mod);
  return ex;
}

ExpandedAmas assemble_expanded(std::shared_ptr<const Amas> source,
                               std::shared_ptr<const Ioicgs> model) {
  ExpandedAmas ex;
  ex.source = source;
  ex.source_model = model;
  auto amas = std::make_shared<Amas>();
  amas->events = source->events;
  amas->props = source->props;
  for (AgentId i = 0; i < source->agent_count(); ++i) {
    Projection p = project(*model, i);
    ex.expansions.push_back(expand(p));
    amas->agents.push_back(ex.expansions.back().module);
  }
  amas->finalize();
  ex.amas = amas;
  return ex;
}

GlobalState loc_of(const ExpandedAmas& ex, const GlobalState& expanded_state) {
  GlobalState g(expanded_state.size());
  for (AgentId i = 0; i < expanded_state.size(); ++i)
    g[i] = ex.expansions[i].loc[expanded_state[i]];
  return g;
}

IntersectionResult check_intersection(const ExpandedAmas& ex, const Ioicgs& mk) {
  IntersectionResult res;
  const Ioicgs& src = *ex.source_model;
  for (StateId s = 0; s < mk.state_count(); ++s) {
    const GlobalState& gk = mk.states[s];
    std::vector<StateId> inter = ex.expansions[0].knowledge[gk[0]];
    for (AgentId i = 1; i < gk.size() && !inter.empty(); ++i) {
      const auto& ki = ex.expansions[i].knowledge[gk[i]];
      std::vector<StateId> next;
      std::set_intersection(inter.begin(), inter.end(), ki.begin(), ki.end(),
                            std::back_inserter(next));
      inter = std::move(next);
    }
    auto loc = find_state(src, loc_of(ex, gk));
    bool ok = loc && inter.size() == 1 && inter.front() == *loc;
    if (!ok) {
      res.holds = false;
      res.counterexample = s;
      return res;
    }
  }
  return res;
}

namespace {

// Transitions of state s using exactly the given interned-choice tuple
// shape: pairs (event, dst) for tuples identical to `want`.
void tuple_steps(const Ioicgs& m, StateId s, const ChoiceTuple& want,
                 std::vector<std::pair<EventId, StateId>>& out) {
  out.clear();
  auto [b, e] = m.row(s);
  for (uint32_t k = b; k < e; ++k) {
    const Transition& t = m.transitions[k];
    if (m.tuple_of(t) == want) out.push_back({t.event, t.dst});
  }
}

}  // namespace

bool simulate_check(const Ioicgs& m, const ExpandedAmas& ex, const Ioicgs& mk,
                    const std::vector<ChoiceTuple>& trace) {
  // Frontier of expanded matches per original execution prefix; the
  // original model may branch on (event, successor) for one tuple, so each
  // branch is replayed separately.
  struct Frame {
    StateId g;
    std::vector<StateId> matches;  // expanded states, sorted
    size_t depth;
  };

  std::vector<std::pair<EventId, StateId>> steps, ksteps;
  std::deque<Frame> work;
  work.push_back({m.initial, {mk.initial}, 0});

  // Memoized (state, matches, depth) triples already shown replayable.
  std::set<std::tuple<StateId, std::vector<StateId>, size_t>> seen;

  while (!work.empty()) {
    Frame fr = work.front();
    work.pop_front();
    if (fr.depth == trace.size()) continue;
    if (!seen.insert({fr.g, fr.matches, fr.depth}).second) continue;

    const ChoiceTuple& tuple = trace[fr.depth];
    if (tuple.size() != m.amas->agent_count())
      throw std::invalid_argument("trace tuple arity mismatch");
    for (AgentId i = 0; i < tuple.size(); ++i)
      if (tuple[i] >= m.amas->agents[i].repertoire[m.states[fr.g][i]].size())
        throw std::invalid_argument("trace not executable: choice out of range");

    tuple_steps(m, fr.g, tuple, steps);
    if (steps.empty()) throw std::invalid_argument("trace not executable");

    for (auto [out, dst] : steps) {
      // The expanded model must replay the same tuple and output from some
      // match, landing on states whose loc is the original successor.
      std::vector<StateId> next;
      for (StateId qk : fr.matches) {
        tuple_steps(mk, qk, tuple, ksteps);
        for (auto [kout, kdst] : ksteps)
          if (kout == out && loc_of(ex, mk.states[kdst]) == m.states[dst]) next.push_back(kdst);
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      if (next.empty()) return false;
      work.push_back({dst, std::move(next), fr.depth + 1});
    }
  }
  return true;
}

namespace {

bool exhaustive_replay(const Ioicgs& m, const ExpandedAmas& ex, const Ioicgs& mk, StateId g,
                       const std::vector<StateId>& matches, uint32_t remaining,
                       std::set<std::tuple<StateId, std::vector<StateId>, uint32_t>>& verified) {
  if (remaining == 0) return true;
  auto key = std::make_tuple(g, matches, remaining);
  if (verified.count(key)) return true;

  // Group this state's transitions by tuple.
  std::map<ChoiceTuple, std::vector<std::pair<EventId, StateId>>> by_tuple;
  auto [b, e] = m.row(g);
  for (uint32_t k = b; k < e; ++k) {
    const Transition& t = m.transitions[k];
    by_tuple[m.tuple_of(t)].push_back({t.event, t.dst});
  }
  std::vector<std::pair<EventId, StateId>> ksteps;
  for (const auto& [tuple, steps] : by_tuple) {
    for (auto [out, dst] : steps) {
      std::vector<StateId> next;
      for (StateId qk : matches) {
        auto [kb, ke] = mk.row(qk);
        for (uint32_t k = kb; k < ke; ++k) {
          const Transition& kt = mk.transitions[k];
          if (kt.event == out && mk.tuple_of(kt) == tuple &&
              loc_of(ex, mk.states[kt.dst]) == m.states[dst])
            next.push_back(kt.dst);
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      if (next.empty()) return false;
      if (!exhaustive_replay(m, ex, mk, dst, next, remaining - 1, verified)) return false;
    }
  }
  verified.insert(key);
  return true;
}

}  // namespace

bool simulate_check_exhaustive(const Ioicgs& m, const ExpandedAmas& ex, const Ioicgs& mk,
                               uint32_t depth) {
  std::set<std::tuple<StateId, std::vector<StateId>, uint32_t>> verified;
  return exhaustive_replay(m, ex, mk, m.initial, {mk.initial}, depth, verified);
}

uint32_t TransducerIf::step(uint32_t q, LocalId observed) const {
  if (memory_loc[q] == observed) return q;  // stuttering-invariant
  const auto& row = delta[q];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(observed, uint32_t{0}));
  if (it == row.end() || it->first != observed)
    throw OffStrategyError("off-strategy observation");
  return it->second;
}

bool TransducerIf::has_step(uint32_t q, LocalId observed) const {
  if (memory_loc[q] == observed) return true;
  const auto& row = delta[q];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(observed, uint32_t{0}));
  return it != row.end() && it->first == observed;
}

TransducerIf extract_transducer(const AgentExpansion& exp, const std::vector<uint32_t>& sigma_k) {
  if (sigma_k.size() != exp.knowledge.size())
    throw std::invalid_argument("strategy table shape mismatch");
  TransducerIf z;
  z.agent = exp.agent;
  z.initial = 0;
  z.memory_loc = exp.loc;
  z.output = sigma_k;
  z.delta.resize(exp.knowledge.size());
  for (uint32_t q = 0; q < exp.knowledge.size(); ++q) {
    for (auto [l2, q2] : exp.succ[q][sigma_k[q]]) {
      // A same-observation successor is shadowed by stuttering invariance.
      if (l2 == exp.loc[q]) continue;
      z.delta[q].push_back({l2, q2});
    }
    std::sort(z.delta[q].begin(), z.delta[q].end());
  }
  return z;
}

TransducerProduct transducer_product(const Ioicgs& m, const std::vector<TransducerIf>& zs) {
  TransducerProduct out;

  using PState = std::vector<uint32_t>;  // [model state, memory...]
  std::map<PState, StateId> index;
  std::vector<PState> pstates;
  auto intern = [&](const PState& ps) -> std::pair<StateId, bool> {
    auto [it, fresh] = index.emplace(ps, static_cast<StateId>(pstates.size()));
    if (fresh) pstates.push_back(ps);
    return {it->second, fresh};
  };

  PState init{m.initial};
  for (const auto& z : zs) init.push_back(z.initial);
  intern(init);

  std::deque<StateId> frontier{0};
  out.graph.initial = 0;
  while (!frontier.empty()) {
    StateId s = frontier.front();
    frontier.pop_front();
    const PState ps = pstates[s];
    StateId base = ps[0];
    out.graph.succ.resize(pstates.size());
    out.graph.props.resize(pstates.size());
    out.graph.props[s] = m.state_props[base];

    auto [b, e] = m.row(base);
    std::vector<StateId> succs;
    for (uint32_t k = b; k < e; ++k) {
      const Transition& t = m.transitions[k];
      const ChoiceTuple& tuple = m.tuple_of(t);
      bool agrees = true;
      for (size_t zi = 0; zi < zs.size() && agrees; ++zi) {
        uint32_t q = ps[1 + zi];
        agrees = (tuple[zs[zi].agent] == zs[zi].output[q]);
      }
      if (!agrees) continue;
      PState nxt{t.dst};
      bool defined = true;
      for (size_t zi = 0; zi < zs.size(); ++zi) {
        uint32_t q = ps[1 + zi];
        LocalId obs = m.states[t.dst][zs[zi].agent];
        if (!zs[zi].has_step(q, obs)) {
          defined = false;
          break;
        }
        nxt.push_back(zs[zi].step(q, obs));
      }
      if (!defined) {
        out.update_always_defined = false;
        continue;
      }
      auto [d, fresh] = intern(nxt);
      if (fresh) frontier.push_back(d);
      succs.push_back(d);
    }
    std::sort(succs.begin(), succs.end());
    succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
    out.graph.succ[s] = std::move(succs);
  }
  out.graph.succ.resize(pstates.size());
  out.graph.props.resize(pstates.size());
  out.base_state.resize(pstates.size());
  for (StateId s = 0; s < pstates.size(); ++s) out.base_state[s] = pstates[s][0];
  return out;
}

SoundResult check_iR_sound_on(std::shared_ptr<ExpandedAmas> expanded,
                              std::shared_ptr<Ioicgs> expanded_model, const Formula& f,
                              OutcomeMode mode, const CheckLimits& check_limits) {
  if (f.kind != Formula::Kind::Modality)
    throw std::invalid_argument("iR-sound checking needs a single strategic modality");
  if (mode != OutcomeMode::Std)
    throw std::invalid_argument("not supported: reactive preservation is conjectured only");

  SoundResult res;
  res.expanded = std::move(expanded);
  res.expanded_model = std::move(expanded_model);
  const Ioicgs& mk = *res.expanded_model;
  const Ioicgs& m = *res.expanded->source_model;
  const Amas& amas_k = *res.expanded->amas;

  uint64_t space = strategy_space_size(amas_k, f.coalition);
  if (space > check_limits.max_strategies) {
    std::ostringstream os;
    os << "enumeration too large: " << space << " strategies (limit "
       << check_limits.max_strategies << ")";
    throw LimitError(os.str(), check_limits.max_strategies);
  }

  // Agent ids, event ids and proposition ids are preserved by the
  // expansion, so the formula transfers unchanged. A memoryless witness on
  // the expanded game induces the transducers, but a knowledge refinement
  // that leaves the observation unchanged is invisible to them (the update
  // is stuttering-invariant), so each candidate is verified by replaying
  // its transducers on the original model; the first one whose replay
  // satisfies the goal is returned.
  std::vector<uint8_t> sat_lhs = eval_bexpr_states(mk, f.goal.lhs);
  std::vector<uint8_t> sat_rhs = eval_bexpr_states(mk, f.goal.rhs);
  StrategyIr sigma = first_strategy(amas_k, f.coalition);
  do {
    OutcomeGraph g = outcome_subgraph(mk, sigma, OutcomeMode::Std);
    if (!holds_on_all_paths(g, f.goal.op, sat_lhs, sat_rhs)) continue;
    std::vector<TransducerIf> witnesses;
    for (size_t k = 0; k < sigma.agents.size(); ++k)
      witnesses.push_back(
          extract_transducer(res.expanded->expansions[sigma.agents[k]], sigma.choice[k]));
    TransducerProduct prod = transducer_product(m, witnesses);
    if (!prod.update_always_defined) continue;
    if (!holds_on_all_paths(prod.graph, f.goal.op, f.goal.lhs, f.goal.rhs)) continue;
    res.verdict = SoundVerdict::SatisfiedSound;
    res.witnesses = std::move(witnesses);
    return res;
  } while (next_strategy(amas_k, sigma));
  res.verdict = SoundVerdict::Unknown;
  return res;
}

SoundResult check_iR_sound(std::shared_ptr<const Amas> amas, const Formula& f, OutcomeMode mode,
                           const BuildLimits& build_limits, const CheckLimits& check_limits) {
  if (f.kind != Formula::Kind::Modality)
    throw std::invalid_argument("iR-sound checking needs a single strategic modality");
  if (mode != OutcomeMode::Std)
    throw std::invalid_argument("not supported: reactive preservation is conjectured only");
  auto model = std::make_shared<Ioicgs>(build_model(amas, build_limits));
  auto expanded = std::make_shared<ExpandedAmas>(assemble_expanded(amas, model));
  auto expanded_model = std::make_shared<Ioicgs>(build_model(expanded->amas, build_limits));
  return check_iR_sound_on(std::move(expanded), std::move(expanded_model), f, mode, check_limits);
}

// Table format: one row per defined update,
//   (memory-state, observation) -> (next-memory-state, output-choice)
// including the stuttering rows.
std::string render_transducer(const Amas& amas, const TransducerIf& z,
                              const AgentExpansion& exp) {
  const AgentModule& src = amas.agents[z.agent];
  std::ostringstream os;
  os << "transducer " << src.name << " memory-states " << z.output.size() << " initial "
     << exp.module.local_names[z.initial] << "\n";
  auto choice_text = [&](uint32_t q) {
    const Choice& ch = src.repertoire[z.memory_loc[q]][z.output[q]];
    std::ostringstream cs;
    cs << "{";
    for (size_t i = 0; i < ch.events.size(); ++i)
      cs << (i ? "," : "") << amas.events.name(ch.events[i]);
    cs << "}";
    return cs.str();
  };
  for (uint32_t q = 0; q < z.output.size(); ++q) {
    os << "(" << exp.module.local_names[q] << ", " << src.local_names[z.memory_loc[q]]
       << ") -> (" << exp.module.local_names[q] << ", " << choice_text(q) << ")\n";
    for (auto [l, q2] : z.delta[q])
      os << "(" << exp.module.local_names[q] << ", " << src.local_names[l] << ") -> ("
         << exp.module.local_names[q2] << ", " << choice_text(q2) << ")\n";
  }
  return os.str();
}

}  // namespace amc
