#include "amc/model.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace amc {

namespace {

struct StateHash {
  size_t operator()(const GlobalState& g) const {
    size_t h = 1469598103934665603ull;
    for (LocalId l : g) {
      h ^= l;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Per-agent lookup tables rebuilt once per exploration.
struct AgentTables {
  // succ[l] sorted by event; equal_range gives all targets of (l, e).
  std::vector<std::vector<std::pair<EventId, LocalId>>> succ;
};

std::vector<AgentTables> make_tables(const Amas& amas) {
  std::vector<AgentTables> tabs(amas.agent_count());
  for (AgentId i = 0; i < amas.agent_count(); ++i) {
    auto& t = tabs[i];
    t.succ.resize(amas.agents[i].local_count());
    for (const auto& tr : amas.agents[i].transitions) t.succ[tr.from].push_back({tr.event, tr.to});
    for (auto& v : t.succ) std::sort(v.begin(), v.end());
  }
  return tabs;
}

void targets_of(const AgentTables& t, LocalId l, EventId e, std::vector<LocalId>& out) {
  out.clear();
  const auto& v = t.succ[l];
  auto lo = std::lower_bound(v.begin(), v.end(), std::make_pair(e, LocalId{0}));
  for (auto it = lo; it != v.end() && it->first == e; ++it) out.push_back(it->second);
}

class SuccessorGen {
public:
  SuccessorGen(const Amas& amas, std::vector<AgentTables> tabs)
      : amas_(amas), tabs_(std::move(tabs)) {}

  void run(const GlobalState& g,
           const std::function<void(const ChoiceTuple&, EventId, const GlobalState&)>& fn) {
    const uint32_t n = amas_.agent_count();
    ChoiceTuple tuple(n, 0);
    std::vector<uint32_t> radix(n);
    for (AgentId i = 0; i < n; ++i) {
      radix[i] = static_cast<uint32_t>(amas_.agents[i].repertoire[g[i]].size());
      if (radix[i] == 0) throw std::logic_error("repertoire not total");
      if (radix[i] > 255) throw LimitError("too many choices at a local state", 255);
    }

    for (;;) {
      emit_tuple(g, tuple, fn);
      // next tuple, agent 0 most significant
      int i = static_cast<int>(n) - 1;
      while (i >= 0) {
        if (++tuple[i] < radix[i]) break;
        tuple[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }

private:
  void emit_tuple(const GlobalState& g, const ChoiceTuple& tuple,
                  const std::function<void(const ChoiceTuple&, EventId, const GlobalState&)>& fn) {
    const uint32_t n = amas_.agent_count();
    // Candidate outputs: events selected by at least one agent, in id order.
    candidates_.clear();
    for (AgentId i = 0; i < n; ++i) {
      const Choice& ch = amas_.agents[i].repertoire[g[i]][tuple[i]];
      candidates_.insert(candidates_.end(), ch.events.begin(), ch.events.end());
    }
    std::sort(candidates_.begin(), candidates_.end());
    candidates_.erase(std::unique(candidates_.begin(), candidates_.end()), candidates_.end());

    bool fired = false;
    for (EventId alpha : candidates_) {
      const auto& owners = amas_.owners[alpha];
      bool ok = true;
      owner_targets_.clear();
      for (AgentId j : owners) {
        const Choice& cj = amas_.agents[j].repertoire[g[j]][tuple[j]];
        if (!cj.contains(alpha)) {
          ok = false;
          break;
        }
        targets_of(tabs_[j], g[j], alpha, scratch_);
        if (scratch_.empty()) {
          ok = false;
          break;
        }
        owner_targets_.push_back(scratch_);
      }
      if (!ok) continue;
      fired = true;
      // Local relations are functions for user input but may branch for
      // assembled expansions; emit every combination.
      emit_combinations(g, tuple, alpha, owners, 0, fn);
    }
    if (!fired) fn(tuple, kEpsilon, g);
  }

  void emit_combinations(
      const GlobalState& g, const ChoiceTuple& tuple, EventId alpha,
      const std::vector<AgentId>& owners, size_t k,
      const std::function<void(const ChoiceTuple&, EventId, const GlobalState&)>& fn) {
    if (k == 0) succ_ = g;
    if (k == owners.size()) {
      fn(tuple, alpha, succ_);
      return;
    }
    for (LocalId to : owner_targets_[k]) {
      LocalId saved = succ_[owners[k]];
      succ_[owners[k]] = to;
      emit_combinations(g, tuple, alpha, owners, k + 1, fn);
      succ_[owners[k]] = saved;
    }
  }

  const Amas& amas_;
  std::vector<AgentTables> tabs_;
  std::vector<EventId> candidates_;
  std::vector<std::vector<LocalId>> owner_targets_;
  std::vector<LocalId> scratch_;
  GlobalState succ_;
};

}  // namespace

void for_each_transition(
    const Amas& amas, const GlobalState& g,
    const std::function<void(const ChoiceTuple&, EventId, const GlobalState&)>& fn) {
  SuccessorGen gen(amas, make_tables(amas));
  gen.run(g, fn);
}

Ioicgs build_model(std::shared_ptr<const Amas> amas, const BuildLimits& limits) {
  Ioicgs m;
  m.amas = amas;
  const Amas& a = *amas;

  SuccessorGen gen(a, make_tables(a));

  std::unordered_map<GlobalState, StateId, StateHash> index;
  std::map<ChoiceTuple, uint32_t> tuples;
  auto intern_tuple = [&](const ChoiceTuple& t) {
    auto [it, fresh] = tuples.emplace(t, static_cast<uint32_t>(m.tuple_table.size()));
    if (fresh) m.tuple_table.push_back(t);
    return it->second;
  };
  auto intern_state = [&](const GlobalState& g) -> std::pair<StateId, bool> {
    auto [it, fresh] = index.emplace(g, static_cast<StateId>(m.states.size()));
    if (fresh) {
      if (m.states.size() >= limits.max_states)
        throw LimitError("model too large", limits.max_states);
      m.states.push_back(g);
    }
    return {it->second, fresh};
  };

  GlobalState init(a.agent_count());
  for (AgentId i = 0; i < a.agent_count(); ++i) init[i] = a.agents[i].initial;
  intern_state(init);
  m.initial = 0;

  std::deque<StateId> frontier{0};
  m.trans_begin.push_back(0);
  // Breadth-first so state ids are stable; transitions are appended per
  // state, which keeps the CSR layout contiguous.
  while (!frontier.empty()) {
    StateId s = frontier.front();
    frontier.pop_front();
    if (s + 1 != m.trans_begin.size()) throw std::logic_error("exploration order broken");
    GlobalState g = m.states[s];
    gen.run(g, [&](const ChoiceTuple& tuple, EventId e, const GlobalState& dst) {
      auto [d, fresh] = intern_state(dst);
      if (fresh) frontier.push_back(d);
      m.transitions.push_back({s, intern_tuple(tuple), e, d});
    });
    m.trans_begin.push_back(static_cast<uint32_t>(m.transitions.size()));
  }

  m.state_props.resize(m.states.size());
  for (StateId s = 0; s < m.states.size(); ++s) {
    auto& props = m.state_props[s];
    for (AgentId i = 0; i < a.agent_count(); ++i) {
      LocalId l = m.states[s][i];
      if (l < a.agents[i].valuation.size()) {
        const auto& v = a.agents[i].valuation[l];
        props.insert(props.end(), v.begin(), v.end());
      }
    }
    std::sort(props.begin(), props.end());
    props.erase(std::unique(props.begin(), props.end()), props.end());
  }
  return m;
}

std::vector<EventId> enabled(const Ioicgs& m, StateId g) {
  if (g >= m.state_count()) throw std::invalid_argument("unknown state");
  std::vector<EventId> out;
  auto [b, e] = m.row(g);
  for (uint32_t k = b; k < e; ++k) out.push_back(m.transitions[k].event);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<EventId> enabled_by(const Ioicgs& m, StateId g,
                                const std::vector<std::pair<AgentId, uint32_t>>& partial) {
  if (g >= m.state_count()) throw std::invalid_argument("unknown state");
  const Amas& a = *m.amas;
  for (const auto& [agent, choice] : partial) {
    if (agent >= a.agent_count()) throw std::invalid_argument("unknown agent");
    if (choice >= a.agents[agent].repertoire[m.states[g][agent]].size())
      throw std::invalid_argument("choice not in repertoire");
  }
  std::vector<EventId> out;
  auto [b, e] = m.row(g);
  for (uint32_t k = b; k < e; ++k) {
    const Transition& t = m.transitions[k];
    const ChoiceTuple& tuple = m.tuple_of(t);
    bool agrees = true;
    for (const auto& [agent, choice] : partial) agrees &= (tuple[agent] == choice);
    if (agrees) out.push_back(t.event);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<EventId> enabled_by_choice(const Ioicgs& m, StateId g,
                                       const std::vector<std::pair<AgentId, Choice>>& partial) {
  std::vector<std::pair<AgentId, uint32_t>> resolved;
  const Amas& a = *m.amas;
  if (g >= m.state_count()) throw std::invalid_argument("unknown state");
  for (const auto& [agent, ch] : partial) {
    if (agent >= a.agent_count()) throw std::invalid_argument("unknown agent");
    const auto& rep = a.agents[agent].repertoire[m.states[g][agent]];
    auto it = std::find(rep.begin(), rep.end(), ch);
    if (it == rep.end()) throw std::invalid_argument("choice not in repertoire");
    resolved.push_back({agent, static_cast<uint32_t>(it - rep.begin())});
  }
  return enabled_by(m, g, resolved);
}

std::optional<StateId> find_state(const Ioicgs& m, const GlobalState& g) {
  for (StateId s = 0; s < m.state_count(); ++s)
    if (m.states[s] == g) return s;
  return std::nullopt;
}

}  // namespace amc
