#include "amc/check.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace amc {

void validate_strategy(const Amas& amas, const StrategyIr& sigma) {
  // An empty coalition is legal here: its outcome is the whole model.
  if (!std::is_sorted(sigma.agents.begin(), sigma.agents.end()))
    throw std::invalid_argument("coalition agents must be sorted");
  if (sigma.choice.size() != sigma.agents.size())
    throw std::invalid_argument("strategy table shape mismatch");
  for (size_t k = 0; k < sigma.agents.size(); ++k) {
    AgentId i = sigma.agents[k];
    if (i >= amas.agent_count()) throw std::invalid_argument("unknown agent");
    const AgentModule& a = amas.agents[i];
    if (sigma.choice[k].size() != a.local_count())
      throw std::invalid_argument("strategy table shape mismatch");
    for (LocalId l = 0; l < a.local_count(); ++l)
      if (sigma.choice[k][l] >= a.repertoire[l].size())
        throw std::invalid_argument("strategy choice not in repertoire");
  }
}

OutcomeGraph outcome_subgraph(const Ioicgs& m, const StrategyIr& sigma, OutcomeMode mode) {
  validate_strategy(*m.amas, sigma);
  OutcomeGraph g;
  g.model = &m;
  g.state_in.assign(m.state_count(), 0);
  g.trans_in.assign(m.transition_count(), 0);

  auto agrees = [&](const Transition& t) {
    const ChoiceTuple& tuple = m.tuple_of(t);
    for (size_t k = 0; k < sigma.agents.size(); ++k) {
      AgentId i = sigma.agents[k];
      if (tuple[i] != sigma.choice[k][m.states[t.src][i]]) return false;
    }
    return true;
  };

  // Transitions of a reached state whose tuple agrees with the strategy are
  // kept; under React, silent loops survive only where the strategy enables
  // nothing but silence. Only rows of reached states are ever scanned.
  std::deque<StateId> frontier{m.initial};
  g.state_in[m.initial] = 1;
  std::vector<uint32_t> agreeing;
  while (!frontier.empty()) {
    StateId s = frontier.front();
    frontier.pop_front();
    auto [b, e] = m.row(s);
    agreeing.clear();
    bool proper_enabled = false;
    for (uint32_t k = b; k < e; ++k) {
      const Transition& t = m.transitions[k];
      if (!agrees(t)) continue;
      agreeing.push_back(k);
      proper_enabled |= (t.event != kEpsilon);
    }
    for (uint32_t k : agreeing) {
      const Transition& t = m.transitions[k];
      if (mode == OutcomeMode::React && proper_enabled && t.event == kEpsilon) continue;
      g.trans_in[k] = 1;
      if (!g.state_in[t.dst]) {
        g.state_in[t.dst] = 1;
        frontier.push_back(t.dst);
      }
    }
  }
  return g;
}

namespace {

// Reverse adjacency over kept transitions: for each kept (s -> t), an entry
// (t -> index of s's counter).
struct Reverse {
  std::vector<std::vector<StateId>> preds;   // preds[t] lists s once per kept edge
  std::vector<uint32_t> out_degree;          // kept out-degree per state
};

Reverse reverse_of(const OutcomeGraph& g) {
  const Ioicgs& m = *g.model;
  Reverse r;
  r.preds.resize(m.state_count());
  r.out_degree.assign(m.state_count(), 0);
  for (StateId s = 0; s < m.state_count(); ++s) {
    if (!g.state_in[s]) continue;
    auto [b, e] = m.row(s);
    for (uint32_t k = b; k < e; ++k) {
      if (!g.trans_in[k]) continue;
      const Transition& t = m.transitions[k];
      r.preds[t.dst].push_back(t.src);
      ++r.out_degree[t.src];
    }
  }
  return r;
}

// Least fixpoint for A[p U q]: q-states are good; a p-state becomes good
// once every kept successor edge leads to a good state.
bool all_paths_until(const OutcomeGraph& g, const std::vector<uint8_t>& p,
                     const std::vector<uint8_t>& q) {
  const Ioicgs& m = *g.model;
  Reverse r = reverse_of(g);
  std::vector<uint8_t> marked(m.state_count(), 0);
  std::vector<uint32_t> pending = r.out_degree;
  std::deque<StateId> work;
  for (StateId s = 0; s < m.state_count(); ++s)
    if (g.state_in[s] && q[s]) {
      marked[s] = 1;
      work.push_back(s);
    }
  while (!work.empty()) {
    StateId t = work.front();
    work.pop_front();
    for (StateId s : r.preds[t]) {
      if (--pending[s] == 0 && !marked[s] && p[s]) {
        marked[s] = 1;
        work.push_back(s);
      }
    }
  }
  return marked[m.initial];
}

// Greatest fixpoint for A[p R q]: start from q-states and peel off any
// state that is not shielded by p and has an escaping successor.
bool all_paths_release(const OutcomeGraph& g, const std::vector<uint8_t>& p,
                       const std::vector<uint8_t>& q) {
  const Ioicgs& m = *g.model;
  Reverse r = reverse_of(g);
  std::vector<uint8_t> in_z(m.state_count(), 0);
  std::deque<StateId> work;
  for (StateId s = 0; s < m.state_count(); ++s) {
    if (!g.state_in[s]) continue;
    if (q[s])
      in_z[s] = 1;
    else
      work.push_back(s);
  }
  while (!work.empty()) {
    StateId t = work.front();
    work.pop_front();
    for (StateId s : r.preds[t]) {
      if (in_z[s] && !p[s]) {
        in_z[s] = 0;
        work.push_back(s);
      }
    }
  }
  return in_z[m.initial];
}

}  // namespace

bool holds_on_all_paths(const OutcomeGraph& g, TemporalOp op, const std::vector<uint8_t>& sat_lhs,
                        const std::vector<uint8_t>& sat_rhs) {
  const uint32_t n = g.model->state_count();
  switch (op) {
    case TemporalOp::Finally: {
      std::vector<uint8_t> all(n, 1);
      return all_paths_until(g, all, sat_rhs);
    }
    case TemporalOp::Globally: {
      std::vector<uint8_t> none(n, 0);
      return all_paths_release(g, none, sat_rhs);
    }
    case TemporalOp::Until: return all_paths_until(g, sat_lhs, sat_rhs);
    case TemporalOp::Release: return all_paths_release(g, sat_lhs, sat_rhs);
  }
  return false;
}

bool holds_on_all_paths(const PathGraph& g, TemporalOp op, const BExpr& lhs, const BExpr& rhs) {
  const uint32_t n = static_cast<uint32_t>(g.succ.size());
  std::vector<uint8_t> p(n), q(n);
  for (uint32_t s = 0; s < n; ++s) {
    p[s] = eval_bexpr(lhs, g.props[s]);
    q[s] = eval_bexpr(rhs, g.props[s]);
  }
  if (op == TemporalOp::Finally) std::fill(p.begin(), p.end(), 1);
  if (op == TemporalOp::Globally) std::fill(p.begin(), p.end(), 0);

  std::vector<std::vector<StateId>> preds(n);
  std::vector<uint32_t> out_degree(n, 0);
  for (uint32_t s = 0; s < n; ++s) {
    out_degree[s] = static_cast<uint32_t>(g.succ[s].size());
    for (StateId d : g.succ[s]) preds[d].push_back(s);
  }

  if (op == TemporalOp::Finally || op == TemporalOp::Until) {
    std::vector<uint8_t> marked = q;
    std::vector<uint32_t> pending = out_degree;
    std::deque<StateId> work;
    for (uint32_t s = 0; s < n; ++s)
      if (marked[s]) work.push_back(s);
    while (!work.empty()) {
      StateId t = work.front();
      work.pop_front();
      for (StateId s : preds[t])
        if (--pending[s] == 0 && !marked[s] && p[s]) {
          marked[s] = 1;
          work.push_back(s);
        }
    }
    return marked[g.initial];
  }
  std::vector<uint8_t> in_z = q;
  std::deque<StateId> work;
  for (uint32_t s = 0; s < n; ++s)
    if (!in_z[s]) work.push_back(s);
  while (!work.empty()) {
    StateId t = work.front();
    work.pop_front();
    for (StateId s : preds[t])
      if (in_z[s] && !p[s]) {
        in_z[s] = 0;
        work.push_back(s);
      }
  }
  return in_z[g.initial];
}

std::vector<uint8_t> eval_bexpr_states(const Ioicgs& m, const BExpr& e) {
  std::vector<uint8_t> out(m.state_count());
  for (StateId s = 0; s < m.state_count(); ++s) out[s] = eval_bexpr(e, m.state_props[s]);
  return out;
}

uint64_t strategy_space_size(const Amas& amas, const std::vector<AgentId>& coalition) {
  uint64_t total = 1;
  for (AgentId i : coalition) {
    for (const auto& choices : amas.agents[i].repertoire) {
      total *= choices.size();
      if (total > (uint64_t{1} << 62)) return UINT64_MAX;
    }
  }
  return total;
}

StrategyIr first_strategy(const Amas& amas, const std::vector<AgentId>& coalition) {
  StrategyIr sigma;
  sigma.agents = coalition;
  for (AgentId i : coalition)
    sigma.choice.push_back(std::vector<uint32_t>(amas.agents[i].local_count(), 0));
  return sigma;
}

bool next_strategy(const Amas& amas, StrategyIr& sigma) {
  // Last (agent, local state) pair is least significant.
  for (size_t k = sigma.agents.size(); k-- > 0;) {
    const AgentModule& a = amas.agents[sigma.agents[k]];
    for (size_t l = sigma.choice[k].size(); l-- > 0;) {
      if (++sigma.choice[k][l] < a.repertoire[l].size()) return true;
      sigma.choice[k][l] = 0;
    }
  }
  return false;
}

namespace {

ModalityOutcome check_modality(const Ioicgs& m, const Formula& f, OutcomeMode mode,
                               const CheckLimits& limits) {
  const Amas& amas = *m.amas;
  uint64_t space = strategy_space_size(amas, f.coalition);
  if (space > limits.max_strategies) {
    std::ostringstream os;
    os << "enumeration too large: " << space << " strategies (limit " << limits.max_strategies
       << ")";
    throw LimitError(os.str(), limits.max_strategies);
  }

  std::vector<uint8_t> sat_lhs = eval_bexpr_states(m, f.goal.lhs);
  std::vector<uint8_t> sat_rhs = eval_bexpr_states(m, f.goal.rhs);

  ModalityOutcome out;
  StrategyIr sigma = first_strategy(amas, f.coalition);
  do {
    ++out.strategies_tried;
    OutcomeGraph g = outcome_subgraph(m, sigma, mode);
    if (holds_on_all_paths(g, f.goal.op, sat_lhs, sat_rhs)) {
      out.holds = true;
      out.witness = sigma;
      return out;
    }
  } while (next_strategy(amas, sigma));
  return out;
}

bool eval_formula(const Ioicgs& m, const Formula& f, OutcomeMode mode, const CheckLimits& limits,
                  std::vector<ModalityOutcome>& acc) {
  switch (f.kind) {
    case Formula::Kind::Const: return f.value;
    case Formula::Kind::Prop:
      return std::binary_search(m.state_props[m.initial].begin(),
                                m.state_props[m.initial].end(), f.prop);
    case Formula::Kind::Not: return !eval_formula(m, *f.lhs, mode, limits, acc);
    case Formula::Kind::And: {
      bool a = eval_formula(m, *f.lhs, mode, limits, acc);
      bool b = eval_formula(m, *f.rhs, mode, limits, acc);
      return a && b;
    }
    case Formula::Kind::Or: {
      bool a = eval_formula(m, *f.lhs, mode, limits, acc);
      bool b = eval_formula(m, *f.rhs, mode, limits, acc);
      return a || b;
    }
    case Formula::Kind::Modality: {
      acc.push_back(check_modality(m, f, mode, limits));
      return acc.back().holds;
    }
  }
  return false;
}

}  // namespace

CheckResult check_ir(const Ioicgs& m, const Formula& f, OutcomeMode mode,
                     const CheckLimits& limits) {
  CheckResult res;
  res.verdict = eval_formula(m, f, mode, limits, res.modalities);
  return res;
}

std::string render_strategy(const Amas& amas, const StrategyIr& sigma) {
  std::ostringstream os;
  for (size_t k = 0; k < sigma.agents.size(); ++k) {
    const AgentModule& a = amas.agents[sigma.agents[k]];
    for (LocalId l = 0; l < a.local_count(); ++l) {
      os << a.name << " " << a.local_names[l] << ": {";
      const Choice& ch = a.repertoire[l][sigma.choice[k][l]];
      for (size_t i = 0; i < ch.events.size(); ++i)
        os << (i ? "," : "") << amas.events.name(ch.events[i]);
      os << "}\n";
    }
  }
  return os.str();
}

}  // namespace amc
