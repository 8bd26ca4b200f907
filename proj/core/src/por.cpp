#include "amc/por.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace amc {

namespace {

std::vector<PropId> restrict_props(const std::vector<PropId>& sorted, const std::vector<PropId>& pv) {
  std::vector<PropId> out;
  std::set_intersection(sorted.begin(), sorted.end(), pv.begin(), pv.end(),
                        std::back_inserter(out));
  return out;
}

std::vector<PropId> sorted_props(const ReductionContext& ctx) {
  std::vector<PropId> pv = ctx.props;
  std::sort(pv.begin(), pv.end());
  pv.erase(std::unique(pv.begin(), pv.end()), pv.end());
  return pv;
}

// Invisibility decidable from the agent modules alone: an event changes the
// observed valuation iff some owner's local move does (propositions are
// per-agent and non-owners stand still). Used by the reducer, which never
// sees the full model.
bool static_invisible(const Amas& amas, const std::vector<AgentId>& coalition_sorted,
                      const std::vector<PropId>& pv, EventId e) {
  if (e == kEpsilon) return true;
  for (AgentId j : amas.owners[e]) {
    if (std::binary_search(coalition_sorted.begin(), coalition_sorted.end(), j)) return false;
    const AgentModule& a = amas.agents[j];
    for (const auto& t : a.transitions) {
      if (t.event != e) continue;
      if (restrict_props(a.valuation[t.from], pv) != restrict_props(a.valuation[t.to], pv))
        return false;
    }
  }
  return true;
}

}  // namespace

bool invisible(const Ioicgs& m, const ReductionContext& ctx, EventId e) {
  const Amas& amas = *m.amas;
  if (e >= amas.events.size()) throw std::invalid_argument("undeclared event");
  std::vector<AgentId> coal = ctx.coalition;
  std::sort(coal.begin(), coal.end());
  for (AgentId a : amas.owners[e])
    if (std::binary_search(coal.begin(), coal.end(), a)) return false;
  std::vector<PropId> pv = sorted_props(ctx);
  for (const Transition& t : m.transitions) {
    if (t.event != e) continue;
    if (restrict_props(m.state_props[t.src], pv) != restrict_props(m.state_props[t.dst], pv))
      return false;
  }
  return true;
}

bool independent(const Ioicgs& m, const ReductionContext& ctx, EventId a, EventId b) {
  const Amas& amas = *m.amas;
  if (a >= amas.events.size() || b >= amas.events.size())
    throw std::invalid_argument("undeclared event");
  const auto& oa = amas.owners[a];
  const auto& ob = amas.owners[b];
  std::vector<AgentId> inter;
  std::set_intersection(oa.begin(), oa.end(), ob.begin(), ob.end(), std::back_inserter(inter));
  if (!inter.empty()) return false;
  return invisible(m, ctx, a) || invisible(m, ctx, b);
}

namespace {

struct PendingTransition {
  uint32_t tuple;
  EventId event;
  StateId dst;
};

}  // namespace

ReducedModel reduce(std::shared_ptr<const Amas> amas, const ReductionContext& ctx,
                    const BuildLimits& limits) {
  const Amas& a = *amas;
  std::vector<AgentId> coal = ctx.coalition;
  std::sort(coal.begin(), coal.end());
  std::vector<PropId> pv = sorted_props(ctx);

  std::vector<uint8_t> event_invisible(a.events.size());
  for (EventId e = 0; e < a.events.size(); ++e)
    event_invisible[e] = static_invisible(a, coal, pv, e);

  // Locally enabled events of one agent at one local state, ascending.
  auto locally_enabled = [&](AgentId j, LocalId l) {
    std::vector<EventId> out;
    const AgentModule& ag = a.agents[j];
    for (const auto& ch : ag.repertoire[l])
      for (EventId e : ch.events)
        if (!ag.successors(l, e).empty()) out.push_back(e);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  ReducedModel red;
  red.amas = amas;
  Ioicgs& m = red.model;
  m.amas = amas;

  struct VecHash {
    size_t operator()(const GlobalState& g) const {
      size_t h = 1469598103934665603ull;
      for (LocalId l : g) {
        h ^= l;
        h *= 1099511628211ull;
      }
      return h;
    }
  };
  std::unordered_map<GlobalState, StateId, VecHash> index;
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

  std::vector<std::vector<PendingTransition>> kept;  // per state id
  std::vector<uint8_t> expanded, on_stack;
  red.decisions.resize(1);

  auto expand_state = [&](StateId s) {
    GlobalState g = m.states[s];
    // All Def-2 transitions from g, grouped up front.
    struct Row {
      ChoiceTuple tuple;
      EventId event;
      GlobalState dst;
    };
    std::vector<Row> rows;
    for_each_transition(a, g, [&](const ChoiceTuple& t, EventId e, const GlobalState& d) {
      rows.push_back({t, e, d});
    });
    std::vector<EventId> enabled_proper;
    for (const Row& r : rows)
      if (r.event != kEpsilon) enabled_proper.push_back(r.event);
    std::sort(enabled_proper.begin(), enabled_proper.end());
    enabled_proper.erase(std::unique(enabled_proper.begin(), enabled_proper.end()),
                         enabled_proper.end());

    // Ample candidate: the first agent outside the coalition whose locally
    // enabled events are all private, invisible, and globally enabled.
    std::vector<EventId> ample;
    AgentId ample_agent = 0;
    bool have_ample = false;
    for (AgentId j = 0; j < a.agent_count() && !have_ample; ++j) {
      if (std::binary_search(coal.begin(), coal.end(), j)) continue;
      std::vector<EventId> ej = locally_enabled(j, g[j]);
      if (ej.empty()) continue;
      bool ok = true;
      for (EventId e : ej) {
        ok &= (a.owners[e].size() == 1 && a.owners[e][0] == j);
        ok &= static_cast<bool>(event_invisible[e]);
        ok &= std::binary_search(enabled_proper.begin(), enabled_proper.end(), e);
        if (!ok) break;
      }
      if (ok) {
        ample = std::move(ej);
        ample_agent = j;
        have_ample = true;
      }
    }

    bool full = !have_ample || ample == enabled_proper;

    if (!full) {
      // Cycle condition: an ample transition closing a cycle on the DFS
      // stack (the closing segment is free of silent moves by
      // construction) forces full expansion.
      for (const Row& r : rows) {
        if (r.event == kEpsilon) continue;
        if (!std::binary_search(ample.begin(), ample.end(), r.event)) continue;
        auto it = index.find(r.dst);
        if (it != index.end() && it->second < on_stack.size() && on_stack[it->second]) {
          full = true;
          break;
        }
      }
    }

    AmpleDecision dec;
    dec.state = s;
    dec.full = full;
    if (!full) {
      dec.agent = ample_agent;
      dec.events = ample;
    } else {
      dec.events = enabled_proper;
    }

    kept.resize(std::max<size_t>(kept.size(), s + 1));
    for (const Row& r : rows) {
      bool keep = full || r.event == kEpsilon ||
                  std::binary_search(ample.begin(), ample.end(), r.event);
      if (!keep) continue;
      auto [d, fresh] = intern_state(r.dst);
      (void)fresh;
      kept[s].push_back({intern_tuple(r.tuple), r.event, d});
    }
    red.decisions.resize(m.states.size());
    red.decisions[s] = std::move(dec);
    expanded.resize(m.states.size(), 0);
    on_stack.resize(m.states.size(), 0);
    expanded[s] = 1;
  };

  struct Frame {
    StateId s;
    std::vector<StateId> children;
    size_t next = 0;
  };
  std::vector<Frame> stack;

  expanded.assign(1, 0);
  on_stack.assign(1, 0);
  on_stack[0] = 1;
  expand_state(0);
  {
    Frame f;
    f.s = 0;
    for (const auto& t : kept[0]) f.children.push_back(t.dst);
    stack.push_back(std::move(f));
  }
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next >= f.children.size()) {
      on_stack[f.s] = 0;
      stack.pop_back();
      continue;
    }
    StateId c = f.children[f.next++];
    if (c < expanded.size() && expanded[c]) continue;
    expanded.resize(std::max<size_t>(expanded.size(), c + 1), 0);
    on_stack.resize(std::max<size_t>(on_stack.size(), c + 1), 0);
    on_stack[c] = 1;
    expand_state(c);
    Frame nf;
    nf.s = c;
    for (const auto& t : kept[c]) nf.children.push_back(t.dst);
    stack.push_back(std::move(nf));
  }

  // Flatten into the CSR layout in state-id order.
  m.initial = 0;
  m.trans_begin.push_back(0);
  kept.resize(m.states.size());
  for (StateId s = 0; s < m.states.size(); ++s) {
    for (const auto& t : kept[s]) m.transitions.push_back({s, t.tuple, t.event, t.dst});
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
  red.decisions.resize(m.states.size());
  return red;
}

C1Result validate_c1(const Ioicgs& m, const ReductionContext& ctx, StateId g,
                     const std::vector<EventId>& ample) {
  C1Result res;
  std::vector<EventId> e_sorted = ample;
  std::sort(e_sorted.begin(), e_sorted.end());

  // Dependency against any ample member, precomputed per event.
  std::vector<int8_t> dep_cache(m.amas->events.size(), -1);
  auto dependent_on_ample = [&](EventId b) {
    if (dep_cache[b] >= 0) return dep_cache[b] == 1;
    bool dep = false;
    for (EventId e : e_sorted) dep |= !independent(m, ctx, b, e);
    dep_cache[b] = dep;
    return dep;
  };

  std::vector<int64_t> parent(m.state_count(), -1);        // predecessor state
  std::vector<EventId> via(m.state_count(), kEpsilon);     // event into the state
  std::vector<uint8_t> seen(m.state_count(), 0);
  std::deque<StateId> work{g};
  seen[g] = 1;
  while (!work.empty()) {
    StateId s = work.front();
    work.pop_front();
    auto [b, e] = m.row(s);
    for (uint32_t k = b; k < e; ++k) {
      const Transition& t = m.transitions[k];
      if (std::binary_search(e_sorted.begin(), e_sorted.end(), t.event)) continue;
      if (t.event != kEpsilon && dependent_on_ample(t.event)) {
        res.holds = false;
        std::vector<EventId> path{t.event};
        for (StateId cur = s; cur != g; cur = static_cast<StateId>(parent[cur]))
          path.push_back(via[cur]);
        std::reverse(path.begin(), path.end());
        res.counterexample = std::move(path);
        return res;
      }
      if (!seen[t.dst]) {
        seen[t.dst] = 1;
        parent[t.dst] = s;
        via[t.dst] = t.event;
        work.push_back(t.dst);
      }
    }
  }
  return res;
}

bool is_submodel(const Ioicgs& sub, const Ioicgs& full) {
  std::map<GlobalState, StateId> full_index;
  for (StateId s = 0; s < full.state_count(); ++s) full_index.emplace(full.states[s], s);

  std::vector<int64_t> to_full(sub.state_count(), -1);
  for (StateId s = 0; s < sub.state_count(); ++s) {
    auto it = full_index.find(sub.states[s]);
    if (it == full_index.end()) return false;
    to_full[s] = it->second;
    if (sub.state_props[s] != full.state_props[it->second]) return false;
  }
  if (sub.states[sub.initial] != full.states[full.initial]) return false;

  for (const Transition& t : sub.transitions) {
    StateId fs = static_cast<StateId>(to_full[t.src]);
    StateId fd = static_cast<StateId>(to_full[t.dst]);
    const ChoiceTuple& tuple = sub.tuple_table[t.tuple];
    bool found = false;
    auto [b, e] = full.row(fs);
    for (uint32_t k = b; k < e && !found; ++k) {
      const Transition& ft = full.transitions[k];
      found = ft.dst == fd && ft.event == t.event && full.tuple_table[ft.tuple] == tuple;
    }
    if (!found) return false;
  }
  return true;
}

namespace {

using Letter = uint32_t;

// Destuttered ultimately periodic valuation word in canonical form:
// primitive cycle, minimal prefix, no two consecutive letters equal.
struct UpWord {
  std::vector<Letter> prefix;
  std::vector<Letter> cycle;
  auto operator<=>(const UpWord&) const = default;
};

void make_canonical(UpWord& w) {
  // Primitive root of the cycle.
  const size_t n = w.cycle.size();
  for (size_t d = 1; d <= n / 2; ++d) {
    if (n % d) continue;
    bool periodic = true;
    for (size_t i = d; i < n && periodic; ++i) periodic = (w.cycle[i] == w.cycle[i % d]);
    if (periodic) {
      w.cycle.resize(d);
      break;
    }
  }
  // Minimal prefix: absorb a matching tail into a rotation of the cycle.
  while (!w.prefix.empty() && w.prefix.back() == w.cycle.back()) {
    w.cycle.insert(w.cycle.begin(), w.cycle.back());
    w.cycle.pop_back();
    w.prefix.pop_back();
  }
}

// Destutters stem . loop^omega. Emission states inside the loop repeat, so
// the periodic part is found by keying emissions on (loop position, letter).
UpWord destutter_lasso(const std::vector<Letter>& stem, const std::vector<Letter>& loop) {
  UpWord w;
  std::vector<Letter> emitted;
  bool have_last = false;
  Letter last = 0;
  for (Letter x : stem) {
    if (!have_last || x != last) emitted.push_back(x);
    last = x;
    have_last = true;
  }
  std::map<std::pair<size_t, Letter>, size_t> first_emit;
  size_t silent_steps = 0;
  for (size_t i = 0;; i = (i + 1) % loop.size()) {
    Letter x = loop[i];
    if (have_last && x == last) {
      if (++silent_steps > loop.size()) {
        // Constant tail: the whole loop stutters on the last letter.
        w.cycle = {last};
        w.prefix = emitted;
        make_canonical(w);
        return w;
      }
      continue;
    }
    silent_steps = 0;
    auto [it, fresh] = first_emit.emplace(std::make_pair(i, x), emitted.size());
    if (!fresh) {
      w.prefix.assign(emitted.begin(), emitted.begin() + static_cast<long>(it->second));
      w.cycle.assign(emitted.begin() + static_cast<long>(it->second), emitted.end());
      make_canonical(w);
      return w;
    }
    emitted.push_back(x);
    last = x;
    have_last = true;
  }
}

// Exact search for a lasso of `g` whose destuttered word equals `w`: align
// the graph with the word positions and look for a reachable cycle that
// makes progress around the word cycle.
bool word_realizable(const std::vector<std::vector<StateId>>& succ,
                     const std::vector<Letter>& letter, StateId initial, const UpWord& w) {
  const uint32_t np = static_cast<uint32_t>(w.prefix.size());
  const uint32_t nc = static_cast<uint32_t>(w.cycle.size());
  auto letter_at = [&](uint32_t pos) {
    return pos < np ? w.prefix[pos] : w.cycle[pos - np];
  };
  auto next_of = [&](uint32_t pos) {
    if (pos + 1 < np + nc) return pos + 1;
    return np;  // wrap within the cycle
  };

  struct Node {
    StateId s;
    uint32_t pos;
  };
  std::map<std::pair<StateId, uint32_t>, uint32_t> index;
  std::vector<Node> nodes;
  std::vector<std::vector<std::pair<uint32_t, bool>>> edges;  // (target, advance)
  auto intern = [&](StateId s, uint32_t pos) -> std::pair<uint32_t, bool> {
    auto [it, fresh] = index.emplace(std::make_pair(s, pos), static_cast<uint32_t>(nodes.size()));
    if (fresh) {
      nodes.push_back({s, pos});
      edges.emplace_back();
    }
    return {it->second, fresh};
  };

  uint32_t start_pos = 0;
  if (letter[initial] != letter_at(start_pos)) return false;
  std::deque<uint32_t> work;
  intern(initial, start_pos);
  work.push_back(0);
  while (!work.empty()) {
    uint32_t u = work.front();
    work.pop_front();
    Node nd = nodes[u];
    for (StateId d : succ[nd.s]) {
      Letter ld = letter[d];
      uint32_t nxt = next_of(nd.pos);
      if (nc == 1 && nd.pos >= np) {
        // Singleton cycle: staying on the letter is progress.
        if (ld == w.cycle[0]) {
          auto [v, fresh] = intern(d, nd.pos);
          edges[u].push_back({v, true});
          if (fresh) work.push_back(v);
        }
        continue;
      }
      if (ld == letter_at(nd.pos)) {
        auto [v, fresh] = intern(d, nd.pos);
        edges[u].push_back({v, false});
        if (fresh) work.push_back(v);
      } else if (ld == letter_at(nxt)) {
        auto [v, fresh] = intern(d, nxt);
        edges[u].push_back({v, nxt >= np});
        if (fresh) work.push_back(v);
      }
    }
  }

  // Iterative Tarjan; accept if an advance edge stays inside one SCC.
  const uint32_t n = static_cast<uint32_t>(nodes.size());
  std::vector<int64_t> idx(n, -1), low(n, 0);
  std::vector<uint8_t> on(n, 0);
  std::vector<uint32_t> comp(n, UINT32_MAX);
  std::vector<uint32_t> stk;
  uint32_t counter = 0, ncomp = 0;
  struct Fr {
    uint32_t v;
    size_t next;
  };
  for (uint32_t root = 0; root < n; ++root) {
    if (idx[root] >= 0) continue;
    std::vector<Fr> call{{root, 0}};
    idx[root] = low[root] = counter++;
    stk.push_back(root);
    on[root] = 1;
    while (!call.empty()) {
      Fr& f = call.back();
      if (f.next < edges[f.v].size()) {
        uint32_t to = edges[f.v][f.next++].first;
        if (idx[to] < 0) {
          idx[to] = low[to] = counter++;
          stk.push_back(to);
          on[to] = 1;
          call.push_back({to, 0});
        } else if (on[to]) {
          low[f.v] = std::min(low[f.v], idx[to]);
        }
      } else {
        if (low[f.v] == idx[f.v]) {
          for (;;) {
            uint32_t x = stk.back();
            stk.pop_back();
            on[x] = 0;
            comp[x] = ncomp;
            if (x == f.v) break;
          }
          ++ncomp;
        }
        uint32_t child = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[child]);
      }
    }
  }
  for (uint32_t u = 0; u < n; ++u)
    for (auto [v, advance] : edges[u])
      if (advance && comp[u] == comp[v]) return true;
  return false;
}

std::vector<std::vector<StateId>> distinct_successors(const Ioicgs& m) {
  std::vector<std::vector<StateId>> succ(m.state_count());
  for (StateId s = 0; s < m.state_count(); ++s) {
    auto [b, e] = m.row(s);
    for (uint32_t k = b; k < e; ++k) succ[s].push_back(m.transitions[k].dst);
    std::sort(succ[s].begin(), succ[s].end());
    succ[s].erase(std::unique(succ[s].begin(), succ[s].end()), succ[s].end());
  }
  return succ;
}

bool same_model(const Ioicgs& a, const Ioicgs& b) {
  if (a.state_count() != b.state_count() || a.transition_count() != b.transition_count())
    return false;
  std::set<GlobalState> sa(a.states.begin(), a.states.end());
  std::set<GlobalState> sb(b.states.begin(), b.states.end());
  return sa == sb && is_submodel(b, a);
}

}  // namespace

StutterResult stutter_equiv_bounded(const Ioicgs& m, const Ioicgs& sub,
                                    const ReductionContext& ctx, uint32_t bound,
                                    uint64_t step_budget) {
  StutterResult res;
  if (same_model(m, sub)) {
    res.verdict = StutterVerdict::True;
    return res;
  }

  std::vector<PropId> pv = sorted_props(ctx);
  std::map<std::vector<PropId>, Letter> letter_table;
  auto letters_of = [&](const Ioicgs& model) {
    std::vector<Letter> out(model.state_count());
    for (StateId s = 0; s < model.state_count(); ++s) {
      auto key = restrict_props(model.state_props[s], pv);
      auto [it, fresh] = letter_table.emplace(key, static_cast<Letter>(letter_table.size()));
      (void)fresh;
      out[s] = it->second;
    }
    return out;
  };
  std::vector<Letter> lm = letters_of(m);
  std::vector<Letter> ls = letters_of(sub);

  std::vector<std::vector<StateId>> succ_m = distinct_successors(m);
  std::vector<std::vector<StateId>> succ_s = distinct_successors(sub);

  // Enumerate the full model's lassos closing within the bound: walks that
  // stop at the first revisited state.
  struct Witness {
    std::vector<StateId> stem, loop;
  };
  std::map<UpWord, Witness> words;
  bool incomplete = false;
  uint64_t budget = step_budget;

  std::vector<int64_t> pos(m.state_count(), -1);
  std::vector<StateId> walk{m.initial};
  pos[m.initial] = 0;
  struct Fr {
    StateId s;
    size_t next;
  };
  std::vector<Fr> stack{{m.initial, 0}};
  while (!stack.empty()) {
    Fr& f = stack.back();
    if (f.next >= succ_m[f.s].size()) {
      pos[f.s] = -1;
      walk.pop_back();
      stack.pop_back();
      continue;
    }
    StateId d = succ_m[f.s][f.next++];
    if (budget == 0) {
      incomplete = true;
      break;
    }
    --budget;
    if (pos[d] >= 0) {
      size_t j = static_cast<size_t>(pos[d]);
      std::vector<Letter> stem_l, loop_l;
      for (size_t i = 0; i < j; ++i) stem_l.push_back(lm[walk[i]]);
      for (size_t i = j; i < walk.size(); ++i) loop_l.push_back(lm[walk[i]]);
      UpWord w = destutter_lasso(stem_l, loop_l);
      ++res.lassos_checked;
      if (!words.count(w)) {
        Witness wit;
        wit.stem.assign(walk.begin(), walk.begin() + static_cast<long>(j));
        wit.loop.assign(walk.begin() + static_cast<long>(j), walk.end());
        words.emplace(std::move(w), std::move(wit));
      }
    } else if (walk.size() >= bound) {
      incomplete = true;
    } else {
      walk.push_back(d);
      pos[d] = static_cast<int64_t>(walk.size()) - 1;
      stack.push_back({d, 0});
    }
  }

  for (const auto& [w, wit] : words) {
    if (!word_realizable(succ_s, ls, sub.initial, w)) {
      res.verdict = StutterVerdict::False;
      res.witness_stem = wit.stem;
      res.witness_loop = wit.loop;
      return res;
    }
  }
  res.verdict = incomplete ? StutterVerdict::Inconclusive : StutterVerdict::True;
  return res;
}

CompareReport compare_verdicts(std::shared_ptr<const Amas> amas, const ReductionContext& ctx,
                               const std::vector<Formula>& formulas, OutcomeMode mode,
                               const BuildLimits& build_limits, const CheckLimits& check_limits) {
  std::vector<AgentId> coal = ctx.coalition;
  std::sort(coal.begin(), coal.end());
  std::vector<PropId> pv = sorted_props(ctx);
  for (const Formula& f : formulas) {
    for (const Formula* mod : modalities_of(f))
      for (AgentId i : mod->coalition)
        if (!std::binary_search(coal.begin(), coal.end(), i))
          throw std::invalid_argument("formula out of ctx scope: coalition");
    for (PropId p : props_of(f))
      if (!std::binary_search(pv.begin(), pv.end(), p))
        throw std::invalid_argument("formula out of ctx scope: proposition");
  }

  Ioicgs full = build_model(amas, build_limits);
  ReducedModel red = reduce(amas, ctx, build_limits);

  CompareReport rep;
  rep.full_states = full.state_count();
  rep.reduced_states = red.model.state_count();
  for (const Formula& f : formulas) {
    VerdictComparison row;
    row.formula = render_formula(f, *amas);
    row.full_verdict = check_ir(full, f, mode, check_limits).verdict;
    row.reduced_verdict = check_ir(red.model, f, mode, check_limits).verdict;
    row.agree = row.full_verdict == row.reduced_verdict;
    rep.rows.push_back(row);
    rep.disagreements += !row.agree;
  }
  return rep;
}

}  // namespace amc
