#include <doctest.h>

#include <set>

#include "amc/dsl.hpp"
#include "amc/kbsc.hpp"
#include "support.hpp"

using namespace amc;

namespace {

struct Fixture {
  std::shared_ptr<const Amas> amas;
  std::shared_ptr<Ioicgs> model;
  ExpandedAmas ex;
  std::shared_ptr<Ioicgs> mk;
};

Fixture expand_all(std::shared_ptr<const Amas> amas) {
  Fixture f;
  f.amas = amas;
  f.model = std::make_shared<Ioicgs>(build_model(amas));
  f.ex = assemble_expanded(amas, f.model);
  f.mk = std::make_shared<Ioicgs>(build_model(f.ex.amas));
  return f;
}

// Independent fixpoint closure over the projection's silent edges.
std::set<StateId> naive_closure(const Projection& p, std::set<StateId> q) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<StateId> add;
    for (StateId s : q)
      for (uint32_t c = 0; c < p.edges[s].size(); ++c)
        for (const ProjEdge& e : p.edges[s][c])
          if (e.event == kEpsilon && !q.count(e.dst)) add.insert(e.dst);
    if (!add.empty()) {
      q.insert(add.begin(), add.end());
      changed = true;
    }
  }
  return q;
}

}  // namespace

TEST_CASE("projection keeps the agent's part of each label") {
  auto amas = test::asvr(2, 2);
  Ioicgs m = build_model(amas);
  Projection p = project(m, 0);

  const AgentModule& voter = amas->agents[0];
  for (StateId s = 0; s < m.state_count(); ++s) {
    auto [b, e] = m.row(s);
    for (uint32_t k = b; k < e; ++k) {
      const Transition& t = m.transitions[k];
      uint32_t c = m.tuple_of(t)[0];
      const Choice& ch = voter.repertoire[m.states[s][0]][c];
      EventId expected = (t.event != kEpsilon && ch.contains(t.event)) ? t.event : kEpsilon;
      bool found = false;
      for (const ProjEdge& pe : p.edges[s][c])
        found |= (pe.event == expected && pe.dst == t.dst);
      CHECK(found);
      // Silent projected moves link indistinguishable states.
      if (expected == kEpsilon) CHECK(m.states[s][0] == m.states[t.dst][0]);
    }
  }
}

TEST_CASE("silent projected edges always link indistinguishable states") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto amas = std::make_shared<Amas>(gen_random_amas(seed));
    Ioicgs m = build_model(amas);
    for (AgentId i = 0; i < amas->agent_count(); ++i) {
      Projection p = project(m, i);
      for (StateId s = 0; s < m.state_count(); ++s)
        for (const auto& per_choice : p.edges[s])
          for (const ProjEdge& e : per_choice)
            if (e.event == kEpsilon) CHECK(m.states[s][i] == m.states[e.dst][i]);
    }
  }
}

TEST_CASE("epsilon closure is a fixpoint and idempotent") {
  auto amas = test::asvr(2, 2);
  Ioicgs m = build_model(amas);
  Projection p = project(m, 0);

  // Closure of the initial state matches the naive fixpoint.
  std::vector<StateId> closed = eps_closure(p, {m.initial});
  std::set<StateId> naive = naive_closure(p, {m.initial});
  CHECK(std::set<StateId>(closed.begin(), closed.end()) == naive);
  // Everything the other agents can do before the voter moves is invisible,
  // so the closure is strictly larger than the singleton.
  CHECK(closed.size() > 1);

  CHECK(eps_closure(p, closed) == closed);

  // A set with no outgoing silent edges to new states is its own closure.
  std::vector<StateId> no_eps;
  for (StateId s = 0; s < m.state_count(); ++s) {
    bool any = false;
    for (StateId d : p.eps_adj[s]) any |= (d != s);
    if (!any) {
      no_eps = {s};
      break;
    }
  }
  REQUIRE(!no_eps.empty());
  CHECK(eps_closure(p, no_eps) == no_eps);
}

TEST_CASE("expansion of a fully observable agent is its own automaton") {
  const char* src = R"(
agent Solo {
  states: s0, s1, s2;
  init: s0;
  events: a, b;
  transitions: s0 -a-> s1; s1 -b-> s2; s2 -a-> s0;
  repertoire: s0: [{a}]; s1: [{b}]; s2: [{a}];
}
)";
  auto amas = std::make_shared<Amas>(parse_amas(src));
  Ioicgs m = build_model(amas);
  Projection p = project(m, 0);
  AgentExpansion ex = expand(p);
  REQUIRE(ex.knowledge.size() == 3);
  for (const auto& k : ex.knowledge) CHECK(k.size() == 1);
  CHECK(ex.module.transitions.size() == amas->agents[0].transitions.size());
  for (uint32_t k = 0; k < ex.knowledge.size(); ++k)
    CHECK(ex.loc[k] == m.states[ex.knowledge[k].front()][0]);
}

TEST_CASE("knowledge states are observation-homogeneous and closed") {
  auto amas = test::asvr(2, 2);
  Ioicgs m = build_model(amas);
  for (AgentId i = 0; i < amas->agent_count(); ++i) {
    Projection p = project(m, i);
    AgentExpansion ex = expand(p);
    for (uint32_t k = 0; k < ex.knowledge.size(); ++k) {
      const auto& members = ex.knowledge[k];
      REQUIRE(!members.empty());
      for (StateId s : members) CHECK(m.states[s][i] == ex.loc[k]);
      CHECK(eps_closure(p, members) == members);
      // Lifted repertoire and valuation go through the local component.
      CHECK(ex.module.repertoire[k] == amas->agents[i].repertoire[ex.loc[k]]);
      CHECK(ex.module.valuation[k] == amas->agents[i].valuation[ex.loc[k]]);
    }
  }
}

TEST_CASE("expansion is deterministic across runs") {
  auto amas = test::asvr(2, 2);
  Ioicgs m = build_model(amas);
  Projection p1 = project(m, 2);
  Projection p2 = project(m, 2);
  AgentExpansion a = expand(p1);
  AgentExpansion b = expand(p2);
  CHECK(a.knowledge == b.knowledge);
  CHECK(a.loc == b.loc);
  CHECK(a.module.transitions == b.module.transitions);
  // Recorded from the first run; the coercer tracks each voter's progress
  // only through the receipts it collects.
  CHECK(a.knowledge.size() == 40);
}

TEST_CASE("the expanded game keeps the agent count and satisfies seriality") {
  Fixture f = expand_all(test::asvr(2, 2));
  CHECK(f.ex.amas->agent_count() == 3);
  for (StateId s = 0; s < f.mk->state_count(); ++s) {
    auto [b, e] = f.mk->row(s);
    CHECK(b < e);
  }
  // loc is defined componentwise on every reachable expanded state.
  for (StateId s = 0; s < f.mk->state_count(); ++s) {
    GlobalState loc = loc_of(f.ex, f.mk->states[s]);
    CHECK(find_state(*f.model, loc).has_value());
  }
}

TEST_CASE("component knowledge sets intersect to exactly the identified state") {
  Fixture f = expand_all(test::asvr(2, 2));
  IntersectionResult res = check_intersection(f.ex, *f.mk);
  CHECK(res.holds);

  // At the expanded initial state the intersection is the initial state.
  const GlobalState& init = f.mk->states[f.mk->initial];
  std::vector<StateId> inter = f.ex.expansions[0].knowledge[init[0]];
  for (AgentId i = 1; i < init.size(); ++i) {
    const auto& ki = f.ex.expansions[i].knowledge[init[i]];
    std::vector<StateId> next;
    std::set_intersection(inter.begin(), inter.end(), ki.begin(), ki.end(),
                          std::back_inserter(next));
    inter = next;
  }
  CHECK(inter == std::vector<StateId>{f.model->initial});
}

TEST_CASE("intersection holds across the random corpus") {
  for (uint64_t seed = 0; seed < 15; ++seed) {
    auto amas = std::make_shared<Amas>(gen_random_amas(seed));
    Fixture f = expand_all(amas);
    CHECK(check_intersection(f.ex, *f.mk).holds);
  }
}

TEST_CASE("the expanded game simulates every driven execution") {
  Fixture f = expand_all(test::asvr(2, 2));

  CHECK(simulate_check(*f.model, f.ex, *f.mk, {}));  // empty trace

  // Drive voter 1 through vote, receipt, coercer return, stop; the replay
  // must match each tuple and output.
  auto tuple_at = [&](StateId s, EventId want) -> ChoiceTuple {
    auto [b, e] = f.model->row(s);
    for (uint32_t k = b; k < e; ++k)
      if (f.model->transitions[k].event == want)
        return f.model->tuple_of(f.model->transitions[k]);
    REQUIRE(false);
    return {};
  };
  std::vector<ChoiceTuple> trace;
  StateId cur = f.model->initial;
  for (const char* ev : {"vote_1_a", "gv_1_a", "return", "stop_1"}) {
    EventId id = *f.amas->events.find(ev);
    ChoiceTuple t = tuple_at(cur, id);
    trace.push_back(t);
    auto [b, e] = f.model->row(cur);
    for (uint32_t k = b; k < e; ++k)
      if (f.model->transitions[k].event == id &&
          f.model->tuple_of(f.model->transitions[k]) == t) {
        cur = f.model->transitions[k].dst;
        break;
      }
  }
  CHECK(simulate_check(*f.model, f.ex, *f.mk, trace));

  // A trace whose last tuple miscoordinates replays through the silent
  // self-loop.
  auto [b, e] = f.model->row(cur);
  for (uint32_t k = b; k < e; ++k)
    if (f.model->transitions[k].event == kEpsilon) {
      trace.push_back(f.model->tuple_of(f.model->transitions[k]));
      CHECK(simulate_check(*f.model, f.ex, *f.mk, trace));
      break;
    }

  CHECK_THROWS_AS(
      simulate_check(*f.model, f.ex, *f.mk, {ChoiceTuple(f.amas->agent_count() + 1, 0)}),
      std::invalid_argument);
}

TEST_CASE("bounded-exhaustive simulation on the voting benchmark") {
  Fixture f = expand_all(test::asvr(2, 2));
  CHECK(simulate_check_exhaustive(*f.model, f.ex, *f.mk, 4));
}

TEST_CASE("bounded-exhaustive simulation on the random corpus") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto amas = std::make_shared<Amas>(gen_random_amas(seed));
    Fixture f = expand_all(amas);
    CHECK(simulate_check_exhaustive(*f.model, f.ex, *f.mk, 5));
  }
}

TEST_CASE("transducers are stuttering-invariant and output valid choices") {
  Fixture f = expand_all(test::asvr(2, 2));
  const AgentExpansion& exp = f.ex.expansions[0];
  std::vector<uint32_t> sigma(exp.knowledge.size(), 0);
  TransducerIf z = extract_transducer(exp, sigma);

  for (uint32_t q = 0; q < z.output.size(); ++q) {
    CHECK(z.step(q, z.memory_loc[q]) == q);
    CHECK(z.output[q] < f.amas->agents[0].repertoire[z.memory_loc[q]].size());
  }
  // An observation with no knowledge successor under the strategy's choice
  // is an explicit off-strategy signal, not a silent default.
  bool found_gap = false;
  for (uint32_t q = 0; q < z.output.size() && !found_gap; ++q)
    for (LocalId l = 0; l < f.amas->agents[0].local_count(); ++l)
      if (l != z.memory_loc[q] && !z.has_step(q, l)) {
        CHECK_THROWS_AS(z.step(q, l), OffStrategyError);
        found_gap = true;
        break;
      }
  CHECK(found_gap);
}

TEST_CASE("sound checking of the safety goal yields a replayable transducer") {
  auto amas = test::asvr(2, 2);
  Formula f = parse_formula("<<Voter1>> G !voted_1_b", *amas);
  SoundResult res = check_iR_sound(amas, f);
  REQUIRE(res.verdict == SoundVerdict::SatisfiedSound);
  REQUIRE(res.witnesses.size() == 1);

  // Replay over the original model: the product must be defined everywhere
  // and all its infinite paths must satisfy the goal.
  Ioicgs m = build_model(amas);
  TransducerProduct prod = transducer_product(m, res.witnesses);
  CHECK(prod.update_always_defined);
  CHECK(holds_on_all_paths(prod.graph, f.goal.op, f.goal.lhs, f.goal.rhs));
}

TEST_CASE("a tautological goal is satisfied soundly for any coalition") {
  auto amas = test::asvr(2, 2);
  // The joint coalition's strategy space over knowledge states is huge, but
  // the first strategy already witnesses F true.
  CheckLimits generous{uint64_t{1} << 40};
  for (const char* c : {"<<Voter1>>", "<<Coercer>>", "<<Voter1,Voter2>>"}) {
    Formula f = parse_formula(std::string(c) + " F true", *amas);
    CHECK(check_iR_sound(amas, f, OutcomeMode::Std, {}, generous).verdict ==
          SoundVerdict::SatisfiedSound);
  }
}

TEST_CASE("goals false under perfect information come back Unknown, never False") {
  auto amas = test::asvr(2, 2);
  // voted_1_a is false at the initial state and every path starts there.
  Formula f = parse_formula("<<Voter1>> G voted_1_a", *amas);
  CHECK(check_iR_sound(amas, f).verdict == SoundVerdict::Unknown);
}

TEST_CASE("reactive mode is rejected as conjectured only") {
  auto amas = test::asvr(1, 1);
  Formula f = parse_formula("<<Voter1>> F true", *amas);
  CHECK_THROWS_AS(check_iR_sound(amas, f, OutcomeMode::React), std::invalid_argument);
  Formula notmod = parse_formula("!<<Voter1>> F true", *amas);
  CHECK_THROWS_AS(check_iR_sound(amas, notmod), std::invalid_argument);
}

TEST_CASE("witnesses are verified: shadowed knowledge refinements are rejected") {
  // Spinning is a shared self-loop that O co-enables only after its
  // invisible move, so executing it refines W's knowledge while W's
  // observation stays w0. The expanded game's lexicographically first
  // witness (spin first, then go) depends on that refinement, which the
  // stuttering-invariant memory update cannot see: its transducer spins
  // forever once O has moved. The procedure must skip it and return the
  // constant-go machine instead.
  const char* src = R"(
agent W {
  states: w0, w1;
  init: w0;
  events: spin, go;
  transitions: w0 -spin-> w0; w0 -go-> w1;
  repertoire: w0: [{spin}, {go}]; w1: [{go}];
  labels: w1: pw;
}
agent O {
  states: o0, o1;
  init: o0;
  events: oa, spin;
  transitions: o0 -oa-> o1; o1 -spin-> o1;
  repertoire: o0: [{oa}]; o1: [{spin}];
}
)";
  auto amas = std::make_shared<Amas>(parse_amas(src));
  auto model = std::make_shared<Ioicgs>(build_model(amas));
  Formula f = parse_formula("<<W>> F pw", *amas);

  // The shadowed witness really is unsound: extract it by hand and replay.
  ExpandedAmas ex = assemble_expanded(amas, model);
  const AgentExpansion& exp = ex.expansions[0];
  REQUIRE(exp.knowledge.size() == 4);
  std::vector<uint32_t> shadowed(exp.knowledge.size(), 0);
  for (uint32_t k = 0; k < exp.knowledge.size(); ++k)
    if (exp.loc[k] == 0 && exp.knowledge[k].size() == 1) shadowed[k] = 1;  // go at refined w0
  std::vector<TransducerIf> bad{extract_transducer(exp, shadowed)};
  TransducerProduct bad_prod = transducer_product(*model, bad);
  CHECK(!holds_on_all_paths(bad_prod.graph, f.goal.op, f.goal.lhs, f.goal.rhs));

  // The procedure skips it and returns a witness that does replay.
  SoundResult res = check_iR_sound(amas, f);
  REQUIRE(res.verdict == SoundVerdict::SatisfiedSound);
  TransducerProduct good = transducer_product(*model, res.witnesses);
  CHECK(good.update_always_defined);
  CHECK(holds_on_all_paths(good.graph, f.goal.op, f.goal.lhs, f.goal.rhs));
  // The accepted machine plays go at the coarse initial knowledge state.
  uint32_t q0 = res.witnesses[0].initial;
  const Choice& out = amas->agents[0].repertoire[res.witnesses[0].memory_loc[q0]]
                                                [res.witnesses[0].output[q0]];
  CHECK(out.contains(*amas->events.find("go")));
}

TEST_CASE("expanded systems serialize in the agent description language") {
  Fixture f = expand_all(test::asvr(1, 1));
  std::string text = render(*f.ex.amas);
  Amas back = parse_amas(text);
  CHECK(back.agent_count() == f.ex.amas->agent_count());
  CHECK(render(back) == text);
}
