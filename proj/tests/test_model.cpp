#include <doctest.h>

#include <set>

#include "amc/dsl.hpp"
#include "support.hpp"

using namespace amc;

namespace {

// Compares the built transition relation at one state against the
// reference oracle, as unordered sets.
void check_state_against_oracle(const Ioicgs& m, StateId s) {
  using Key = std::tuple<std::vector<uint32_t>, EventId, GlobalState>;
  std::set<Key> built;
  auto [b, e] = m.row(s);
  for (uint32_t k = b; k < e; ++k) {
    const Transition& t = m.transitions[k];
    const ChoiceTuple& tup = m.tuple_of(t);
    built.insert({std::vector<uint32_t>(tup.begin(), tup.end()), t.event, m.states[t.dst]});
  }
  std::set<Key> expected;
  for (const auto& r : test::ref_transitions(*m.amas, m.states[s]))
    expected.insert({r.tuple, r.event, r.dst});
  CHECK(built == expected);
}

}  // namespace

TEST_CASE("built model matches the reference semantics on the voting benchmark") {
  auto amas = test::asvr(2, 2);
  Ioicgs m = build_model(amas);
  for (StateId s = 0; s < m.state_count(); ++s) check_state_against_oracle(m, s);
}

TEST_CASE("built model matches the reference semantics on the random corpus") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto amas = std::make_shared<Amas>(gen_random_amas(seed));
    Ioicgs m = build_model(amas);
    for (StateId s = 0; s < m.state_count(); ++s) check_state_against_oracle(m, s);
  }
}

TEST_CASE("initial state of the voting model fires both selected votes and no silent loop") {
  auto amas = test::asvr(2, 2);
  Ioicgs m = build_model(amas);
  // Coercer listens to voter 1 (choice 0), voters pick their first-candidate
  // vote (choice 0 at q0).
  std::set<EventId> fired;
  bool any_eps = false;
  for (const auto& r : test::ref_transitions(*amas, m.states[m.initial])) {
    if (r.tuple != std::vector<uint32_t>{0, 0, 0}) continue;
    if (r.event == kEpsilon) any_eps = true;
    fired.insert(r.event);
  }
  CHECK(!any_eps);
  CHECK(fired == std::set<EventId>{*amas->events.find("vote_1_a"), *amas->events.find("vote_2_a")});
}

TEST_CASE("shared versus private synchronization") {
  const char* src = R"(
agent One {
  states: s0, s1;
  init: s0;
  events: a;
  transitions: s0 -a-> s1;
  repertoire: s0: [{a}]; s1: [{a}];
}
agent Two {
  states: t0, t1, t2;
  init: t0;
  events: a, b;
  transitions: t0 -a-> t1; t0 -b-> t2;
  repertoire: t0: [{a}, {b}]; t1: [{a}]; t2: [{a}];
}
)";
  auto amas = std::make_shared<Amas>(parse_amas(src));
  Ioicgs m = build_model(amas);
  EventId a = *amas->events.find("a");
  EventId b = *amas->events.find("b");

  std::map<std::vector<uint32_t>, std::set<EventId>> by_tuple;
  for (const auto& r : test::ref_transitions(*amas, m.states[m.initial]))
    by_tuple[r.tuple].insert(r.event);
  // Tuple ({a},{a}): the shared event fires. Tuple ({a},{b}): only two's
  // private event does.
  CHECK(by_tuple[{0, 0}] == std::set<EventId>{a});
  CHECK(by_tuple[{0, 1}] == std::set<EventId>{b});

  auto [bg, en] = m.row(m.initial);
  std::set<EventId> all;
  for (uint32_t k = bg; k < en; ++k) all.insert(m.transitions[k].event);
  CHECK(all == std::set<EventId>{a, b});
}

TEST_CASE("a choice with no executable event yields only a silent loop") {
  const char* src = R"(
agent Solo {
  states: s0;
  init: s0;
  events: a;
  repertoire: s0: [{a}];
}
)";
  auto amas = std::make_shared<Amas>(parse_amas(src));
  Ioicgs m = build_model(amas);
  CHECK(m.state_count() == 1);
  REQUIRE(m.transition_count() == 1);
  CHECK(m.transitions[0].event == kEpsilon);
  CHECK(m.transitions[0].dst == m.initial);
  CHECK(enabled(m, m.initial) == std::vector<EventId>{kEpsilon});
}

TEST_CASE("enabled events at the voting initial state") {
  auto amas = test::asvr(2, 2);
  Ioicgs m = build_model(amas);
  std::vector<EventId> want;
  for (const char* n : {"vote_1_a", "vote_1_b", "vote_2_a", "vote_2_b"})
    want.push_back(*amas->events.find(n));
  std::sort(want.begin(), want.end());
  CHECK(enabled(m, m.initial) == want);
}

TEST_CASE("every state has an enabled event (seriality)") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto amas = std::make_shared<Amas>(gen_random_amas(seed));
    Ioicgs m = build_model(amas);
    for (StateId s = 0; s < m.state_count(); ++s) CHECK(!enabled(m, s).empty());
  }
}

TEST_CASE("enabled_by restricts and never grows") {
  auto amas = test::asvr(2, 2);
  Ioicgs m = build_model(amas);
  EventId va = *amas->events.find("vote_1_a");
  EventId vb = *amas->events.find("vote_1_b");

  // Voter1 committing to its first-candidate vote choice.
  auto with_v1 = enabled_by(m, m.initial, {{0, 0}});
  CHECK(std::count(with_v1.begin(), with_v1.end(), va) == 1);
  CHECK(std::count(with_v1.begin(), with_v1.end(), vb) == 0);

  CHECK(enabled_by(m, m.initial, {}) == enabled(m, m.initial));
  CHECK_THROWS_AS(enabled_by(m, m.initial, {{0, 5}}), std::invalid_argument);

  // Anti-monotonicity, exhaustively: extending a partial assignment by one
  // agent never adds events.
  for (StateId s = 0; s < m.state_count(); ++s) {
    const GlobalState& g = m.states[s];
    for (uint32_t c0 = 0; c0 < amas->agents[0].repertoire[g[0]].size(); ++c0) {
      auto base = enabled_by(m, s, {{0, c0}});
      for (uint32_t c1 = 0; c1 < amas->agents[1].repertoire[g[1]].size(); ++c1) {
        auto ext = enabled_by(m, s, {{0, c0}, {1, c1}});
        CHECK(std::includes(base.begin(), base.end(), ext.begin(), ext.end()));
      }
    }
  }
}

TEST_CASE("enabled_by accepts choices by value") {
  auto amas = test::asvr(1, 1);
  Ioicgs m = build_model(amas);
  Choice first = amas->agents[0].repertoire[amas->agents[0].initial][0];
  auto events = enabled_by_choice(m, m.initial, {{0, first}});
  CHECK(!events.empty());
  Choice bogus;
  bogus.events = {*amas->events.find("ng_1")};
  CHECK_THROWS_AS(enabled_by_choice(m, m.initial, {{0, bogus}}), std::invalid_argument);
}

TEST_CASE("silent transitions are self-loops and preserve the valuation") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto amas = std::make_shared<Amas>(gen_random_amas(seed));
    Ioicgs m = build_model(amas);
    for (const Transition& t : m.transitions)
      if (t.event == kEpsilon) {
        CHECK(t.src == t.dst);
        CHECK(m.state_props[t.src] == m.state_props[t.dst]);
      }
  }
}

TEST_CASE("state limit reports model too large") {
  auto amas = test::asvr(2, 2);
  CHECK_THROWS_AS(build_model(amas, BuildLimits{5}), LimitError);
}
