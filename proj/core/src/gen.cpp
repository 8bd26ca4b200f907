#include "amc/gen.hpp"

#include "amc/dsl.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace amc {

namespace {

std::string candidate_name(uint32_t j) {
  if (j < 26) return std::string(1, static_cast<char>('a' + j));
  return "c" + std::to_string(j + 1);
}

}  // namespace

std::string gen_asvr(uint32_t voters, uint32_t candidates) {
  if (voters < 1 || candidates < 1)
    throw std::invalid_argument("asvr needs at least one voter and one candidate");

  std::ostringstream os;
  for (uint32_t i = 1; i <= voters; ++i) {
    const std::string vi = std::to_string(i);
    os << "agent Voter" << vi << " {\n";
    os << "  states: q0";
    for (uint32_t j = 0; j < candidates; ++j) {
      const std::string c = candidate_name(j);
      os << ", q_" << c << ", q_" << c << "_g, q_" << c << "_n, q_" << c << "_g_s, q_" << c
         << "_n_s";
    }
    os << ";\n";
    os << "  init: q0;\n";
    os << "  events: ";
    for (uint32_t j = 0; j < candidates; ++j)
      os << "vote_" << vi << "_" << candidate_name(j) << ", ";
    for (uint32_t j = 0; j < candidates; ++j)
      os << "gv_" << vi << "_" << candidate_name(j) << ", ";
    os << "ng_" << vi << ", revote_" << vi << ", stop_" << vi << ";\n";
    os << "  transitions:\n";
    for (uint32_t j = 0; j < candidates; ++j) {
      const std::string c = candidate_name(j);
      os << "    q0 -vote_" << vi << "_" << c << "-> q_" << c << ";\n";
      os << "    q_" << c << " -gv_" << vi << "_" << c << "-> q_" << c << "_g;\n";
      os << "    q_" << c << " -ng_" << vi << "-> q_" << c << "_n;\n";
      os << "    q_" << c << "_g -revote_" << vi << "-> q0;\n";
      os << "    q_" << c << "_g -stop_" << vi << "-> q_" << c << "_g_s;\n";
      os << "    q_" << c << "_n -revote_" << vi << "-> q0;\n";
      os << "    q_" << c << "_n -stop_" << vi << "-> q_" << c << "_n_s;\n";
    }
    os << "  repertoire:\n";
    os << "    q0: [";
    for (uint32_t j = 0; j < candidates; ++j)
      os << (j ? ", " : "") << "{vote_" << vi << "_" << candidate_name(j) << "}";
    os << "];\n";
    for (uint32_t j = 0; j < candidates; ++j) {
      const std::string c = candidate_name(j);
      os << "    q_" << c << ": [{gv_" << vi << "_" << c << "}, {ng_" << vi << "}];\n";
      os << "    q_" << c << "_g: [{revote_" << vi << "}, {stop_" << vi << "}];\n";
      os << "    q_" << c << "_n: [{revote_" << vi << "}, {stop_" << vi << "}];\n";
      os << "    q_" << c << "_g_s: [{stop_" << vi << "}];\n";
      os << "    q_" << c << "_n_s: [{stop_" << vi << "}];\n";
    }
    os << "  labels:\n";
    for (uint32_t j = 0; j < candidates; ++j) {
      const std::string c = candidate_name(j);
      os << "    q_" << c << "_g_s: voted_" << vi << "_" << c << ";\n";
      os << "    q_" << c << "_n_s: voted_" << vi << "_" << c << ";\n";
    }
    os << "}\n";
  }

  os << "agent Coercer {\n";
  os << "  states: q0";
  for (uint32_t i = 1; i <= voters; ++i) {
    for (uint32_t j = 0; j < candidates; ++j)
      os << ", q_g_" << i << "_" << candidate_name(j);
    os << ", q_n_" << i;
  }
  os << ";\n";
  os << "  init: q0;\n";
  os << "  events: ";
  for (uint32_t i = 1; i <= voters; ++i) {
    for (uint32_t j = 0; j < candidates; ++j)
      os << "gv_" << i << "_" << candidate_name(j) << ", ";
    os << "ng_" << i << ", ";
  }
  os << "return;\n";
  os << "  transitions:\n";
  for (uint32_t i = 1; i <= voters; ++i) {
    for (uint32_t j = 0; j < candidates; ++j) {
      const std::string c = candidate_name(j);
      os << "    q0 -gv_" << i << "_" << c << "-> q_g_" << i << "_" << c << ";\n";
      os << "    q_g_" << i << "_" << c << " -return-> q0;\n";
    }
    os << "    q0 -ng_" << i << "-> q_n_" << i << ";\n";
    os << "    q_n_" << i << " -return-> q0;\n";
  }
  os << "  repertoire:\n";
  os << "    q0: [";
  for (uint32_t i = 1; i <= voters; ++i) {
    os << (i > 1 ? ", " : "") << "{";
    for (uint32_t j = 0; j < candidates; ++j) os << "gv_" << i << "_" << candidate_name(j) << ", ";
    os << "ng_" << i << "}";
  }
  os << "];\n";
  for (uint32_t i = 1; i <= voters; ++i) {
    for (uint32_t j = 0; j < candidates; ++j)
      os << "    q_g_" << i << "_" << candidate_name(j) << ": [{return}];\n";
    os << "    q_n_" << i << ": [{return}];\n";
  }
  os << "  labels:\n";
  for (uint32_t i = 1; i <= voters; ++i)
    for (uint32_t j = 0; j < candidates; ++j) {
      const std::string c = candidate_name(j);
      os << "    q_g_" << i << "_" << c << ": revealed_" << i << "_" << c << ";\n";
    }
  os << "}\n";
  return os.str();
}

Amas gen_random_amas(uint64_t seed, const RandomAmasParams& params) {
  std::mt19937_64 rng(seed);
  auto pick = [&](uint32_t lo, uint32_t hi) {
    return std::uniform_int_distribution<uint32_t>(lo, hi)(rng);
  };
  auto chance = [&](uint32_t percent) { return pick(1, 100) <= percent; };

  Amas amas;
  amas.events.intern(kEpsilonName);

  const uint32_t na = pick(params.min_agents, params.max_agents);

  // Shared events first so every one ends up in at least two alphabets.
  struct SharedEvent {
    EventId id;
    AgentId a, b;
  };
  std::vector<SharedEvent> shared;
  for (uint32_t s = 0; s < params.shared_events && na >= 2; ++s) {
    EventId id = amas.events.intern("s" + std::to_string(s));
    AgentId x = pick(0, na - 1);
    AgentId y = pick(0, na - 2);
    if (y >= x) ++y;
    shared.push_back({id, x, y});
  }

  for (AgentId i = 0; i < na; ++i) {
    AgentModule agent;
    agent.name = "A" + std::to_string(i);
    const uint32_t nl = pick(params.min_locals, params.max_locals);
    for (uint32_t l = 0; l < nl; ++l) agent.local_names.push_back("l" + std::to_string(l));
    agent.initial = 0;

    const uint32_t ne = pick(1, params.max_private_events);
    for (uint32_t e = 0; e < ne; ++e)
      agent.events.push_back(amas.events.intern("e" + std::to_string(i) + "_" + std::to_string(e)));
    for (const auto& se : shared)
      if (se.a == i || se.b == i) agent.events.push_back(se.id);

    // Transitions: distinct events per source state keep the local relation
    // a partial function.
    for (uint32_t l = 0; l < nl; ++l) {
      uint32_t degree = pick(0, params.max_out_degree);
      std::vector<EventId> pool = agent.events;
      std::shuffle(pool.begin(), pool.end(), rng);
      degree = std::min<uint32_t>(degree, static_cast<uint32_t>(pool.size()));
      for (uint32_t d = 0; d < degree; ++d)
        agent.transitions.push_back({l, pool[d], pick(0, nl - 1)});
    }

    agent.repertoire.resize(nl);
    for (uint32_t l = 0; l < nl; ++l) {
      std::vector<EventId> used;
      for (const auto& t : agent.transitions)
        if (t.from == l) used.push_back(t.event);
      if (chance(params.extra_choice_percent) || used.empty())
        used.push_back(agent.events[pick(0, static_cast<uint32_t>(agent.events.size()) - 1)]);
      std::sort(used.begin(), used.end());
      used.erase(std::unique(used.begin(), used.end()), used.end());
      std::shuffle(used.begin(), used.end(), rng);
      // Split the event list into 1..|used| nonempty choices.
      uint32_t nchoices = pick(1, static_cast<uint32_t>(used.size()));
      std::vector<Choice> choices(nchoices);
      for (size_t k = 0; k < used.size(); ++k)
        choices[k < nchoices ? k : pick(0, nchoices - 1)].events.push_back(used[k]);
      for (auto& ch : choices) std::sort(ch.events.begin(), ch.events.end());
      agent.repertoire[l] = std::move(choices);
    }

    agent.valuation.resize(nl);
    const uint32_t np = pick(0, params.max_props_per_agent);
    for (uint32_t p = 0; p < np; ++p) {
      PropId pid = amas.props.intern("p" + std::to_string(i) + "_" + std::to_string(p));
      agent.props.push_back(pid);
      bool placed = false;
      for (uint32_t l = 0; l < nl; ++l)
        if (chance(40)) {
          agent.valuation[l].push_back(pid);
          placed = true;
        }
      if (!placed) agent.valuation[pick(0, nl - 1)].push_back(pid);
    }
    for (auto& v : agent.valuation) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    amas.agents.push_back(std::move(agent));
  }

  amas.finalize();
  if (!validate(amas).empty()) throw std::logic_error("random generator produced invalid AMAS");
  // Normalize interning to canonical text order.
  return parse_amas(render(amas));
}

}  // namespace amc
