#include "amc/serialize.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "amc/dsl.hpp"

namespace amc {

namespace {

constexpr const char* kMagic = "iocgs-model 1";

std::string state_text(const Amas& amas, const GlobalState& g) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < g.size(); ++i)
    os << (i ? "," : "") << amas.agents[i].local_names[g[i]];
  os << ")";
  return os.str();
}

std::string tuple_text(const ChoiceTuple& t) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << static_cast<uint32_t>(t[i]);
  os << "]";
  return os.str();
}

}  // namespace

std::string serialize_model(const Ioicgs& m) {
  const Amas& amas = *m.amas;

  // Canonical state order: lexicographic on the local-id tuple.
  std::vector<StateId> order(m.state_count());
  for (StateId s = 0; s < m.state_count(); ++s) order[s] = s;
  std::sort(order.begin(), order.end(),
            [&](StateId x, StateId y) { return m.states[x] < m.states[y]; });
  std::vector<uint32_t> file_id(m.state_count());
  for (uint32_t i = 0; i < order.size(); ++i) file_id[order[i]] = i;

  std::ostringstream os;
  os << kMagic << "\n";
  os << "begin-amas\n" << render(amas) << "end-amas\n";
  os << "states " << m.state_count() << "\n";
  for (StateId s : order) os << file_id[s] << " " << state_text(amas, m.states[s]) << "\n";
  os << "initial " << file_id[m.initial] << "\n";

  struct Line {
    uint32_t src;
    std::string tuple;
    std::string event;
    uint32_t dst;
  };
  std::vector<Line> lines;
  for (const Transition& t : m.transitions)
    lines.push_back({file_id[t.src], tuple_text(m.tuple_of(t)), amas.events.name(t.event),
                     file_id[t.dst]});
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return std::tie(a.src, a.tuple, a.event, a.dst) < std::tie(b.src, b.tuple, b.event, b.dst);
  });
  os << "transitions " << lines.size() << "\n";
  for (const Line& l : lines)
    os << l.src << " " << l.tuple << " " << l.event << " " << l.dst << "\n";
  os << "end\n";
  return os.str();
}

ParsedModel parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) throw std::runtime_error("model file: unexpected end");
    return line;
  };

  if (next_line() != kMagic) throw std::runtime_error("model file: bad header");
  if (next_line() != "begin-amas") throw std::runtime_error("model file: missing amas");
  std::ostringstream amas_text;
  for (;;) {
    std::string l = next_line();
    if (l == "end-amas") break;
    amas_text << l << "\n";
  }
  auto amas = std::make_shared<Amas>(parse_amas(amas_text.str()));

  ParsedModel pm;
  pm.amas = amas;
  Ioicgs& m = pm.model;
  m.amas = amas;

  std::string word;
  uint32_t nstates = 0;
  {
    std::istringstream ls(next_line());
    ls >> word >> nstates;
    if (word != "states") throw std::runtime_error("model file: expected states");
  }
  // Per-agent name lookup.
  std::vector<std::map<std::string, LocalId>> local_index(amas->agent_count());
  for (AgentId i = 0; i < amas->agent_count(); ++i)
    for (LocalId l = 0; l < amas->agents[i].local_count(); ++l)
      local_index[i].emplace(amas->agents[i].local_names[l], l);

  m.states.resize(nstates);
  for (uint32_t k = 0; k < nstates; ++k) {
    std::istringstream ls(next_line());
    uint32_t id;
    std::string tuple;
    ls >> id >> tuple;
    if (id >= nstates) throw std::runtime_error("model file: state id out of range");
    if (tuple.size() < 2 || tuple.front() != '(' || tuple.back() != ')')
      throw std::runtime_error("model file: bad state tuple");
    GlobalState g;
    std::string body = tuple.substr(1, tuple.size() - 2);
    std::istringstream bs(body);
    std::string name;
    AgentId agent = 0;
    while (std::getline(bs, name, ',')) {
      if (agent >= amas->agent_count()) throw std::runtime_error("model file: tuple too long");
      auto it = local_index[agent].find(name);
      if (it == local_index[agent].end())
        throw std::runtime_error("model file: unknown local state " + name);
      g.push_back(it->second);
      ++agent;
    }
    if (agent != amas->agent_count()) throw std::runtime_error("model file: tuple too short");
    m.states[id] = std::move(g);
  }
  {
    std::istringstream ls(next_line());
    uint32_t init;
    ls >> word >> init;
    if (word != "initial" || init >= nstates)
      throw std::runtime_error("model file: bad initial");
    m.initial = init;
  }
  uint32_t ntrans = 0;
  {
    std::istringstream ls(next_line());
    ls >> word >> ntrans;
    if (word != "transitions") throw std::runtime_error("model file: expected transitions");
  }
  std::map<ChoiceTuple, uint32_t> tuples;
  std::vector<std::vector<Transition>> per_state(nstates);
  for (uint32_t k = 0; k < ntrans; ++k) {
    std::istringstream ls(next_line());
    uint32_t src, dst;
    std::string tuple, event;
    ls >> src >> tuple >> event >> dst;
    if (src >= nstates || dst >= nstates)
      throw std::runtime_error("model file: transition endpoint out of range");
    if (tuple.size() < 2 || tuple.front() != '[' || tuple.back() != ']')
      throw std::runtime_error("model file: bad tuple");
    ChoiceTuple ct;
    std::istringstream bs(tuple.substr(1, tuple.size() - 2));
    std::string num;
    while (std::getline(bs, num, ',')) ct.push_back(static_cast<uint8_t>(std::stoul(num)));
    if (ct.size() != amas->agent_count())
      throw std::runtime_error("model file: tuple arity mismatch");
    for (AgentId i = 0; i < ct.size(); ++i)
      if (ct[i] >= amas->agents[i].repertoire[m.states[src][i]].size())
        throw std::runtime_error("model file: choice index out of range");
    auto ev = amas->events.find(event);
    if (!ev) throw std::runtime_error("model file: unknown event " + event);
    auto [it, fresh] = tuples.emplace(ct, static_cast<uint32_t>(m.tuple_table.size()));
    if (fresh) m.tuple_table.push_back(ct);
    per_state[src].push_back({src, it->second, *ev, dst});
  }
  if (next_line() != "end") throw std::runtime_error("model file: missing end");

  m.trans_begin.push_back(0);
  for (uint32_t s = 0; s < nstates; ++s) {
    for (const Transition& t : per_state[s]) m.transitions.push_back(t);
    m.trans_begin.push_back(static_cast<uint32_t>(m.transitions.size()));
  }
  m.state_props.resize(nstates);
  for (StateId s = 0; s < nstates; ++s) {
    auto& props = m.state_props[s];
    for (AgentId i = 0; i < amas->agent_count(); ++i) {
      LocalId l = m.states[s][i];
      if (l < amas->agents[i].valuation.size()) {
        const auto& v = amas->agents[i].valuation[l];
        props.insert(props.end(), v.begin(), v.end());
      }
    }
    std::sort(props.begin(), props.end());
    props.erase(std::unique(props.begin(), props.end()), props.end());
  }
  return pm;
}

uint64_t fnv1a(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t model_digest(const Ioicgs& m) { return fnv1a(serialize_model(m)); }

bool looks_like_model_file(const std::string& text) {
  return text.rfind(kMagic, 0) == 0;
}

}  // namespace amc
