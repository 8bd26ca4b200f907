#include "amc/dot.hpp"

#include <algorithm>
#include <sstream>

namespace amc {

namespace {

std::string tuple_label(const Ioicgs& m, const Transition& t) {
  const Amas& amas = *m.amas;
  const ChoiceTuple& tuple = m.tuple_of(t);
  std::ostringstream os;
  os << "(";
  for (AgentId i = 0; i < tuple.size(); ++i) {
    const Choice& ch = amas.agents[i].repertoire[m.states[t.src][i]][tuple[i]];
    os << (i ? "," : "") << "{";
    for (size_t k = 0; k < ch.events.size(); ++k)
      os << (k ? "," : "") << amas.events.name(ch.events[k]);
    os << "}";
  }
  os << ")/" << amas.events.name(t.event);
  return os.str();
}

// Shared renderer: masks select the visible part (null for full models).
std::string render_dot(const Ioicgs& m, const DotOptions& opts,
                       const std::vector<uint8_t>* state_mask,
                       const std::vector<uint8_t>* trans_mask) {
  const Amas& amas = *m.amas;

  std::vector<StateId> order;
  for (StateId s = 0; s < m.state_count(); ++s)
    if (!state_mask || (*state_mask)[s]) order.push_back(s);
  std::sort(order.begin(), order.end(),
            [&](StateId x, StateId y) { return m.states[x] < m.states[y]; });
  std::vector<uint32_t> node_id(m.state_count());
  for (uint32_t i = 0; i < order.size(); ++i) node_id[order[i]] = i;

  std::vector<uint8_t> filled(m.state_count(), 0);
  for (StateId s : opts.highlight)
    if (s < filled.size()) filled[s] = 1;

  std::ostringstream os;
  os << "digraph " << opts.name << " {\n";
  os << "  rankdir=TB;\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  for (StateId s : order) {
    os << "  n" << node_id[s] << " [label=\"(";
    const GlobalState& g = m.states[s];
    for (size_t i = 0; i < g.size(); ++i)
      os << (i ? "," : "") << amas.agents[i].local_names[g[i]];
    os << ")";
    if (opts.show_props && !m.state_props[s].empty()) {
      os << "\\n{";
      for (size_t i = 0; i < m.state_props[s].size(); ++i)
        os << (i ? "," : "") << amas.props.name(m.state_props[s][i]);
      os << "}";
    }
    os << "\"";
    if (s == m.initial) os << ", penwidth=2";
    if (filled[s]) os << ", style=filled, fillcolor=lightgrey";
    os << "];\n";
  }

  struct Line {
    uint32_t src, dst;
    std::string label;
  };
  std::vector<Line> lines;
  for (uint32_t k = 0; k < m.transition_count(); ++k) {
    if (trans_mask && !(*trans_mask)[k]) continue;
    const Transition& t = m.transitions[k];
    lines.push_back({node_id[t.src], node_id[t.dst], tuple_label(m, t)});
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return std::tie(a.src, a.dst, a.label) < std::tie(b.src, b.dst, b.label);
  });
  for (const Line& l : lines)
    os << "  n" << l.src << " -> n" << l.dst << " [label=\"" << l.label << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace

std::string export_dot(const Ioicgs& m, const DotOptions& opts) {
  return render_dot(m, opts, nullptr, nullptr);
}

std::string export_dot(const OutcomeGraph& g, const DotOptions& opts) {
  return render_dot(*g.model, opts, &g.state_in, &g.trans_in);
}

}  // namespace amc
