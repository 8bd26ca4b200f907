#include "amc/amas.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace amc {

void Amas::finalize() {
  owners.assign(events.size(), {});
  for (AgentId i = 0; i < agents.size(); ++i)
    for (EventId e : agents[i].events) owners[e].push_back(i);
  for (auto& v : owners) std::sort(v.begin(), v.end());
}

const std::vector<AgentId>& agents_of(const Amas& amas, EventId e) {
  if (e >= amas.events.size()) throw std::invalid_argument("undeclared event");
  return amas.owners.at(e);
}

namespace {

void diag(std::vector<Diagnostic>& out, AgentId agent, std::string location,
          std::string rule, std::string message) {
  out.push_back({agent, std::move(location), std::move(rule), std::move(message)});
}

}  // namespace

std::vector<Diagnostic> validate(const Amas& amas) {
  std::vector<Diagnostic> out;

  if (amas.agents.empty())
    diag(out, Diagnostic::kSystem, "system", "no agents", "an AMAS needs at least one agent");

  // Propositions must be mutually disjoint across agents.
  std::unordered_map<PropId, AgentId> prop_owner;
  for (AgentId i = 0; i < amas.agents.size(); ++i) {
    for (PropId p : amas.agents[i].props) {
      auto [it, fresh] = prop_owner.emplace(p, i);
      if (!fresh)
        diag(out, i, "proposition " + amas.props.name(p), "proposition not disjoint",
             "also declared by agent " + amas.agents[it->second].name);
    }
  }

  for (AgentId i = 0; i < amas.agents.size(); ++i) {
    const AgentModule& a = amas.agents[i];
    const uint32_t nl = a.local_count();

    if (nl == 0) diag(out, i, "agent " + a.name, "no states", "agent has no local states");
    if (a.initial >= nl)
      diag(out, i, "agent " + a.name, "initial not declared", "initial state out of range");
    if (a.events.empty())
      diag(out, i, "agent " + a.name, "no events", "agent has an empty event set");
    for (EventId e : a.events)
      if (e == kEpsilon)
        diag(out, i, "agent " + a.name, "reserved event name",
             "the silent event cannot belong to an agent");

    if (a.repertoire.size() != nl)
      diag(out, i, "agent " + a.name, "missing repertoire",
           "repertoire table does not cover every local state");
    for (LocalId l = 0; l < a.repertoire.size() && l < nl; ++l) {
      const auto& choices = a.repertoire[l];
      if (choices.empty())
        diag(out, i, "state " + a.local_names[l], "missing repertoire",
             "no choice available at this state");
      for (size_t c = 0; c < choices.size(); ++c) {
        if (choices[c].events.empty())
          diag(out, i, "state " + a.local_names[l], "empty choice",
               "choice " + std::to_string(c) + " is empty");
        for (EventId e : choices[c].events)
          if (!a.has_event(e))
            diag(out, i, "state " + a.local_names[l], "choice event outside alphabet",
                 "event " + amas.events.name(e) + " is not declared by this agent");
      }
    }

    std::set<std::pair<LocalId, EventId>> seen;
    for (const auto& t : a.transitions) {
      if (t.from >= nl || t.to >= nl) {
        diag(out, i, "agent " + a.name, "undeclared state", "transition endpoint out of range");
        continue;
      }
      if (!a.has_event(t.event))
        diag(out, i, "state " + a.local_names[t.from], "undeclared event",
             "transition on event " + amas.events.name(t.event) +
                 " which is not in the agent's alphabet");
      if (!seen.insert({t.from, t.event}).second)
        diag(out, i, "state " + a.local_names[t.from], "nondeterministic transition",
             "two transitions on " + amas.events.name(t.event));
      bool in_repertoire = false;
      if (t.from < a.repertoire.size())
        for (const auto& ch : a.repertoire[t.from])
          if (ch.contains(t.event)) in_repertoire = true;
      if (!in_repertoire)
        diag(out, i, "state " + a.local_names[t.from], "transition event not in repertoire",
             "event " + amas.events.name(t.event) + " is in no choice at its source state");
    }

    for (LocalId l = 0; l < a.valuation.size(); ++l)
      for (PropId p : a.valuation[l]) {
        bool declared = false;
        for (PropId q : a.props) declared |= (p == q);
        if (!declared)
          diag(out, i, "state " + a.local_names[l], "undeclared proposition",
               "label " + amas.props.name(p) + " is not declared by this agent");
      }
  }

  return out;
}

std::string format_diagnostic(const Amas& amas, const Diagnostic& d) {
  std::ostringstream os;
  if (d.agent != Diagnostic::kSystem) os << "agent " << amas.agents[d.agent].name << ", ";
  os << d.location << ": " << d.rule;
  if (!d.message.empty()) os << " (" << d.message << ")";
  return os.str();
}

}  // namespace amc
