#include "amc/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace amc {

namespace {

enum class Tok { Ident, LBrace, RBrace, LBrack, RBrack, Colon, Comma, Semi, Dash, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

private:
  void advance() {
    skip_ws();
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::End;
      cur_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        bump();
      cur_.kind = Tok::Ident;
      cur_.text = src_.substr(start, pos_ - start);
      return;
    }
    switch (c) {
      case '{': cur_.kind = Tok::LBrace; break;
      case '}': cur_.kind = Tok::RBrace; break;
      case '[': cur_.kind = Tok::LBrack; break;
      case ']': cur_.kind = Tok::RBrack; break;
      case ':': cur_.kind = Tok::Colon; break;
      case ',': cur_.kind = Tok::Comma; break;
      case ';': cur_.kind = Tok::Semi; break;
      case '-':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '>') {
          bump();
          cur_.kind = Tok::Arrow;
        } else {
          cur_.kind = Tok::Dash;
        }
        return;
      default:
        throw DslError(std::string("unexpected character '") + c + "'", line_, col_);
    }
    bump();
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token cur_;
};

// Section keywords are reserved: a state may not be named after one.
bool is_section_kw(const std::string& s) {
  return s == "states" || s == "init" || s == "events" || s == "transitions" ||
         s == "repertoire" || s == "labels" || s == "agent";
}

class AmasParser {
public:
  explicit AmasParser(const std::string& text) : lex_(text) {}

  Amas parse() {
    Amas amas;
    amas.events.intern(kEpsilonName);  // reserve id 0
    while (lex_.peek().kind != Tok::End) parse_agent(amas);
    amas.finalize();
    auto diags = validate(amas);
    if (!diags.empty())
      throw DslError(format_diagnostic(amas, diags.front()), 0, 0);
    return amas;
  }

private:
  Token expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind)
      throw DslError(std::string("expected ") + what, lex_.peek().line, lex_.peek().col);
    return lex_.take();
  }

  Token expect_keyword(const char* kw) {
    Token t = expect(Tok::Ident, kw);
    if (t.text != kw) throw DslError(std::string("expected '") + kw + "'", t.line, t.col);
    return t;
  }

  void parse_agent(Amas& amas) {
    expect_keyword("agent");
    Token name = expect(Tok::Ident, "agent name");
    if (amas.agent_by_name(name.text))
      throw DslError("duplicate agent name '" + name.text + "'", name.line, name.col);
    expect(Tok::LBrace, "'{'");

    AgentModule agent;
    agent.name = name.text;
    std::map<std::string, LocalId> locals;
    std::optional<std::string> init_name;
    bool saw_states = false, saw_events = false;

    auto local_of = [&](const Token& t) -> LocalId {
      auto it = locals.find(t.text);
      if (it == locals.end())
        throw DslError("undeclared state '" + t.text + "'", t.line, t.col);
      return it->second;
    };
    auto event_of = [&](const Token& t) -> EventId {
      auto id = amas.events.find(t.text);
      if (!id || !agent.has_event(*id))
        throw DslError("undeclared event '" + t.text + "'", t.line, t.col);
      return *id;
    };

    while (lex_.peek().kind != Tok::RBrace) {
      Token section = expect(Tok::Ident, "section name");
      expect(Tok::Colon, "':'");
      if (section.text == "states") {
        saw_states = true;
        for (;;) {
          Token s = expect(Tok::Ident, "state name");
          if (is_section_kw(s.text))
            throw DslError("reserved state name '" + s.text + "'", s.line, s.col);
          if (!locals.emplace(s.text, static_cast<LocalId>(agent.local_names.size())).second)
            throw DslError("duplicate state '" + s.text + "'", s.line, s.col);
          agent.local_names.push_back(s.text);
          if (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            continue;
          }
          break;
        }
        expect(Tok::Semi, "';'");
      } else if (section.text == "init") {
        Token s = expect(Tok::Ident, "state name");
        init_name = s.text;
        agent.initial = local_of(s);
        expect(Tok::Semi, "';'");
      } else if (section.text == "events") {
        saw_events = true;
        for (;;) {
          Token e = expect(Tok::Ident, "event name");
          if (e.text == kEpsilonName)
            throw DslError("reserved event name '" + e.text + "'", e.line, e.col);
          EventId id = amas.events.intern(e.text);
          if (agent.has_event(id))
            throw DslError("duplicate event '" + e.text + "'", e.line, e.col);
          agent.events.push_back(id);
          if (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            continue;
          }
          break;
        }
        expect(Tok::Semi, "';'");
      } else if (section.text == "transitions") {
        while (lex_.peek().kind == Tok::Ident && !is_section_kw(lex_.peek().text)) {
          Token from = lex_.take();
          expect(Tok::Dash, "'-'");
          Token ev = expect(Tok::Ident, "event name");
          expect(Tok::Arrow, "'->'");
          Token to = expect(Tok::Ident, "state name");
          expect(Tok::Semi, "';'");
          agent.transitions.push_back({local_of(from), event_of(ev), local_of(to)});
        }
      } else if (section.text == "repertoire") {
        agent.repertoire.resize(agent.local_names.size());
        while (lex_.peek().kind == Tok::Ident && !is_section_kw(lex_.peek().text)) {
          Token st = lex_.take();
          LocalId l = local_of(st);
          expect(Tok::Colon, "':'");
          expect(Tok::LBrack, "'['");
          std::vector<Choice>& choices = agent.repertoire[l];
          if (!choices.empty())
            throw DslError("duplicate repertoire entry for '" + st.text + "'", st.line, st.col);
          for (;;) {
            expect(Tok::LBrace, "'{'");
            Choice ch;
            while (lex_.peek().kind == Tok::Ident) {
              ch.events.push_back(event_of(lex_.take()));
              if (lex_.peek().kind == Tok::Comma)
                lex_.take();
              else
                break;
            }
            expect(Tok::RBrace, "'}'");
            std::sort(ch.events.begin(), ch.events.end());
            ch.events.erase(std::unique(ch.events.begin(), ch.events.end()), ch.events.end());
            choices.push_back(std::move(ch));
            if (lex_.peek().kind == Tok::Comma) {
              lex_.take();
              continue;
            }
            break;
          }
          expect(Tok::RBrack, "']'");
          expect(Tok::Semi, "';'");
        }
      } else if (section.text == "labels") {
        agent.valuation.resize(agent.local_names.size());
        while (lex_.peek().kind == Tok::Ident && !is_section_kw(lex_.peek().text)) {
          Token st = lex_.take();
          LocalId l = local_of(st);
          expect(Tok::Colon, "':'");
          for (;;) {
            Token p = expect(Tok::Ident, "proposition");
            PropId pid = amas.props.intern(p.text);
            bool declared = false;
            for (PropId q : agent.props) declared |= (q == pid);
            if (!declared) agent.props.push_back(pid);
            agent.valuation[l].push_back(pid);
            if (lex_.peek().kind == Tok::Comma) {
              lex_.take();
              continue;
            }
            break;
          }
          expect(Tok::Semi, "';'");
        }
      } else {
        throw DslError("unknown section '" + section.text + "'", section.line, section.col);
      }
    }
    expect(Tok::RBrace, "'}'");

    if (!saw_states)
      throw DslError("agent '" + agent.name + "' has no states section", name.line, name.col);
    if (!saw_events)
      throw DslError("agent '" + agent.name + "' has no events section", name.line, name.col);
    if (!init_name)
      throw DslError("agent '" + agent.name + "' has no init section", name.line, name.col);
    agent.repertoire.resize(agent.local_names.size());
    agent.valuation.resize(agent.local_names.size());
    for (auto& v : agent.valuation) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    amas.agents.push_back(std::move(agent));
  }

  Lexer lex_;
};

}  // namespace

Amas parse_amas(const std::string& text) { return AmasParser(text).parse(); }

std::string render(const Amas& amas) {
  std::ostringstream os;
  for (const AgentModule& a : amas.agents) {
    os << "agent " << a.name << " {\n";
    os << "  states: ";
    for (size_t l = 0; l < a.local_names.size(); ++l)
      os << (l ? ", " : "") << a.local_names[l];
    os << ";\n";
    os << "  init: " << a.local_names[a.initial] << ";\n";
    os << "  events: ";
    for (size_t e = 0; e < a.events.size(); ++e)
      os << (e ? ", " : "") << amas.events.name(a.events[e]);
    os << ";\n";
    os << "  transitions:\n";
    std::vector<LocalTransition> ts = a.transitions;
    std::sort(ts.begin(), ts.end(), [](const LocalTransition& x, const LocalTransition& y) {
      return std::tie(x.from, x.event, x.to) < std::tie(y.from, y.event, y.to);
    });
    for (const auto& t : ts)
      os << "    " << a.local_names[t.from] << " -" << amas.events.name(t.event) << "-> "
         << a.local_names[t.to] << ";\n";
    os << "  repertoire:\n";
    for (LocalId l = 0; l < a.repertoire.size(); ++l) {
      os << "    " << a.local_names[l] << ": [";
      for (size_t c = 0; c < a.repertoire[l].size(); ++c) {
        os << (c ? ", " : "") << "{";
        const auto& ev = a.repertoire[l][c].events;
        for (size_t k = 0; k < ev.size(); ++k)
          os << (k ? ", " : "") << amas.events.name(ev[k]);
        os << "}";
      }
      os << "];\n";
    }
    bool any_labels = false;
    for (const auto& v : a.valuation) any_labels |= !v.empty();
    if (any_labels) {
      os << "  labels:\n";
      for (LocalId l = 0; l < a.valuation.size(); ++l) {
        if (a.valuation[l].empty()) continue;
        os << "    " << a.local_names[l] << ": ";
        for (size_t k = 0; k < a.valuation[l].size(); ++k)
          os << (k ? ", " : "") << amas.props.name(a.valuation[l][k]);
        os << ";\n";
      }
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace amc
