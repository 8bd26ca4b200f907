#include "amc/formula.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>

namespace amc {

namespace {

// The parser first builds an unrestricted tree (modalities, temporal
// operators and boolean connectives anywhere), then lowers it into the
// sATL-shaped Formula, diagnosing X, nesting, and non-propositional
// operands along the way.
struct Node {
  enum class Kind { Const, Prop, Not, And, Or, Next, Finally, Globally, Until, Release, Coop };
  Kind kind;
  bool value = false;
  std::string prop;
  std::vector<std::string> coalition;
  std::shared_ptr<Node> a, b;
};

using NodePtr = std::shared_ptr<Node>;

NodePtr mk(Node::Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

class FormulaParser {
public:
  explicit FormulaParser(const std::string& text) : src_(text) {}

  NodePtr parse() {
    NodePtr n = parse_or();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing input");
    return n;
  }

private:
  [[noreturn]] void fail(const std::string& msg) {
    throw FormulaError(msg + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(const char* s) {
    skip_ws();
    size_t n = std::strlen(s);
    if (src_.compare(pos_, n, s) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  bool peek_ident(std::string& out) {
    skip_ws();
    size_t p = pos_;
    if (p >= src_.size() ||
        !(std::isalpha(static_cast<unsigned char>(src_[p])) || src_[p] == '_'))
      return false;
    size_t start = p;
    while (p < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[p])) || src_[p] == '_'))
      ++p;
    out = src_.substr(start, p - start);
    return true;
  }

  std::string take_ident(const char* what) {
    std::string s;
    if (!peek_ident(s)) fail(std::string("expected ") + what);
    pos_ += s.size();  // peek_ident skipped whitespace already
    return s;
  }

  NodePtr parse_or() {
    NodePtr n = parse_and();
    while (eat("|")) {
      auto r = mk(Node::Kind::Or);
      r->a = n;
      r->b = parse_and();
      n = r;
    }
    return n;
  }

  NodePtr parse_and() {
    NodePtr n = parse_until();
    while (eat("&")) {
      auto r = mk(Node::Kind::And);
      r->a = n;
      r->b = parse_until();
      n = r;
    }
    return n;
  }

  // U and R bind tighter than & and | and associate to the right.
  NodePtr parse_until() {
    NodePtr n = parse_unary();
    std::string id;
    if (peek_ident(id) && (id == "U" || id == "R")) {
      pos_ += id.size();
      auto r = mk(id == "U" ? Node::Kind::Until : Node::Kind::Release);
      r->a = n;
      r->b = parse_until();
      return r;
    }
    return n;
  }

  NodePtr parse_unary() {
    if (eat("!")) {
      auto r = mk(Node::Kind::Not);
      r->a = parse_unary();
      return r;
    }
    if (eat("<<")) {
      auto r = mk(Node::Kind::Coop);
      r->coalition.push_back(take_ident("agent name"));
      while (eat(",")) r->coalition.push_back(take_ident("agent name"));
      if (!eat(">>")) fail("expected '>>'");
      // The goal swallows a following U/R so that <<A>> p U q reads as
      // <<A>> (p U q).
      r->a = parse_until();
      return r;
    }
    std::string id;
    if (peek_ident(id)) {
      if (id == "F" || id == "G" || id == "X") {
        pos_ += id.size();
        auto r = mk(id == "F"   ? Node::Kind::Finally
                    : id == "G" ? Node::Kind::Globally
                                : Node::Kind::Next);
        r->a = parse_unary();
        return r;
      }
      if (id == "true" || id == "false") {
        pos_ += id.size();
        auto r = mk(Node::Kind::Const);
        r->value = (id == "true");
        return r;
      }
      if (id == "U" || id == "R") fail("missing left operand of " + id);
      pos_ += id.size();
      auto r = mk(Node::Kind::Prop);
      r->prop = id;
      return r;
    }
    if (eat("(")) {
      NodePtr n = parse_or();
      if (!eat(")")) fail("expected ')'");
      return n;
    }
    fail("expected formula");
  }

  const std::string& src_;
  size_t pos_ = 0;
};

class Lowerer {
public:
  explicit Lowerer(const Amas& amas) : amas_(amas) {}

  Formula lower_state(const Node& n) {
    Formula f;
    switch (n.kind) {
      case Node::Kind::Const:
        f.kind = Formula::Kind::Const;
        f.value = n.value;
        return f;
      case Node::Kind::Prop:
        f.kind = Formula::Kind::Prop;
        f.prop = resolve_prop(n.prop);
        return f;
      case Node::Kind::Not:
        f.kind = Formula::Kind::Not;
        f.lhs = std::make_shared<Formula>(lower_state(*n.a));
        return f;
      case Node::Kind::And:
      case Node::Kind::Or:
        f.kind = n.kind == Node::Kind::And ? Formula::Kind::And : Formula::Kind::Or;
        f.lhs = std::make_shared<Formula>(lower_state(*n.a));
        f.rhs = std::make_shared<Formula>(lower_state(*n.b));
        return f;
      case Node::Kind::Coop:
        f.kind = Formula::Kind::Modality;
        f.coalition = resolve_coalition(n.coalition);
        f.goal = lower_goal(*n.a);
        return f;
      case Node::Kind::Next:
        throw FormulaError("next operator not supported");
      default:
        throw FormulaError("temporal operator outside a strategic modality");
    }
  }

private:
  PropId resolve_prop(const std::string& name) {
    auto id = amas_.props.find(name);
    if (!id) throw FormulaError("unknown proposition '" + name + "'");
    return *id;
  }

  std::vector<AgentId> resolve_coalition(const std::vector<std::string>& names) {
    std::vector<AgentId> out;
    for (const auto& n : names) {
      auto id = amas_.agent_by_name(n);
      if (!id) throw FormulaError("unknown agent '" + n + "'");
      out.push_back(*id);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw FormulaError("empty coalition");
    return out;
  }

  Goal lower_goal(const Node& n) {
    Goal g{TemporalOp::Finally, BExpr::constant(true), BExpr::constant(true)};
    switch (n.kind) {
      case Node::Kind::Finally:
        g.op = TemporalOp::Finally;
        g.rhs = lower_bool(*n.a);
        return g;
      case Node::Kind::Globally:
        g.op = TemporalOp::Globally;
        g.rhs = lower_bool(*n.a);
        return g;
      case Node::Kind::Until:
      case Node::Kind::Release:
        g.op = n.kind == Node::Kind::Until ? TemporalOp::Until : TemporalOp::Release;
        g.lhs = lower_bool(*n.a);
        g.rhs = lower_bool(*n.b);
        return g;
      case Node::Kind::Next:
        throw FormulaError("next operator not supported");
      case Node::Kind::Coop:
        throw FormulaError("nesting not supported");
      default:
        throw FormulaError("a strategic modality must be followed by F, G, U or R");
    }
  }

  BExpr lower_bool(const Node& n) {
    BExpr e;
    switch (n.kind) {
      case Node::Kind::Const:
        return BExpr::constant(n.value);
      case Node::Kind::Prop:
        e.kind = BExpr::Kind::Prop;
        e.prop = resolve_prop(n.prop);
        return e;
      case Node::Kind::Not:
        e.kind = BExpr::Kind::Not;
        e.lhs = std::make_shared<BExpr>(lower_bool(*n.a));
        return e;
      case Node::Kind::And:
      case Node::Kind::Or:
        e.kind = n.kind == Node::Kind::And ? BExpr::Kind::And : BExpr::Kind::Or;
        e.lhs = std::make_shared<BExpr>(lower_bool(*n.a));
        e.rhs = std::make_shared<BExpr>(lower_bool(*n.b));
        return e;
      case Node::Kind::Coop:
        throw FormulaError("nesting not supported");
      case Node::Kind::Next:
        throw FormulaError("next operator not supported");
      default:
        throw FormulaError("goal operands must be propositional");
    }
  }

  const Amas& amas_;
};

void collect_modalities(const Formula& f, std::vector<const Formula*>& out) {
  switch (f.kind) {
    case Formula::Kind::Modality:
      out.push_back(&f);
      return;
    case Formula::Kind::Not:
      collect_modalities(*f.lhs, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_modalities(*f.lhs, out);
      collect_modalities(*f.rhs, out);
      return;
    default:
      return;
  }
}

void collect_props_bexpr(const BExpr& e, std::vector<PropId>& out) {
  switch (e.kind) {
    case BExpr::Kind::Prop: out.push_back(e.prop); return;
    case BExpr::Kind::Not: collect_props_bexpr(*e.lhs, out); return;
    case BExpr::Kind::And:
    case BExpr::Kind::Or:
      collect_props_bexpr(*e.lhs, out);
      collect_props_bexpr(*e.rhs, out);
      return;
    default: return;
  }
}

void collect_props(const Formula& f, std::vector<PropId>& out) {
  switch (f.kind) {
    case Formula::Kind::Prop: out.push_back(f.prop); return;
    case Formula::Kind::Not: collect_props(*f.lhs, out); return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_props(*f.lhs, out);
      collect_props(*f.rhs, out);
      return;
    case Formula::Kind::Modality:
      collect_props_bexpr(f.goal.lhs, out);
      collect_props_bexpr(f.goal.rhs, out);
      return;
    default: return;
  }
}

void render_bexpr(std::ostringstream& os, const BExpr& e, const Amas& amas) {
  switch (e.kind) {
    case BExpr::Kind::Const: os << (e.value ? "true" : "false"); return;
    case BExpr::Kind::Prop: os << amas.props.name(e.prop); return;
    case BExpr::Kind::Not:
      os << "!";
      render_bexpr(os, *e.lhs, amas);
      return;
    case BExpr::Kind::And:
    case BExpr::Kind::Or:
      os << "(";
      render_bexpr(os, *e.lhs, amas);
      os << (e.kind == BExpr::Kind::And ? " & " : " | ");
      render_bexpr(os, *e.rhs, amas);
      os << ")";
      return;
  }
}

}  // namespace

Formula parse_formula(const std::string& text, const Amas& amas) {
  NodePtr tree = FormulaParser(text).parse();
  return Lowerer(amas).lower_state(*tree);
}

std::string render_formula(const Formula& f, const Amas& amas) {
  std::ostringstream os;
  switch (f.kind) {
    case Formula::Kind::Const: os << (f.value ? "true" : "false"); break;
    case Formula::Kind::Prop: os << amas.props.name(f.prop); break;
    case Formula::Kind::Not:
      os << "!" << render_formula(*f.lhs, amas);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      os << "(" << render_formula(*f.lhs, amas)
         << (f.kind == Formula::Kind::And ? " & " : " | ") << render_formula(*f.rhs, amas)
         << ")";
      break;
    case Formula::Kind::Modality: {
      os << "<<";
      for (size_t i = 0; i < f.coalition.size(); ++i)
        os << (i ? "," : "") << amas.agents[f.coalition[i]].name;
      os << ">> ";
      std::ostringstream body;
      switch (f.goal.op) {
        case TemporalOp::Finally:
          body << "F ";
          render_bexpr(body, f.goal.rhs, amas);
          break;
        case TemporalOp::Globally:
          body << "G ";
          render_bexpr(body, f.goal.rhs, amas);
          break;
        case TemporalOp::Until:
          render_bexpr(body, f.goal.lhs, amas);
          body << " U ";
          render_bexpr(body, f.goal.rhs, amas);
          break;
        case TemporalOp::Release:
          render_bexpr(body, f.goal.lhs, amas);
          body << " R ";
          render_bexpr(body, f.goal.rhs, amas);
          break;
      }
      os << body.str();
      break;
    }
  }
  return os.str();
}

std::vector<const Formula*> modalities_of(const Formula& f) {
  std::vector<const Formula*> out;
  collect_modalities(f, out);
  return out;
}

std::vector<PropId> props_of(const Formula& f) {
  std::vector<PropId> out;
  collect_props(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool eval_bexpr(const BExpr& e, const std::vector<PropId>& sorted_props) {
  switch (e.kind) {
    case BExpr::Kind::Const: return e.value;
    case BExpr::Kind::Prop:
      return std::binary_search(sorted_props.begin(), sorted_props.end(), e.prop);
    case BExpr::Kind::Not: return !eval_bexpr(*e.lhs, sorted_props);
    case BExpr::Kind::And:
      return eval_bexpr(*e.lhs, sorted_props) && eval_bexpr(*e.rhs, sorted_props);
    case BExpr::Kind::Or:
      return eval_bexpr(*e.lhs, sorted_props) || eval_bexpr(*e.rhs, sorted_props);
  }
  return false;
}

}  // namespace amc
