#pragma once

// sATL formulas: boolean combinations of propositions and coalition goals,
// where each goal is a single X-free temporal operator (F, G, U, R) over
// propositional operands. Nested strategic modalities and the next-step
// operator are rejected at parse time.
//
// Surface syntax:  <<Voter1,Coercer>> F voted_1_a
//                  <<Voter1>> G !voted_1_b & !revealed_1_a
// Precedence: unary (!, F, G, <<A>>) > U/R (right-assoc) > & > |.

#include <memory>
#include <string>
#include <vector>

#include "amc/amas.hpp"

namespace amc {

// Propositional expression (goal operands and state formulas share it).
struct BExpr {
  enum class Kind { Const, Prop, Not, And, Or };
  Kind kind = Kind::Const;
  bool value = false;  // Const
  PropId prop = 0;     // Prop
  std::shared_ptr<BExpr> lhs, rhs;

  static BExpr constant(bool v) {
    BExpr e;
    e.kind = Kind::Const;
    e.value = v;
    return e;
  }
};

enum class TemporalOp { Finally, Globally, Until, Release };

struct Goal {
  TemporalOp op;
  BExpr lhs;  // left operand of U/R; unused for F/G
  BExpr rhs;  // right operand of U/R; the operand of F/G
};

struct Formula {
  enum class Kind { Const, Prop, Not, And, Or, Modality };
  Kind kind = Kind::Const;
  bool value = false;
  PropId prop = 0;
  std::shared_ptr<Formula> lhs, rhs;
  // Modality
  std::vector<AgentId> coalition;  // sorted, nonempty
  Goal goal{TemporalOp::Finally, {}, {}};
};

class FormulaError : public std::runtime_error {
public:
  explicit FormulaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parses text against the AMAS's agents and propositions. Errors:
// unknown proposition/agent, "nesting not supported" for a modality under a
// modality, "next operator not supported" for X.
Formula parse_formula(const std::string& text, const Amas& amas);

std::string render_formula(const Formula& f, const Amas& amas);

// All modality nodes in syntactic (left-to-right) order.
std::vector<const Formula*> modalities_of(const Formula& f);

// Propositions mentioned anywhere in the formula.
std::vector<PropId> props_of(const Formula& f);

bool eval_bexpr(const BExpr& e, const std::vector<PropId>& sorted_props);

}  // namespace amc
