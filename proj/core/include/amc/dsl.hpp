#pragma once

// Text format for AMAS descriptions. One block per agent:
//
//   agent Voter1 {
//     states: q0, qa, qb;
//     init: q0;
//     events: vote_a, vote_b;
//     transitions:
//       q0 -vote_a-> qa;
//       q0 -vote_b-> qb;
//     repertoire:
//       q0: [{vote_a}, {vote_b}];
//       qa: [{vote_a}];
//       qb: [{vote_b}];
//     labels:
//       qa: voted_a;
//   }
//
// Events shared by name across agents synchronize. '#' starts a comment.

#include <stdexcept>
#include <string>

#include "amc/amas.hpp"

namespace amc {

class DslError : public std::runtime_error {
public:
  DslError(std::string msg, int line, int col)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_;
  int col_;
};

// Parses and validates; any validation diagnostic is promoted to a DslError.
Amas parse_amas(const std::string& text);

// Canonical text form; parse_amas(render(a)) is structurally identical to a
// (same interning, same ordering).
std::string render(const Amas& amas);

}  // namespace amc
