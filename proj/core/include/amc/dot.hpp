#pragma once

#include <string>
#include <vector>

#include "amc/check.hpp"
#include "amc/model.hpp"

namespace amc {

struct DotOptions {
  bool show_props = true;
  // States to draw filled (e.g. ample-reduced states of a reduced model).
  std::vector<StateId> highlight;
  std::string name = "model";
};

// Graphviz text: one node per state labeled with the local-state tuple and
// its true propositions, one edge per transition labeled "in/out".
// Output is byte-deterministic for a given model.
std::string export_dot(const Ioicgs& m, const DotOptions& opts = {});

// Same rendering restricted to the states and transitions of an outcome
// subgraph.
std::string export_dot(const OutcomeGraph& g, const DotOptions& opts = {});

}  // namespace amc
