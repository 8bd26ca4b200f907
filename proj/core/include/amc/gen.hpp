#pragma once

// Benchmark generators: the simple-voting-with-revoting family (n voters,
// one coercer, k candidates) and a seeded random AMAS generator used for
// property-test corpora.

#include <cstdint>
#include <string>

#include "amc/amas.hpp"

namespace amc {

// DSL source for the voting benchmark: each voter casts a vote, decides
// whether to hand the receipt to the coercer, and may revote; the coercer
// listens to one voter at a time. n >= 1 voters, k >= 1 candidates.
std::string gen_asvr(uint32_t voters, uint32_t candidates);

struct RandomAmasParams {
  uint32_t min_agents = 2;
  uint32_t max_agents = 3;
  uint32_t min_locals = 2;
  uint32_t max_locals = 5;
  uint32_t max_private_events = 3;
  uint32_t shared_events = 2;
  uint32_t max_out_degree = 2;
  uint32_t max_props_per_agent = 2;
  uint32_t extra_choice_percent = 25;  // chance of a never-enabled event in a repertoire
};

// Valid by construction for any seed.
Amas gen_random_amas(uint64_t seed, const RandomAmasParams& params = {});

}  // namespace amc
