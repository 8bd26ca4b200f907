#pragma once

// Canonical model files: a line-oriented text format with the source AMAS
// embedded, states sorted by local-state tuple, and transitions sorted
// within each state. Re-serializing a parsed file is byte-identical, which
// is what the fixture diffs and determinism checks rely on.

#include <string>

#include "amc/model.hpp"

namespace amc {

std::string serialize_model(const Ioicgs& m);

struct ParsedModel {
  std::shared_ptr<const Amas> amas;
  Ioicgs model;
};

ParsedModel parse_model(const std::string& text);

// FNV-1a over the canonical serialization.
uint64_t model_digest(const Ioicgs& m);
uint64_t fnv1a(const std::string& text);

bool looks_like_model_file(const std::string& text);

}  // namespace amc
