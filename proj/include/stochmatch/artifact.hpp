#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stochmatch/edcs.hpp"
#include "stochmatch/fractional.hpp"
#include "stochmatch/graph.hpp"
#include "stochmatch/sparsifier.hpp"

namespace stochmatch {

// JSON artifacts written by the CLI and read back by `check`. Each embeds the
// graph so it can be checked on its own.

struct SparsifierArtifact {
  StochasticGraph graph;
  Sparsifier sparsifier;
  RngSeed seed;
};

struct EdcsArtifact {
  StochasticGraph graph;
  EdcsSubgraph edcs;
};

struct FractionalArtifact {
  StochasticGraph graph;
  double epsilon = 0.0;
  FractionalMatching x;
  EdgeMask available;         // realized edges of Q
  EdgeMask noncrucial;
  std::vector<EdgeIndex> crucial_matching;
  std::vector<std::string> labels;  // per edge: noncrucial | heavy | semi-heavy | c-star | crucial
};

using Artifact = std::variant<SparsifierArtifact, EdcsArtifact, FractionalArtifact>;

std::string to_json(const SparsifierArtifact& a);
std::string to_json(const EdcsArtifact& a);
std::string to_json(const FractionalArtifact& a);

/// Throws InputError on malformed documents or unknown kinds.
Artifact parse_artifact(const std::string& text);
Artifact read_artifact_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  bool skipped = false;  // not evaluated; does not fail the report
};

struct CheckReport {
  std::string kind;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Sparsifier: counts consistent with Q, counts <= R, max degree <= R.
/// EDCS: verify_edcs empty and matches the stored flag.
/// Fractional: values in [0,1], x_v <= 1, odd-set constraints, rounding bound.
CheckReport check_artifact(const Artifact& a);

}  // namespace stochmatch
