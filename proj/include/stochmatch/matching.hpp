#pragma once

#include <memory>
#include <span>
#include <vector>

#include "stochmatch/graph.hpp"

namespace stochmatch {

struct Matching {
  std::vector<EdgeIndex> edges;  // ascending
  double total_weight = 0.0;     // summed in ascending edge order
};

/// Exact maximum-weight matching with a canonical tie-break.
///
/// Among all maximum-weight matchings the engine returns the one whose
/// ascending edge-index sequence is lexicographically smallest. Zero-weight
/// edges never enter the result. Unit weights give maximum cardinality.
///
/// Internally every positive weight is converted exactly to an integer and
/// shifted left far enough that a per-edge bonus of 2^(m-i) (edge i of m) can
/// be added without ever outweighing a genuine weight difference; the blossom
/// algorithm then runs on these integer keys, so the optimum is unique and
/// the result is deterministic without any floating-point comparison.
///
/// Construct once per graph and call solve() many times; solve() is const
/// and safe to call concurrently.
class MatchingEngine {
 public:
  explicit MatchingEngine(const Graph& graph);
  ~MatchingEngine();
  MatchingEngine(MatchingEngine&&) noexcept;
  MatchingEngine& operator=(MatchingEngine&&) noexcept;

  Matching solve() const;
  Matching solve(const EdgeMask& active) const;

  const Graph& graph() const noexcept { return *graph_; }

 private:
  struct Keys;
  const Graph* graph_;
  std::unique_ptr<Keys> keys_;
};

Matching max_weight_matching(const Graph& graph);
Matching max_weight_matching(const Graph& graph, const EdgeMask& active);

double max_matching_value(const Graph& graph);
double max_matching_value(const Graph& graph, const EdgeMask& active);

/// True when no two of the given edges share an endpoint.
bool is_matching(const Graph& graph, std::span<const EdgeIndex> edges);

}  // namespace stochmatch
