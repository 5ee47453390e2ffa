#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "stochmatch/graph.hpp"
#include "stochmatch/rng.hpp"

namespace stochmatch {

inline constexpr std::size_t kDefaultEnumerationBudget = 22;

/// One sampled outcome. An edge bit is set only if both endpoint bits are.
struct Realization {
  VertexMask vertices;
  EdgeMask edges;

  friend bool operator==(const Realization&, const Realization&) = default;
};

/// Vertices first (ascending id), then edges among surviving pairs (ascending
/// index). Draws from `rng` in that fixed order.
Realization sample_realization(const StochasticGraph& g, Rng& rng);
Realization sample_realization(const StochasticGraph& g, RngSeed seed);

/// Same vertex set; edges intersected with q.
Realization restrict(const Realization& r, const EdgeMask& q);

using RealizationVisitor = std::function<void(const Realization&, double probability)>;

/// Exhaustive outcome space over a subset of edges and the vertices they
/// touch. Everything else is marginalized out, so the probabilities of the
/// visited outcomes sum to 1 and are the exact marginal probabilities of the
/// restricted pattern. Vertices outside the touched set are left unset in the
/// reported masks.
///
/// Outcomes of probability zero (possible when p_v or p_e is 1) are skipped.
class OutcomeSpace {
 public:
  /// Throws BudgetError when touched vertices + edges exceeds `budget`.
  OutcomeSpace(const StochasticGraph& g, const EdgeMask& edges,
               std::size_t budget = kDefaultEnumerationBudget);

  /// Number of vertex patterns; visit() partitions the outcomes by pattern so
  /// callers can split work across threads.
  std::size_t vertex_pattern_count() const noexcept { return std::size_t{1} << vertices_.size(); }
  void visit(std::size_t vertex_pattern, const RealizationVisitor& fn) const;
  void visit_all(const RealizationVisitor& fn) const;

  std::size_t bits() const noexcept { return vertices_.size() + edges_.size(); }

 private:
  const StochasticGraph* graph_;
  std::vector<VertexId> vertices_;
  std::vector<EdgeIndex> edges_;
  std::vector<std::pair<std::size_t, std::size_t>> local_endpoints_;
};

/// Every outcome of the full graph with its exact probability. Throws
/// BudgetError naming the limit when n + |E| exceeds `budget`.
void enumerate_realizations(const StochasticGraph& g, const RealizationVisitor& fn,
                            std::size_t budget = kDefaultEnumerationBudget);

}  // namespace stochmatch
