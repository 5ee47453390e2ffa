#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stochmatch/estimator.hpp"
#include "stochmatch/graph.hpp"

namespace stochmatch {

inline constexpr double kDefaultEdcsC = 128.0;
inline constexpr std::uint64_t kDefaultFixupCap = 1000000;

struct EdcsParams {
  std::uint64_t beta = 1;
  std::uint64_t beta_minus = 0;
  double epsilon = 0.0;
  double C = kDefaultEdcsC;
};

/// beta = ceil(C ln(1/(eps p_v p_e)) / (eps^2 p_v p_e)), beta_minus = beta - 1.
/// Throws InputError unless eps in (0, 1/2).
EdcsParams compute_beta(double epsilon, double p_v, double p_e, double C = kDefaultEdcsC);

/// lambda = eps/32, beta = ceil(8 lambda^-2 ln(1/lambda)),
/// beta_minus = ceil((1 - lambda) beta).
EdcsParams two_thirds_beta(double epsilon);

struct EdcsSubgraph {
  EdgeMask h_edges;
  EdcsParams params;
  bool certified = false;
  std::uint64_t fixups = 0;
};

struct EdcsViolation {
  EdgeIndex edge;
  bool in_h;              // true: degree sum above beta; false: below beta_minus
  std::uint64_t degree_sum;
};

/// Local fix-up: sweeps the edges in index order, first removing every H edge
/// whose degree sum exceeds beta, then adding every other edge whose degree
/// sum is below beta_minus, until a sweep changes nothing. Throws
/// std::runtime_error when more than `fixup_cap` changes are needed.
EdcsSubgraph build_edcs(const Graph& g, const EdcsParams& params,
                        std::uint64_t fixup_cap = kDefaultFixupCap);

std::vector<EdcsViolation> verify_edcs(const Graph& g, const EdgeMask& h, const EdcsParams& params);

/// mu(H) / mu(G); 1 when mu(G) = 0.
double edcs_matching_ratio(const Graph& g, const EdgeMask& h);

struct EdcsStochasticResult {
  EdcsSubgraph subgraph;
  RatioEstimate ratio;
};

/// Builds the EDCS of the base graph with `params` and estimates
/// E[mu(H ∩ G_realized)] / E[mu(G_realized)].
EdcsStochasticResult edcs_stochastic_ratio(const StochasticGraph& g, const EdcsParams& params,
                                           const EstimatorOptions& options);

}  // namespace stochmatch
