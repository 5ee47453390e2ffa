#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "stochmatch/graph.hpp"
#include "stochmatch/realization.hpp"
#include "stochmatch/rng.hpp"

namespace stochmatch {

enum class EstimateMode { exact, monte_carlo };

/// `automatic` resolves to exact when the outcome space fits the budget.
enum class QMode { exact, monte_carlo, automatic };

std::string to_string(EstimateMode m);
std::string to_string(QMode m);
QMode parse_q_mode(const std::string& s);

struct Estimate {
  double mean = 0.0;
  double ci_halfwidth = 0.0;  // 0 in exact mode
  std::uint64_t samples = 0;  // outcomes visited (exact) or draws (MC)
  EstimateMode mode = EstimateMode::exact;
  double confidence = 0.99;
};

struct EstimatorOptions {
  QMode mode = QMode::automatic;
  std::uint64_t samples = 100000;
  RngSeed seed{};
  double confidence = 0.99;
  std::size_t enumeration_budget = kDefaultEnumerationBudget;
  std::size_t workers = 1;
};

/// E[mu(G_realized ∩ restrict_to)] by exhaustive enumeration over the
/// restricted edges and the vertices they touch. Throws BudgetError.
Estimate expected_matching_exact(const StochasticGraph& g,
                                 const std::optional<EdgeMask>& restrict_to = std::nullopt,
                                 std::size_t budget = kDefaultEnumerationBudget,
                                 std::size_t workers = 1);

/// Sample mean over draws seed.split(i), i < samples. Halfwidth is
/// Hoeffding's bound (b - a) sqrt(ln(2/(1-confidence)) / (2 samples)) where
/// [a, b] is the a-priori range of the matching value: b = mu(restricted G)
/// and a = b when p_v = p_e = 1 (the realization is then deterministic), else
/// a = 0.
Estimate expected_matching_mc(const StochasticGraph& g, const std::optional<EdgeMask>& restrict_to,
                              std::uint64_t samples, RngSeed seed, double confidence = 0.99,
                              std::size_t workers = 1);

/// Dispatch on options.mode.
Estimate expected_matching(const StochasticGraph& g, const std::optional<EdgeMask>& restrict_to,
                           const EstimatorOptions& options);

bool enumerable(const StochasticGraph& g, const std::optional<EdgeMask>& restrict_to,
                std::size_t budget);

struct RatioEstimate {
  double ratio = 1.0;
  double ci_halfwidth = 0.0;  // conservative interval-arithmetic halfwidth
  Estimate numerator;
  Estimate denominator;
};

/// E[mu(Q ∩ G_realized)] / E[mu(G_realized)]; ratio 1 when the denominator
/// is 0. In Monte Carlo mode both sides use the same realizations.
RatioEstimate approximation_ratio(const StochasticGraph& g, const EdgeMask& q,
                                  const EstimatorOptions& options);

}  // namespace stochmatch
