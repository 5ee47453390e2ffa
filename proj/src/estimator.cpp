#include "stochmatch/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochmatch/errors.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/parallel.hpp"

namespace stochmatch {

std::string to_string(EstimateMode m) { return m == EstimateMode::exact ? "exact" : "monte-carlo"; }

std::string to_string(QMode m) {
  switch (m) {
    case QMode::exact: return "exact";
    case QMode::monte_carlo: return "monte-carlo";
    case QMode::automatic: return "auto";
  }
  return "auto";
}

QMode parse_q_mode(const std::string& s) {
  if (s == "exact" || s == "oracle") return QMode::exact;
  if (s == "monte-carlo" || s == "mc") return QMode::monte_carlo;
  if (s == "auto") return QMode::automatic;
  throw InputError("unknown estimator mode '" + s + "'");
}

namespace {

EdgeMask resolve(const StochasticGraph& g, const std::optional<EdgeMask>& restrict_to) {
  if (!restrict_to) return g.graph().full_edge_mask();
  if (restrict_to->size() != g.edge_count()) throw InputError("edge set size does not match the graph");
  return *restrict_to;
}

constexpr std::size_t kBlocks = 64;

struct Block {
  std::size_t begin, end;
};

Block block(std::size_t count, std::size_t blocks, std::size_t b) {
  return {count * b / blocks, count * (b + 1) / blocks};
}

double hoeffding(double range, std::uint64_t samples, double confidence) {
  if (range <= 0.0) return 0.0;
  return range * std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(samples)));
}

}  // namespace

bool enumerable(const StochasticGraph& g, const std::optional<EdgeMask>& restrict_to,
                std::size_t budget) {
  try {
    OutcomeSpace space(g, resolve(g, restrict_to), budget);
    return true;
  } catch (const BudgetError&) {
    return false;
  }
}

Estimate expected_matching_exact(const StochasticGraph& g, const std::optional<EdgeMask>& restrict_to,
                                 std::size_t budget, std::size_t workers) {
  const EdgeMask edges = resolve(g, restrict_to);
  const OutcomeSpace space(g, edges, budget);
  const MatchingEngine engine(g.graph());

  const std::size_t patterns = space.vertex_pattern_count();
  const std::size_t blocks = std::min(kBlocks, patterns);
  std::vector<double> sums(blocks, 0.0);
  std::vector<std::uint64_t> counts(blocks, 0);
  parallel_for(blocks, workers, [&](std::size_t b) {
    const auto [lo, hi] = block(patterns, blocks, b);
    for (std::size_t p = lo; p < hi; ++p) {
      space.visit(p, [&](const Realization& r, double prob) {
        sums[b] += prob * engine.solve(r.edges).total_weight;
        ++counts[b];
      });
    }
  });

  Estimate est;
  for (std::size_t b = 0; b < blocks; ++b) {
    est.mean += sums[b];
    est.samples += counts[b];
  }
  est.mode = EstimateMode::exact;
  return est;
}

namespace {

// Per-draw matching values for each of the given edge sets, same draws.
std::vector<std::vector<double>> mc_values(const StochasticGraph& g,
                                           const std::vector<EdgeMask>& sets,
                                           std::uint64_t samples, RngSeed seed,
                                           std::size_t workers) {
  const MatchingEngine engine(g.graph());
  std::vector<std::vector<double>> values(sets.size(), std::vector<double>(samples));
  const std::size_t blocks = static_cast<std::size_t>(std::min<std::uint64_t>(kBlocks * 4, samples));
  parallel_for(blocks, workers, [&](std::size_t b) {
    const auto [lo, hi] = block(samples, blocks, b);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto r = sample_realization(g, seed.split(i));
      for (std::size_t k = 0; k < sets.size(); ++k) {
        values[k][i] = engine.solve(r.edges & sets[k]).total_weight;
      }
    }
  });
  return values;
}

Estimate summarize(const std::vector<double>& values, double range, double confidence) {
  Estimate est;
  for (double v : values) est.mean += v;
  est.samples = values.size();
  est.mean /= static_cast<double>(values.size());
  est.ci_halfwidth = hoeffding(range, est.samples, confidence);
  est.mode = EstimateMode::monte_carlo;
  est.confidence = confidence;
  return est;
}

double value_range(const StochasticGraph& g, const EdgeMask& edges) {
  if (g.p_v() == 1.0 && g.p_e() == 1.0) return 0.0;
  return max_matching_value(g.graph(), edges);
}

void check_mc_args(std::uint64_t samples, double confidence) {
  if (samples == 0) throw InputError("Monte Carlo estimation needs at least one sample");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InputError("confidence must lie in (0, 1)");
}

}  // namespace

Estimate expected_matching_mc(const StochasticGraph& g, const std::optional<EdgeMask>& restrict_to,
                              std::uint64_t samples, RngSeed seed, double confidence,
                              std::size_t workers) {
  check_mc_args(samples, confidence);
  const EdgeMask edges = resolve(g, restrict_to);
  auto values = mc_values(g, {edges}, samples, seed, workers);
  return summarize(values[0], value_range(g, edges), confidence);
}

Estimate expected_matching(const StochasticGraph& g, const std::optional<EdgeMask>& restrict_to,
                           const EstimatorOptions& options) {
  const bool exact = options.mode == QMode::exact ||
                     (options.mode == QMode::automatic &&
                      enumerable(g, restrict_to, options.enumeration_budget));
  if (exact) return expected_matching_exact(g, restrict_to, options.enumeration_budget, options.workers);
  return expected_matching_mc(g, restrict_to, options.samples, options.seed, options.confidence,
                              options.workers);
}

RatioEstimate approximation_ratio(const StochasticGraph& g, const EdgeMask& q,
                                  const EstimatorOptions& options) {
  if (q.size() != g.edge_count()) throw InputError("edge set size does not match the graph");
  RatioEstimate out;
  const bool exact = options.mode == QMode::exact ||
                     (options.mode == QMode::automatic &&
                      enumerable(g, std::nullopt, options.enumeration_budget));
  if (exact) {
    out.numerator = expected_matching_exact(g, q, options.enumeration_budget, options.workers);
    out.denominator = expected_matching_exact(g, std::nullopt, options.enumeration_budget, options.workers);
  } else {
    check_mc_args(options.samples, options.confidence);
    const EdgeMask all = g.graph().full_edge_mask();
    auto values = mc_values(g, {q, all}, options.samples, options.seed, options.workers);
    out.numerator = summarize(values[0], value_range(g, q), options.confidence);
    out.denominator = summarize(values[1], value_range(g, all), options.confidence);
  }

  const double num = out.numerator.mean, den = out.denominator.mean;
  if (den == 0.0) {
    out.ratio = 1.0;
    return out;
  }
  out.ratio = num / den;
  const double hn = out.numerator.ci_halfwidth, hd = out.denominator.ci_halfwidth;
  if (hn > 0.0 || hd > 0.0) {
    const double lo = std::max(0.0, num - hn) / (den + hd);
    const double hi = den - hd > 0.0 ? (num + hn) / (den - hd) : std::numeric_limits<double>::infinity();
    out.ci_halfwidth = std::max(out.ratio - lo, hi - out.ratio);
  }
  return out;
}

}  // namespace stochmatch
