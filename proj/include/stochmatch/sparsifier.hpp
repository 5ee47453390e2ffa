#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stochmatch/graph.hpp"
#include "stochmatch/rng.hpp"

namespace stochmatch {

struct SparsifierParams {
  double epsilon = 0.0;
  std::uint64_t R = 1;           // rounds actually run
  double R_formula = 1.0;        // uncapped formula value (may exceed 2^64)
  double tau = 0.0;
  std::optional<std::uint64_t> r_cap;
};

/// R = ceil(2000 ln(1/eps) ln(1/(eps p_v^2 p_e)) / (eps^4 p_v^2 p_e)), clamped
/// by r_cap; tau = eps^3 p_v^2 p_e / (20 ln(1/eps)). Throws InputError unless
/// eps in (0,1), p in (0,1], r_cap >= 1.
SparsifierParams compute_params(double epsilon, double p_v, double p_e,
                                std::optional<std::uint64_t> r_cap = std::nullopt);

struct Sparsifier {
  EdgeMask q_edges;
  std::vector<std::uint64_t> appear_count;
  SparsifierParams params;

  double f(EdgeIndex e) const {
    return static_cast<double>(appear_count.at(e)) / static_cast<double>(params.R);
  }
  std::vector<double> frequencies() const;
  std::size_t max_degree(const Graph& g) const;
};

/// Round r samples a realization from seed.split(r), takes its canonical
/// maximum-weight matching and records those edges. Output does not depend
/// on `workers` (0 = hardware concurrency).
Sparsifier build_sparsifier(const StochasticGraph& g, const SparsifierParams& params, RngSeed seed,
                            std::size_t workers = 1);

struct EdgePartition {
  EdgeMask crucial;
  EdgeMask noncrucial;
};

/// crucial: q_e >= tau; noncrucial: the rest.
EdgePartition classify_edges(const Sparsifier& s, std::span<const double> q);
EdgePartition classify_edges(double tau, std::span<const double> q);

}  // namespace stochmatch
