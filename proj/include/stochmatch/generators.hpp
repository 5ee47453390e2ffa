#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "stochmatch/graph.hpp"

namespace stochmatch {

enum class WeightKind { unit, uniform, exponential };

struct WeightModel {
  WeightKind kind = WeightKind::unit;
  double lo = 0.1;
  double hi = 10.0;
  double rate = 1.0;
};

enum class Family { erdos_renyi, bipartite_random, complete, path, star };

struct GeneratorSpec {
  Family family = Family::erdos_renyi;
  std::size_t n = 0;        // star: number of leaves
  double p = 0.5;           // erdos-renyi, bipartite-random
  std::size_t n_left = 0;   // bipartite-random
  std::size_t n_right = 0;
  WeightModel weights;
  std::uint64_t seed = 0;
};

Family parse_family(const std::string& s);
std::string to_string(Family f);
WeightKind parse_weight_kind(const std::string& s);
std::string to_string(WeightKind k);

/// Instance `instance` of the family; deterministic in (spec, instance).
/// Pairs are visited in lexicographic order for the random families, and
/// weights are drawn afterwards in edge order. Star: center 0, leaves 1..n.
Graph generate(const GeneratorSpec& spec, std::uint64_t instance = 0);

}  // namespace stochmatch
