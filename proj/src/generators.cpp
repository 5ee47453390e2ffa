#include "stochmatch/generators.hpp"

#include <cmath>

#include "stochmatch/errors.hpp"
#include "stochmatch/rng.hpp"

namespace stochmatch {

Family parse_family(const std::string& s) {
  if (s == "erdos-renyi") return Family::erdos_renyi;
  if (s == "bipartite-random") return Family::bipartite_random;
  if (s == "complete") return Family::complete;
  if (s == "path") return Family::path;
  if (s == "star") return Family::star;
  throw InputError("unknown generator family '" + s + "'");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::erdos_renyi: return "erdos-renyi";
    case Family::bipartite_random: return "bipartite-random";
    case Family::complete: return "complete";
    case Family::path: return "path";
    case Family::star: return "star";
  }
  return "erdos-renyi";
}

WeightKind parse_weight_kind(const std::string& s) {
  if (s == "unit") return WeightKind::unit;
  if (s == "uniform") return WeightKind::uniform;
  if (s == "exponential") return WeightKind::exponential;
  throw InputError("unknown weight model '" + s + "'");
}

std::string to_string(WeightKind k) {
  switch (k) {
    case WeightKind::unit: return "unit";
    case WeightKind::uniform: return "uniform";
    case WeightKind::exponential: return "exponential";
  }
  return "unit";
}

Graph generate(const GeneratorSpec& spec, std::uint64_t instance) {
  const auto& wm = spec.weights;
  if (wm.kind == WeightKind::uniform && !(wm.lo >= 0.0 && wm.lo <= wm.hi && std::isfinite(wm.hi))) {
    throw InputError("uniform weights need 0 <= lo <= hi");
  }
  if (wm.kind == WeightKind::exponential && !(wm.rate > 0.0 && std::isfinite(wm.rate))) {
    throw InputError("exponential weights need rate > 0");
  }
  Rng rng(RngSeed{spec.seed, 0}.split(instance));

  std::size_t n = 0;
  std::vector<Edge> edges;
  switch (spec.family) {
    case Family::erdos_renyi:
      if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw InputError("edge probability must lie in [0, 1]");
      n = spec.n;
      for (VertexId a = 0; a < n; ++a)
        for (VertexId b = a + 1; b < n; ++b)
          if (rng.bernoulli(spec.p)) edges.push_back({a, b});
      break;
    case Family::bipartite_random:
      if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw InputError("edge probability must lie in [0, 1]");
      n = spec.n_left + spec.n_right;
      for (VertexId a = 0; a < spec.n_left; ++a)
        for (VertexId b = 0; b < spec.n_right; ++b)
          if (rng.bernoulli(spec.p)) edges.push_back({a, static_cast<VertexId>(spec.n_left + b)});
      break;
    case Family::complete:
      n = spec.n;
      for (VertexId a = 0; a < n; ++a)
        for (VertexId b = a + 1; b < n; ++b) edges.push_back({a, b});
      break;
    case Family::path:
      n = spec.n;
      for (VertexId a = 0; a + 1 < n; ++a) edges.push_back({a, a + 1});
      break;
    case Family::star:
      n = spec.n + 1;
      for (VertexId leaf = 1; leaf < n; ++leaf) edges.push_back({0, leaf});
      break;
  }

  for (auto& e : edges) {
    switch (wm.kind) {
      case WeightKind::unit: e.weight = 1.0; break;
      case WeightKind::uniform: e.weight = wm.lo + (wm.hi - wm.lo) * rng.uniform(); break;
      case WeightKind::exponential: e.weight = -std::log(1.0 - rng.uniform()) / wm.rate; break;
    }
  }
  return Graph(n, std::move(edges));
}

}  // namespace stochmatch
