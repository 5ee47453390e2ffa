#include "stochmatch/edcs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stochmatch/errors.hpp"
#include "stochmatch/matching.hpp"

namespace stochmatch {

EdcsParams compute_beta(double epsilon, double p_v, double p_e, double C) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw InputError("epsilon must lie in (0, 1/2)");
  if (!(p_v > 0.0 && p_v <= 1.0) || !(p_e > 0.0 && p_e <= 1.0)) {
    throw InputError("probabilities must lie in (0, 1]");
  }
  if (!(C > 0.0)) throw InputError("C must be positive");
  const double p = p_v * p_e;
  const double beta = std::ceil(C * std::log(1.0 / (epsilon * p)) / (epsilon * epsilon * p));
  EdcsParams params;
  params.beta = static_cast<std::uint64_t>(std::max(1.0, beta));
  params.beta_minus = params.beta - 1;
  params.epsilon = epsilon;
  params.C = C;
  return params;
}

EdcsParams two_thirds_beta(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  const double lambda = epsilon / 32.0;
  EdcsParams params;
  params.beta = static_cast<std::uint64_t>(std::ceil(8.0 / (lambda * lambda) * std::log(1.0 / lambda)));
  params.beta_minus = static_cast<std::uint64_t>(std::ceil((1.0 - lambda) * static_cast<double>(params.beta)));
  params.epsilon = epsilon;
  params.C = 0.0;
  return params;
}

EdcsSubgraph build_edcs(const Graph& g, const EdcsParams& params, std::uint64_t fixup_cap) {
  if (params.beta <= params.beta_minus) throw InputError("beta must exceed beta_minus");
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  EdcsSubgraph out{EdgeMask(m), params, false, 0};
  std::vector<std::uint64_t> deg(g.vertex_count(), 0);

  auto bump = [&](std::size_t e) {
    if (++out.fixups > fixup_cap) {
      throw std::runtime_error("EDCS fix-up exceeded " + std::to_string(fixup_cap) +
                               " changes (beta " + std::to_string(params.beta) + ", beta_minus " +
                               std::to_string(params.beta_minus) + ", edge " + std::to_string(e) +
                               ")");
    }
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t e = 0; e < m; ++e) {
      if (out.h_edges[e] && deg[edges[e].u] + deg[edges[e].v] > params.beta) {
        bump(e);
        out.h_edges.reset(e);
        --deg[edges[e].u];
        --deg[edges[e].v];
        changed = true;
      }
    }
    if (changed) continue;
    for (std::size_t e = 0; e < m; ++e) {
      if (!out.h_edges[e] && deg[edges[e].u] + deg[edges[e].v] < params.beta_minus) {
        bump(e);
        out.h_edges.set(e);
        ++deg[edges[e].u];
        ++deg[edges[e].v];
        changed = true;
      }
    }
  }
  out.certified = verify_edcs(g, out.h_edges, params).empty();
  return out;
}

std::vector<EdcsViolation> verify_edcs(const Graph& g, const EdgeMask& h, const EdcsParams& params) {
  if (h.size() != g.edge_count()) throw InputError("edge set size does not match the graph");
  const auto deg = g.degrees(h);
  std::vector<EdcsViolation> out;
  const auto edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::uint64_t sum = deg[edges[e].u] + deg[edges[e].v];
    if (h[e] ? sum > params.beta : sum < params.beta_minus) {
      out.push_back({static_cast<EdgeIndex>(e), static_cast<bool>(h[e]), sum});
    }
  }
  return out;
}

double edcs_matching_ratio(const Graph& g, const EdgeMask& h) {
  const MatchingEngine engine(g);
  const double full = engine.solve().total_weight;
  if (full == 0.0) return 1.0;
  return engine.solve(h).total_weight / full;
}

EdcsStochasticResult edcs_stochastic_ratio(const StochasticGraph& g, const EdcsParams& params,
                                           const EstimatorOptions& options) {
  EdcsStochasticResult r;
  r.subgraph = build_edcs(g.graph(), params);
  r.ratio = approximation_ratio(g, r.subgraph.h_edges, options);
  return r;
}

}  // namespace stochmatch
