#include "stochmatch/realization.hpp"

#include <cmath>

#include "stochmatch/errors.hpp"

namespace stochmatch {

Realization sample_realization(const StochasticGraph& g, Rng& rng) {
  const Graph& graph = g.graph();
  Realization r{VertexMask(graph.vertex_count()), EdgeMask(graph.edge_count())};
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    if (rng.bernoulli(g.p_v())) r.vertices.set(v);
  }
  const auto edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (r.vertices[edges[e].u] && r.vertices[edges[e].v] && rng.bernoulli(g.p_e())) r.edges.set(e);
  }
  return r;
}

Realization sample_realization(const StochasticGraph& g, RngSeed seed) {
  Rng rng(seed);
  return sample_realization(g, rng);
}

Realization restrict(const Realization& r, const EdgeMask& q) {
  if (q.size() != r.edges.size()) throw InputError("edge set size does not match the realization");
  return {r.vertices, r.edges & q};
}

OutcomeSpace::OutcomeSpace(const StochasticGraph& g, const EdgeMask& edges, std::size_t budget)
    : graph_(&g) {
  const Graph& graph = g.graph();
  if (edges.size() != graph.edge_count()) throw InputError("edge set size does not match the graph");
  std::vector<int> local(graph.vertex_count(), -1);
  for (auto e = edges.find_first(); e != EdgeMask::npos; e = edges.find_next(e)) {
    edges_.push_back(static_cast<EdgeIndex>(e));
    for (VertexId v : {graph.edge(e).u, graph.edge(e).v}) {
      if (local[v] < 0) local[v] = 0;
    }
  }
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (local[v] >= 0) {
      local[v] = static_cast<int>(vertices_.size());
      vertices_.push_back(v);
    }
  }
  for (EdgeIndex e : edges_) {
    local_endpoints_.push_back({static_cast<std::size_t>(local[graph.edge(e).u]),
                                static_cast<std::size_t>(local[graph.edge(e).v])});
  }
  if (bits() > budget) {
    throw BudgetError("realization enumeration exceeds the bit budget", bits(), budget);
  }
}

void OutcomeSpace::visit(std::size_t pattern, const RealizationVisitor& fn) const {
  const Graph& graph = graph_->graph();
  const double p_v = graph_->p_v(), p_e = graph_->p_e();
  const std::size_t k = vertices_.size();

  std::size_t present = 0;
  for (std::size_t i = 0; i < k; ++i) present += pattern >> i & 1;
  const double vertex_prob = std::pow(p_v, static_cast<double>(present)) *
                             std::pow(1.0 - p_v, static_cast<double>(k - present));
  if (vertex_prob == 0.0) return;

  Realization r{VertexMask(graph.vertex_count()), EdgeMask(graph.edge_count())};
  for (std::size_t i = 0; i < k; ++i) {
    if (pattern >> i & 1) r.vertices.set(vertices_[i]);
  }
  std::vector<EdgeIndex> live;
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const auto [a, b] = local_endpoints_[j];
    if ((pattern >> a & 1) && (pattern >> b & 1)) live.push_back(edges_[j]);
  }

  const std::size_t m = live.size();
  for (std::size_t sub = 0; sub < (std::size_t{1} << m); ++sub) {
    std::size_t on = 0;
    for (std::size_t j = 0; j < m; ++j) on += sub >> j & 1;
    const double prob = vertex_prob * std::pow(p_e, static_cast<double>(on)) *
                        std::pow(1.0 - p_e, static_cast<double>(m - on));
    if (prob == 0.0) continue;
    r.edges.reset();
    for (std::size_t j = 0; j < m; ++j) {
      if (sub >> j & 1) r.edges.set(live[j]);
    }
    fn(r, prob);
  }
}

void OutcomeSpace::visit_all(const RealizationVisitor& fn) const {
  for (std::size_t p = 0; p < vertex_pattern_count(); ++p) visit(p, fn);
}

void enumerate_realizations(const StochasticGraph& g, const RealizationVisitor& fn,
                            std::size_t budget) {
  const std::size_t n = g.vertex_count(), m = g.edge_count();
  if (n + m > budget) {
    throw BudgetError("realization enumeration exceeds the bit budget", n + m, budget);
  }
  // Isolated vertices are part of the outcome here, unlike OutcomeSpace.
  const Graph& graph = g.graph();
  std::vector<EdgeIndex> live;
  Realization r{VertexMask(n), EdgeMask(m)};
  for (std::size_t pattern = 0; pattern < (std::size_t{1} << n); ++pattern) {
    std::size_t present = 0;
    r.vertices.reset();
    for (std::size_t v = 0; v < n; ++v) {
      if (pattern >> v & 1) {
        r.vertices.set(v);
        ++present;
      }
    }
    const double vertex_prob = std::pow(g.p_v(), static_cast<double>(present)) *
                               std::pow(1.0 - g.p_v(), static_cast<double>(n - present));
    if (vertex_prob == 0.0) continue;
    live.clear();
    for (EdgeIndex e = 0; e < m; ++e) {
      if (r.vertices[graph.edge(e).u] && r.vertices[graph.edge(e).v]) live.push_back(e);
    }
    for (std::size_t sub = 0; sub < (std::size_t{1} << live.size()); ++sub) {
      std::size_t on = 0;
      r.edges.reset();
      for (std::size_t j = 0; j < live.size(); ++j) {
        if (sub >> j & 1) {
          r.edges.set(live[j]);
          ++on;
        }
      }
      const double prob = vertex_prob * std::pow(g.p_e(), static_cast<double>(on)) *
                          std::pow(1.0 - g.p_e(), static_cast<double>(live.size() - on));
      if (prob == 0.0) continue;
      fn(r, prob);
    }
  }
}

}  // namespace stochmatch
