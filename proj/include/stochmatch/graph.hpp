#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace stochmatch {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint32_t;

// Bit i set <=> vertex i (resp. edge i of the owning graph) is present.
using VertexMask = boost::dynamic_bitset<>;
using EdgeMask = boost::dynamic_bitset<>;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple undirected weighted graph on the dense vertex set [0, n).
///
/// Edges are normalized so that u < v and stored in lexicographic (u, v)
/// order; an edge's position in that order is its EdgeIndex and is the
/// canonical order every deterministic tie-break in the library relies on.
/// Immutable after construction.
class Graph {
 public:
  Graph() = default;

  /// Throws InputError on self-loops, parallel edges, out-of-range endpoints
  /// and negative or non-finite weights.
  Graph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  double weight(EdgeIndex e) const { return edges_.at(e).weight; }

  /// Incident edge indices of v, ascending.
  std::span<const EdgeIndex> incident(VertexId v) const;
  std::size_t degree(VertexId v) const;

  std::optional<EdgeIndex> find_edge(VertexId a, VertexId b) const;

  /// Edges with both endpoints in `subset`, ascending by index.
  std::vector<EdgeIndex> induced_edges(std::span<const VertexId> subset) const;

  EdgeMask full_edge_mask() const { return EdgeMask(edges_.size()).set(); }
  EdgeMask empty_edge_mask() const { return EdgeMask(edges_.size()); }

  /// Degree of every vertex in the subgraph formed by the edges in `mask`.
  std::vector<std::size_t> degrees(const EdgeMask& mask) const;

 private:
  void check_vertex(VertexId v) const;

  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> incidence_offsets_{0};
  std::vector<EdgeIndex> incidence_;
};

EdgeMask mask_from_indices(std::size_t edge_count, std::span<const EdgeIndex> indices);
std::vector<EdgeIndex> indices_from_mask(const EdgeMask& mask);

/// A graph together with the vertex and edge realization probabilities.
class StochasticGraph {
 public:
  /// Throws InputError unless p_v, p_e lie in (0, 1], or when `weighted` is
  /// false and some edge weight differs from 1.
  StochasticGraph(Graph graph, double p_v, double p_e, bool weighted);

  const Graph& graph() const noexcept { return graph_; }
  double p_v() const noexcept { return p_v_; }
  double p_e() const noexcept { return p_e_; }
  bool weighted() const noexcept { return weighted_; }

  std::size_t vertex_count() const noexcept { return graph_.vertex_count(); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }

  /// Probability that a given edge is realized: p_v^2 * p_e.
  double edge_realization_probability() const noexcept { return p_v_ * p_v_ * p_e_; }

  StochasticGraph with_probabilities(double p_v, double p_e) const;

 private:
  Graph graph_;
  double p_v_;
  double p_e_;
  bool weighted_;
};

/// Unit-weight graph from endpoint pairs.
Graph make_unweighted(std::size_t vertex_count,
                      std::span<const std::pair<VertexId, VertexId>> pairs);

}  // namespace stochmatch
