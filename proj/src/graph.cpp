#include "stochmatch/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochmatch/errors.hpp"

namespace stochmatch {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.u >= vertex_count_ || e.v >= vertex_count_) {
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") has an endpoint outside [0, " + std::to_string(vertex_count_) + ")");
    }
    if (e.u == e.v) {
      throw InputError("self-loop at vertex " + std::to_string(e.u));
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") has a negative or non-finite weight");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::stable_sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      throw InputError("parallel edge (" + std::to_string(edges_[i].u) + ", " +
                       std::to_string(edges_[i].v) + ")");
    }
  }

  // CSR incidence; edges are visited in index order so each list is sorted.
  std::vector<std::size_t> counts(vertex_count_, 0);
  for (const auto& e : edges_) {
    ++counts[e.u];
    ++counts[e.v];
  }
  incidence_offsets_.assign(vertex_count_ + 1, 0);
  for (std::size_t v = 0; v < vertex_count_; ++v) {
    incidence_offsets_[v + 1] = incidence_offsets_[v] + counts[v];
  }
  incidence_.resize(incidence_offsets_.back());
  std::vector<std::size_t> cursor(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
  for (EdgeIndex i = 0; i < edges_.size(); ++i) {
    incidence_[cursor[edges_[i].u]++] = i;
    incidence_[cursor[edges_[i].v]++] = i;
  }
}

void Graph::check_vertex(VertexId v) const {
  if (v >= vertex_count_) {
    throw InputError("vertex " + std::to_string(v) + " outside [0, " +
                     std::to_string(vertex_count_) + ")");
  }
}

std::span<const EdgeIndex> Graph::incident(VertexId v) const {
  check_vertex(v);
  return {incidence_.data() + incidence_offsets_[v],
          incidence_offsets_[v + 1] - incidence_offsets_[v]};
}

std::size_t Graph::degree(VertexId v) const { return incident(v).size(); }

std::optional<EdgeIndex> Graph::find_edge(VertexId a, VertexId b) const {
  check_vertex(a);
  check_vertex(b);
  if (a > b) std::swap(a, b);
  for (EdgeIndex e : incident(a)) {
    if (edges_[e].v == b && edges_[e].u == a) return e;
  }
  return std::nullopt;
}

std::vector<EdgeIndex> Graph::induced_edges(std::span<const VertexId> subset) const {
  std::vector<bool> in_subset(vertex_count_, false);
  for (VertexId v : subset) {
    check_vertex(v);
    in_subset[v] = true;
  }
  std::vector<EdgeIndex> out;
  for (EdgeIndex i = 0; i < edges_.size(); ++i) {
    if (in_subset[edges_[i].u] && in_subset[edges_[i].v]) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Graph::degrees(const EdgeMask& mask) const {
  std::vector<std::size_t> deg(vertex_count_, 0);
  for (auto i = mask.find_first(); i != EdgeMask::npos; i = mask.find_next(i)) {
    ++deg[edges_[i].u];
    ++deg[edges_[i].v];
  }
  return deg;
}

EdgeMask mask_from_indices(std::size_t edge_count, std::span<const EdgeIndex> indices) {
  EdgeMask mask(edge_count);
  for (EdgeIndex e : indices) {
    if (e >= edge_count) throw InputError("edge index " + std::to_string(e) + " out of range");
    mask.set(e);
  }
  return mask;
}

std::vector<EdgeIndex> indices_from_mask(const EdgeMask& mask) {
  std::vector<EdgeIndex> out;
  out.reserve(mask.count());
  for (auto i = mask.find_first(); i != EdgeMask::npos; i = mask.find_next(i)) {
    out.push_back(static_cast<EdgeIndex>(i));
  }
  return out;
}

namespace {

void check_probability(double p, const char* name) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw InputError(std::string(name) + " must lie in (0, 1], got " + std::to_string(p));
  }
}

}  // namespace

StochasticGraph::StochasticGraph(Graph graph, double p_v, double p_e, bool weighted)
    : graph_(std::move(graph)), p_v_(p_v), p_e_(p_e), weighted_(weighted) {
  check_probability(p_v, "p_v");
  check_probability(p_e, "p_e");
  if (!weighted_) {
    for (const auto& e : graph_.edges()) {
      if (e.weight != 1.0) {
        throw InputError("unweighted graph has edge (" + std::to_string(e.u) + ", " +
                         std::to_string(e.v) + ") with weight != 1");
      }
    }
  }
}

StochasticGraph StochasticGraph::with_probabilities(double p_v, double p_e) const {
  return StochasticGraph(graph_, p_v, p_e, weighted_);
}

Graph make_unweighted(std::size_t vertex_count,
                      std::span<const std::pair<VertexId, VertexId>> pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [a, b] : pairs) edges.push_back({a, b, 1.0});
  return Graph(vertex_count, std::move(edges));
}

}  // namespace stochmatch
