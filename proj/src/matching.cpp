#include "stochmatch/matching.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <variant>

#include "blossom.hpp"
#include "stochmatch/errors.hpp"

namespace stochmatch {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using Int128 = __int128;

// Headroom: keys plus one carry bit for dual sums must stay below 127 bits.
constexpr int kMaxInt128KeyBits = 125;

template <class K>
Matching run_blossom(const Graph& graph, const EdgeMask& active, const std::vector<K>& keys) {
  const auto edges = graph.edges();
  std::vector<int> local(graph.vertex_count(), -1);
  std::vector<EdgeIndex> chosen_edges;
  std::vector<detail::BlossomEdge<K>> blossom_edges;
  int nlocal = 0;
  for (auto i = active.find_first(); i != EdgeMask::npos; i = active.find_next(i)) {
    if (!(edges[i].weight > 0.0)) continue;
    const auto& e = edges[i];
    if (local[e.u] < 0) local[e.u] = nlocal++;
    if (local[e.v] < 0) local[e.v] = nlocal++;
    blossom_edges.push_back({local[e.u], local[e.v], keys[i]});
    chosen_edges.push_back(static_cast<EdgeIndex>(i));
  }

  Matching result;
  if (blossom_edges.empty()) return result;

  detail::BlossomSolver<K> solver(nlocal, blossom_edges);
  const auto mate_edge = solver.solve();
  for (int v = 0; v < nlocal; ++v) {
    const int k = mate_edge[v];
    if (k >= 0 && blossom_edges[k].i == v) result.edges.push_back(chosen_edges[k]);
  }
  std::sort(result.edges.begin(), result.edges.end());
  for (EdgeIndex e : result.edges) result.total_weight += edges[e].weight;
  return result;
}

}  // namespace

struct MatchingEngine::Keys {
  std::variant<std::vector<Int128>, std::vector<BigInt>> keys;
};

MatchingEngine::MatchingEngine(const Graph& graph) : graph_(&graph), keys_(std::make_unique<Keys>()) {
  const auto edges = graph.edges();
  const std::size_t m = edges.size();

  // Exact decomposition weight = mantissa * 2^exponent with odd mantissa.
  std::vector<std::uint64_t> mantissa(m, 0);
  std::vector<int> exponent(m, 0);
  int min_exponent = 0;
  bool any_positive = false;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = edges[i].weight;
    if (!(w > 0.0)) continue;
    int exp2 = 0;
    const double frac = std::frexp(w, &exp2);
    auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
    exp2 -= 53;
    const int tz = std::countr_zero(mant);
    mant >>= tz;
    exp2 += tz;
    mantissa[i] = mant;
    exponent[i] = exp2;
    min_exponent = any_positive ? std::min(min_exponent, exp2) : exp2;
    any_positive = true;
  }

  int max_weight_bits = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (mantissa[i] == 0) continue;
    const int bits = static_cast<int>(std::bit_width(mantissa[i])) + (exponent[i] - min_exponent);
    max_weight_bits = std::max(max_weight_bits, bits);
  }
  const int key_bits = max_weight_bits + static_cast<int>(m) + 3;

  // key_i = 2 * (W_i * 2^(m+1) + 2^(m-1-i)); zero-weight edges get key 0 and
  // are skipped by the solver.
  if (key_bits <= kMaxInt128KeyBits) {
    std::vector<Int128> keys(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (mantissa[i] == 0) continue;
      const Int128 w = static_cast<Int128>(mantissa[i]) << (exponent[i] - min_exponent);
      keys[i] = (w << (m + 2)) + (static_cast<Int128>(1) << (m - i));
    }
    keys_->keys = std::move(keys);
  } else {
    std::vector<BigInt> keys(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (mantissa[i] == 0) continue;
      BigInt w = mantissa[i];
      w <<= (exponent[i] - min_exponent);
      keys[i] = (w << (m + 2)) + (BigInt(1) << (m - i));
    }
    keys_->keys = std::move(keys);
  }
}

MatchingEngine::~MatchingEngine() = default;
MatchingEngine::MatchingEngine(MatchingEngine&&) noexcept = default;
MatchingEngine& MatchingEngine::operator=(MatchingEngine&&) noexcept = default;

Matching MatchingEngine::solve() const { return solve(graph_->full_edge_mask()); }

Matching MatchingEngine::solve(const EdgeMask& active) const {
  if (active.size() != graph_->edge_count()) {
    throw InputError("edge mask size does not match the graph's edge count");
  }
  return std::visit([&](const auto& keys) { return run_blossom(*graph_, active, keys); },
                    keys_->keys);
}

Matching max_weight_matching(const Graph& graph) { return MatchingEngine(graph).solve(); }

Matching max_weight_matching(const Graph& graph, const EdgeMask& active) {
  return MatchingEngine(graph).solve(active);
}

double max_matching_value(const Graph& graph) { return max_weight_matching(graph).total_weight; }

double max_matching_value(const Graph& graph, const EdgeMask& active) {
  return max_weight_matching(graph, active).total_weight;
}

bool is_matching(const Graph& graph, std::span<const EdgeIndex> edges) {
  std::vector<bool> used(graph.vertex_count(), false);
  for (EdgeIndex e : edges) {
    const auto& edge = graph.edge(e);
    if (used[edge.u] || used[edge.v]) return false;
    used[edge.u] = used[edge.v] = true;
  }
  return true;
}

}  // namespace stochmatch
