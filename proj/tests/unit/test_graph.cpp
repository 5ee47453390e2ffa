#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "stochmatch/errors.hpp"
#include "stochmatch/graph.hpp"

using namespace stochmatch;

namespace {

Graph triangle() {
  std::pair<VertexId, VertexId> p[] = {{0, 1}, {1, 2}, {0, 2}};
  return make_unweighted(3, p);
}

}  // namespace

TEST_CASE("degree on small fixtures") {
  auto t = triangle();
  for (VertexId v = 0; v < 3; ++v) CHECK(t.degree(v) == 2);

  std::pair<VertexId, VertexId> path[] = {{0, 1}, {1, 2}};
  auto p = make_unweighted(4, path);
  CHECK(p.degree(3) == 0);

  std::pair<VertexId, VertexId> star[] = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
  CHECK(make_unweighted(6, star).degree(0) == 5);

  CHECK_THROWS_AS(t.degree(3), InputError);
}

TEST_CASE("induced edges") {
  auto t = triangle();
  std::vector<VertexId> all{0, 1, 2}, two{0, 1}, none;
  CHECK(t.induced_edges(all).size() == 3);
  auto e = t.induced_edges(two);
  REQUIRE(e.size() == 1);
  CHECK(t.edge(e[0]).u == 0);
  CHECK(t.edge(e[0]).v == 1);
  CHECK(t.induced_edges(none).empty());
  std::vector<VertexId> bad{0, 7};
  CHECK_THROWS_AS(t.induced_edges(bad), InputError);
}

TEST_CASE("construction normalizes and rejects bad input") {
  Graph g(3, {{2, 1, 1.0}, {1, 0, 2.0}});
  CHECK(g.edge(0) == Edge{0, 1, 2.0});
  CHECK(g.edge(1) == Edge{1, 2, 1.0});
  CHECK(g.find_edge(2, 1) == EdgeIndex{1});
  CHECK_FALSE(g.find_edge(0, 2).has_value());

  CHECK_THROWS_AS(Graph(2, {{0, 0, 1.0}}), InputError);
  CHECK_THROWS_AS(Graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}), InputError);
  CHECK_THROWS_AS(Graph(2, {{0, 2, 1.0}}), InputError);
  CHECK_THROWS_AS(Graph(2, {{0, 1, -1.0}}), InputError);
  CHECK_THROWS_AS(Graph(2, {{0, 1, std::nan("")}}), InputError);
}

TEST_CASE("stochastic graph validation") {
  CHECK_THROWS_AS(StochasticGraph(triangle(), 0.0, 1.0, false), InputError);
  CHECK_THROWS_AS(StochasticGraph(triangle(), 1.0, 1.5, false), InputError);
  CHECK_THROWS_AS(StochasticGraph(Graph(2, {{0, 1, 2.0}}), 1.0, 1.0, false), InputError);
  StochasticGraph s(triangle(), 0.8, 0.5, false);
  CHECK(s.edge_realization_probability() == doctest::Approx(0.32));
}

TEST_CASE("handshake and induced monotonicity on random graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = oracle::random_graph(rng, 1 + trial % 9, 20, true);
    std::size_t sum = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) sum += g.degree(v);
    CHECK(sum == 2 * g.edge_count());

    std::vector<VertexId> all(g.vertex_count());
    std::iota(all.begin(), all.end(), 0);
    CHECK(g.induced_edges(all).size() == g.edge_count());

    std::vector<VertexId> sub;
    std::size_t prev = 0;
    for (VertexId v : all) {
      sub.push_back(v);
      auto now = g.induced_edges(sub).size();
      CHECK(now >= prev);
      prev = now;
    }
  }
}

TEST_CASE("masks round trip") {
  std::vector<EdgeIndex> idx{1, 4, 5};
  auto m = mask_from_indices(7, idx);
  CHECK(indices_from_mask(m) == idx);
  CHECK_THROWS_AS(mask_from_indices(3, idx), InputError);
}
