#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "stochmatch/errors.hpp"
#include "stochmatch/parallel.hpp"
#include "stochmatch/realization.hpp"

using namespace stochmatch;

namespace {

StochasticGraph single_edge(double p_v, double p_e) {
  return StochasticGraph(Graph(2, {{0, 1, 1.0}}), p_v, p_e, false);
}

std::string key(const Realization& r) {
  std::string s;
  boost::to_string(r.vertices, s);
  std::string t;
  boost::to_string(r.edges, t);
  return s + "|" + t;
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  RngSeed a{42, 7};
  Rng r1(a), r2(a);
  for (int i = 0; i < 100; ++i) CHECK(r1.next() == r2.next());
  CHECK(a.split(0) != a.split(1));
  CHECK(a.split(3) == a.split(3));
  CHECK(RngSeed{42, 8}.split(0) != a.split(0));
  Rng u(a);
  for (int i = 0; i < 1000; ++i) {
    double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("parallel_for covers every index and propagates errors") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 5) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("sampling with certain probabilities gives the full graph") {
  StochasticGraph g(Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}), 1.0, 1.0, false);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto r = sample_realization(g, RngSeed{s, 0});
    CHECK(r.vertices.all());
    CHECK(r.edges.all());
  }
}

TEST_CASE("realizations are consistent") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    auto base = oracle::random_graph(rng, 7, 15, false);
    StochasticGraph g(base, 0.6, 0.5, false);
    auto r = sample_realization(g, RngSeed{9, static_cast<std::uint64_t>(t)});
    for (auto e = r.edges.find_first(); e != EdgeMask::npos; e = r.edges.find_next(e)) {
      CHECK(r.vertices[base.edge(e).u]);
      CHECK(r.vertices[base.edge(e).v]);
    }
  }
}

TEST_CASE("single edge frequency matches p_v^2 p_e") {
  auto g = single_edge(0.8, 0.5);
  const int n = 1000000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += sample_realization(g, RngSeed{123, 0}.split(i)).edges[0];
  const double p = 0.32, sigma = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(hits / double(n) - p) <= 3 * sigma);
}

TEST_CASE("enumeration of a single edge") {
  auto g = single_edge(0.5, 0.5);
  std::map<std::string, double> got;
  enumerate_realizations(g, [&](const Realization& r, double p) { got[key(r)] += p; });
  CHECK(got.size() == 5);
  CHECK(got["00|0"] == doctest::Approx(0.25));
  CHECK(got["01|0"] == doctest::Approx(0.25));
  CHECK(got["10|0"] == doctest::Approx(0.25));
  CHECK(got["11|0"] == doctest::Approx(0.125));
  CHECK(got["11|1"] == doctest::Approx(0.125));
}

TEST_CASE("enumeration of an isolated vertex") {
  StochasticGraph g(Graph(1, {}), 0.3, 1.0, false);
  std::vector<std::pair<bool, double>> got;
  enumerate_realizations(g, [&](const Realization& r, double p) { got.push_back({r.vertices[0], p}); });
  REQUIRE(got.size() == 2);
  CHECK_FALSE(got[0].first);
  CHECK(got[0].second == doctest::Approx(0.7));
  CHECK(got[1].first);
  CHECK(got[1].second == doctest::Approx(0.3));
}

TEST_CASE("enumeration matches brute-force outcome table") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pr(0.2, 1.0);
  for (int t = 0; t < 40; ++t) {
    auto base = oracle::random_graph(rng, 1 + t % 6, 8, false);
    const double pv = pr(rng), pe = pr(rng);
    StochasticGraph g(base, pv, pe, false);
    std::map<std::string, double> mine, ref;
    double total = 0.0;
    enumerate_realizations(g, [&](const Realization& r, double p) {
      CHECK(mine.count(key(r)) == 0);
      mine[key(r)] = p;
      total += p;
    });
    CHECK(std::abs(total - 1.0) <= 1e-12);
    for (const auto& o : oracle::all_outcomes(base, pv, pe)) {
      Realization r{VertexMask(base.vertex_count()), EdgeMask(base.edge_count())};
      for (std::size_t v = 0; v < o.vertex.size(); ++v) r.vertices[v] = o.vertex[v];
      for (std::size_t e = 0; e < o.edge.size(); ++e) r.edges[e] = o.edge[e];
      if (o.probability > 0) ref[key(r)] = o.probability;
    }
    REQUIRE(mine.size() == ref.size());
    for (const auto& [k, p] : ref) CHECK(mine[k] == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("zero-probability outcomes are skipped") {
  std::pair<VertexId, VertexId> p[] = {{0, 1}, {1, 2}};
  StochasticGraph g(make_unweighted(3, p), 1.0, 1.0, false);
  int count = 0;
  enumerate_realizations(g, [&](const Realization& r, double prob) {
    ++count;
    CHECK(prob == 1.0);
    CHECK(r.edges.all());
  });
  CHECK(count == 1);
}

TEST_CASE("enumeration budget") {
  std::vector<Edge> edges;
  for (VertexId i = 0; i + 1 < 12; ++i) edges.push_back({i, i + 1});
  StochasticGraph g(Graph(12, edges), 0.5, 0.5, false);
  CHECK_THROWS_AS(enumerate_realizations(g, [](const Realization&, double) {}), BudgetError);
  try {
    enumerate_realizations(g, [](const Realization&, double) {}, 20);
  } catch (const BudgetError& e) {
    CHECK(e.limit() == 20);
    CHECK(std::string(e.what()).find("20") != std::string::npos);
  }
  CHECK_THROWS_AS(OutcomeSpace(g, g.graph().full_edge_mask()), BudgetError);
}

TEST_CASE("outcome space marginals sum to one and match the full enumeration") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto base = oracle::random_graph(rng, 6, 8, false);
    StochasticGraph g(base, 0.7, 0.6, false);
    EdgeMask sub(base.edge_count());
    for (std::size_t e = 0; e < base.edge_count(); e += 2) sub.set(e);
    OutcomeSpace space(g, sub);
    std::map<std::string, double> marg, full;
    double total = 0.0;
    space.visit_all([&](const Realization& r, double p) {
      std::string s;
      boost::to_string(r.edges, s);
      marg[s] += p;
      total += p;
    });
    CHECK(std::abs(total - 1.0) <= 1e-12);
    enumerate_realizations(g, [&](const Realization& r, double p) {
      std::string s;
      boost::to_string(restrict(r, sub).edges, s);
      full[s] += p;
    });
    REQUIRE(marg.size() == full.size());
    for (const auto& [k, p] : full) CHECK(marg[k] == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("restrict") {
  StochasticGraph g(Graph(3, {{0, 1}, {1, 2}, {0, 2}}), 1.0, 1.0, false);
  auto r = sample_realization(g, RngSeed{1, 1});
  auto none = restrict(r, g.graph().empty_edge_mask());
  CHECK(none.edges.none());
  CHECK(none.vertices == r.vertices);
  CHECK(restrict(r, g.graph().full_edge_mask()) == r);
  EdgeMask a(3), b(3);
  a.set(0).set(1);
  b.set(1).set(2);
  CHECK(restrict(restrict(r, a), b) == restrict(r, a & b));
}

TEST_CASE("sampled outcome frequencies agree with enumeration (chi-square)") {
  StochasticGraph g(Graph(3, {{0, 1}, {1, 2}}), 0.7, 0.6, false);
  std::map<std::string, double> expected;
  enumerate_realizations(g, [&](const Realization& r, double p) { expected[key(r)] = p; });
  const int n = 200000;
  std::map<std::string, int> seen;
  for (int i = 0; i < n; ++i) ++seen[key(sample_realization(g, RngSeed{77, 0}.split(i)))];
  double chi2 = 0.0;
  for (const auto& [k, p] : expected) {
    const double e = p * n;
    chi2 += (seen[k] - e) * (seen[k] - e) / e;
  }
  // 13 outcomes -> 12 degrees of freedom; 99.9th percentile is about 32.9.
  CHECK(expected.size() == 13);
  CHECK(chi2 < 32.9);
}
