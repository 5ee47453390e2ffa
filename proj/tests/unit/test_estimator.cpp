#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stochmatch/errors.hpp"
#include "stochmatch/estimator.hpp"
#include "stochmatch/fractional.hpp"
#include "stochmatch/matching.hpp"

using namespace stochmatch;

TEST_CASE("exact expectations on fixtures") {
  StochasticGraph edge(Graph(2, {{0, 1}}), 0.5, 0.5, false);
  auto e = expected_matching_exact(edge);
  CHECK(e.mean == doctest::Approx(0.125));
  CHECK(e.ci_halfwidth == 0.0);
  CHECK(e.mode == EstimateMode::exact);

  StochasticGraph path(Graph(3, {{0, 1}, {1, 2}}), 0.5, 1.0, false);
  CHECK(expected_matching_exact(path).mean == doctest::Approx(0.375));
  CHECK(expected_matching_exact(path, path.graph().empty_edge_mask()).mean == 0.0);
}

TEST_CASE("exact expectation equals brute force and sum of w q") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pr(0.2, 1.0);
  for (int t = 0; t < 60; ++t) {
    const bool weighted = t % 2 == 1;
    auto base = oracle::random_graph(rng, 2 + t % 5, 9, weighted);
    StochasticGraph g(base, pr(rng), pr(rng), weighted);
    auto ref = oracle::brute_expectation(base, g.p_v(), g.p_e());
    auto got = expected_matching_exact(g);
    CHECK(got.mean == doctest::Approx(ref.expected).epsilon(1e-12));

    EstimatorOptions opts;
    opts.mode = QMode::exact;
    auto stats = compute_edge_stats(g, opts);
    double identity = 0.0;
    for (std::size_t e = 0; e < base.edge_count(); ++e) {
      identity += stats.phi_e[e];
      CHECK(stats.q[e] == doctest::Approx(ref.q[e]).epsilon(1e-12));
    }
    CHECK(std::abs(identity - got.mean) <= 1e-12);
    for (double qv : stats.q_v) CHECK(qv <= 1.0 + 1e-12);

    std::vector<bool> half(base.edge_count());
    EdgeMask mask(base.edge_count());
    for (std::size_t e = 0; e < half.size(); e += 2) half[e] = true, mask.set(e);
    auto restricted = oracle::brute_expectation(base, g.p_v(), g.p_e(), half);
    CHECK(expected_matching_exact(g, mask).mean == doctest::Approx(restricted.expected).epsilon(1e-12));
  }
}

TEST_CASE("exact results do not depend on worker count") {
  std::mt19937_64 rng(8);
  auto base = oracle::random_graph(rng, 8, 12, true);
  StochasticGraph g(base, 0.6, 0.7, true);
  CHECK(expected_matching_exact(g, std::nullopt, 22, 1).mean ==
        expected_matching_exact(g, std::nullopt, 22, 3).mean);
}

TEST_CASE("Monte Carlo estimates") {
  StochasticGraph full(Graph(4, {{0, 1, 2.0}, {1, 2, 1.0}, {2, 3, 2.0}}), 1.0, 1.0, true);
  auto d = expected_matching_mc(full, std::nullopt, 100, RngSeed{1, 0}, 0.999);
  CHECK(d.mean == 4.0);
  CHECK(d.ci_halfwidth == 0.0);

  StochasticGraph edge(Graph(2, {{0, 1}}), 0.5, 0.5, false);
  auto e = expected_matching_mc(edge, std::nullopt, 100000, RngSeed{2, 0});
  CHECK(std::abs(e.mean - 0.125) <= 3 * std::sqrt(0.125 * 0.875 / 100000));
  CHECK(e.ci_halfwidth == doctest::Approx(std::sqrt(std::log(2 / 0.01) / 200000)));

  auto one = expected_matching_mc(edge, std::nullopt, 1, RngSeed{3, 0});
  auto r = sample_realization(edge, RngSeed{3, 0}.split(0));
  CHECK(one.mean == (r.edges[0] ? 1.0 : 0.0));

  CHECK(expected_matching_mc(edge, std::nullopt, 5000, RngSeed{4, 0}, 0.99, 1).mean ==
        expected_matching_mc(edge, std::nullopt, 5000, RngSeed{4, 0}, 0.99, 4).mean);
  CHECK_THROWS_AS(expected_matching_mc(edge, std::nullopt, 0, RngSeed{}), InputError);
}

TEST_CASE("Monte Carlo agrees with the oracle within its interval") {
  // 40 independent seeds at 99% confidence; Hoeffding is conservative, so
  // allow at most 2 misses.
  std::mt19937_64 rng(44);
  auto base = oracle::random_graph(rng, 6, 9, true);
  StochasticGraph g(base, 0.7, 0.6, true);
  const double exact = expected_matching_exact(g).mean;
  int misses = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    auto est = expected_matching_mc(g, std::nullopt, 2000, RngSeed{s, 9});
    if (std::abs(est.mean - exact) > est.ci_halfwidth) ++misses;
  }
  CHECK(misses <= 2);
}

TEST_CASE("approximation ratio") {
  std::mt19937_64 rng(2);
  auto base = oracle::random_graph(rng, 6, 9, false);
  while (base.edge_count() == 0) base = oracle::random_graph(rng, 6, 9, false);
  StochasticGraph g(base, 0.6, 0.6, false);
  EstimatorOptions opts;
  auto all = approximation_ratio(g, base.full_edge_mask(), opts);
  CHECK(all.ratio == 1.0);
  auto none = approximation_ratio(g, base.empty_edge_mask(), opts);
  CHECK(none.ratio == 0.0);

  StochasticGraph empty(Graph(3, {}), 0.5, 0.5, false);
  CHECK(approximation_ratio(empty, empty.graph().empty_edge_mask(), opts).ratio == 1.0);

  opts.mode = QMode::monte_carlo;
  opts.samples = 3000;
  auto mc = approximation_ratio(g, base.full_edge_mask(), opts);
  CHECK(mc.ratio == 1.0);
  CHECK(mc.numerator.mode == EstimateMode::monte_carlo);
  CHECK(mc.ci_halfwidth > 0.0);
}

TEST_CASE("automatic mode falls back to Monte Carlo beyond the budget") {
  std::vector<Edge> edges;
  for (VertexId i = 0; i + 1 < 14; ++i) edges.push_back({i, i + 1});
  StochasticGraph g(Graph(14, edges), 0.9, 0.9, false);
  EstimatorOptions opts;
  opts.samples = 500;
  CHECK(expected_matching(g, std::nullopt, opts).mode == EstimateMode::monte_carlo);
  opts.mode = QMode::exact;
  CHECK_THROWS_AS(expected_matching(g, std::nullopt, opts), BudgetError);
  CHECK(parse_q_mode("mc") == QMode::monte_carlo);
  CHECK_THROWS_AS(parse_q_mode("bogus"), InputError);
}
