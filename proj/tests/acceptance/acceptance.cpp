// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stochmatch/edcs.hpp"
#include "stochmatch/experiment.hpp"
#include "stochmatch/fractional.hpp"
#include "stochmatch/sparsifier.hpp"

using namespace stochmatch;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

EstimatorOptions exact_opts() {
  EstimatorOptions o;
  o.mode = QMode::exact;
  return o;
}

double draw_p(std::mt19937_64& rng, double lo) {
  return std::uniform_real_distribution<double>(lo, 1.0)(rng);
}

Outcome oracle_identity() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  Outcome out;
  double worst = 0.0;
  const int graphs = 120;
  for (int t = 0; t < graphs; ++t) {
    auto g = oracle::random_graph(rng, 2 + rng() % 5, 10, t % 2 == 0);
    const double pv = draw_p(rng, 0.2), pe = draw_p(rng, 0.2);
    StochasticGraph sg(g, pv, pe, t % 2 == 0);
    const double lib = expected_matching_exact(sg).mean;
    const auto brute = oracle::brute_expectation(g, pv, pe);
    double sum = 0.0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) sum += g.weight(e) * brute.q[e];
    worst = std::max(worst, std::abs(lib - sum));
  }
  const double secs = seconds_since(t0);
  out.pass = worst <= 1e-12 && secs <= 60.0;
  out.detail = std::to_string(graphs) + " graphs, max |E[mu] - sum w q| = " + fmt("%.3g", worst) +
               ", " + fmt("%.1f", secs) + " s";
  return out;
}

Outcome matching_equivalence() {
  std::mt19937_64 rng(1002);
  Outcome out;
  int mismatches = 0, unstable = 0;
  const int graphs = 1500;
  for (int t = 0; t < graphs; ++t) {
    Graph g = oracle::random_graph(rng, 2 + rng() % 7, 8, true);
    if (t % 3 == 0) {
      // Small integer weights force ties.
      std::vector<Edge> edges(g.edges().begin(), g.edges().end());
      for (auto& e : edges) e.weight = static_cast<double>(1 + rng() % 3);
      g = Graph(g.vertex_count(), edges);
    }
    const auto a = max_weight_matching(g);
    const auto b = max_weight_matching(g);
    const auto brute = oracle::brute_force_matching(g);
    double brute_total = 0.0;
    for (auto e : brute.edges) brute_total += g.weight(e);
    if (a.edges != brute.edges || a.total_weight != brute_total) ++mismatches;
    if (a.edges != b.edges) ++unstable;
  }
  out.pass = mismatches == 0 && unstable == 0;
  out.detail = std::to_string(graphs) + " graphs, " + std::to_string(mismatches) + " mismatches, " +
               std::to_string(unstable) + " unstable tie-breaks";
  return out;
}

Outcome degenerate_ratio() {
  std::mt19937_64 rng(1003);
  Outcome out;
  int tested = 0, off = 0;
  for (int t = 0; t < 60; ++t) {
    const bool weighted = t % 2 == 1;
    auto g = oracle::random_graph(rng, 3 + rng() % 6, 12, weighted);
    StochasticGraph sg(g, 1.0, 1.0, weighted);
    const auto s = build_sparsifier(sg, compute_params(0.1, 1.0, 1.0, 500), RngSeed{1003, static_cast<std::uint64_t>(t)});
    if (approximation_ratio(sg, s.q_edges, exact_opts()).ratio != 1.0) ++off;
    if (edcs_stochastic_ratio(sg, compute_beta(0.25, 1.0, 1.0), exact_opts()).ratio.ratio != 1.0) ++off;
    tested += 2;
  }
  out.pass = off == 0;
  out.detail = std::to_string(tested) + " runs (sampled-matching sparsifier and EDCS), " + std::to_string(off) + " with ratio != 1";
  return out;
}

struct FloorStats {
  int instances = 0;
  int below = 0;
  double min_ratio = 1.0;
  double mean_ratio = 0.0;
  double kept = 0.0;  // mean |Q| / |E|
};

FloorStats sparsifier_floor(bool weighted, double floor, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double ps[] = {0.3, 0.5, 0.8, 1.0};
  FloorStats st;
  for (int t = 0; t < 60; ++t) {
    auto g = oracle::random_graph(rng, 4 + rng() % 4, 10, weighted, 0.1, 10.0);
    const double pv = ps[rng() % 4], pe = ps[rng() % 4];
    StochasticGraph sg(g, pv, pe, weighted);
    const auto s = build_sparsifier(sg, compute_params(0.1, pv, pe, 2000), RngSeed{seed, static_cast<std::uint64_t>(t)});
    const double r = approximation_ratio(sg, s.q_edges, exact_opts()).ratio;
    ++st.instances;
    st.below += r < floor;
    st.min_ratio = std::min(st.min_ratio, r);
    st.mean_ratio += r;
    st.kept += g.edge_count() ? double(s.q_edges.count()) / double(g.edge_count()) : 1.0;
  }
  st.mean_ratio /= st.instances;
  st.kept /= st.instances;
  return st;
}

Outcome unweighted_floor() {
  const auto t0 = Clock::now();
  auto st = sparsifier_floor(false, 0.65, 1004);
  const double secs = seconds_since(t0);
  return {st.below == 0 && secs <= 600.0,
          std::to_string(st.instances) + " instances, min ratio " + fmt("%.4f", st.min_ratio) + ", mean " +
              fmt("%.4f", st.mean_ratio) + ", mean |Q|/|E| " + fmt("%.3f", st.kept) + ", " +
              fmt("%.1f", secs) + " s"};
}

Outcome weighted_floor() {
  auto st = sparsifier_floor(true, 0.5, 1005);
  return {st.below == 0, std::to_string(st.instances) + " instances, min ratio " + fmt("%.4f", st.min_ratio) +
                             ", mean " + fmt("%.4f", st.mean_ratio) + ", mean |Q|/|E| " +
                             fmt("%.3f", st.kept)};
}

struct Instance {
  StochasticGraph g;
  Sparsifier s;
  EdgeStats stats;
  EdgePartition part;
};

Instance make_instance(std::mt19937_64& rng, bool weighted, double eps, std::uint64_t seed) {
  const double ps[] = {0.3, 0.5, 0.8, 1.0};
  auto base = oracle::random_graph(rng, 4 + rng() % 5, 12, weighted);
  StochasticGraph g(base, ps[rng() % 4], ps[rng() % 4], weighted);
  auto s = build_sparsifier(g, compute_params(eps, g.p_v(), g.p_e(), 1000), RngSeed{seed, 0});
  auto stats = compute_edge_stats(g, exact_opts());
  stats.attach_frequencies(s);
  auto part = classify_edges(s, stats.q);
  stats.restrict_to_noncrucial(base, part.noncrucial);
  return {g, s, stats, part};
}

Outcome noncrucial_invariants() {
  std::mt19937_64 rng(1006);
  const double eps = 0.2;
  const std::size_t max_set = 5;
  int runs = 0, vertex_bad = 0, odd_bad = 0, with_n = 0;
  for (int t = 0; t < 80; ++t) {
    auto inst = make_instance(rng, t % 2 == 1, eps, 1006 + t);
    const Graph& g = inst.g.graph();
    with_n += inst.part.noncrucial.any();
    for (int r = 0; r < 10; ++r) {
      const auto real = sample_realization(inst.g, RngSeed{1006, static_cast<std::uint64_t>(t * 10 + r)});
      const auto x = non_crucial_procedure(inst.g, inst.s, inst.stats, inst.part.noncrucial, real, eps);
      ++runs;
      const auto loads = x.vertex_loads(g);
      for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (loads[v] > std::max(inst.stats.q_v[v], eps) / inst.g.p_v() + 1e-9) ++vertex_bad;
      // Exhaustive scan of every vertex subset with 2 <= |U| <= 1/eps.
      const std::uint32_t n = static_cast<std::uint32_t>(g.vertex_count());
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        if (size < 2 || size > max_set) continue;
        double load = 0.0;
        for (std::size_t e = 0; e < g.edge_count(); ++e)
          if ((mask >> g.edge(e).u & 1) && (mask >> g.edge(e).v & 1)) load += x.x[e];
        if (load > eps * static_cast<double>(size / 2) + 1e-9) ++odd_bad;
      }
    }
  }
  return {vertex_bad == 0 && odd_bad == 0,
          std::to_string(runs) + " runs (" + std::to_string(with_n) + "/80 instances with N nonempty), " +
              std::to_string(vertex_bad) + " vertex violations, " + std::to_string(odd_bad) + " odd-set violations"};
}

Outcome blossom_after_crucial() {
  std::mt19937_64 rng(1007);
  const double eps = 0.1;
  int runs[2] = {0, 0}, bad[2] = {0, 0};
  for (int t = 0; t < 80; ++t) {
    const bool weighted = t % 2 == 1;
    auto inst = make_instance(rng, weighted, eps, 1007 + t);
    const MatchingEngine engine(inst.g.graph());
    for (int r = 0; r < 10; ++r) {
      const auto run = run_fractional(inst.g, engine, inst.s, inst.stats, inst.part, eps,
                                      RngSeed{1007, static_cast<std::uint64_t>(t * 10 + r)});
      ++runs[weighted];
      bad[weighted] += !check_blossom_constraints(inst.g.graph(), run.combined, eps).empty();
    }
  }
  return {bad[0] == 0 && bad[1] == 0,
          "unweighted " + std::to_string(bad[0]) + "/" + std::to_string(runs[0]) + ", weighted " +
              std::to_string(bad[1]) + "/" + std::to_string(runs[1]) + " runs with violations"};
}

Outcome edcs_deterministic() {
  std::mt19937_64 rng(1008);
  int graphs = 0, uncertified = 0, below = 0;
  double min_ratio = 1.0, min_desk = 1.0;
  const auto params = two_thirds_beta(0.3);
  for (int t = 0; t < 240; ++t) {
    auto g = oracle::random_graph(rng, 4 + rng() % 40, 120, false);
    ++graphs;
    for (std::uint64_t beta : {2, 4, 6, 8}) {
      EdcsParams desk;
      desk.beta = beta;
      desk.beta_minus = beta - 1;
      auto h = build_edcs(g, desk);
      if (!h.certified || !verify_edcs(g, h.h_edges, desk).empty()) ++uncertified;
      min_desk = std::min(min_desk, edcs_matching_ratio(g, h.h_edges));
    }
    auto h = build_edcs(g, params);
    if (!h.certified || !verify_edcs(g, h.h_edges, params).empty()) ++uncertified;
    const double r = edcs_matching_ratio(g, h.h_edges);
    min_ratio = std::min(min_ratio, r);
    below += r < 2.0 / 3.0 - 0.3;
  }
  return {uncertified == 0 && below == 0,
          std::to_string(graphs) + " graphs, " + std::to_string(uncertified) + " failed certifications; beta " +
              std::to_string(params.beta) + "/" + std::to_string(params.beta_minus) + " min ratio " +
              fmt("%.4f", min_ratio) + " (desk beta 2..8 min " + fmt("%.4f", min_desk) + ")"};
}

Outcome edcs_stochastic() {
  std::mt19937_64 rng(1009);
  const double ps[] = {0.5, 0.8, 1.0};
  int instances = 0, below = 0;
  double min_ratio = 1.0;
  for (int t = 0; t < 60; ++t) {
    auto g = oracle::random_graph(rng, 4 + rng() % 5, 12, false);
    StochasticGraph sg(g, ps[rng() % 3], ps[rng() % 3], false);
    for (std::uint64_t beta : {4, 6, 8}) {
      EdcsParams p;
      p.beta = beta;
      p.beta_minus = beta - 1;
      const double r = edcs_stochastic_ratio(sg, p, exact_opts()).ratio.ratio;
      ++instances;
      below += r < 0.6;
      min_ratio = std::min(min_ratio, r);
    }
  }
  return {below == 0, std::to_string(instances) + " (instance, beta) pairs with beta in {4,6,8}, min ratio " +
                          fmt("%.4f", min_ratio)};
}

Outcome algebraic_bound() {
  const double bound = 6 - 4 * std::sqrt(2.0);
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  std::vector<double> a, b;
  for (int t = 0; t < 1000000; ++t) {
    const std::size_t n = 1 + rng() % 20;
    a.resize(n);
    b.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      // Half the trials sit on the a + b = 1 boundary, near the extremum.
      b[i] = t % 2 ? 1.0 - a[i] : (1.0 - a[i]) * u(rng);
    }
    worst = std::max(worst, pair_load_ratio(a, b));
  }
  const std::vector<double> sa{std::sqrt(2.0) - 1}, sb{2 - std::sqrt(2.0)};
  const double attained = pair_load_ratio(sa, sb);
  return {worst <= bound + 1e-9 && attained >= bound - 1e-9,
          "max over 1e6 trials " + fmt("%.9f", worst) + ", extremal pair " + fmt("%.9f", attained) +
              ", bound " + fmt("%.9f", bound)};
}

Outcome reproducibility() {
  auto cfg = parse_config(R"({
    "graph": {"generator": {"family": "erdos-renyi", "n": 7, "p": 0.5, "seed": 12,
                            "weights": {"model": "uniform", "lo": 0.1, "hi": 10}}},
    "weighted": true, "instances": 3, "p_v": [0.5, 0.9], "p_e": [0.6], "epsilon": [0.2],
    "r_cap": 300, "samples": 4000, "seed": 2024, "q_mode": "mc"})");
  std::vector<std::string> outputs;
  for (auto alg : {Algorithm::algorithm1, Algorithm::edcs}) {
    cfg.algorithm = alg;
    cfg.beta = 5;
    for (std::size_t w : {1, 3, 1, 2}) {
      cfg.workers = w;
      outputs.push_back(rows_to_csv(run_experiment(cfg)));
    }
  }
  bool same = true;
  for (std::size_t i = 0; i < outputs.size(); ++i) same &= outputs[i] == outputs[i / 4 * 4];
  return {same, "2 algorithms x 4 runs at workers 1, 3, 1, 2: " +
                    std::string(same ? "byte-identical CSV" : "CSV differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle identity", oracle_identity},
      {"matching engine vs exhaustive search", matching_equivalence},
      {"degenerate sparsifier ratio", degenerate_ratio},
      {"unweighted ratio floor 0.65", unweighted_floor},
      {"weighted ratio floor 0.5", weighted_floor},
      {"non-crucial invariants", noncrucial_invariants},
      {"odd-set constraints after crucial procedures", blossom_after_crucial},
      {"EDCS certification and deterministic 2/3 - eps", edcs_deterministic},
      {"EDCS stochastic ratio floor 0.6", edcs_stochastic},
      {"pair load bound 6 - 4 sqrt 2", algebraic_bound},
      {"experiment reproducibility", reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
