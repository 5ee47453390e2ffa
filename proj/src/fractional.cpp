#include "stochmatch/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stochmatch/errors.hpp"
#include "stochmatch/parallel.hpp"

namespace stochmatch {

namespace {

void fill_aggregates(const Graph& g, EdgeStats& st) {
  const auto edges = g.edges();
  st.q_v.assign(g.vertex_count(), 0.0);
  st.phi_e.assign(edges.size(), 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    st.phi_e[e] = edges[e].weight * st.q[e];
    st.q_v[edges[e].u] += st.q[e];
    st.q_v[edges[e].v] += st.q[e];
  }
  st.q_v_N.assign(g.vertex_count(), 0.0);
  st.phi_v_N.assign(g.vertex_count(), 0.0);
  st.N = EdgeMask(edges.size());
}

}  // namespace

double EdgeStats::phi(const EdgeMask& x) const {
  if (x.size() != phi_e.size()) throw InputError("edge set size does not match the statistics");
  double total = 0.0;
  for (auto e = x.find_first(); e != EdgeMask::npos; e = x.find_next(e)) total += phi_e[e];
  return total;
}

void EdgeStats::attach_frequencies(const Sparsifier& s) {
  if (s.appear_count.size() != q.size()) throw InputError("sparsifier does not match the statistics");
  f = s.frequencies();
}

void EdgeStats::restrict_to_noncrucial(const Graph& g, const EdgeMask& noncrucial) {
  if (noncrucial.size() != q.size()) throw InputError("edge set size does not match the statistics");
  N = noncrucial;
  std::fill(q_v_N.begin(), q_v_N.end(), 0.0);
  std::fill(phi_v_N.begin(), phi_v_N.end(), 0.0);
  for (auto e = N.find_first(); e != EdgeMask::npos; e = N.find_next(e)) {
    const auto& edge = g.edge(static_cast<EdgeIndex>(e));
    q_v_N[edge.u] += q[e];
    q_v_N[edge.v] += q[e];
    phi_v_N[edge.u] += phi_e[e];
    phi_v_N[edge.v] += phi_e[e];
  }
}

EdgeStats edge_stats_from_q(const Graph& g, std::vector<double> q) {
  if (q.size() != g.edge_count()) throw InputError("q must cover every edge");
  EdgeStats st;
  st.q = std::move(q);
  fill_aggregates(g, st);
  return st;
}

EdgeStats compute_edge_stats(const StochasticGraph& g, const EstimatorOptions& options) {
  const Graph& graph = g.graph();
  const std::size_t m = graph.edge_count();
  const MatchingEngine engine(graph);
  const bool exact = options.mode == QMode::exact ||
                     (options.mode == QMode::automatic &&
                      enumerable(g, std::nullopt, options.enumeration_budget));

  EdgeStats st;
  st.q.assign(m, 0.0);
  if (exact) {
    const OutcomeSpace space(g, graph.full_edge_mask(), options.enumeration_budget);
    const std::size_t patterns = space.vertex_pattern_count();
    const std::size_t blocks = std::min<std::size_t>(64, patterns);
    std::vector<std::vector<double>> partial(blocks, std::vector<double>(m, 0.0));
    std::vector<std::uint64_t> visited(blocks, 0);
    parallel_for(blocks, options.workers, [&](std::size_t b) {
      for (std::size_t p = patterns * b / blocks; p < patterns * (b + 1) / blocks; ++p) {
        space.visit(p, [&](const Realization& r, double prob) {
          for (EdgeIndex e : engine.solve(r.edges).edges) partial[b][e] += prob;
          ++visited[b];
        });
      }
    });
    for (std::size_t b = 0; b < blocks; ++b) {
      for (std::size_t e = 0; e < m; ++e) st.q[e] += partial[b][e];
      st.samples += visited[b];
    }
    st.source = EstimateMode::exact;
  } else {
    if (options.samples == 0) throw InputError("Monte Carlo estimation needs at least one sample");
    const std::uint64_t n = options.samples;
    const std::size_t blocks = static_cast<std::size_t>(std::min<std::uint64_t>(256, n));
    std::vector<std::vector<std::uint64_t>> partial(blocks, std::vector<std::uint64_t>(m, 0));
    parallel_for(blocks, options.workers, [&](std::size_t b) {
      for (std::uint64_t i = n * b / blocks; i < n * (b + 1) / blocks; ++i) {
        const auto r = sample_realization(g, options.seed.split(i));
        for (EdgeIndex e : engine.solve(r.edges).edges) ++partial[b][e];
      }
    });
    std::vector<std::uint64_t> counts(m, 0);
    for (const auto& block : partial) {
      for (std::size_t e = 0; e < m; ++e) counts[e] += block[e];
    }
    for (std::size_t e = 0; e < m; ++e) st.q[e] = static_cast<double>(counts[e]) / static_cast<double>(n);
    st.samples = n;
    st.source = EstimateMode::monte_carlo;
  }
  fill_aggregates(graph, st);
  return st;
}

std::vector<double> FractionalMatching::vertex_loads(const Graph& g) const {
  std::vector<double> load(g.vertex_count(), 0.0);
  const auto edges = g.edges();
  for (std::size_t e = 0; e < x.size(); ++e) {
    load[edges[e].u] += x[e];
    load[edges[e].v] += x[e];
  }
  return load;
}

double FractionalMatching::weight(const Graph& g) const {
  double total = 0.0;
  for (std::size_t e = 0; e < x.size(); ++e) total += g.weight(static_cast<EdgeIndex>(e)) * x[e];
  return total;
}

double FractionalMatching::total() const {
  double t = 0.0;
  for (double v : x) t += v;
  return t;
}

EdgeMask FractionalMatching::support() const {
  EdgeMask m(x.size());
  for (std::size_t e = 0; e < x.size(); ++e) {
    if (x[e] > 0.0) m.set(e);
  }
  return m;
}

FractionalMatching non_crucial_procedure(const StochasticGraph& g, const Sparsifier& s,
                                         const EdgeStats& stats, const EdgeMask& noncrucial,
                                         const Realization& realized, double epsilon) {
  return non_crucial_procedure(g, s, stats, noncrucial, realized, epsilon, s.params.tau);
}

FractionalMatching non_crucial_procedure(const StochasticGraph& g, const Sparsifier& s,
                                         const EdgeStats& stats, const EdgeMask& noncrucial,
                                         const Realization& realized, double epsilon, double tau) {
  const Graph& graph = g.graph();
  const std::size_t m = graph.edge_count();
  if (s.appear_count.size() != m || noncrucial.size() != m || realized.edges.size() != m ||
      stats.q.size() != m) {
    throw InputError("sparsifier, statistics and realization must match the graph");
  }
  const double pr = g.edge_realization_probability();

  FractionalMatching fm{std::vector<double>(m, 0.0), std::vector<double>(m, 1.0)};
  std::vector<double> xt(m, 0.0);
  const EdgeMask active = realized.edges & s.q_edges & noncrucial;
  for (auto e = active.find_first(); e != EdgeMask::npos; e = active.find_next(e)) {
    xt[e] = std::min(s.f(static_cast<EdgeIndex>(e)), 2.0 * tau) / pr;
  }

  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    double sum = 0.0;
    for (EdgeIndex e : graph.incident(v)) sum += xt[e];
    if (sum == 0.0) continue;
    const double factor = std::max(stats.q_v_N[v], epsilon) / (g.p_v() * sum);
    for (EdgeIndex e : graph.incident(v)) fm.s[e] = std::min(fm.s[e], factor);
  }
  for (std::size_t e = 0; e < m; ++e) fm.x[e] = xt[e] * fm.s[e];
  return fm;
}

Matching sample_crucial_matching(const StochasticGraph& g, const MatchingEngine& engine,
                                 const Sparsifier& s, const EdgeMask& crucial,
                                 const Realization& realized, RngSeed seed) {
  Matching out;
  if (crucial.none()) return out;
  const Graph& graph = g.graph();

  // Fresh draw that agrees with `realized` on the crucial part: endpoints of
  // crucial edges and crucial edge states are copied, everything else is
  // resampled. The copy is itself a draw from the model, so the fresh
  // realization keeps the unconditional law.
  VertexMask pinned(graph.vertex_count());
  for (auto e = crucial.find_first(); e != EdgeMask::npos; e = crucial.find_next(e)) {
    pinned.set(graph.edge(static_cast<EdgeIndex>(e)).u);
    pinned.set(graph.edge(static_cast<EdgeIndex>(e)).v);
  }
  Realization fresh = sample_realization(g, seed);
  fresh.vertices = (fresh.vertices - pinned) | (realized.vertices & pinned);
  Rng rng(seed.split(0));
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const auto& edge = graph.edge(static_cast<EdgeIndex>(e));
    if (crucial[e]) {
      fresh.edges[e] = realized.edges[e];
    } else if (pinned[edge.u] || pinned[edge.v]) {
      fresh.edges[e] = fresh.vertices[edge.u] && fresh.vertices[edge.v] && rng.bernoulli(g.p_e());
    }
  }

  const EdgeMask keep = crucial & s.q_edges & realized.edges;
  for (EdgeIndex e : engine.solve(fresh.edges).edges) {
    if (keep[e]) {
      out.edges.push_back(e);
      out.total_weight += graph.weight(e);
    }
  }
  return out;
}

FractionalMatching crucial_procedure_unweighted(const Graph& g, FractionalMatching x,
                                                const Matching& m_c, const EdgeStats& stats,
                                                double epsilon) {
  for (EdgeIndex e : m_c.edges) {
    const auto& edge = g.edge(e);
    const double room = std::min(1.0 - stats.q_v_N[edge.u], 1.0 - stats.q_v_N[edge.v]);
    x.x[e] = std::max(0.0, (1.0 - epsilon) * room);
  }
  return x;
}

std::string to_string(CrucialClass c) {
  switch (c) {
    case CrucialClass::none: return "none";
    case CrucialClass::heavy: return "heavy";
    case CrucialClass::semi_heavy: return "semi-heavy";
    case CrucialClass::c_star: return "c-star";
  }
  return "none";
}

EdgeMask CrucialClassification::members(const Graph& g, CrucialClass c) const {
  EdgeMask m(g.edge_count());
  for (std::size_t e = 0; e < cls.size(); ++e) {
    if (cls[e] == c) m.set(e);
  }
  return m;
}

CrucialClassification classify_crucial_weighted(const Graph& g, const EdgeStats& stats,
                                                const EdgeMask& crucial, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  const std::size_t m = g.edge_count();
  CrucialClassification out{std::vector<CrucialClass>(m, CrucialClass::none),
                            std::vector<VertexId>(m, 0), std::vector<std::uint8_t>(m, 0),
                            std::vector<VertexId>(m, 0), delta};
  for (auto e = crucial.find_first(); e != EdgeMask::npos; e = crucial.find_next(e)) {
    const auto& edge = g.edge(static_cast<EdgeIndex>(e));
    // Name v the endpoint with the larger q^N; edge.u < edge.v breaks ties.
    VertexId v = edge.u, u = edge.v;
    if (stats.q_v_N[edge.v] > stats.q_v_N[edge.u]) std::swap(u, v);
    out.v_endpoint[e] = v;
    const double w = edge.weight;
    const double pu = stats.phi_v_N[u], pv = stats.phi_v_N[v];
    if (w >= (1.0 + delta) * (pu + pv)) {
      out.cls[e] = CrucialClass::heavy;
    } else if (w >= 2.0 * (1.0 + delta) * pv && stats.q_v_N[u] <= 1.0 - delta) {
      out.cls[e] = CrucialClass::semi_heavy;
    } else {
      out.cls[e] = CrucialClass::c_star;
      if (pv >= pu) {
        out.type[e] = 1;
        out.direction[e] = v;
      } else if (w <= 2.0 * (1.0 + delta) * pv) {
        out.type[e] = 2;
        out.direction[e] = v;
      } else {
        out.type[e] = 3;
        out.direction[e] = u;
      }
    }
  }
  return out;
}

double g_retained(double q_v_N, double phi_v_N, double alpha) {
  if (q_v_N <= 0.0) return 0.0;
  return std::min(q_v_N, 1.0 - alpha) / q_v_N * phi_v_N;
}

double best_alpha(double q_u_N, double phi_u_N, double q_v_N, double phi_v_N, double w,
                  std::size_t grid) {
  if (grid < 2) throw InputError("alpha grid needs at least 2 points");
  std::vector<double> candidates;
  candidates.reserve(grid + 4);
  for (std::size_t i = 0; i < grid; ++i) {
    candidates.push_back(static_cast<double>(i) / static_cast<double>(grid - 1));
  }
  for (double b : {0.0, 1.0, 1.0 - q_u_N, 1.0 - q_v_N}) {
    if (b >= 0.0 && b <= 1.0) candidates.push_back(b);
  }
  std::sort(candidates.begin(), candidates.end());
  double best = 0.0, best_h = -1.0;
  for (double a : candidates) {
    const double h = g_retained(q_u_N, phi_u_N, a) + g_retained(q_v_N, phi_v_N, a) + a * w;
    if (h > best_h) {
      best_h = h;
      best = a;
    }
  }
  return best;
}

FractionalMatching crucial_procedure_weighted(const Graph& g, FractionalMatching x,
                                              const Matching& m_c, const EdgeStats& stats,
                                              double epsilon, std::size_t alpha_grid) {
  const std::size_t n = g.vertex_count(), m = g.edge_count();
  std::vector<double> factor(n, 1.0);
  std::vector<double> crucial_load(n, 0.0);
  EdgeMask in_mc(m);

  for (EdgeIndex e : m_c.edges) {
    const auto& edge = g.edge(e);
    const double a = best_alpha(stats.q_v_N[edge.u], stats.phi_v_N[edge.u], stats.q_v_N[edge.v],
                                stats.phi_v_N[edge.v], edge.weight, alpha_grid);
    x.x[e] = (1.0 - epsilon) * a;
    in_mc.set(e);
    for (VertexId v : {edge.u, edge.v}) {
      const double q = stats.q_v_N[v];
      factor[v] = q > 0.0 ? std::min(q, 1.0 - a) / q : (a < 1.0 ? 1.0 : 0.0);
      crucial_load[v] += x.x[e];
    }
  }

  std::vector<double> noncrucial_load(n, 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    if (in_mc[e] || x.x[e] == 0.0) continue;
    noncrucial_load[g.edge(e).u] += x.x[e];
    noncrucial_load[g.edge(e).v] += x.x[e];
  }
  for (VertexId v = 0; v < n; ++v) {
    const double nl = noncrucial_load[v];
    if (nl > 0.0 && crucial_load[v] + factor[v] * nl > 1.0) {
      factor[v] = std::max(0.0, std::min(factor[v], (1.0 - crucial_load[v]) / nl));
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    if (in_mc[e] || x.x[e] == 0.0) continue;
    x.x[e] *= std::min(factor[g.edge(e).u], factor[g.edge(e).v]);
  }
  return x;
}

namespace {

// ESU enumeration of connected vertex sets over the support adjacency.
class ConnectedSets {
 public:
  ConnectedSets(const Graph& g, const FractionalMatching& x, std::size_t max_size, double scale)
      : adj_(g.vertex_count()), cnt_(g.vertex_count(), 0), in_set_(g.vertex_count(), 0),
        max_size_(max_size), scale_(scale) {
    for (std::size_t e = 0; e < x.x.size(); ++e) {
      if (x.x[e] <= 0.0) continue;
      const auto& edge = g.edge(static_cast<EdgeIndex>(e));
      adj_[edge.u].push_back({edge.v, x.x[e]});
      adj_[edge.v].push_back({edge.u, x.x[e]});
    }
  }

  std::vector<BlossomViolation> run() {
    for (VertexId v = 0; v < adj_.size(); ++v) {
      if (adj_[v].empty()) continue;
      root_ = v;
      add(v);
      std::vector<VertexId> ext;
      for (auto [u, w] : adj_[v]) {
        if (u > v) ext.push_back(u);
      }
      extend(ext, 0.0);
      remove(v);
    }
    return std::move(out_);
  }

 private:
  void add(VertexId w) {
    set_.push_back(w);
    in_set_[w] = 1;
    ++cnt_[w];
    for (auto [u, x] : adj_[w]) ++cnt_[u];
  }
  void remove(VertexId w) {
    set_.pop_back();
    in_set_[w] = 0;
    --cnt_[w];
    for (auto [u, x] : adj_[w]) --cnt_[u];
  }

  void extend(std::vector<VertexId> ext, double load) {
    if (set_.size() >= 2) {
      const double limit = scale_ * static_cast<double>(set_.size() / 2);
      if (load > limit + 1e-9) {
        auto vs = set_;
        std::sort(vs.begin(), vs.end());
        out_.push_back({std::move(vs), load, limit});
      }
    }
    if (set_.size() == max_size_) return;
    while (!ext.empty()) {
      const VertexId w = ext.back();
      ext.pop_back();
      std::vector<VertexId> next = ext;
      for (auto [u, x] : adj_[w]) {
        if (u > root_ && cnt_[u] == 0) next.push_back(u);
      }
      double added = 0.0;
      for (auto [u, x] : adj_[w]) {
        if (in_set_[u]) added += x;
      }
      add(w);
      extend(std::move(next), load + added);
      remove(w);
    }
  }

  std::vector<std::vector<std::pair<VertexId, double>>> adj_;
  std::vector<int> cnt_;
  std::vector<char> in_set_;
  std::vector<VertexId> set_;
  std::vector<BlossomViolation> out_;
  std::size_t max_size_;
  double scale_;
  VertexId root_ = 0;
};

}  // namespace

std::vector<BlossomViolation> check_blossom_constraints(const Graph& g, const FractionalMatching& x,
                                                        double epsilon, double load_scale,
                                                        std::size_t subset_budget) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
  if (x.x.size() != g.edge_count()) throw InputError("fractional matching does not match the graph");
  const auto max_size = static_cast<std::size_t>(std::floor(1.0 / epsilon + 1e-12));
  if (max_size > subset_budget) {
    throw BudgetError("odd-set check needs subsets larger than the budget", max_size, subset_budget);
  }
  if (max_size < 2) return {};
  return ConnectedSets(g, x, max_size, load_scale).run();
}

Matching round_to_integral(const Graph& g, const FractionalMatching& x, const EdgeMask& available,
                           double epsilon) {
  if (x.x.size() != g.edge_count() || available.size() != g.edge_count()) {
    throw InputError("fractional matching does not match the graph");
  }
  const EdgeMask support = x.support() & available;
  double fractional = 0.0;
  for (auto e = support.find_first(); e != EdgeMask::npos; e = support.find_next(e)) {
    fractional += g.weight(static_cast<EdgeIndex>(e)) * x.x[e];
  }
  auto m = max_weight_matching(g, support);
  if (m.total_weight < (1.0 - epsilon) * fractional - 1e-9 * std::max(1.0, fractional)) {
    throw std::logic_error("integral matching on the support is lighter than (1 - eps) of x");
  }
  return m;
}

double pair_load_ratio(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("pair lists differ in length");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += a[i] * b[i];
    den += a[i] + b[i] / 2.0;
  }
  return den > 0.0 ? num / den : 0.0;
}

FractionalRun run_fractional(const StochasticGraph& g, const MatchingEngine& engine,
                             const Sparsifier& s, const EdgeStats& stats,
                             const EdgePartition& partition, double epsilon, RngSeed seed,
                             std::size_t alpha_grid) {
  FractionalRun run;
  run.realized = sample_realization(g, seed.split(0));
  run.noncrucial = non_crucial_procedure(g, s, stats, partition.noncrucial, run.realized, epsilon);
  run.crucial_matching =
      sample_crucial_matching(g, engine, s, partition.crucial, run.realized, seed.split(1));
  run.combined = g.weighted()
                     ? crucial_procedure_weighted(g.graph(), run.noncrucial, run.crucial_matching,
                                                  stats, epsilon, alpha_grid)
                     : crucial_procedure_unweighted(g.graph(), run.noncrucial,
                                                    run.crucial_matching, stats, epsilon);
  return run;
}

}  // namespace stochmatch
