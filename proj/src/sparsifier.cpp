#include "stochmatch/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochmatch/errors.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/parallel.hpp"
#include "stochmatch/realization.hpp"

namespace stochmatch {

SparsifierParams compute_params(double epsilon, double p_v, double p_e,
                                std::optional<std::uint64_t> r_cap) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  if (!(p_v > 0.0 && p_v <= 1.0) || !(p_e > 0.0 && p_e <= 1.0)) {
    throw InputError("probabilities must lie in (0, 1]");
  }
  if (r_cap && *r_cap == 0) throw InputError("r_cap must be positive");

  const double pr = p_v * p_v * p_e;
  const double log_inv_eps = std::log(1.0 / epsilon);
  SparsifierParams params;
  params.epsilon = epsilon;
  params.r_cap = r_cap;
  params.R_formula = std::ceil(2000.0 * log_inv_eps * std::log(1.0 / (epsilon * pr)) /
                               (std::pow(epsilon, 4) * pr));
  params.tau = std::pow(epsilon, 3) * pr / (20.0 * log_inv_eps);

  constexpr double kMaxRounds = 9.0e18;
  const double formula = std::clamp(params.R_formula, 1.0, kMaxRounds);
  params.R = static_cast<std::uint64_t>(formula);
  if (r_cap) params.R = std::min(params.R, *r_cap);
  return params;
}

std::vector<double> Sparsifier::frequencies() const {
  std::vector<double> out(appear_count.size());
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = f(static_cast<EdgeIndex>(e));
  return out;
}

std::size_t Sparsifier::max_degree(const Graph& g) const {
  auto deg = g.degrees(q_edges);
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

Sparsifier build_sparsifier(const StochasticGraph& g, const SparsifierParams& params, RngSeed seed,
                            std::size_t workers) {
  if (params.R == 0) throw InputError("R must be positive");
  const std::size_t m = g.edge_count();
  const MatchingEngine engine(g.graph());

  // Fixed block partition; integer counts make the reduction order-free.
  const std::uint64_t rounds = params.R;
  const std::uint64_t block_size = 256;
  const std::size_t blocks = static_cast<std::size_t>((rounds + block_size - 1) / block_size);
  std::vector<std::vector<std::uint64_t>> partial(blocks);
  parallel_for(blocks, workers, [&](std::size_t b) {
    std::vector<std::uint64_t> counts(m, 0);
    const std::uint64_t end = std::min<std::uint64_t>(rounds, (b + 1) * block_size);
    for (std::uint64_t r = b * block_size; r < end; ++r) {
      const auto realization = sample_realization(g, seed.split(r));
      for (EdgeIndex e : engine.solve(realization.edges).edges) ++counts[e];
    }
    partial[b] = std::move(counts);
  });

  Sparsifier s{EdgeMask(m), std::vector<std::uint64_t>(m, 0), params};
  for (const auto& counts : partial) {
    for (std::size_t e = 0; e < m; ++e) s.appear_count[e] += counts[e];
  }
  for (std::size_t e = 0; e < m; ++e) {
    if (s.appear_count[e] > 0) s.q_edges.set(e);
  }
  return s;
}

EdgePartition classify_edges(double tau, std::span<const double> q) {
  EdgePartition p{EdgeMask(q.size()), EdgeMask(q.size())};
  for (std::size_t e = 0; e < q.size(); ++e) {
    if (q[e] >= tau) {
      p.crucial.set(e);
    } else {
      p.noncrucial.set(e);
    }
  }
  return p;
}

EdgePartition classify_edges(const Sparsifier& s, std::span<const double> q) {
  if (q.size() != s.appear_count.size()) throw InputError("q estimates must cover every edge");
  return classify_edges(s.params.tau, q);
}

}  // namespace stochmatch
