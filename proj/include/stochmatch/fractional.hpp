#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stochmatch/estimator.hpp"
#include "stochmatch/graph.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/realization.hpp"
#include "stochmatch/rng.hpp"
#include "stochmatch/sparsifier.hpp"

namespace stochmatch {

/// Matching probabilities and their aggregates. The N-restricted fields are
/// zero until restrict_to_noncrucial() is called.
struct EdgeStats {
  std::vector<double> q;        // per edge
  std::vector<double> f;        // per edge; empty until attach_frequencies()
  std::vector<double> q_v;      // per vertex, sum of incident q
  std::vector<double> q_v_N;    // per vertex, incident N edges only
  std::vector<double> phi_e;    // w_e * q_e
  std::vector<double> phi_v_N;  // per vertex, incident N edges only
  EdgeMask N;
  EstimateMode source = EstimateMode::exact;
  std::uint64_t samples = 0;

  /// phi(X) = sum over X of w_e q_e.
  double phi(const EdgeMask& x) const;
  void attach_frequencies(const Sparsifier& s);
  void restrict_to_noncrucial(const Graph& g, const EdgeMask& noncrucial);
};

/// q_e = P(e in canonical M(G_realized)). Exact mode enumerates every
/// outcome; Monte Carlo mode averages over draws options.seed.split(i).
EdgeStats compute_edge_stats(const StochasticGraph& g, const EstimatorOptions& options);

/// Builds stats from externally supplied q (tests, serialized artifacts).
EdgeStats edge_stats_from_q(const Graph& g, std::vector<double> q);

struct FractionalMatching {
  std::vector<double> x;  // per edge, in [0, 1]
  std::vector<double> s;  // per edge scaling factor, in (0, 1]

  std::vector<double> vertex_loads(const Graph& g) const;
  double weight(const Graph& g) const;
  double total() const;
  EdgeMask support() const;
};

/// Steps: x~_e = min(f_e, 2 tau) / (p_v^2 p_e) on realized edges of Q ∩ N;
/// s_e = min over endpoints v (ascending id) of max(q_v^N, eps) / (p_v sum_v x~),
/// where a vertex with zero sum imposes nothing; x_e = x~_e s_e.
/// `tau` defaults to the sparsifier's threshold.
FractionalMatching non_crucial_procedure(const StochasticGraph& g, const Sparsifier& s,
                                         const EdgeStats& stats, const EdgeMask& noncrucial,
                                         const Realization& realized, double epsilon);
FractionalMatching non_crucial_procedure(const StochasticGraph& g, const Sparsifier& s,
                                         const EdgeStats& stats, const EdgeMask& noncrucial,
                                         const Realization& realized, double epsilon, double tau);

/// Canonical matching of a fresh realization drawn from `seed`, intersected
/// with C, Q and the edges realized in `realized`. The fresh realization
/// copies the vertex states of crucial endpoints and the crucial edge states
/// from `realized` and resamples the rest, so its law is the model's and its
/// crucial part is exactly that of `realized`.
Matching sample_crucial_matching(const StochasticGraph& g, const MatchingEngine& engine,
                                 const Sparsifier& s, const EdgeMask& crucial,
                                 const Realization& realized, RngSeed seed);

/// x_e = (1 - eps) min(1 - q_u^N, 1 - q_v^N), clamped at 0, for e in M_C.
FractionalMatching crucial_procedure_unweighted(const Graph& g, FractionalMatching x,
                                                const Matching& m_c, const EdgeStats& stats,
                                                double epsilon);

enum class CrucialClass : std::uint8_t { none, heavy, semi_heavy, c_star };

struct CrucialClassification {
  std::vector<CrucialClass> cls;     // per edge; `none` outside C
  std::vector<VertexId> direction;   // per edge; meaningful for C* only
  std::vector<std::uint8_t> type;    // per edge; 1..3 for C*, 0 otherwise
  std::vector<VertexId> v_endpoint;  // endpoint with larger q^N (ties: lower id)
  double delta = 0.09;

  EdgeMask members(const Graph& g, CrucialClass c) const;
};

inline constexpr double kDefaultDelta = 0.09;

CrucialClassification classify_crucial_weighted(const Graph& g, const EdgeStats& stats,
                                                const EdgeMask& crucial,
                                                double delta = kDefaultDelta);

std::string to_string(CrucialClass c);

/// g(v, alpha) = min(q_v^N, 1 - alpha) / q_v^N * phi_v^N, 0 when q_v^N = 0.
double g_retained(double q_v_N, double phi_v_N, double alpha);

/// Smallest maximizer of g(u,a) + g(v,a) + a w over the uniform grid of
/// `grid` points on [0,1] and the breakpoints {0, 1, 1 - q_u^N, 1 - q_v^N}.
double best_alpha(double q_u_N, double phi_u_N, double q_v_N, double phi_v_N, double w,
                  std::size_t grid);

inline constexpr std::size_t kDefaultAlphaGrid = 1001;

/// Sets x_e = (1 - eps) alpha* for e in M_C, then shrinks the non-crucial
/// values around each M_C endpoint v by one factor per vertex: the smaller of
/// the retained share min(q_v^N, 1 - alpha*) / q_v^N and the factor that
/// brings x_v down to 1. A non-crucial edge takes the smaller factor of its
/// two endpoints.
FractionalMatching crucial_procedure_weighted(const Graph& g, FractionalMatching x,
                                              const Matching& m_c, const EdgeStats& stats,
                                              double epsilon,
                                              std::size_t alpha_grid = kDefaultAlphaGrid);

struct BlossomViolation {
  std::vector<VertexId> vertices;
  double load = 0.0;
  double limit = 0.0;
};

inline constexpr std::size_t kDefaultSubsetBudget = 11;

/// Every connected vertex set U of the support of x with 2 <= |U| <=
/// floor(1/eps) whose induced load exceeds load_scale * floor(|U|/2) + 1e-9.
/// A disconnected U violates only if one of its components does, so the
/// report is empty exactly when all sets satisfy the bound. Throws
/// BudgetError when floor(1/eps) exceeds `subset_budget`.
std::vector<BlossomViolation> check_blossom_constraints(const Graph& g, const FractionalMatching& x,
                                                        double epsilon, double load_scale = 1.0,
                                                        std::size_t subset_budget = kDefaultSubsetBudget);

/// Maximum-weight matching on supp(x) ∩ available. Throws std::logic_error
/// if its weight falls below (1 - eps) sum w_e x_e.
Matching round_to_integral(const Graph& g, const FractionalMatching& x, const EdgeMask& available,
                           double epsilon);

/// sum a_i b_i / sum (a_i + b_i / 2); 0 when the denominator is 0.
double pair_load_ratio(std::span<const double> a, std::span<const double> b);

struct FractionalRun {
  Realization realized;
  FractionalMatching noncrucial;
  Matching crucial_matching;
  FractionalMatching combined;
};

/// One pass of the two procedures on a fresh realization: draws the
/// experiment realization from seed.split(0) and the crucial matching from
/// seed.split(1).
FractionalRun run_fractional(const StochasticGraph& g, const MatchingEngine& engine,
                             const Sparsifier& s, const EdgeStats& stats,
                             const EdgePartition& partition, double epsilon, RngSeed seed,
                             std::size_t alpha_grid = kDefaultAlphaGrid);

}  // namespace stochmatch
