#include <algorithm>
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "stochmatch/artifact.hpp"
#include "stochmatch/edcs.hpp"
#include "stochmatch/errors.hpp"
#include "stochmatch/estimator.hpp"
#include "stochmatch/experiment.hpp"
#include "stochmatch/fractional.hpp"
#include "stochmatch/graph_io.hpp"
#include "stochmatch/sparsifier.hpp"

using namespace stochmatch;
using nlohmann::json;

namespace {

struct Common {
  std::string graph;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string mode = "auto";
  std::uint64_t samples = 100000;
  double confidence = 0.99;
  std::size_t budget = kDefaultEnumerationBudget;
};

EstimatorOptions estimator_options(const Common& c, RngSeed seed) {
  EstimatorOptions o;
  o.mode = parse_q_mode(c.mode);
  o.samples = c.samples;
  o.seed = seed;
  o.confidence = c.confidence;
  o.enumeration_budget = c.budget;
  o.workers = c.workers;
  return o;
}

json estimate_json(const Estimate& e) {
  return {{"mean", e.mean}, {"ci_halfwidth", e.ci_halfwidth}, {"samples", e.samples},
          {"mode", to_string(e.mode)}, {"confidence", e.confidence}};
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::string> edge_labels(const Graph& g, const EdgePartition& p,
                                     const std::optional<CrucialClassification>& cls) {
  std::vector<std::string> labels(g.edge_count(), "noncrucial");
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!p.crucial[e]) continue;
    labels[e] = cls ? to_string(cls->cls[e]) : "crucial";
  }
  return labels;
}

int cmd_sparsify(const Common& c, double epsilon, std::optional<std::uint64_t> r_cap,
                 const std::string& out, const std::string& fractional_out, std::size_t alpha_grid) {
  const auto g = parse_graph_file(c.graph);
  const auto params = compute_params(epsilon, g.p_v(), g.p_e(), r_cap);
  const RngSeed seed{c.seed, 0};
  const auto s = build_sparsifier(g, params, seed, c.workers);
  if (!out.empty()) write_text_file(out, to_json(SparsifierArtifact{g, s, seed}));

  json summary = {{"R", params.R},
                  {"R_formula", params.R_formula},
                  {"tau", params.tau},
                  {"q_edges", s.q_edges.count()},
                  {"max_degree", s.max_degree(g.graph())}};

  if (!fractional_out.empty()) {
    auto stats = compute_edge_stats(g, estimator_options(c, RngSeed{c.seed, 1}));
    stats.attach_frequencies(s);
    const auto partition = classify_edges(s, stats.q);
    stats.restrict_to_noncrucial(g.graph(), partition.noncrucial);
    const MatchingEngine engine(g.graph());
    const auto run = run_fractional(g, engine, s, stats, partition, epsilon, RngSeed{c.seed, 2}, alpha_grid);
    std::optional<CrucialClassification> cls;
    if (g.weighted()) cls = classify_crucial_weighted(g.graph(), stats, partition.crucial);
    FractionalArtifact art{g, epsilon, run.combined, run.realized.edges & s.q_edges,
                           partition.noncrucial, run.crucial_matching.edges,
                           edge_labels(g.graph(), partition, cls)};
    write_text_file(fractional_out, to_json(art));
    summary["crucial"] = partition.crucial.count();
    summary["q_mode"] = to_string(stats.source);
  }
  print(summary);
  return 0;
}

int cmd_edcs(const Common& c, std::optional<std::uint64_t> beta, std::optional<std::uint64_t> beta_minus,
             std::optional<double> epsilon, double C, const std::string& out) {
  const auto g = parse_graph_file(c.graph);
  EdcsParams params;
  if (beta) {
    params.beta = *beta;
    params.beta_minus = beta_minus ? *beta_minus : *beta - 1;
    params.epsilon = epsilon.value_or(0.0);
    params.C = C;
  } else if (epsilon) {
    params = compute_beta(*epsilon, g.p_v(), g.p_e(), C);
  } else {
    throw InputError("edcs needs --beta or --epsilon");
  }
  const auto h = build_edcs(g.graph(), params);
  if (!out.empty()) write_text_file(out, to_json(EdcsArtifact{g, h}));
  print({{"beta", params.beta},
         {"beta_minus", params.beta_minus},
         {"C", params.C},
         {"h_edges", h.h_edges.count()},
         {"certified", h.certified},
         {"fixups", h.fixups},
         {"deterministic_ratio", edcs_matching_ratio(g.graph(), h.h_edges)}});
  return 0;
}

int cmd_estimate(const Common& c, const std::string& artifact) {
  const auto opts = estimator_options(c, RngSeed{c.seed, 0});
  if (artifact.empty()) {
    if (c.graph.empty()) throw InputError("estimate needs --graph or --artifact");
    const auto g = parse_graph_file(c.graph);
    print({{"expected_matching", estimate_json(expected_matching(g, std::nullopt, opts))}});
    return 0;
  }
  const auto art = read_artifact_file(artifact);
  EdgeMask q;
  std::optional<StochasticGraph> embedded;
  if (const auto* s = std::get_if<SparsifierArtifact>(&art)) {
    q = s->sparsifier.q_edges;
    embedded = s->graph;
  } else if (const auto* h = std::get_if<EdcsArtifact>(&art)) {
    q = h->edcs.h_edges;
    embedded = h->graph;
  } else {
    throw InputError("estimate needs a sparsifier or edcs artifact");
  }
  // --graph overrides the embedded graph, e.g. to re-evaluate Q under other probabilities.
  const auto g = c.graph.empty() ? *embedded : parse_graph_file(c.graph);
  if (q.size() != g.edge_count()) throw InputError("artifact does not match the graph");
  const auto r = approximation_ratio(g, q, opts);
  print({{"ratio", r.ratio},
         {"ratio_ci", r.ci_halfwidth},
         {"numerator", estimate_json(r.numerator)},
         {"denominator", estimate_json(r.denominator)}});
  return 0;
}

int cmd_oracle(const Common& c) {
  const auto g = parse_graph_file(c.graph);
  EstimatorOptions opts = estimator_options(c, RngSeed{c.seed, 0});
  opts.mode = QMode::exact;
  const auto stats = compute_edge_stats(g, opts);
  const auto e = expected_matching_exact(g, std::nullopt, c.budget, c.workers);
  json edges = json::array();
  double identity = 0.0;
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    const auto& edge = g.graph().edge(i);
    edges.push_back({{"u", edge.u}, {"v", edge.v}, {"w", edge.weight}, {"q", stats.q[i]}});
    identity += stats.phi_e[i];
  }
  print({{"expected_matching", e.mean}, {"sum_w_q", identity}, {"outcomes", e.samples}, {"edges", edges}});
  return 0;
}

int cmd_check(const std::string& path) {
  const auto report = check_artifact(read_artifact_file(path));
  for (const auto& c : report.checks) {
    std::cout << (c.skipped ? "SKIP " : c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << "\n";
  }
  const auto skipped = std::count_if(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.skipped; });
  std::cout << report.kind << ": " << (report.passed() ? "all checks passed" : "checks failed");
  if (skipped > 0) std::cout << " (" << skipped << " skipped)";
  std::cout << "\n";
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic matching sparsifiers and estimators"};
  app.require_subcommand(1);

  Common c;
  auto add_common = [&](CLI::App* sub, bool needs_graph) {
    auto* opt = sub->add_option("--graph,-g", c.graph, "Graph file");
    if (needs_graph) opt->required();
    sub->add_option("--seed", c.seed, "Master seed");
    sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
    sub->add_option("--mode", c.mode, "Estimator mode: exact | mc | auto");
    sub->add_option("--samples", c.samples, "Monte Carlo samples");
    sub->add_option("--confidence", c.confidence, "Confidence level for halfwidths");
    sub->add_option("--budget", c.budget, "Enumeration budget in bits");
  };

  auto* sparsify = app.add_subcommand("sparsify", "Run the sampled-matching sparsifier");
  add_common(sparsify, true);
  double epsilon = 0.1;
  std::optional<std::uint64_t> r_cap;
  std::string out, fractional_out;
  std::size_t alpha_grid = kDefaultAlphaGrid;
  sparsify->add_option("--epsilon", epsilon, "Accuracy parameter")->required();
  sparsify->add_option("--r-cap", r_cap, "Upper bound on the number of rounds");
  sparsify->add_option("--out,-o", out, "Write the sparsifier artifact here");
  sparsify->add_option("--fractional", fractional_out, "Also run both procedures and write the fractional artifact");
  sparsify->add_option("--alpha-grid", alpha_grid, "Grid points for the weighted alpha search");

  auto* edcs = app.add_subcommand("edcs", "Build an edge-degree constrained subgraph");
  add_common(edcs, true);
  std::optional<std::uint64_t> beta, beta_minus;
  std::optional<double> edcs_eps;
  double C = kDefaultEdcsC;
  edcs->add_option("--beta", beta, "Degree-sum upper bound");
  edcs->add_option("--beta-minus", beta_minus, "Degree-sum lower bound (default beta - 1)");
  edcs->add_option("--epsilon", edcs_eps, "Derive beta from epsilon, p_v, p_e");
  edcs->add_option("--C", C, "Constant in the beta formula");
  edcs->add_option("--out,-o", out, "Write the EDCS artifact here");

  auto* estimate = app.add_subcommand("estimate", "Estimate E[mu] or the ratio of a saved subgraph");
  add_common(estimate, false);
  std::string artifact;
  estimate->add_option("--artifact,-a", artifact, "Sparsifier or EDCS artifact");

  auto* oracle = app.add_subcommand("oracle", "Exact matching probabilities by enumeration");
  add_common(oracle, true);

  auto* experiment = app.add_subcommand("experiment", "Run a parameter sweep");
  std::string config_path, output;
  std::optional<std::uint64_t> exp_seed, exp_samples, exp_cap;
  std::optional<std::size_t> exp_workers;
  std::optional<std::string> exp_mode;
  experiment->add_option("--config,-c", config_path, "JSON config")->required();
  experiment->add_option("--output,-o", output, "CSV output (sidecar at OUTPUT.json)");
  experiment->add_option("--seed", exp_seed, "Override the config seed");
  experiment->add_option("--workers", exp_workers, "Override the worker count");
  experiment->add_option("--samples", exp_samples, "Override Monte Carlo samples");
  experiment->add_option("--r-cap", exp_cap, "Override r_cap");
  experiment->add_option("--q-mode", exp_mode, "Override q_mode");

  auto* check = app.add_subcommand("check", "Run the invariant suite on a saved artifact");
  std::string check_path;
  check->add_option("artifact", check_path, "Artifact JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sparsify) return cmd_sparsify(c, epsilon, r_cap, out, fractional_out, alpha_grid);
    if (*edcs) return cmd_edcs(c, beta, beta_minus, edcs_eps, C, out);
    if (*estimate) return cmd_estimate(c, artifact);
    if (*oracle) return cmd_oracle(c);
    if (*check) return cmd_check(check_path);
    if (*experiment) {
      auto cfg = read_config_file(config_path);
      if (!output.empty()) cfg.output = output;
      if (exp_seed) cfg.seed = *exp_seed;
      if (exp_workers) cfg.workers = *exp_workers;
      if (exp_samples) cfg.samples = *exp_samples;
      if (exp_cap) cfg.r_cap = *exp_cap;
      if (exp_mode) cfg.q_mode = parse_q_mode(*exp_mode);
      const auto rows = run_experiment(cfg);
      write_experiment_outputs(cfg, rows);
      std::size_t failed = 0;
      for (const auto& r : rows) failed += r.checks_passed ? 0 : 1;
      std::cerr << rows.size() << " rows written to " << cfg.output << ", " << failed
                << " with failed checks\n";
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
