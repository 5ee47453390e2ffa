#include "stochmatch/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stochmatch/artifact.hpp"
#include "stochmatch/edcs.hpp"
#include "stochmatch/errors.hpp"
#include "stochmatch/graph_io.hpp"
#include "stochmatch/parallel.hpp"
#include "stochmatch/sparsifier.hpp"

namespace stochmatch {

using nlohmann::json;

Algorithm parse_algorithm(const std::string& s) {
  if (s == "algorithm1") return Algorithm::algorithm1;
  if (s == "edcs") return Algorithm::edcs;
  throw InputError("unknown algorithm '" + s + "'");
}

std::string to_string(Algorithm a) { return a == Algorithm::algorithm1 ? "algorithm1" : "edcs"; }

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; })) {
      throw InputError("unknown key '" + k + "' in " + where);
    }
  }
}

std::vector<double> real_list(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  return j.get<std::vector<double>>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  ExperimentConfig cfg;
  try {
    const json j = json::parse(json_text);
    reject_unknown(j,
                   {"graph", "instances", "p_v", "p_e", "epsilon", "algorithm", "weighted", "r_cap",
                    "samples", "seed", "output", "workers", "confidence", "enumeration_budget",
                    "beta", "edcs_C", "q_mode", "alpha_grid"},
                   "config");
    if (j.contains("graph")) {
      const auto& g = j.at("graph");
      reject_unknown(g, {"file", "generator"}, "graph");
      if (g.contains("file")) cfg.graph_file = g.at("file").get<std::string>();
      if (g.contains("generator")) {
        const auto& gj = g.at("generator");
        reject_unknown(gj, {"family", "n", "p", "n_left", "n_right", "weights", "seed"}, "generator");
        GeneratorSpec spec;
        spec.family = parse_family(gj.at("family").get<std::string>());
        spec.n = gj.value("n", std::size_t{0});
        spec.p = gj.value("p", 0.5);
        spec.n_left = gj.value("n_left", std::size_t{0});
        spec.n_right = gj.value("n_right", std::size_t{0});
        spec.seed = gj.value("seed", std::uint64_t{0});
        if (gj.contains("weights")) {
          const auto& w = gj.at("weights");
          reject_unknown(w, {"model", "lo", "hi", "rate"}, "weights");
          spec.weights.kind = parse_weight_kind(w.at("model").get<std::string>());
          spec.weights.lo = w.value("lo", spec.weights.lo);
          spec.weights.hi = w.value("hi", spec.weights.hi);
          spec.weights.rate = w.value("rate", spec.weights.rate);
        } else {
          spec.weights.kind = j.value("weighted", false) ? WeightKind::uniform : WeightKind::unit;
        }
        cfg.generator = spec;
      }
    }
    cfg.instances = j.value("instances", cfg.instances);
    if (j.contains("p_v")) cfg.p_v = real_list(j.at("p_v"));
    if (j.contains("p_e")) cfg.p_e = real_list(j.at("p_e"));
    if (j.contains("epsilon")) cfg.epsilon = real_list(j.at("epsilon"));
    if (j.contains("algorithm")) cfg.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    cfg.weighted = j.value("weighted", cfg.weighted);
    if (j.contains("r_cap") && !j.at("r_cap").is_null()) cfg.r_cap = j.at("r_cap").get<std::uint64_t>();
    cfg.samples = j.value("samples", cfg.samples);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.output = j.value("output", cfg.output);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.confidence = j.value("confidence", cfg.confidence);
    cfg.enumeration_budget = j.value("enumeration_budget", cfg.enumeration_budget);
    if (j.contains("beta") && !j.at("beta").is_null()) cfg.beta = j.at("beta").get<std::uint64_t>();
    cfg.edcs_C = j.value("edcs_C", cfg.edcs_C);
    if (j.contains("q_mode")) cfg.q_mode = parse_q_mode(j.at("q_mode").get<std::string>());
    cfg.alpha_grid = j.value("alpha_grid", cfg.alpha_grid);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
  if (!cfg.seed) throw InputError("config needs an explicit seed");
  if (cfg.graph_file.has_value() == cfg.generator.has_value()) {
    throw InputError("config needs exactly one of graph.file and graph.generator");
  }
  if (cfg.p_v.empty() || cfg.p_e.empty() || cfg.epsilon.empty() || cfg.instances == 0) {
    throw InputError("every sweep (instances, p_v, p_e, epsilon) needs at least one point");
  }
  if (cfg.samples == 0) throw InputError("samples must be positive");
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) throw InputError("confidence must lie in (0, 1)");
  if (cfg.beta && *cfg.beta == 0) throw InputError("beta must be positive");
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json graph = json::object();
  if (cfg.graph_file) graph["file"] = *cfg.graph_file;
  if (cfg.generator) {
    const auto& s = *cfg.generator;
    graph["generator"] = {{"family", to_string(s.family)},
                          {"n", s.n},
                          {"p", s.p},
                          {"n_left", s.n_left},
                          {"n_right", s.n_right},
                          {"weights",
                           {{"model", to_string(s.weights.kind)},
                            {"lo", s.weights.lo},
                            {"hi", s.weights.hi},
                            {"rate", s.weights.rate}}},
                          {"seed", s.seed}};
  }
  json j = {{"graph", graph},
            {"instances", cfg.instances},
            {"p_v", cfg.p_v},
            {"p_e", cfg.p_e},
            {"epsilon", cfg.epsilon},
            {"algorithm", to_string(cfg.algorithm)},
            {"weighted", cfg.weighted},
            {"r_cap", cfg.r_cap ? json(*cfg.r_cap) : json(nullptr)},
            {"samples", cfg.samples},
            {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)},
            {"output", cfg.output},
            {"confidence", cfg.confidence},
            {"enumeration_budget", cfg.enumeration_budget},
            {"beta", cfg.beta ? json(*cfg.beta) : json(nullptr)},
            {"edcs_C", cfg.edcs_C},
            {"q_mode", to_string(cfg.q_mode)},
            {"alpha_grid", cfg.alpha_grid}};
  return j.dump(2) + "\n";
}

namespace {

struct Point {
  std::uint64_t instance;
  double p_v, p_e, epsilon;
};

void run_algorithm1_checks(const StochasticGraph& g, const Sparsifier& s, const ExperimentConfig& cfg,
                           double epsilon, RngSeed seed, ExperimentRow& row) {
  auto fail = [&](const std::string& what) {
    row.checks_passed = false;
    row.failed_checks.push_back(what);
  };
  if (row.max_deg_q > s.params.R) fail("degree bound");

  EstimatorOptions opts;
  opts.mode = cfg.q_mode;
  opts.samples = cfg.samples;
  opts.seed = seed.split(0);
  opts.confidence = cfg.confidence;
  opts.enumeration_budget = cfg.enumeration_budget;
  auto stats = compute_edge_stats(g, opts);
  stats.attach_frequencies(s);
  const auto partition = classify_edges(s, stats.q);
  stats.restrict_to_noncrucial(g.graph(), partition.noncrucial);

  const MatchingEngine engine(g.graph());
  const auto run = run_fractional(g, engine, s, stats, partition, epsilon, seed.split(1), cfg.alpha_grid);

  const auto loads = run.combined.vertex_loads(g.graph());
  if (std::any_of(loads.begin(), loads.end(), [](double l) { return l > 1.0 + 1e-9; })) fail("vertex budget");
  const auto nc_loads = run.noncrucial.vertex_loads(g.graph());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (nc_loads[v] > std::max(stats.q_v[v], epsilon) / g.p_v() + 1e-9) {
      fail("non-crucial vertex bound");
      break;
    }
  }
  const auto max_set = static_cast<std::size_t>(std::floor(1.0 / epsilon + 1e-12));
  if (max_set <= kDefaultSubsetBudget) {
    if (!check_blossom_constraints(g.graph(), run.noncrucial, epsilon, epsilon).empty()) {
      fail("non-crucial odd-set bound");
    }
    if (!check_blossom_constraints(g.graph(), run.combined, epsilon).empty()) fail("odd-set constraints");
    try {
      round_to_integral(g.graph(), run.combined, run.realized.edges & s.q_edges, epsilon);
    } catch (const std::logic_error&) {
      fail("rounding bound");
    }
  }
}

ExperimentRow run_point(const ExperimentConfig& cfg, const Graph& base, const std::string& graph_id,
                        const Point& pt, RngSeed seed) {
  const StochasticGraph g(base, pt.p_v, pt.p_e, cfg.weighted);
  ExperimentRow row;
  row.graph_id = graph_id;
  row.n = g.vertex_count();
  row.m = g.edge_count();
  row.p_v = pt.p_v;
  row.p_e = pt.p_e;
  row.epsilon = pt.epsilon;
  row.algorithm = cfg.algorithm;

  EstimatorOptions opts;
  opts.mode = cfg.q_mode;
  opts.samples = cfg.samples;
  opts.seed = seed.split(1);
  opts.confidence = cfg.confidence;
  opts.enumeration_budget = cfg.enumeration_budget;

  EdgeMask q;
  if (cfg.algorithm == Algorithm::algorithm1) {
    const auto params = compute_params(pt.epsilon, pt.p_v, pt.p_e, cfg.r_cap);
    const auto s = build_sparsifier(g, params, seed.split(0));
    q = s.q_edges;
    row.r_or_beta = params.R;
    row.max_deg_q = s.max_degree(g.graph());
    run_algorithm1_checks(g, s, cfg, pt.epsilon, seed.split(2), row);
  } else {
    EdcsParams params;
    if (cfg.beta) {
      params.beta = *cfg.beta;
      params.beta_minus = *cfg.beta - 1;
      params.epsilon = pt.epsilon;
      params.C = cfg.edcs_C;
    } else {
      params = compute_beta(pt.epsilon, pt.p_v, pt.p_e, cfg.edcs_C);
    }
    const auto h = build_edcs(g.graph(), params);
    q = h.h_edges;
    row.r_or_beta = params.beta;
    const auto deg = g.graph().degrees(q);
    row.max_deg_q = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    if (!h.certified) {
      row.checks_passed = false;
      row.failed_checks.push_back("edcs certification");
    }
    if (row.max_deg_q > params.beta) {
      row.checks_passed = false;
      row.failed_checks.push_back("degree bound");
    }
  }

  const auto ratio = approximation_ratio(g, q, opts);
  row.ratio = ratio.ratio;
  row.ratio_ci = ratio.ci_halfwidth;
  row.q_mode = ratio.denominator.mode;
  return row;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<Graph> graphs;
  std::vector<std::string> ids;
  for (std::uint64_t i = 0; i < cfg.instances; ++i) {
    if (cfg.graph_file) {
      graphs.push_back(parse_graph_file(*cfg.graph_file).graph());
      const auto stem = std::filesystem::path(*cfg.graph_file).stem().string();
      ids.push_back(cfg.instances > 1 ? stem + "#" + std::to_string(i) : stem);
    } else {
      graphs.push_back(generate(*cfg.generator, i));
      ids.push_back(to_string(cfg.generator->family) + "-" + std::to_string(graphs.back().vertex_count()) +
                    "-" + std::to_string(i));
    }
  }

  std::vector<Point> points;
  for (std::uint64_t i = 0; i < cfg.instances; ++i)
    for (double pv : cfg.p_v)
      for (double pe : cfg.p_e)
        for (double eps : cfg.epsilon) points.push_back({i, pv, pe, eps});

  std::vector<ExperimentRow> rows(points.size());
  parallel_for(points.size(), cfg.workers, [&](std::size_t k) {
    const auto& pt = points[k];
    try {
      rows[k] = run_point(cfg, graphs[pt.instance], ids[pt.instance], pt, RngSeed{*cfg.seed, k});
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep point " + std::to_string(k) + " (graph " + ids[pt.instance] +
                               ", p_v " + format_real(pt.p_v) + ", p_e " + format_real(pt.p_e) +
                               ", epsilon " + format_real(pt.epsilon) + "): " + e.what());
    }
  });
  return rows;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "graph_id,n,m,p_v,p_e,epsilon,algorithm,R_or_beta,q_mode,ratio,ratio_ci,max_deg_Q,checks_passed\n";
  for (const auto& r : rows) {
    out << r.graph_id << ',' << r.n << ',' << r.m << ',' << format_real(r.p_v) << ','
        << format_real(r.p_e) << ',' << format_real(r.epsilon) << ',' << to_string(r.algorithm) << ','
        << r.r_or_beta << ',' << to_string(r.q_mode) << ',' << format_real(r.ratio) << ','
        << format_real(r.ratio_ci) << ',' << r.max_deg_q << ',' << (r.checks_passed ? "true" : "false")
        << '\n';
  }
  return out.str();
}

void write_experiment_outputs(const ExperimentConfig& cfg, const std::vector<ExperimentRow>& rows) {
  if (cfg.output.empty()) throw InputError("config has no output path");
  write_text_file(cfg.output, rows_to_csv(rows));
  write_text_file(cfg.output + ".json", config_to_json(cfg));
}

}  // namespace stochmatch
