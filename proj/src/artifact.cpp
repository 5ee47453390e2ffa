#include "stochmatch/artifact.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "stochmatch/errors.hpp"

namespace stochmatch {

using nlohmann::json;

namespace {

json graph_json(const StochasticGraph& g) {
  json edges = json::array();
  for (const auto& e : g.graph().edges()) edges.push_back({e.u, e.v, e.weight});
  return {{"n", g.vertex_count()},
          {"weighted", g.weighted()},
          {"p_v", g.p_v()},
          {"p_e", g.p_e()},
          {"edges", edges}};
}

StochasticGraph graph_from(const json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    edges.push_back({e.at(0).get<VertexId>(), e.at(1).get<VertexId>(), e.at(2).get<double>()});
  }
  return StochasticGraph(Graph(j.at("n").get<std::size_t>(), std::move(edges)),
                         j.at("p_v").get<double>(), j.at("p_e").get<double>(),
                         j.at("weighted").get<bool>());
}

json indices(const EdgeMask& m) { return indices_from_mask(m); }

EdgeMask mask_from(const json& j, std::size_t m) {
  return mask_from_indices(m, j.get<std::vector<EdgeIndex>>());
}

}  // namespace

std::string to_json(const SparsifierArtifact& a) {
  const auto& p = a.sparsifier.params;
  json j = {{"kind", "sparsifier"},
            {"graph", graph_json(a.graph)},
            {"params",
             {{"epsilon", p.epsilon},
              {"R", p.R},
              {"R_formula", p.R_formula},
              {"tau", p.tau},
              {"r_cap", p.r_cap ? json(*p.r_cap) : json(nullptr)}}},
            {"seed", {{"seed", a.seed.seed}, {"stream", a.seed.stream}}},
            {"q_edges", indices(a.sparsifier.q_edges)},
            {"appear_count", a.sparsifier.appear_count}};
  return j.dump(2) + "\n";
}

std::string to_json(const EdcsArtifact& a) {
  const auto& p = a.edcs.params;
  json j = {{"kind", "edcs"},
            {"graph", graph_json(a.graph)},
            {"params",
             {{"beta", p.beta}, {"beta_minus", p.beta_minus}, {"epsilon", p.epsilon}, {"C", p.C}}},
            {"h_edges", indices(a.edcs.h_edges)},
            {"certified", a.edcs.certified},
            {"fixups", a.edcs.fixups}};
  return j.dump(2) + "\n";
}

std::string to_json(const FractionalArtifact& a) {
  json j = {{"kind", "fractional"},
            {"graph", graph_json(a.graph)},
            {"epsilon", a.epsilon},
            {"x", a.x.x},
            {"s", a.x.s},
            {"available", indices(a.available)},
            {"noncrucial", indices(a.noncrucial)},
            {"crucial_matching", a.crucial_matching},
            {"labels", a.labels}};
  return j.dump(2) + "\n";
}

Artifact parse_artifact(const std::string& text) {
  try {
    const json j = json::parse(text);
    const auto kind = j.at("kind").get<std::string>();
    auto graph = graph_from(j.at("graph"));
    const std::size_t m = graph.edge_count();
    if (kind == "sparsifier") {
      const auto& p = j.at("params");
      Sparsifier s;
      s.params.epsilon = p.at("epsilon").get<double>();
      s.params.R = p.at("R").get<std::uint64_t>();
      s.params.R_formula = p.at("R_formula").get<double>();
      s.params.tau = p.at("tau").get<double>();
      if (!p.at("r_cap").is_null()) s.params.r_cap = p.at("r_cap").get<std::uint64_t>();
      s.q_edges = mask_from(j.at("q_edges"), m);
      s.appear_count = j.at("appear_count").get<std::vector<std::uint64_t>>();
      if (s.appear_count.size() != m) throw InputError("appear_count must cover every edge");
      RngSeed seed{j.at("seed").at("seed").get<std::uint64_t>(),
                   j.at("seed").at("stream").get<std::uint64_t>()};
      return SparsifierArtifact{std::move(graph), std::move(s), seed};
    }
    if (kind == "edcs") {
      const auto& p = j.at("params");
      EdcsSubgraph h;
      h.params.beta = p.at("beta").get<std::uint64_t>();
      h.params.beta_minus = p.at("beta_minus").get<std::uint64_t>();
      h.params.epsilon = p.at("epsilon").get<double>();
      h.params.C = p.at("C").get<double>();
      h.h_edges = mask_from(j.at("h_edges"), m);
      h.certified = j.at("certified").get<bool>();
      h.fixups = j.value("fixups", std::uint64_t{0});
      return EdcsArtifact{std::move(graph), std::move(h)};
    }
    if (kind == "fractional") {
      FractionalArtifact a{std::move(graph), j.at("epsilon").get<double>(), {}, {}, {}, {}, {}};
      a.x.x = j.at("x").get<std::vector<double>>();
      a.x.s = j.at("s").get<std::vector<double>>();
      if (a.x.x.size() != m || a.x.s.size() != m) throw InputError("x and s must cover every edge");
      a.available = mask_from(j.at("available"), m);
      a.noncrucial = mask_from(j.at("noncrucial"), m);
      a.crucial_matching = j.at("crucial_matching").get<std::vector<EdgeIndex>>();
      a.labels = j.at("labels").get<std::vector<std::string>>();
      return a;
    }
    throw InputError("unknown artifact kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed artifact: ") + e.what());
  }
}

Artifact read_artifact_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open artifact '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_artifact(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

bool CheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

CheckReport check(const SparsifierArtifact& a) {
  CheckReport r{"sparsifier", {}};
  const auto& s = a.sparsifier;
  bool consistent = true, bounded = true;
  for (std::size_t e = 0; e < s.appear_count.size(); ++e) {
    if ((s.appear_count[e] > 0) != static_cast<bool>(s.q_edges[e])) consistent = false;
    if (s.appear_count[e] > s.params.R) bounded = false;
  }
  r.checks.push_back({"appear_count > 0 iff edge in Q", consistent, ""});
  r.checks.push_back({"appear_count <= R", bounded, ""});
  const auto deg = s.max_degree(a.graph.graph());
  r.checks.push_back({"max degree of Q <= R", deg <= s.params.R,
                      "max degree " + std::to_string(deg) + ", R " + std::to_string(s.params.R)});
  return r;
}

CheckReport check(const EdcsArtifact& a) {
  CheckReport r{"edcs", {}};
  const auto violations = verify_edcs(a.graph.graph(), a.edcs.h_edges, a.edcs.params);
  r.checks.push_back({"no degree-sum violations", violations.empty(),
                      std::to_string(violations.size()) + " violating edges"});
  r.checks.push_back({"certified flag matches", a.edcs.certified == violations.empty(), ""});
  return r;
}

CheckReport check(const FractionalArtifact& a) {
  CheckReport r{"fractional", {}};
  const Graph& g = a.graph.graph();
  const bool in_range = std::all_of(a.x.x.begin(), a.x.x.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
  r.checks.push_back({"x_e in [0, 1]", in_range, ""});
  const auto loads = a.x.vertex_loads(g);
  const double max_load = loads.empty() ? 0.0 : *std::max_element(loads.begin(), loads.end());
  r.checks.push_back({"x_v <= 1", max_load <= 1.0 + 1e-9, "max load " + std::to_string(max_load)});
  const auto support = a.x.support();
  r.checks.push_back({"support within realized Q", (support - a.available).none(), ""});
  try {
    const auto v = check_blossom_constraints(g, a.x, a.epsilon);
    r.checks.push_back({"odd-set constraints", v.empty(), std::to_string(v.size()) + " violating sets"});
  } catch (const BudgetError& e) {
    r.checks.push_back({"odd-set constraints", true, e.what(), true});
  }
  try {
    round_to_integral(g, a.x, a.available, a.epsilon);
    r.checks.push_back({"rounding keeps (1 - eps) of the weight", true, ""});
  } catch (const std::logic_error& e) {
    r.checks.push_back({"rounding keeps (1 - eps) of the weight", false, e.what()});
  }
  return r;
}

}  // namespace

CheckReport check_artifact(const Artifact& a) {
  return std::visit([](const auto& art) { return check(art); }, a);
}

}  // namespace stochmatch
