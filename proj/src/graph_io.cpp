#include "stochmatch/graph_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "stochmatch/errors.hpp"

namespace stochmatch {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

std::uint64_t parse_count(const std::string& tok, std::size_t line, const char* what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError(line, std::string("expected a non-negative integer for ") + what + ", got '" + tok + "'");
  }
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    throw ParseError(line, std::string(what) + " out of range: '" + tok + "'");
  }
}

double parse_real(const std::string& tok, std::size_t line, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) {
    throw ParseError(line, std::string("expected a real number for ") + what + ", got '" + tok + "'");
  }
  return v;
}

}  // namespace

StochasticGraph parse_graph(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t header_line = 0;
  std::uint64_t n = 0, m = 0;
  bool weighted = false;
  double p_v = 1.0, p_e = 1.0;
  std::vector<Edge> edges;
  std::set<std::pair<VertexId, VertexId>> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    const auto tok = split_tokens(raw);

    if (!have_header) {
      if (tok.size() != 5) throw ParseError(line_no, "header must be 'n m weighted|unweighted p_v p_e'");
      n = parse_count(tok[0], line_no, "n");
      m = parse_count(tok[1], line_no, "m");
      if (tok[2] == "weighted") {
        weighted = true;
      } else if (tok[2] != "unweighted") {
        throw ParseError(line_no, "expected 'weighted' or 'unweighted', got '" + tok[2] + "'");
      }
      p_v = parse_real(tok[3], line_no, "p_v");
      p_e = parse_real(tok[4], line_no, "p_e");
      if (!(p_v > 0.0 && p_v <= 1.0)) throw ParseError(line_no, "p_v must lie in (0, 1]");
      if (!(p_e > 0.0 && p_e <= 1.0)) throw ParseError(line_no, "p_e must lie in (0, 1]");
      if (n > 0xffffffffULL) throw ParseError(line_no, "n too large");
      have_header = true;
      header_line = line_no;
      continue;
    }

    if (edges.size() == m) throw ParseError(line_no, "more edge lines than the header's m = " + std::to_string(m));
    const std::size_t want = weighted ? 3 : 2;
    if (tok.size() != want) {
      throw ParseError(line_no, weighted ? "weighted edge line must be 'u v w'"
                                         : "unweighted edge line must be 'u v' (no weight)");
    }
    const auto u = parse_count(tok[0], line_no, "u");
    const auto v = parse_count(tok[1], line_no, "v");
    if (u >= n || v >= n) throw ParseError(line_no, "endpoint outside [0, " + std::to_string(n) + ")");
    if (u == v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
    const double w = weighted ? parse_real(tok[2], line_no, "w") : 1.0;
    if (!std::isfinite(w) || w < 0.0) throw ParseError(line_no, "weight must be finite and non-negative");
    const std::pair<VertexId, VertexId> key{static_cast<VertexId>(std::min(u, v)),
                                          static_cast<VertexId>(std::max(u, v))};
    if (!seen.insert(key).second) {
      throw ParseError(line_no, "duplicate edge (" + std::to_string(key.first) + ", " +
                                    std::to_string(key.second) + ")");
    }
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
  }

  if (!have_header) throw ParseError(line_no + 1, "missing header");
  if (edges.size() != m) {
    throw ParseError(line_no + 1, "expected " + std::to_string(m) + " edge lines, found " +
                                      std::to_string(edges.size()));
  }
  try {
    return StochasticGraph(Graph(n, std::move(edges)), p_v, p_e, weighted);
  } catch (const InputError& e) {
    throw ParseError(header_line, e.what());
  }
}

StochasticGraph parse_graph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

StochasticGraph parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return parse_graph(in);
}

void write_graph(std::ostream& out, const StochasticGraph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << ' '
      << (g.weighted() ? "weighted" : "unweighted") << ' ' << format_real(g.p_v()) << ' '
      << format_real(g.p_e()) << '\n';
  for (const auto& e : g.graph().edges()) {
    out << e.u << ' ' << e.v;
    if (g.weighted()) out << ' ' << format_real(e.weight);
    out << '\n';
  }
}

std::string write_graph_string(const StochasticGraph& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

void write_graph_file(const std::string& path, const StochasticGraph& g) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write graph file '" + path + "'");
  write_graph(out, g);
}

}  // namespace stochmatch
