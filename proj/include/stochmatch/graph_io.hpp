#pragma once

#include <iosfwd>
#include <string>

#include "stochmatch/graph.hpp"

namespace stochmatch {

/// Text edge list:
///   n m weighted|unweighted p_v p_e
///   u v [w]        (m lines; w required iff weighted)
/// Blank lines and lines starting with '#' are ignored. Errors raise
/// ParseError with the 1-based physical line number.
StochasticGraph parse_graph(std::istream& in);
StochasticGraph parse_graph_string(const std::string& text);
StochasticGraph parse_graph_file(const std::string& path);

/// Writes the same format with round-trip (%.17g) reals.
void write_graph(std::ostream& out, const StochasticGraph& g);
std::string write_graph_string(const StochasticGraph& g);
void write_graph_file(const std::string& path, const StochasticGraph& g);

/// %.17g formatting used by every text output.
std::string format_real(double x);

}  // namespace stochmatch
