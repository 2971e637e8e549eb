#pragma once

// Text graph format: one `u v w` edge per line, 0-based vertices, decimal or
// p/q weights, `#` to end of line is a comment.

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "berezin/graph.hpp"

namespace berezin {

template <Scalar T>
WeightedGraph<T> parse_graph(std::istream& in) {
  std::vector<Edge<T>> edges;
  std::vector<int> edge_line;
  std::size_t n = 0;
  std::string line;
  int lineno = 0;
  auto parse_vertex = [&](const std::string& tok) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError("bad vertex '" + tok + "'", lineno);
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 3) throw ParseError("expected 'u v w', got " + std::to_string(tok.size()) + " fields", lineno);
    Edge<T> e{parse_vertex(tok[0]), parse_vertex(tok[1]), T(0)};
    try {
      e.w = parse_scalar<T>(tok[2]);
    } catch (const ParseError& err) {
      throw ParseError(err.what(), lineno);
    }
    if (!(e.w > T(0))) throw ParseError("weight must be positive", lineno);
    if (e.u == e.v) throw ParseError("self-loop at vertex " + tok[0], lineno);
    for (std::size_t k = 0; k < edges.size(); ++k)
      if ((edges[k].u == e.u && edges[k].v == e.v) || (edges[k].u == e.v && edges[k].v == e.u))
        throw ParseError("duplicate edge (first on line " + std::to_string(edge_line[k]) + ")", lineno);
    n = std::max({n, e.u + 1, e.v + 1});
    edges.push_back(std::move(e));
    edge_line.push_back(lineno);
  }
  if (edges.empty()) throw ParseError("graph has no edges");
  WeightedGraph<T> g(n, std::move(edges));
  g.require_connected();
  return g;
}

template <Scalar T>
WeightedGraph<T> parse_graph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_graph<T>(in);
}

template <Scalar T>
WeightedGraph<T> read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  return parse_graph<T>(in);
}

}  // namespace berezin
