#pragma once

// Wilson's loop-erased random-walk sampler for weighted uniform spanning trees.

#include <cstdint>
#include <random>
#include <vector>

#include "berezin/graph.hpp"

namespace berezin {

/// One spanning tree drawn with probability ∝ ∏_{e∈t} w_e. Deterministic for
/// a given seed.
template <Scalar T>
SpanningTree sample_ust(const WeightedGraph<T>& g, std::uint64_t seed, std::size_t root = 0) {
  g.require_connected();
  const std::size_t n = g.vertex_count();
  if (root >= n) throw ArgumentError("root vertex out of range");

  std::vector<std::vector<std::size_t>> nbr_edge(n);
  std::vector<std::vector<double>> nbr_weight(n);
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edge(k);
    const double w = ScalarTraits<T>::to_double(e.w);
    nbr_edge[e.u].push_back(k);
    nbr_weight[e.u].push_back(w);
    nbr_edge[e.v].push_back(k);
    nbr_weight[e.v].push_back(w);
  }
  std::vector<std::discrete_distribution<std::size_t>> step;
  step.reserve(n);
  for (std::size_t v = 0; v < n; ++v) step.emplace_back(nbr_weight[v].begin(), nbr_weight[v].end());

  std::mt19937_64 rng(seed);
  std::vector<bool> in_tree(n, false);
  std::vector<std::size_t> next_edge(n, 0);
  in_tree[root] = true;
  auto other = [&](std::size_t k, std::size_t v) { return g.edge(k).u == v ? g.edge(k).v : g.edge(k).u; };

  SpanningTree t;
  for (std::size_t start = 0; start < n; ++start) {
    // Overwriting next_edge on revisits erases loops implicitly.
    for (std::size_t v = start; !in_tree[v]; v = other(next_edge[v], v))
      next_edge[v] = nbr_edge[v][step[v](rng)];
    for (std::size_t v = start; !in_tree[v]; v = other(next_edge[v], v)) {
      in_tree[v] = true;
      t.edges.push_back(next_edge[v]);
    }
  }
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

}  // namespace berezin
