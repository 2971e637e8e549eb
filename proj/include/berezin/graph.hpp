#pragma once

// Weighted graphs and their spanning trees: Laplacians, tree counting by
// determinant, Berezin integral and enumeration, transfer impedances and
// determinantal / fermionic edge probabilities.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "berezin/errors.hpp"
#include "berezin/gaussian.hpp"
#include "berezin/grassmann.hpp"
#include "berezin/matrix.hpp"

namespace berezin {

template <Scalar T>
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  T w = T(1);
};

struct DirectedEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace detail

/// Finite undirected graph with positive edge weights; no loops, no multi-edges.
/// Connectivity is a query, not a construction invariant, so that callers can
/// report it.
template <Scalar T>
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(std::size_t vertices, std::vector<Edge<T>> edges) : n_(vertices), edges_(std::move(edges)) {
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const auto& e = edges_[k];
      if (e.u >= n_ || e.v >= n_) throw ArgumentError("edge endpoint out of range");
      if (e.u == e.v) throw ArgumentError("self-loop at vertex " + std::to_string(e.u));
      if (!(e.w > T(0))) throw ArgumentError("edge weights must be positive");
      for (std::size_t j = 0; j < k; ++j)
        if (same_pair(edges_[j], e.u, e.v))
          throw ArgumentError("duplicate edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
    }
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge<T>>& edges() const noexcept { return edges_; }
  const Edge<T>& edge(std::size_t k) const { return edges_.at(k); }

  std::optional<std::size_t> find_edge(std::size_t u, std::size_t v) const {
    for (std::size_t k = 0; k < edges_.size(); ++k)
      if (same_pair(edges_[k], u, v)) return k;
    return std::nullopt;
  }

  std::size_t edge_index(std::size_t u, std::size_t v) const {
    if (auto k = find_edge(u, v)) return *k;
    throw ArgumentError("no edge " + std::to_string(u) + "-" + std::to_string(v));
  }

  /// Default orientation: smaller endpoint to larger.
  DirectedEdge oriented(std::size_t k) const {
    const auto& e = edge(k);
    return {std::min(e.u, e.v), std::max(e.u, e.v)};
  }

  bool connected() const {
    if (n_ == 0) return false;
    detail::UnionFind uf(n_);
    std::size_t components = n_;
    for (const auto& e : edges_)
      if (uf.unite(e.u, e.v)) --components;
    return components == 1;
  }

  void require_connected() const {
    if (!connected()) throw ConnectivityError("graph is not connected");
  }

  template <Scalar U>
  WeightedGraph<U> convert() const {
    std::vector<Edge<U>> out;
    for (const auto& e : edges_) {
      if constexpr (std::is_same_v<T, U>) {
        out.push_back(e);
      } else {
        out.push_back({e.u, e.v, static_cast<U>(e.w)});
      }
    }
    return WeightedGraph<U>(n_, std::move(out));
  }

 private:
  static bool same_pair(const Edge<T>& e, std::size_t u, std::size_t v) {
    return (e.u == u && e.v == v) || (e.u == v && e.v == u);
  }

  std::size_t n_ = 0;
  std::vector<Edge<T>> edges_;
};

// ---- standard graphs ----

template <Scalar T>
WeightedGraph<T> complete_graph(std::size_t n) {
  std::vector<Edge<T>> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) e.push_back({u, v, T(1)});
  return WeightedGraph<T>(n, std::move(e));
}

template <Scalar T>
WeightedGraph<T> path_graph(std::size_t n) {
  std::vector<Edge<T>> e;
  for (std::size_t u = 0; u + 1 < n; ++u) e.push_back({u, u + 1, T(1)});
  return WeightedGraph<T>(n, std::move(e));
}

template <Scalar T>
WeightedGraph<T> cycle_graph(std::size_t n) {
  std::vector<Edge<T>> e;
  for (std::size_t u = 0; u < n; ++u) e.push_back({u, (u + 1) % n, T(1)});
  return WeightedGraph<T>(n, std::move(e));
}

/// rows × cols grid, vertex (r, c) numbered r * cols + c.
template <Scalar T>
WeightedGraph<T> grid_graph(std::size_t rows, std::size_t cols) {
  std::vector<Edge<T>> e;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t v = r * cols + c;
      if (c + 1 < cols) e.push_back({v, v + 1, T(1)});
      if (r + 1 < rows) e.push_back({v, v + cols, T(1)});
    }
  return WeightedGraph<T>(rows * cols, std::move(e));
}

// ---- Laplacian ----

/// Δ(u,v) = w_uv on edges, Δ(u,u) = -Σ_v w_uv, zero elsewhere.
template <Scalar T>
Matrix<T> laplacian(const WeightedGraph<T>& g) {
  g.require_connected();
  Matrix<T> d(g.vertex_count(), g.vertex_count());
  for (const auto& e : g.edges()) {
    d(e.u, e.v) += e.w;
    d(e.v, e.u) += e.w;
    d(e.u, e.u) -= e.w;
    d(e.v, e.v) -= e.w;
  }
  return d;
}

/// Row/column of vertex v in the matrix reduced at root o.
inline std::optional<std::size_t> reduced_index(std::size_t v, std::size_t root) {
  if (v == root) return std::nullopt;
  return v < root ? v : v - 1;
}

namespace detail {

template <Scalar T>
Matrix<T> negated_reduced(const WeightedGraph<T>& g, std::size_t root) {
  if (root >= g.vertex_count()) throw ArgumentError("root vertex out of range");
  const std::size_t n = g.vertex_count();
  Matrix<T> o(n - 1, n - 1);
  for (const auto& e : g.edges()) {
    const auto iu = reduced_index(e.u, root), iv = reduced_index(e.v, root);
    if (iu) o(*iu, *iu) += e.w;
    if (iv) o(*iv, *iv) += e.w;
    if (iu && iv) {
      o(*iu, *iv) -= e.w;
      o(*iv, *iu) -= e.w;
    }
  }
  return o;
}

}  // namespace detail

/// O = -Δ with the root's row and column removed.
template <Scalar T>
Matrix<T> reduced_laplacian(const WeightedGraph<T>& g, std::size_t root) {
  g.require_connected();
  return detail::negated_reduced(g, root);
}

// ---- spanning-tree counting ----

template <Scalar T>
struct TreeCount {
  T value = T(0);  // Σ_t ∏_{e∈t} w_e; the plain count for unit weights
  bool connected = false;
};

/// Matrix-tree theorem: det(-Δ reduced at o). Returns 0 with the flag cleared
/// for a disconnected graph.
template <Scalar T>
TreeCount<T> tree_count(const WeightedGraph<T>& g, std::size_t root) {
  if (root >= g.vertex_count()) throw ArgumentError("root vertex out of range");
  if (!g.connected()) return {T(0), false};
  return {determinant(detail::negated_reduced(g, root)), true};
}

/// ∫ D(ξ,ξ̄) ξ̄_o ξ_o exp((ξ̄, -Δ ξ)) with generators over every vertex.
template <Scalar T>
T tree_count_berezin(const WeightedGraph<T>& g, std::size_t root) {
  if (root >= g.vertex_count()) throw ArgumentError("root vertex out of range");
  const std::size_t n = g.vertex_count();
  detail::require_symbolic_size(n);
  Matrix<T> neg(n, n);
  for (const auto& e : g.edges()) {
    neg(e.u, e.v) -= e.w;
    neg(e.v, e.u) -= e.w;
    neg(e.u, e.u) += e.w;
    neg(e.v, e.v) += e.w;
  }
  const Algebra alg = Algebra::paired(n);
  return gaussian_moment_symbolic(neg, Element<T>::word(alg, {xibar(root), xi(root)}));
}

/// Weighted tree sum by contraction-deletion: τ(G) = τ(G - e) + w_e τ(G / e).
/// Parallel edges created by contraction merge by adding weights.
template <Scalar T>
T tree_count_contraction(const WeightedGraph<T>& g) {
  // Dense symmetric weight matrix over the current vertex set.
  struct Rec {
    static T run(std::vector<std::vector<T>> w) {
      const std::size_t n = w.size();
      if (n == 1) return T(1);
      std::size_t a = n, b = n;
      for (std::size_t i = 0; i < n && a == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (!ScalarTraits<T>::is_zero(w[i][j])) {
            a = i;
            b = j;
            break;
          }
      if (a == n) return T(0);
      const T we = w[a][b];
      auto deleted = w;
      deleted[a][b] = deleted[b][a] = T(0);
      // Contract b into a.
      std::vector<std::vector<T>> contracted(n - 1, std::vector<T>(n - 1, T(0)));
      auto map = [&](std::size_t v) { return v == b ? a : (v > b ? v - 1 : v); };
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j || ScalarTraits<T>::is_zero(w[i][j])) continue;
          const std::size_t mi = map(i), mj = map(j);
          if (mi != mj) contracted[mi][mj] += w[i][j];
        }
      return run(std::move(deleted)) + we * run(std::move(contracted));
    }
  };
  if (g.vertex_count() == 0) return T(0);
  if (g.edge_count() > 25) throw CapacityError("contraction-deletion supports at most 25 edges");
  std::vector<std::vector<T>> w(g.vertex_count(), std::vector<T>(g.vertex_count(), T(0)));
  for (const auto& e : g.edges()) w[e.u][e.v] = w[e.v][e.u] = e.w;
  return Rec::run(std::move(w));
}

/// Edge subset of size |V|-1, edge indices ascending.
struct SpanningTree {
  std::vector<std::size_t> edges;

  bool contains(std::size_t e) const { return std::binary_search(edges.begin(), edges.end(), e); }
  friend auto operator<=>(const SpanningTree&, const SpanningTree&) = default;
};

inline constexpr std::size_t kMaxEnumerationEdges = 25;

template <Scalar T>
struct TreeEnumeration {
  std::vector<SpanningTree> trees;
  std::vector<T> weights;  // ∏_{e∈t} w_e, parallel to `trees`
  T total = T(0);

  /// Weighted probability that every edge of `in` and no edge of `out` is in
  /// the tree, by direct counting.
  T probability(std::span<const std::size_t> in, std::span<const std::size_t> out = {}) const {
    T hit(0);
    for (std::size_t k = 0; k < trees.size(); ++k) {
      const auto& t = trees[k];
      if (std::all_of(in.begin(), in.end(), [&](std::size_t e) { return t.contains(e); }) &&
          std::none_of(out.begin(), out.end(), [&](std::size_t e) { return t.contains(e); }))
        hit += weights[k];
    }
    return hit / total;
  }
};

/// Every spanning tree exactly once, by depth-first choice over edges in index
/// order with union-find cycle rejection.
template <Scalar T>
TreeEnumeration<T> enumerate_trees(const WeightedGraph<T>& g) {
  if (g.edge_count() > kMaxEnumerationEdges)
    throw CapacityError("tree enumeration supports at most " + std::to_string(kMaxEnumerationEdges) + " edges");
  TreeEnumeration<T> out;
  const std::size_t n = g.vertex_count();
  if (n == 0) return out;
  const std::size_t need = n - 1;
  std::vector<std::size_t> chosen;
  auto rec = [&](auto&& self, std::size_t next, const detail::UnionFind& uf) -> void {
    if (chosen.size() == need) {
      T w(1);
      for (auto e : chosen) w *= g.edge(e).w;
      out.trees.push_back({chosen});
      out.weights.push_back(w);
      out.total += w;
      return;
    }
    if (g.edge_count() - next < need - chosen.size()) return;
    for (std::size_t k = next; k < g.edge_count(); ++k) {
      if (g.edge_count() - k < need - chosen.size()) break;
      detail::UnionFind copy = uf;
      if (!copy.unite(g.edge(k).u, g.edge(k).v)) continue;
      chosen.push_back(k);
      self(self, k + 1, copy);
      chosen.pop_back();
    }
  };
  rec(rec, 0, detail::UnionFind(n));
  return out;
}

// ---- fermionic edge variables ----

/// ζ_e = w_uv (ξ̄_u - ξ̄_v)(ξ_u - ξ_v). With a root, sites are the vertices
/// other than the root and the root's generators are taken as zero; without
/// one, every vertex is a site.
template <Scalar T>
Element<T> zeta(const WeightedGraph<T>& g, std::size_t edge, std::optional<std::size_t> root = std::nullopt) {
  if (edge >= g.edge_count()) throw ArgumentError("unknown edge index " + std::to_string(edge));
  const auto& e = g.edge(edge);
  const std::size_t n = g.vertex_count();
  const Algebra alg = Algebra::paired(root ? n - 1 : n);
  auto site = [&](std::size_t v) -> std::optional<std::size_t> { return root ? reduced_index(v, *root) : v; };
  Element<T> bar_diff = Element<T>::zero(alg), diff = Element<T>::zero(alg);
  if (auto s = site(e.u)) {
    bar_diff += Element<T>::generator(alg, xibar(*s));
    diff += Element<T>::generator(alg, xi(*s));
  }
  if (auto s = site(e.v)) {
    bar_diff -= Element<T>::generator(alg, xibar(*s));
    diff -= Element<T>::generator(alg, xi(*s));
  }
  return e.w * (bar_diff * diff);
}

// ---- transfer impedance ----

template <Scalar T>
struct TransferImpedance {
  std::vector<DirectedEdge> edges;
  Matrix<T> bare;      // T(e,f) from four reduced-inverse entries
  Matrix<T> weighted;  // Y(e,f) = w_e T(e,f)
};

/// O⁻¹ extended to all vertices with zero row and column at the root.
template <Scalar T>
Matrix<T> green_function(const WeightedGraph<T>& g, std::size_t root) {
  const Matrix<T> oinv = inverse(reduced_laplacian(g, root));
  const std::size_t n = g.vertex_count();
  Matrix<T> full(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      const auto iu = reduced_index(u, root), iv = reduced_index(v, root);
      if (iu && iv) full(u, v) = oinv(*iu, *iv);
    }
  return full;
}

template <Scalar T>
TransferImpedance<T> transfer_impedance(const WeightedGraph<T>& g, std::size_t root,
                                        std::vector<DirectedEdge> edges) {
  const Matrix<T> gf = green_function(g, root);
  const std::size_t k = edges.size();
  TransferImpedance<T> out{std::move(edges), Matrix<T>(k, k), Matrix<T>(k, k)};
  for (std::size_t a = 0; a < k; ++a) {
    const auto [x, y] = out.edges[a];
    const T w = g.edge(g.edge_index(x, y)).w;
    for (std::size_t b = 0; b < k; ++b) {
      const auto [u, v] = out.edges[b];
      out.bare(a, b) = gf(x, u) - gf(y, u) - gf(x, v) + gf(y, v);
      out.weighted(a, b) = w * out.bare(a, b);
    }
  }
  return out;
}

/// Transfer impedance over edge indices with the default orientation.
template <Scalar T>
TransferImpedance<T> transfer_impedance(const WeightedGraph<T>& g, std::size_t root,
                                        std::span<const std::size_t> edge_indices) {
  std::vector<DirectedEdge> d;
  for (auto k : edge_indices) d.push_back(g.oriented(k));
  return transfer_impedance(g, root, std::move(d));
}

namespace detail {

inline void require_distinct(std::span<const std::size_t> f, std::size_t edge_count) {
  std::vector<std::size_t> s(f.begin(), f.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw ArgumentError("repeated edge in edge set");
  if (!s.empty() && s.back() >= edge_count) throw ArgumentError("unknown edge index " + std::to_string(s.back()));
}

}  // namespace detail

/// P(F ⊆ t) = det(Y restricted to F).
template <Scalar T>
T edge_inclusion_probability(const WeightedGraph<T>& g, std::span<const std::size_t> f, std::size_t root = 0) {
  detail::require_distinct(f, g.edge_count());
  if (f.empty()) return T(1);
  return determinant(transfer_impedance(g, root, f).weighted);
}

/// ⟨∏_{f∈F} ζ_f⟩ under the Gaussian weight of O = -Δ reduced at the root.
template <Scalar T>
T edge_inclusion_fermionic(const WeightedGraph<T>& g, std::span<const std::size_t> f, std::size_t root = 0) {
  detail::require_distinct(f, g.edge_count());
  const Matrix<T> o = reduced_laplacian(g, root);
  Element<T> prod = Element<T>::one(Algebra::paired(o.rows()));
  for (auto e : f) prod = prod * zeta(g, e, root);
  return fermionic_expectation(o, prod);
}

namespace detail {

inline void require_disjoint(std::span<const std::size_t> f, std::span<const std::size_t> fx) {
  for (auto e : f)
    if (std::find(fx.begin(), fx.end(), e) != fx.end())
      throw ArgumentError("included and excluded edge sets overlap at edge " + std::to_string(e));
}

}  // namespace detail

/// P(F ⊆ t, F' ∩ t = ∅) = ⟨∏_F ζ_f ∏_{F'} (1 - ζ_f')⟩.
template <Scalar T>
T edge_event_probability(const WeightedGraph<T>& g, std::span<const std::size_t> f,
                         std::span<const std::size_t> excluded, std::size_t root = 0) {
  detail::require_distinct(f, g.edge_count());
  detail::require_distinct(excluded, g.edge_count());
  detail::require_disjoint(f, excluded);
  const Matrix<T> o = reduced_laplacian(g, root);
  const Algebra alg = Algebra::paired(o.rows());
  Element<T> prod = Element<T>::one(alg);
  for (auto e : f) prod = prod * zeta(g, e, root);
  for (auto e : excluded) prod = prod * (Element<T>::one(alg) - zeta(g, e, root));
  return fermionic_expectation(o, prod);
}

/// Same event through Σ_{γ ⊆ F'} (-1)^|γ| det(Y_{F ∪ γ}).
template <Scalar T>
T edge_event_inclusion_exclusion(const WeightedGraph<T>& g, std::span<const std::size_t> f,
                                 std::span<const std::size_t> excluded, std::size_t root = 0) {
  detail::require_distinct(f, g.edge_count());
  detail::require_distinct(excluded, g.edge_count());
  detail::require_disjoint(f, excluded);
  if (excluded.size() > 20) throw CapacityError("inclusion-exclusion supports at most 20 excluded edges");
  std::vector<std::size_t> all(f.begin(), f.end());
  all.insert(all.end(), excluded.begin(), excluded.end());
  const TransferImpedance<T> ti = transfer_impedance(g, root, std::span<const std::size_t>(all));
  T sum(0);
  for (std::uint32_t gamma = 0; gamma < (1u << excluded.size()); ++gamma) {
    std::vector<std::size_t> idx(f.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t k = 0; k < excluded.size(); ++k)
      if (gamma & (1u << k)) idx.push_back(f.size() + k);
    const T d = determinant(ti.weighted.select(idx, idx));
    sum += (std::popcount(gamma) % 2) ? T(-d) : d;
  }
  return sum;
}

}  // namespace berezin
