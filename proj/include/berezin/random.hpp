#pragma once

// Seeded random instances: rationals, Grassmann elements, matrices, graphs.

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <vector>

#include "berezin/graph.hpp"
#include "berezin/grassmann.hpp"
#include "berezin/matrix.hpp"

namespace berezin::randomized {

inline Rational random_rational(std::mt19937_64& rng, int span = 5, int max_den = 4) {
  std::uniform_int_distribution<int> num(-span, span), den(1, max_den);
  return Rational(num(rng), den(rng));
}

inline Rational random_nonzero_rational(std::mt19937_64& rng, int span = 5, int max_den = 4) {
  Rational r;
  do r = random_rational(rng, span, max_den);
  while (r == 0);
  return r;
}

/// Sparse random element whose monomials only use generators in `allowed`.
inline Element<Rational> random_element_on(std::mt19937_64& rng, const Algebra& alg,
                                           const std::vector<std::size_t>& allowed, int terms = 6) {
  std::vector<Element<Rational>::Term> raw;
  for (int k = 0; k < terms; ++k) {
    Mask m = 0;
    for (auto b : allowed)
      if (rng() % 2) m |= Mask{1} << b;
    raw.emplace_back(m, random_rational(rng));
  }
  return Element<Rational>::from_terms(alg, std::move(raw));
}

inline Element<Rational> random_element(std::mt19937_64& rng, const Algebra& alg, int terms = 6) {
  std::vector<std::size_t> all(alg.generators());
  std::iota(all.begin(), all.end(), 0);
  return random_element_on(rng, alg, all, terms);
}

/// Random element whose monomials all have degree parity `par` (0 even, 1 odd).
inline Element<Rational> random_homogeneous(std::mt19937_64& rng, const Algebra& alg, int par, int terms = 6) {
  std::vector<Element<Rational>::Term> raw;
  const Mask full = alg.full_mask();
  while (static_cast<int>(raw.size()) < terms) {
    const Mask m = rng() & full;
    if (std::popcount(m) % 2 == par) raw.emplace_back(m, random_rational(rng));
  }
  return Element<Rational>::from_terms(alg, std::move(raw));
}

inline Matrix<Rational> random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int span = 4) {
  Matrix<Rational> a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = random_rational(rng, span, 3);
  return a;
}

inline Matrix<Rational> random_invertible(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    auto a = random_matrix(rng, n, n);
    if (determinant(a) != 0) return a;
  }
}

/// Symmetric positive-definite: BᵀB + diag(1..).
inline Matrix<Rational> random_spd(std::mt19937_64& rng, std::size_t n) {
  const auto b = random_matrix(rng, n, n, 2);
  auto a = b.transpose() * b;
  for (std::size_t i = 0; i < n; ++i) {
      const Rational r = random_nonzero_rational(rng, 2, 2);
      a(i, i) += r * r + Rational(1, 2);
    }
  return a;
}

/// Connected graph: a random spanning path-tree plus each other pair with
/// probability `density`. Weights are 1 unless `weighted`.
inline WeightedGraph<Rational> random_connected_graph(std::mt19937_64& rng, std::size_t n, double density = 0.4,
                                                      bool weighted = false) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> num(1, 4), den(1, 3);
  auto weight = [&] { return weighted ? Rational(num(rng), den(rng)) : Rational(1); };
  std::vector<Edge<Rational>> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t u = order[k], v = order[rng() % k];
    edges.push_back({u, v, weight()});
    used[u][v] = used[v][u] = true;
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (!used[u][v] && coin(rng) < density) edges.push_back({u, v, weight()});
  return WeightedGraph<Rational>(n, std::move(edges));
}

}  // namespace berezin::randomized
