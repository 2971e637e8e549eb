#include <gtest/gtest.h>

#include <map>
#include <random>

#include "berezin/graph.hpp"
#include "berezin/graph_io.hpp"
#include "berezin/wilson.hpp"
#include "random_fixtures.hpp"

namespace berezin {
namespace {

using G = WeightedGraph<Rational>;
using M = Matrix<Rational>;
using E = Element<Rational>;
using Idx = std::vector<std::size_t>;

TEST(Laplacian, Examples) {
  const auto k3 = complete_graph<Rational>(3);
  EXPECT_EQ(laplacian(k3), (M{{-2, 1, 1}, {1, -2, 1}, {1, 1, -2}}));
  EXPECT_EQ(reduced_laplacian(k3, 2), (M{{2, -1}, {-1, 2}}));
  EXPECT_EQ(reduced_laplacian(path_graph<Rational>(3), 2), (M{{1, -1}, {-1, 2}}));
  const G split(4, {{0, 1, 1}, {2, 3, 1}});
  EXPECT_THROW(laplacian(split), ConnectivityError);
}

TEST(Laplacian, RowSumsZeroAndSymmetric) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testing_support::random_connected_graph(rng, 2 + trial % 6, 0.5, true);
    const auto d = laplacian(g);
    EXPECT_TRUE(d.is_symmetric());
    for (std::size_t i = 0; i < d.rows(); ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < d.cols(); ++j) s += d(i, j);
      EXPECT_EQ(s, Rational(0));
    }
  }
}

TEST(Graph, RejectsInvalidInput) {
  EXPECT_THROW(G(2, {{0, 0, 1}}), ArgumentError);
  EXPECT_THROW(G(2, {{0, 1, 0}}), ArgumentError);
  EXPECT_THROW(G(2, {{0, 1, 1}, {1, 0, 2}}), ArgumentError);
  EXPECT_THROW(G(2, {{0, 2, 1}}), ArgumentError);
}

TEST(TreeCount, Examples) {
  EXPECT_EQ(tree_count(complete_graph<Rational>(3), 0).value, Rational(3));
  EXPECT_EQ(tree_count(complete_graph<Rational>(4), 0).value, Rational(16));
  EXPECT_EQ(tree_count(grid_graph<Rational>(3, 3), 4).value, Rational(192));
  const auto split = tree_count(G(4, {{0, 1, 1}, {2, 3, 1}}), 0);
  EXPECT_EQ(split.value, Rational(0));
  EXPECT_FALSE(split.connected);
}

TEST(TreeCount, BerezinRouteMatchesDeterminant) {
  EXPECT_EQ(tree_count_berezin(complete_graph<Rational>(4), 1), Rational(16));
  EXPECT_EQ(tree_count_berezin(grid_graph<Rational>(3, 3), 0), Rational(192));
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto g = testing_support::random_connected_graph(rng, n, 0.4, true);
    const std::size_t o = rng() % n;
    EXPECT_EQ(tree_count_berezin(g, o), tree_count(g, o).value);
  }
}

TEST(TreeCount, RootInvariance) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + trial % 8;
    const auto g = testing_support::random_connected_graph(rng, n, 0.4, true);
    const Rational first = tree_count(g, 0).value;
    for (std::size_t o = 1; o < n; ++o) EXPECT_EQ(tree_count(g, o).value, first);
  }
}

TEST(TreeCount, EnumerationAndContractionDeletionAgree) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testing_support::random_connected_graph(rng, 2 + trial % 6, 0.5, trial % 2 == 1);
    const Rational det = tree_count(g, 0).value;
    EXPECT_EQ(enumerate_trees(g).total, det);
    EXPECT_EQ(tree_count_contraction(g), det);
  }
}

TEST(EnumerateTrees, Examples) {
  EXPECT_EQ(enumerate_trees(path_graph<Rational>(3)).trees.size(), 1u);
  EXPECT_EQ(enumerate_trees(complete_graph<Rational>(3)).trees.size(), 3u);
  EXPECT_EQ(enumerate_trees(complete_graph<Rational>(4)).trees.size(), 16u);
  EXPECT_EQ(enumerate_trees(grid_graph<Rational>(3, 3)).trees.size(), 192u);
  EXPECT_THROW(enumerate_trees(grid_graph<Rational>(4, 5)), CapacityError);
}

TEST(EnumerateTrees, EveryTreeIsSpanningAndDistinct) {
  const auto g = complete_graph<Rational>(5);
  const auto en = enumerate_trees(g);
  EXPECT_EQ(en.trees.size(), 125u);
  std::set<SpanningTree> seen(en.trees.begin(), en.trees.end());
  EXPECT_EQ(seen.size(), en.trees.size());
  for (const auto& t : en.trees) {
    ASSERT_EQ(t.edges.size(), 4u);
    detail::UnionFind uf(5);
    for (auto e : t.edges) EXPECT_TRUE(uf.unite(g.edge(e).u, g.edge(e).v));
  }
}

TEST(Zeta, Examples) {
  const auto g = path_graph<Rational>(2);
  const auto alg = Algebra::paired(2);
  const E expected = E::word(alg, {xibar(0), xi(0)}) - E::word(alg, {xibar(0), xi(1)}) -
                     E::word(alg, {xibar(1), xi(0)}) + E::word(alg, {xibar(1), xi(1)});
  EXPECT_EQ(zeta(g, 0), expected);
  EXPECT_EQ(zeta(g, 0), zeta(G(2, {{1, 0, 1}}), 0));
  EXPECT_TRUE((zeta(g, 0) * zeta(g, 0)).is_zero());
  EXPECT_THROW(zeta(g, 5), ArgumentError);
}

TEST(TransferImpedance, Examples) {
  const auto k3 = complete_graph<Rational>(3);
  const Idx e01{k3.edge_index(0, 1)};
  EXPECT_EQ(transfer_impedance(k3, 2, std::span<const std::size_t>(e01)).bare(0, 0), Rational(2, 3));

  const auto p3 = path_graph<Rational>(3);
  const Idx both{0, 1};
  for (std::size_t o = 0; o < 3; ++o) {
    const auto ti = transfer_impedance(p3, o, std::span<const std::size_t>(both));
    EXPECT_EQ(ti.bare(0, 0), Rational(1));
    EXPECT_EQ(ti.bare(1, 1), Rational(1));
  }
}

TEST(TransferImpedance, PrincipalMinorsAreOrientationInvariant) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = testing_support::random_connected_graph(rng, 3 + trial % 4, 0.5, true);
    std::vector<DirectedEdge> fwd, flipped;
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
      fwd.push_back(g.oriented(k));
      const auto d = g.oriented(k);
      flipped.push_back(rng() % 2 ? DirectedEdge{d.to, d.from} : d);
    }
    const auto a = transfer_impedance(g, 0, fwd).weighted, b = transfer_impedance(g, 0, flipped).weighted;
    for (std::uint32_t s = 1; s < (1u << std::min<std::size_t>(g.edge_count(), 8)); ++s) {
      Idx idx;
      for (std::size_t k = 0; k < 8; ++k)
        if (s & (1u << k)) idx.push_back(k);
      EXPECT_EQ(determinant(a.select(idx, idx)), determinant(b.select(idx, idx)));
    }
  }
}

TEST(EdgeProbability, Examples) {
  const auto k3 = complete_graph<Rational>(3);
  const Idx one{0}, two{0, 1}, none{};
  EXPECT_EQ(edge_inclusion_probability(k3, one), Rational(2, 3));
  EXPECT_EQ(edge_inclusion_probability(k3, two), Rational(1, 3));
  EXPECT_EQ(edge_inclusion_fermionic(k3, two), Rational(1, 3));

  // Bridge: edge 0-3 hangs off a triangle.
  const G lolly(4, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {0, 3, 1}});
  const Idx bridge{3};
  EXPECT_EQ(edge_inclusion_probability(lolly, bridge), Rational(1));

  const Idx e{0}, f{1};
  EXPECT_EQ(edge_event_probability(k3, none, e), Rational(1, 3));
  EXPECT_EQ(edge_event_probability(k3, e, f), Rational(1, 3));
  EXPECT_EQ(edge_event_probability(k3, e, none), Rational(2, 3));
  EXPECT_THROW(edge_event_probability(k3, e, e), ArgumentError);
  const Idx dup{0, 0};
  EXPECT_THROW(edge_inclusion_probability(k3, dup), ArgumentError);
}

TEST(EdgeProbability, DegreeIdentity) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = testing_support::random_connected_graph(rng, 2 + trial % 7, 0.5, true);
    Rational sum = 0;
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
      const Idx f{k};
      sum += edge_inclusion_probability(g, f, rng() % g.vertex_count());
    }
    EXPECT_EQ(sum, Rational(g.vertex_count() - 1));
  }
}

TEST(EdgeProbability, DeterminantalFermionicAndEnumerationAgree) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 3 + trial % 5;
    const auto g = testing_support::random_connected_graph(rng, n, 0.5, true);
    const auto en = enumerate_trees(g);
    Idx f;
    for (std::size_t k = 0; k < g.edge_count(); ++k)
      if (rng() % 3 == 0) f.push_back(k);
    const std::size_t o = rng() % n;
    const Rational det = edge_inclusion_probability(g, f, o);
    EXPECT_EQ(det, en.probability(f));
    EXPECT_EQ(edge_inclusion_fermionic(g, f, o), det);
  }
}

TEST(EdgeProbability, EventRoutesAgree) {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 3 + trial % 4;
    const auto g = testing_support::random_connected_graph(rng, n, 0.5, true);
    const auto en = enumerate_trees(g);
    Idx f, fx;
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
      const auto r = rng() % 4;
      if (r == 0) f.push_back(k);
      if (r == 1) fx.push_back(k);
    }
    const Rational ferm = edge_event_probability(g, f, fx);
    EXPECT_EQ(ferm, edge_event_inclusion_exclusion(g, f, fx));
    EXPECT_EQ(ferm, en.probability(f, fx));
  }
}

TEST(EdgeProbability, FloatMode) {
  const auto k4 = complete_graph<double>(4);
  const Idx f{0, 5};
  EXPECT_NEAR(edge_inclusion_probability(k4, f), edge_inclusion_fermionic(k4, f), 1e-12);
}

TEST(Wilson, TreeGraphAndDeterminism) {
  const auto p = path_graph<Rational>(5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) EXPECT_EQ(sample_ust(p, seed).edges, (Idx{0, 1, 2, 3}));
  const auto g = grid_graph<Rational>(4, 4);
  EXPECT_EQ(sample_ust(g, 99), sample_ust(g, 99));
  const auto t = sample_ust(g, 7);
  ASSERT_EQ(t.edges.size(), 15u);
  detail::UnionFind uf(16);
  for (auto e : t.edges) EXPECT_TRUE(uf.unite(g.edge(e).u, g.edge(e).v));
}

TEST(Wilson, UniformOnK3) {
  const auto k3 = complete_graph<Rational>(3);
  std::map<SpanningTree, int> freq;
  const int samples = 30000;
  for (int s = 0; s < samples; ++s) ++freq[sample_ust(k3, s)];
  ASSERT_EQ(freq.size(), 3u);
  const double p = 1.0 / 3, sd = std::sqrt(samples * p * (1 - p));
  for (const auto& [t, c] : freq) EXPECT_LT(std::abs(c - samples * p), 3 * sd);
}

TEST(GraphIo, ParsesFormat) {
  const auto g = parse_graph_string<Rational>("# triangle\n0 1 1\n\n1 2 1/2  # half\n2 0 0.25\n");
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge(1).w, Rational(1, 2));
  EXPECT_EQ(g.edge(2).w, Rational(1, 4));
}

TEST(GraphIo, ReportsLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_graph_string<Rational>(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("0 1 1\n1 2\n"), 2);
  EXPECT_EQ(line_of("0 1 1\n\n1 1 1\n"), 3);
  EXPECT_EQ(line_of("0 1 -1\n"), 1);
  EXPECT_EQ(line_of("0 1 x\n"), 1);
  EXPECT_EQ(line_of("0 1 1\n1 0 2\n"), 2);
  EXPECT_EQ(line_of("a 1 1\n"), 1);
  EXPECT_THROW(parse_graph_string<Rational>("0 1 1\n2 3 1\n"), ConnectivityError);
}

}  // namespace
}  // namespace berezin
