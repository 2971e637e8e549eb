#include <gtest/gtest.h>

#include <random>
#include <set>

#include "berezin/cumulants.hpp"
#include "random_fixtures.hpp"

namespace berezin {
namespace {

using M = Matrix<Rational>;
using Idx = std::vector<std::size_t>;
using Oracle = SubsetOracle<Rational>;

std::size_t bell(std::size_t n) {
  std::size_t count = 0;
  for_each_partition(n, [&](const SetPartitions&) { ++count; });
  return count;
}

TEST(Partitions, BellNumbersAndDistinctness) {
  const std::size_t expected[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(bell(n), expected[n]);
  std::set<std::vector<std::size_t>> seen;
  for_each_partition(5, [&](const SetPartitions& p) { EXPECT_TRUE(seen.insert(p.labels()).second); });
}

TEST(JointCumulant, Examples) {
  // Moments of independent-ish variables given by a table on subsets.
  const std::vector<Rational> mean{Rational(2), Rational(-1, 3)};
  Oracle moment = [&](const Idx& s) {
    if (s.size() == 1) return mean[s[0]];
    return Rational(5);  // E[X_0 X_1]
  };
  EXPECT_EQ(joint_cumulant(moment, {0}), Rational(2));
  EXPECT_EQ(joint_cumulant(moment, {0, 1}), Rational(5) - mean[0] * mean[1]);
  Oracle any = [](const Idx&) { return Rational(1); };
  EXPECT_THROW(joint_cumulant(any, Idx(9, 0)), CapacityError);
}

TEST(CumulantsToMoments, FourthMomentOfGaussian) {
  const Rational s2(3, 2);
  Oracle cumulant = [&](const Idx& s) { return s.size() == 2 ? s2 : Rational(0); };
  EXPECT_EQ(cumulants_to_moments(cumulant, {0, 0, 0, 0}), 3 * s2 * s2);
  Oracle first = [](const Idx& s) { return s.size() == 1 ? Rational(7) : Rational(0); };
  EXPECT_EQ(cumulants_to_moments(first, {0}), Rational(7));
}

TEST(CumulantsToMoments, RoundTripOnRandomOracles) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 5;
    std::map<Idx, Rational> table;
    Oracle moment = [&](const Idx& s) {
      auto it = table.find(s);
      if (it == table.end()) it = table.emplace(s, testing_support::random_rational(rng)).first;
      return it->second;
    };
    Idx a(n);
    std::iota(a.begin(), a.end(), 0);
    Oracle kappa = [&](const Idx& s) { return joint_cumulant(moment, s); };
    EXPECT_EQ(cumulants_to_moments(kappa, a), moment(a));
  }
}

TEST(Isserlis, Examples) {
  const M c{{Rational(2), Rational(1, 2)}, {Rational(1, 2), Rational(3)}};
  EXPECT_EQ(isserlis_moment(c, {0, 0}), Rational(2));
  EXPECT_EQ(isserlis_moment(c, {0, 0, 0, 0}), Rational(12));
  EXPECT_EQ(isserlis_moment(M::identity(3), {0, 1, 2}), Rational(0));
  EXPECT_EQ(isserlis_moment(c, {0, 1, 0, 1}), c(0, 0) * c(1, 1) + 2 * c(0, 1) * c(0, 1));
  EXPECT_THROW(isserlis_moment(c, Idx(14, 0)), CapacityError);
}

TEST(Isserlis, HigherPlainCumulantsVanish) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testing_support::random_spd(rng, 4);
    Oracle moment = [&](const Idx& s) { return isserlis_moment(c, s); };
    Idx a;
    for (std::size_t k = 0; k < 3 + std::size_t(trial) % 4; ++k) a.push_back(rng() % 4);
    EXPECT_EQ(joint_cumulant(moment, a), Rational(0));
  }
}

TEST(Cyp, Examples) {
  const M c{{Rational(2), Rational(1, 2), Rational(-1)},
            {Rational(1, 2), Rational(3), Rational(1, 3)},
            {Rational(-1), Rational(1, 3), Rational(4)}};
  EXPECT_EQ(cyp(c, {1}), Rational(3));
  EXPECT_EQ(cyp(c, {0, 1}), Rational(1, 4));
  EXPECT_EQ(cyp(c, {0, 1, 2}), 2 * c(0, 1) * c(1, 2) * c(2, 0));
  EXPECT_THROW(cyp(c, {}), ArgumentError);
}

TEST(SquaredGaussian, LogMgfOracleValues) {
  // Frozen from derivatives of -½ log det(I - diag(t) C) at t = 0.
  const M c{{Rational(2), Rational(1, 2), Rational(-1)},
            {Rational(1, 2), Rational(3), Rational(1, 3)},
            {Rational(-1), Rational(1, 3), Rational(4)}};
  EXPECT_EQ(squared_gaussian_cumulant(c, {0, 1, 2}, GaussianKind::real), Rational(-1, 6));
  EXPECT_EQ(squared_gaussian_cumulant(c, {0, 2}, GaussianKind::real), Rational(1, 2));
  EXPECT_EQ(squared_gaussian_cumulant(c, {0, 1, 2}, GaussianKind::complex), Rational(-1, 3));
  EXPECT_EQ(squared_gaussian_cumulant(c, {2}, GaussianKind::complex), Rational(4));
  EXPECT_EQ(squared_gaussian_cumulant_isserlis(c, {0, 1, 2}, GaussianKind::real), Rational(-1, 6));
  EXPECT_EQ(squared_gaussian_cumulant_isserlis(c, {0, 1, 2}, GaussianKind::complex), Rational(-1, 3));
}

TEST(SquaredGaussian, CyclicFormulaMatchesIsserlisRoute) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testing_support::random_spd(rng, 4);
    Idx pts;
    for (std::size_t k = 0; k < 1 + std::size_t(trial) % 5; ++k) pts.push_back(rng() % 4);
    EXPECT_EQ(squared_gaussian_cumulant(c, pts, GaussianKind::real),
              squared_gaussian_cumulant_isserlis(c, pts, GaussianKind::real));
    if (pts.size() <= 4) {
      EXPECT_EQ(squared_gaussian_cumulant(c, pts, GaussianKind::complex),
                squared_gaussian_cumulant_isserlis(c, pts, GaussianKind::complex));
    }
  }
}

TEST(Cyp, InvariantUnderReordering) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = testing_support::random_spd(rng, 5);
    Idx pts{0, 1, 2, 3, 4};
    const Rational base = cyp(c, pts);
    std::shuffle(pts.begin(), pts.end(), rng);
    EXPECT_EQ(cyp(c, pts), base);
  }
}

GridSpec segment(std::size_t n) {
  GridSpec g{{n}, std::vector<bool>(n, false)};
  g.boundary.front() = g.boundary.back() = true;
  return g;
}

TEST(Dgff, Examples) {
  EXPECT_EQ(dgff_covariance<Rational>(segment(3)).cov, (M{{1}}));
  EXPECT_EQ(dgff_covariance<Rational>(segment(4)).cov, (M{{Rational(4, 3), Rational(2, 3)}, {Rational(2, 3), Rational(4, 3)}}));
  GridSpec all{{3}, {true, true, true}};
  EXPECT_THROW(dgff_covariance<Rational>(all), BoundaryError);
  GridSpec none{{3}, {false, false, false}};
  EXPECT_THROW(dgff_covariance<Rational>(none), BoundaryError);
}

TEST(Dgff, GridCovarianceIsSymmetricPositiveDefinite) {
  const auto g = GridSpec::all_sides({4, 4});
  const auto cov = dgff_covariance<Rational>(g);
  EXPECT_EQ(cov.interior.size(), 4u);
  EXPECT_TRUE(cov.cov.is_symmetric());
  EXPECT_TRUE(is_positive_definite(cov.cov));
  // Frozen from an independent sympy inversion.
  EXPECT_EQ(cov(g.vertex({1, 1}), g.vertex({1, 1})), Rational(7, 6));
  EXPECT_EQ(cov(g.vertex({1, 1}), g.vertex({2, 1})), Rational(1, 3));
  EXPECT_EQ(cov(g.vertex({0, 1}), g.vertex({1, 1})), Rational(0));
}

TEST(GradientSquared, TraceOracleValues) {
  // Frozen from 2^{k-1} Σ_cycles tr(∏ Q_v G) with Q_v the gradient-square form.
  const auto g = GridSpec::all_sides({4, 4});
  const auto v11 = g.vertex({1, 1}), v21 = g.vertex({2, 1}), v12 = g.vertex({1, 2}), v22 = g.vertex({2, 2});
  EXPECT_EQ(gradient_squared_cumulant<Rational>(g, {v11}), Rational(10, 3));
  EXPECT_EQ(gradient_squared_cumulant<Rational>(g, {v11, v21}), Rational(23, 9));
  EXPECT_EQ(gradient_squared_cumulant<Rational>(g, {v11, v22}), Rational(2, 9));
  EXPECT_EQ(gradient_squared_cumulant<Rational>(g, {v11, v21, v12}), Rational(-46, 27));
}

TEST(GradientSquared, FirstCumulantIsSumOfGradientVariances) {
  const auto g = GridSpec::all_sides({5, 5});
  const auto cov = dgff_covariance<Rational>(g);
  const auto v = g.vertex({2, 2});
  const auto k = gradient_covariance(g, cov, {v});
  EXPECT_EQ(gradient_squared_cumulant(g, cov, {v}), k(0, 0) + k(1, 1));
}

TEST(GradientSquared, MatchesIsserlisRoute) {
  const auto g = GridSpec::all_sides({5, 5});
  const auto cov = dgff_covariance<Rational>(g);
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 12; ++trial) {
    Idx pts;
    for (std::size_t k = 0; k < 1 + std::size_t(trial) % 4; ++k) pts.push_back(g.vertex({1 + rng() % 3, 1 + rng() % 3}));
    EXPECT_EQ(gradient_squared_cumulant(g, cov, pts), gradient_squared_cumulant_isserlis(g, cov, pts));
  }
}

TEST(GradientSquared, RangeErrors) {
  const auto g = GridSpec::all_sides({4, 4});
  EXPECT_THROW(gradient_squared_cumulant<Rational>(g, {g.vertex({0, 1})}), RangeError);
  GridSpec open{{3}, {true, false, false}};
  EXPECT_THROW(gradient_squared_cumulant<Rational>(open, {2}), RangeError);
}

TEST(GradientSquared, TableDecaysWithSeparation) {
  const auto g = GridSpec::all_sides({8, 8});
  const auto rows = gradient_cumulant_table<Rational>(g, 2, {1, 3});
  std::vector<Rational> pair;
  for (const auto& r : rows)
    if (r.k == 2) pair.push_back(abs(r.value));
  ASSERT_GE(pair.size(), 3u);
  for (std::size_t i = 1; i < pair.size(); ++i) EXPECT_LT(pair[i], pair[i - 1]);
  EXPECT_NE(to_tsv(rows).find("k\tpoints\tvalue\n1\t(1,3)\t"), std::string::npos);
}

TEST(FieldSquared, MeanAndCovarianceOfSquares) {
  const auto g = GridSpec::all_sides({4, 4});
  const auto cov = dgff_covariance<Rational>(g);
  const auto v = g.vertex({1, 1}), w = g.vertex({2, 1});
  EXPECT_EQ(field_squared_cumulant(cov, {v}), Rational(7, 6));
  EXPECT_EQ(field_squared_cumulant(cov, {v, w}), 2 * cov(v, w) * cov(v, w));
  EXPECT_THROW(field_squared_cumulant(cov, {g.vertex({0, 0})}), RangeError);
  const auto rows = cumulant_table(g, cov, TableQuantity::field_squared, 2, {1, 1});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].value, field_squared_cumulant(cov, {v, w}));
}

TEST(FormalSeries, ExpAndReciprocalDuality) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t vars = 1 + trial % 3;
    std::map<std::multiset<std::size_t>, Rational> kappa_table;
    Oracle kappa = [&](const Idx& s) {
      const std::multiset<std::size_t> key(s.begin(), s.end());
      auto it = kappa_table.find(key);
      if (it == kappa_table.end()) it = kappa_table.emplace(key, testing_support::random_rational(rng)).first;
      return it->second;
    };
    Oracle neg = [&](const Idx& s) { return Rational(-kappa(s)); };
    const auto f = exp(cumulant_series<Rational>(vars, 4, kappa));
    const auto g = exp(cumulant_series<Rational>(vars, 4, neg));
    EXPECT_EQ(f, reciprocal(g));
    EXPECT_EQ(f * g, (TruncatedSeries<Rational>::constant(vars, 4, Rational(1))));
    // Coefficient α of F times α! is the mixed moment.
    const std::vector<unsigned> alpha{2, vars > 1 ? 1u : 0u};
    Idx labels{0, 0};
    if (vars > 1) labels.push_back(1);
    EXPECT_EQ(f.coefficient(alpha) * Rational(2), cumulants_to_moments(kappa, labels));
  }
}

}  // namespace
}  // namespace berezin
