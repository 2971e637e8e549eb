#include <gtest/gtest.h>

#include <map>
#include <random>

#include "berezin/grassmann.hpp"
#include "berezin/matrix.hpp"
#include "random_fixtures.hpp"

namespace berezin {
namespace {

using E = Element<Rational>;

// Unpaired algebra with generators ξ_1..ξ_n stored at bits 0..n-1; tests use
// 1-based names through this helper.
GeneratorIndex g1(std::size_t k) { return xi(k - 1); }

TEST(Wedge, AnticommutingGenerators) {
  const auto alg = Algebra::unpaired(4);
  const E x1 = E::generator(alg, g1(1)), x2 = E::generator(alg, g1(2));
  EXPECT_EQ(x1 * x2, E::word(alg, {g1(1), g1(2)}));
  EXPECT_EQ(x2 * x1, -E::word(alg, {g1(1), g1(2)}));
  EXPECT_TRUE((x1 * x1).is_zero());
}

TEST(Wedge, SquareOfSumOfPairs) {
  const auto alg = Algebra::unpaired(4);
  const E f = E::word(alg, {g1(1), g1(2)}) + E::word(alg, {g1(3), g1(4)});
  EXPECT_EQ(f * f, E::monomial(alg, 0b1111, Rational(2)));
}

TEST(Wedge, RejectsMismatchedAlgebras) {
  const E a = E::generator(Algebra::unpaired(3), g1(1));
  const E b = E::generator(Algebra::unpaired(4), g1(1));
  EXPECT_THROW(a * b, DimensionError);
  EXPECT_THROW(a + b, DimensionError);
}

TEST(Parity, Classification) {
  const auto alg = Algebra::unpaired(3);
  EXPECT_EQ(parity(E::word(alg, {g1(1), g1(2)})), Parity::even);
  EXPECT_EQ(parity(E::generator(alg, g1(1))), Parity::odd);
  EXPECT_EQ(parity(E::generator(alg, g1(1)) + E::word(alg, {g1(1), g1(2)})), Parity::mixed);
  EXPECT_EQ(parity(E::zero(alg)), Parity::even);
}

TEST(Derivative, PositionSign) {
  const auto alg = Algebra::unpaired(3);
  const E f = E::word(alg, {g1(1), g1(2)});
  EXPECT_EQ(derivative(f, g1(2)), -E::generator(alg, g1(1)));
  EXPECT_EQ(derivative(f, g1(1)), E::generator(alg, g1(2)));
  EXPECT_TRUE(derivative(f, g1(3)).is_zero());
  EXPECT_THROW(derivative(f, g1(4)), DimensionError);
  EXPECT_THROW(derivative(f, xibar(0)), DimensionError);
}

TEST(Derivative, RightActing) {
  const auto alg = Algebra::unpaired(3);
  const E f = E::word(alg, {g1(1), g1(2)});
  EXPECT_EQ(right_derivative(f, g1(2)), E::generator(alg, g1(1)));
  EXPECT_EQ(right_derivative(f, g1(1)), -E::generator(alg, g1(2)));
}

TEST(Berezin, OrderMatters) {
  const auto alg = Algebra::unpaired(2);
  const E f = E::word(alg, {g1(2), g1(1)});
  EXPECT_EQ(berezin_integral(f, {g1(1), g1(2)}), E::one(alg));
  EXPECT_EQ(berezin_integral(f, {g1(2), g1(1)}), -E::one(alg));
  EXPECT_TRUE(berezin_integral(E::scalar(alg, Rational(7)), {g1(1)}).is_zero());
  EXPECT_THROW(berezin_integral(f, {g1(1), g1(1)}), ArgumentError);
}

TEST(Berezin, PairIntegralSingleSite) {
  const auto alg = Algebra::paired(1);
  const E f = E::scalar(alg, Rational(1)) + E::generator(alg, xi(0), Rational(2)) +
              E::generator(alg, xibar(0), Rational(3)) + E::word(alg, {xibar(0), xi(0)}, Rational(4));
  EXPECT_EQ(berezin_pair_integral(f), Rational(4));
  EXPECT_EQ(berezin_pair_integral(E::word(alg, {xi(0), xibar(0)})), Rational(-1));
}

TEST(Berezin, PairIntegralTwoSites) {
  const auto alg = Algebra::paired(2);
  EXPECT_EQ(berezin_pair_integral(E::word(alg, {xibar(1), xi(1), xibar(0), xi(0)})), Rational(1));
  // Agrees with the generic ordered integral over ξ_0 ξ̄_0 ξ_1 ξ̄_1.
  const E f = E::word(alg, {xi(1), xibar(0), xi(0), xibar(1)}, Rational(5));
  EXPECT_EQ(E::scalar(alg, berezin_pair_integral(f)),
            berezin_integral(f, {xi(0), xibar(0), xi(1), xibar(1)}));
}

TEST(Substitute, OddTranslationOfGenerator) {
  const auto alg = Algebra::unpaired(4);
  const E f = E::generator(alg, g1(1));
  const E image = E::generator(alg, g1(1)) + E::word(alg, {g1(2), g1(3), g1(4)});
  EXPECT_EQ(substitute(f, std::map<std::size_t, E>{{0, image}}), image);
}

TEST(Substitute, IdentityAndSwap) {
  const auto alg = Algebra::unpaired(2);
  const E f = E::word(alg, {g1(1), g1(2)});
  EXPECT_EQ(substitute(f, std::map<std::size_t, E>{}), f);
  const std::map<std::size_t, E> swap{{0, E::generator(alg, g1(2))}, {1, E::generator(alg, g1(1))}};
  EXPECT_EQ(substitute(f, swap), -f);
}

TEST(Substitute, RejectsNonOddImages) {
  const auto alg = Algebra::unpaired(3);
  const E f = E::generator(alg, g1(1));
  EXPECT_THROW(substitute(f, std::map<std::size_t, E>{{0, E::word(alg, {g1(2), g1(3)})}}), ParityError);
  EXPECT_THROW(substitute(f, std::map<std::size_t, E>{{0, E::generator(alg, g1(2)) + E::one(alg)}}),
               ParityError);
}

TEST(Series, ExponentialExamples) {
  const auto alg = Algebra::unpaired(2);
  const E x1 = E::generator(alg, g1(1)), x2 = E::generator(alg, g1(2));
  EXPECT_EQ(exp(x1), E::one(alg) + x1);
  EXPECT_EQ(exp(x1 + x2), E::one(alg) + x1 + x2);
  // Odd inputs break multiplicativity.
  EXPECT_EQ(exp(x1) * exp(x2), E::one(alg) + x1 + x2 + x1 * x2);

  const auto pal = Algebra::paired(1);
  const E q = E::word(pal, {xibar(0), xi(0)}, Rational(3));
  EXPECT_EQ(exp(q), E::one(pal) + q);
}

TEST(Series, GeneralFunctionWithBody) {
  const auto alg = Algebra::unpaired(2);
  const E x = E::word(alg, {g1(1), g1(2)});
  // f(t) = 1/(1-t) at body 1/2: f = 2, f' = 4.
  SeriesEvaluator<Rational> inv = [](const Rational& b, std::size_t j) {
    Rational r = 1, fact = 1;
    for (std::size_t k = 1; k <= j; ++k) fact *= Rational(static_cast<long long>(k));
    Rational base = Rational(1) / (Rational(1) - b);
    for (std::size_t k = 0; k <= j; ++k) r *= base;
    return fact * r;
  };
  EXPECT_EQ(apply_series(inv, E::scalar(alg, Rational(1, 2)) + x), E::scalar(alg, Rational(2)) + Rational(4) * x);
  SeriesEvaluator<Rational> failing = [](const Rational&, std::size_t) -> Rational {
    throw std::domain_error("pole");
  };
  EXPECT_THROW(apply_series(failing, x), EvaluationError);
  EXPECT_THROW(exp(E::one(alg)), EvaluationError);
}

TEST(Series, FloatModeExponentialWithBody) {
  using F = Element<double>;
  const auto alg = Algebra::unpaired(2);
  const F a = F::scalar(alg, 1.0) + F::word(alg, {g1(1), g1(2)});
  EXPECT_EQ(exp(a), F::scalar(alg, std::exp(1.0)) + F::word(alg, {g1(1), g1(2)}, std::exp(1.0)));
}

TEST(Render, SortedByMask) {
  const auto alg = Algebra::paired(2);
  const E f = E::word(alg, {xibar(0), xi(1)}, Rational(-2)) + E::one(alg);
  EXPECT_EQ(to_string(f), "1 + 2·ξ_1·ξ̄_0");
  EXPECT_EQ(to_string(E::zero(alg)), "0");
}

// ---- properties on random elements ----

class GrassmannProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{20241016};
};

TEST_F(GrassmannProperties, AnticommutationAndNilpotency) {
  const auto alg = Algebra::unpaired(8);
  for (std::size_t g = 0; g < 8; ++g)
    for (std::size_t h = 0; h < 8; ++h) {
      const E a = E::generator(alg, xi(g)), b = E::generator(alg, xi(h));
      if (g == h) {
        EXPECT_TRUE((a * b).is_zero());
      } else {
        EXPECT_EQ(a * b, -(b * a));
      }
    }
}

TEST_F(GrassmannProperties, GradedCommutation) {
  const auto alg = Algebra::unpaired(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int pf = trial % 2, pg = (trial / 2) % 2;
    const E f = testing_support::random_homogeneous(rng, alg, pf);
    const E g = testing_support::random_homogeneous(rng, alg, pg);
    const E lhs = f * g;
    const E rhs = (pf && pg) ? E(-(g * f)) : E(g * f);
    EXPECT_EQ(lhs, rhs);
  }
}

TEST_F(GrassmannProperties, PauliForOddElements) {
  const auto alg = Algebra::unpaired(8);
  for (int trial = 0; trial < 100; ++trial) {
    const E f = testing_support::random_homogeneous(rng, alg, 1);
    EXPECT_TRUE((f * f).is_zero());
  }
}

TEST_F(GrassmannProperties, LeibnizRuleWithParityOperator) {
  const auto alg = Algebra::unpaired(7);
  for (int trial = 0; trial < 100; ++trial) {
    const E f = testing_support::random_element(rng, alg);
    const E h = testing_support::random_element(rng, alg);
    const auto g = xi(trial % 7);
    EXPECT_EQ(derivative(f * h, g), derivative(f, g) * h + parity_operator(f) * derivative(h, g));
  }
}

TEST_F(GrassmannProperties, DerivativeIsNilpotent) {
  const auto alg = Algebra::unpaired(8);
  for (int trial = 0; trial < 50; ++trial) {
    const E f = testing_support::random_element(rng, alg);
    for (std::size_t g = 0; g < 8; ++g) EXPECT_TRUE(derivative(derivative(f, xi(g)), xi(g)).is_zero());
  }
}

TEST_F(GrassmannProperties, ExponentialOfEvenSumsIsMultiplicative) {
  const auto alg = Algebra::unpaired(8);
  for (int trial = 0; trial < 50; ++trial) {
    E f = testing_support::random_homogeneous(rng, alg, 0);
    E g = testing_support::random_homogeneous(rng, alg, 0);
    f = f - E::scalar(alg, f.body());
    g = g - E::scalar(alg, g.body());
    EXPECT_EQ(exp(f + g), exp(f) * exp(g));
  }
}

TEST_F(GrassmannProperties, TranslationInvariance) {
  const std::size_t n = 8;
  const auto alg = Algebra::unpaired(n);
  for (int trial = 0; trial < 100; ++trial) {
    const E f = testing_support::random_element(rng, alg);
    // Integrate over a random subset I; shift only generators in I.
    // The shifts must not involve the integrated generators themselves.
    std::vector<GeneratorIndex> order;
    std::vector<std::size_t> outside;
    for (std::size_t b = 0; b < n; ++b) {
      if (rng() % 4 == 0) {
        outside.push_back(b);
      } else {
        order.push_back(xi(b));
      }
    }
    std::map<std::size_t, E> shift;
    for (const auto& g : order) {
      E chi = E::zero(alg);
      const E raw = testing_support::random_element_on(rng, alg, outside);
      for (const auto& t : raw.terms())
        if (std::popcount(t.first) % 2) chi += E::monomial(alg, t.first, t.second);
      shift.emplace(g.site, E::generator(alg, g) + chi);
    }
    std::shuffle(order.begin(), order.end(), rng);
    EXPECT_EQ(berezin_integral(substitute(f, shift), order), berezin_integral(f, order));
  }
}

TEST_F(GrassmannProperties, LinearChangeOfVariables) {
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto alg = Algebra::unpaired(n);
    const Matrix<Rational> a = testing_support::random_invertible(rng, n);
    const E f = testing_support::random_element(rng, alg);
    std::map<std::size_t, E> change;
    for (std::size_t i = 0; i < n; ++i) {
      E img = E::zero(alg);
      for (std::size_t j = 0; j < n; ++j) img += E::generator(alg, xi(j), a(i, j));
      change.emplace(i, img);
    }
    std::vector<GeneratorIndex> order;
    for (std::size_t k = n; k-- > 0;) order.push_back(xi(k));
    EXPECT_EQ(berezin_integral(substitute(f, change), order),
              determinant(a) * berezin_integral(f, order));
  }
}

TEST_F(GrassmannProperties, FubiniSign) {
  const std::size_t n = 8;
  const auto alg = Algebra::unpaired(n);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t p = rng() % (n + 1);
    std::vector<std::size_t> in(idx.begin(), idx.begin() + p), out(idx.begin() + p, idx.end());
    const E f = testing_support::random_element_on(rng, alg, in);
    const E g = testing_support::random_element_on(rng, alg, out);
    std::vector<GeneratorIndex> order_f, order_g, order_all;
    for (auto it = in.rbegin(); it != in.rend(); ++it) order_f.push_back(xi(*it));
    for (auto it = out.rbegin(); it != out.rend(); ++it) order_g.push_back(xi(*it));
    order_all = order_f;
    order_all.insert(order_all.end(), order_g.begin(), order_g.end());
    const Rational sign = (p * (n - p)) % 2 ? -1 : 1;
    EXPECT_EQ(berezin_integral(f * g, order_all),
              sign * (berezin_integral(f, order_f) * berezin_integral(g, order_g)));
  }
}

TEST_F(GrassmannProperties, SaturatingProductMatchesFullProduct) {
  const auto alg = Algebra::paired(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<E> factors;
    for (int k = 0; k < 4; ++k) factors.push_back(testing_support::random_element(rng, alg));
    E full = E::one(alg);
    for (const auto& f : factors) full = full * f;
    const E pruned = product_covering<Rational>(factors, alg.full_mask(), alg);
    EXPECT_EQ(berezin_pair_integral(pruned), berezin_pair_integral(full));
  }
}

}  // namespace
}  // namespace berezin
