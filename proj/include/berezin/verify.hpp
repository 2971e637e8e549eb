#pragma once

// Seeded invariant battery. Each property draws its own generator from the
// master seed and its position, so the transcript does not depend on which
// properties run before it.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "berezin/cumulants.hpp"
#include "berezin/gaussian.hpp"
#include "berezin/graph.hpp"
#include "berezin/grassmann.hpp"
#include "berezin/random.hpp"
#include "berezin/superspace.hpp"

namespace berezin {

struct PropertyResult {
  std::string module;
  std::string name;
  std::size_t instances = 0;
  bool passed = true;
  std::string counterexample;  // first failing instance
  double seconds = 0;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t instances = 100;  // per calculus property; heavier ones scale down
};

/// One random instance; returns a description when it fails.
using InstanceCheck = std::function<std::optional<std::string>(std::mt19937_64&, std::size_t)>;

struct Property {
  std::string module;
  std::string name;
  std::size_t instances;
  InstanceCheck check;
};

namespace detail::verify {

using E = Element<Rational>;
using M = Matrix<Rational>;
using Idx = std::vector<std::size_t>;
namespace rnd = randomized;

inline std::string show(const E& e) { return to_string(e); }
inline std::string show(const Rational& r) { return r.str(); }
inline std::string show(const M& m) { return to_string(m); }

inline std::string show(const Idx& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

inline std::string show(const WeightedGraph<Rational>& g) {
  std::string s = "n=" + std::to_string(g.vertex_count()) + " edges=[";
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edge(k);
    s += (k ? " " : "") + std::to_string(e.u) + "-" + std::to_string(e.v) + ":" + e.w.str();
  }
  return s + "]";
}

template <typename A, typename B>
std::optional<std::string> expect_equal(const A& lhs, const B& rhs, const std::string& context) {
  if (lhs == rhs) return std::nullopt;
  return context + ": " + show(lhs) + " != " + show(rhs);
}

inline std::vector<Property> grassmann_properties(std::size_t n) {
  std::vector<Property> p;
  p.push_back({"grassmann_core", "anticommutation", n, [](std::mt19937_64& rng, std::size_t) {
                 const auto alg = Algebra::unpaired(8);
                 const E f = rnd::random_homogeneous(rng, alg, 1), g = rnd::random_homogeneous(rng, alg, 1);
                 return expect_equal(f * g, E(-(g * f)), "f=" + show(f) + " g=" + show(g));
               }});
  p.push_back({"grassmann_core", "graded_commutation", n, [](std::mt19937_64& rng, std::size_t i) {
                 const auto alg = Algebra::unpaired(8);
                 const int pf = i % 2, pg = (i / 2) % 2;
                 const E f = rnd::random_homogeneous(rng, alg, pf), g = rnd::random_homogeneous(rng, alg, pg);
                 return expect_equal(f * g, (pf && pg) ? E(-(g * f)) : E(g * f), "f=" + show(f) + " g=" + show(g));
               }});
  p.push_back({"grassmann_core", "pauli", n, [](std::mt19937_64& rng, std::size_t) {
                 const E f = rnd::random_homogeneous(rng, Algebra::unpaired(8), 1);
                 return expect_equal(f * f, E::zero(f.algebra()), "f=" + show(f));
               }});
  p.push_back({"grassmann_core", "leibniz", n, [](std::mt19937_64& rng, std::size_t i) {
                 const auto alg = Algebra::unpaired(8);
                 const E f = rnd::random_element(rng, alg), h = rnd::random_element(rng, alg);
                 const auto g = xi(i % 8);
                 return expect_equal(derivative(f * h, g), derivative(f, g) * h + parity_operator(f) * derivative(h, g),
                                     "f=" + show(f) + " h=" + show(h));
               }});
  p.push_back({"grassmann_core", "translation_invariance", n, [](std::mt19937_64& rng, std::size_t) {
                 const std::size_t gens = 8;
                 const auto alg = Algebra::unpaired(gens);
                 const E f = rnd::random_element(rng, alg);
                 std::vector<GeneratorIndex> order;
                 Idx outside;
                 for (std::size_t b = 0; b < gens; ++b) {
                   if (rng() % 4 == 0)
                     outside.push_back(b);
                   else
                     order.push_back(xi(b));
                 }
                 std::map<std::size_t, E> shift;
                 for (const auto& g : order) {
                   E chi = E::zero(alg);
                   const E raw = rnd::random_element_on(rng, alg, outside);
                   for (const auto& t : raw.terms())
                     if (std::popcount(t.first) % 2) chi += E::monomial(alg, t.first, t.second);
                   shift.emplace(g.site, E::generator(alg, g) + chi);
                 }
                 std::shuffle(order.begin(), order.end(), rng);
                 return expect_equal(berezin_integral(substitute(f, shift), order), berezin_integral(f, order),
                                     "f=" + show(f));
               }});
  p.push_back({"grassmann_core", "change_of_variables", n, [](std::mt19937_64& rng, std::size_t i) {
                 const std::size_t gens = 1 + i % 8;
                 const auto alg = Algebra::unpaired(gens);
                 const M a = rnd::random_invertible(rng, gens);
                 const E f = rnd::random_element(rng, alg);
                 std::map<std::size_t, E> change;
                 for (std::size_t r = 0; r < gens; ++r) {
                   E img = E::zero(alg);
                   for (std::size_t c = 0; c < gens; ++c) img += E::generator(alg, xi(c), a(r, c));
                   change.emplace(r, img);
                 }
                 std::vector<GeneratorIndex> order;
                 for (std::size_t k = gens; k-- > 0;) order.push_back(xi(k));
                 return expect_equal(berezin_integral(substitute(f, change), order),
                                     determinant(a) * berezin_integral(f, order), "A=" + show(a) + " f=" + show(f));
               }});
  p.push_back({"grassmann_core", "fubini_sign", n, [](std::mt19937_64& rng, std::size_t) {
                 const std::size_t gens = 8;
                 const auto alg = Algebra::unpaired(gens);
                 Idx idx(gens);
                 std::iota(idx.begin(), idx.end(), 0);
                 std::shuffle(idx.begin(), idx.end(), rng);
                 const std::size_t k = rng() % (gens + 1);
                 const Idx in(idx.begin(), idx.begin() + k), out(idx.begin() + k, idx.end());
                 const E f = rnd::random_element_on(rng, alg, in), g = rnd::random_element_on(rng, alg, out);
                 std::vector<GeneratorIndex> of, og;
                 for (auto it = in.rbegin(); it != in.rend(); ++it) of.push_back(xi(*it));
                 for (auto it = out.rbegin(); it != out.rend(); ++it) og.push_back(xi(*it));
                 std::vector<GeneratorIndex> all = of;
                 all.insert(all.end(), og.begin(), og.end());
                 const Rational sign = (k * (gens - k)) % 2 ? -1 : 1;
                 return expect_equal(berezin_integral(f * g, all),
                                     sign * (berezin_integral(f, of) * berezin_integral(g, og)),
                                     "f=" + show(f) + " g=" + show(g));
               }});
  return p;
}

inline std::vector<Property> gaussian_properties(std::size_t n) {
  std::vector<Property> p;
  p.push_back({"berezin_gaussian", "integral_equals_determinant", n, [](std::mt19937_64& rng, std::size_t i) {
                 const M a = rnd::random_matrix(rng, 1 + i % 6, 1 + i % 6);
                 return expect_equal(gaussian_integral_symbolic(a), determinant(a), "A=" + show(a));
               }});
  p.push_back({"berezin_gaussian", "wick_bilinear", n, [](std::mt19937_64& rng, std::size_t i) {
                 const std::size_t m = 1 + i % 5, r = std::min<std::size_t>(m, i % 4);
                 const M a = rnd::random_invertible(rng, m), b = rnd::random_matrix(rng, r, m),
                         c = rnd::random_matrix(rng, m, r);
                 return expect_equal(wick_bilinear_symbolic(a, b, c), wick_bilinear_determinant(a, b, c),
                                     "A=" + show(a) + " B=" + show(b) + " C=" + show(c));
               }});
  p.push_back({"berezin_gaussian", "two_point_cofactor", n / 2, [](std::mt19937_64& rng, std::size_t i) {
                 const std::size_t m = 1 + i % 6;
                 const M a = rnd::random_matrix(rng, m, m);
                 const std::size_t r = rng() % m, c = rng() % m;
                 return expect_equal(two_point_symbolic(a, r, c), two_point_cofactor(a, r, c), "A=" + show(a));
               }});
  return p;
}

inline std::vector<Property> graph_properties(std::size_t n) {
  std::vector<Property> p;
  const std::size_t g = std::max<std::size_t>(n / 4, 10);
  auto graph = [](std::mt19937_64& rng, std::size_t i, std::size_t max_vertices) {
    return rnd::random_connected_graph(rng, 2 + i % (max_vertices - 1), 0.5, true);
  };
  p.push_back({"graph_ust", "root_invariance", g, [=](std::mt19937_64& rng, std::size_t i) -> std::optional<std::string> {
                 const auto gr = graph(rng, i, 7);
                 const Rational first = tree_count(gr, 0).value;
                 for (std::size_t o = 1; o < gr.vertex_count(); ++o)
                   if (auto f = expect_equal(tree_count(gr, o).value, first, show(gr) + " root " + std::to_string(o))) return f;
                 return std::nullopt;
               }});
  p.push_back({"graph_ust", "determinant_equals_berezin", g, [=](std::mt19937_64& rng, std::size_t i) {
                 const auto gr = graph(rng, i, 7);
                 const std::size_t o = rng() % gr.vertex_count();
                 return expect_equal(tree_count_berezin(gr, o), tree_count(gr, o).value, show(gr));
               }});
  p.push_back({"graph_ust", "determinant_equals_enumeration", g,
               [=](std::mt19937_64& rng, std::size_t i) -> std::optional<std::string> {
                 const auto gr = graph(rng, i, 7);
                 const Rational det = tree_count(gr, 0).value;
                 if (auto f = expect_equal(enumerate_trees(gr).total, det, show(gr))) return f;
                 return expect_equal(tree_count_contraction(gr), det, "contraction-deletion " + show(gr));
               }});
  p.push_back({"graph_ust", "orientation_invariance", g,
               [=](std::mt19937_64& rng, std::size_t i) -> std::optional<std::string> {
                 const auto gr = graph(rng, i, 7);
                 std::vector<DirectedEdge> fwd, flip;
                 for (std::size_t k = 0; k < gr.edge_count(); ++k) {
                   if (rng() % 2) continue;
                   const auto d = gr.oriented(k);
                   fwd.push_back(d);
                   flip.push_back(rng() % 2 ? DirectedEdge{d.to, d.from} : d);
                 }
                 return expect_equal(determinant(transfer_impedance(gr, 0, fwd).weighted),
                                     determinant(transfer_impedance(gr, 0, flip).weighted), show(gr));
               }});
  p.push_back({"graph_ust", "degree_identity", g, [=](std::mt19937_64& rng, std::size_t i) {
                 const auto gr = graph(rng, i, 7);
                 Rational sum = 0;
                 for (std::size_t k = 0; k < gr.edge_count(); ++k) {
                   const Idx f{k};
                   sum += edge_inclusion_probability(gr, f);
                 }
                 return expect_equal(sum, Rational(gr.vertex_count() - 1), show(gr));
               }});
  p.push_back({"graph_ust", "fermionic_equals_determinantal", g,
               [=](std::mt19937_64& rng, std::size_t i) -> std::optional<std::string> {
                 const auto gr = graph(rng, i, 7);
                 Idx f;
                 for (std::size_t k = 0; k < gr.edge_count(); ++k)
                   if (rng() % 3 == 0) f.push_back(k);
                 const Rational det = edge_inclusion_probability(gr, f);
                 if (auto e = expect_equal(edge_inclusion_fermionic(gr, f), det, show(gr) + " F=" + show(f))) return e;
                 return expect_equal(enumerate_trees(gr).probability(f), det, "enumeration " + show(gr) + " F=" + show(f));
               }});
  p.push_back({"graph_ust", "edge_event_routes", g,
               [=](std::mt19937_64& rng, std::size_t i) -> std::optional<std::string> {
                 const auto gr = graph(rng, i, 7);
                 Idx f, fx;
                 for (std::size_t k = 0; k < gr.edge_count(); ++k) {
                   const auto r = rng() % 4;
                   if (r == 0) f.push_back(k);
                   if (r == 1) fx.push_back(k);
                 }
                 const Rational ferm = edge_event_probability(gr, f, fx);
                 const std::string ctx = show(gr) + " F=" + show(f) + " F'=" + show(fx);
                 if (auto e = expect_equal(edge_event_inclusion_exclusion(gr, f, fx), ferm, ctx)) return e;
                 return expect_equal(enumerate_trees(gr).probability(f, fx), ferm, "enumeration " + ctx);
               }});
  return p;
}

inline std::vector<Property> cumulant_properties(std::size_t n) {
  std::vector<Property> p;
  const std::size_t c = std::max<std::size_t>(n / 2, 10);
  p.push_back({"gaussian_cumulants", "moment_cumulant_round_trip", c, [](std::mt19937_64& rng, std::size_t i) {
                 const std::size_t k = 1 + i % 5;
                 std::map<Idx, Rational> table;
                 SubsetOracle<Rational> moment = [&](const Idx& s) {
                   auto it = table.find(s);
                   if (it == table.end()) it = table.emplace(s, rnd::random_rational(rng)).first;
                   return it->second;
                 };
                 SubsetOracle<Rational> kappa = [&](const Idx& s) { return joint_cumulant(moment, s); };
                 Idx a(k);
                 std::iota(a.begin(), a.end(), 0);
                 return expect_equal(cumulants_to_moments(kappa, a), moment(a), "|A|=" + std::to_string(k));
               }});
  p.push_back({"gaussian_cumulants", "gaussian_higher_cumulants_vanish", c, [](std::mt19937_64& rng, std::size_t i) {
                 const M cov = rnd::random_spd(rng, 4);
                 SubsetOracle<Rational> moment = [&](const Idx& s) { return isserlis_moment(cov, s); };
                 Idx a;
                 for (std::size_t k = 0; k < 3 + i % 4; ++k) a.push_back(rng() % 4);
                 return expect_equal(joint_cumulant(moment, a), Rational(0), "C=" + show(cov) + " A=" + show(a));
               }});
  p.push_back({"gaussian_cumulants", "squared_real_cyclic_formula", c, [](std::mt19937_64& rng, std::size_t i) {
                 const M cov = rnd::random_spd(rng, 5);
                 Idx pts;
                 for (std::size_t k = 0; k < 1 + i % 5; ++k) pts.push_back(rng() % 5);
                 return expect_equal(squared_gaussian_cumulant(cov, pts, GaussianKind::real),
                                     squared_gaussian_cumulant_isserlis(cov, pts, GaussianKind::real),
                                     "C=" + show(cov) + " points=" + show(pts));
               }});
  p.push_back({"gaussian_cumulants", "squared_complex_cyclic_formula", c, [](std::mt19937_64& rng, std::size_t i) {
                 const M cov = rnd::random_spd(rng, 4);
                 Idx pts;
                 for (std::size_t k = 0; k < 1 + i % 4; ++k) pts.push_back(rng() % 4);
                 return expect_equal(squared_gaussian_cumulant(cov, pts, GaussianKind::complex),
                                     squared_gaussian_cumulant_isserlis(cov, pts, GaussianKind::complex),
                                     "C=" + show(cov) + " points=" + show(pts));
               }});
  p.push_back({"gaussian_cumulants", "cyp_permutation_symmetry", c, [](std::mt19937_64& rng, std::size_t i) {
                 const M cov = rnd::random_spd(rng, 5);
                 Idx pts;
                 for (std::size_t k = 0; k < 1 + i % 5; ++k) pts.push_back(rng() % 5);
                 Idx shuffled = pts;
                 std::shuffle(shuffled.begin(), shuffled.end(), rng);
                 return expect_equal(cyp(cov, shuffled), cyp(cov, pts), "C=" + show(cov) + " points=" + show(pts));
               }});
  p.push_back({"gaussian_cumulants", "generating_series_duality", std::max<std::size_t>(c / 5, 5),
               [](std::mt19937_64& rng, std::size_t i) -> std::optional<std::string> {
                 const std::size_t vars = 1 + i % 3;
                 std::map<std::multiset<std::size_t>, Rational> table;
                 SubsetOracle<Rational> kappa = [&](const Idx& s) {
                   const std::multiset<std::size_t> key(s.begin(), s.end());
                   auto it = table.find(key);
                   if (it == table.end()) it = table.emplace(key, rnd::random_rational(rng)).first;
                   return it->second;
                 };
                 SubsetOracle<Rational> neg = [&](const Idx& s) { return Rational(-kappa(s)); };
                 const auto f = exp(cumulant_series<Rational>(vars, 4, kappa));
                 const auto g = exp(cumulant_series<Rational>(vars, 4, neg));
                 if (f == reciprocal(g)) return std::nullopt;
                 return "F != 1/G with " + std::to_string(vars) + " variables";
               }});
  p.push_back({"gaussian_cumulants", "gradient_squared_isserlis", std::max<std::size_t>(c / 5, 5),
               [](std::mt19937_64& rng, std::size_t i) {
                 static const GridSpec grid = GridSpec::all_sides({5, 5});
                 static const auto cov = dgff_covariance<Rational>(grid);
                 Idx pts;
                 for (std::size_t k = 0; k < 1 + i % 4; ++k) pts.push_back(grid.vertex({1 + rng() % 3, 1 + rng() % 3}));
                 return expect_equal(gradient_squared_cumulant(grid, cov, pts),
                                     gradient_squared_cumulant_isserlis(grid, cov, pts), "points=" + show(pts));
               }});
  return p;
}

inline std::vector<Property> superspace_properties(std::size_t n) {
  std::vector<Property> p;
  const std::size_t s = std::max<std::size_t>(n / 5, 10);
  p.push_back({"superspace", "q_annihilates_inner_products", 6, [](std::mt19937_64&, std::size_t i) {
                 // Every pair (i, j) for m = 1..3.
                 const std::size_t m = 1 + i % 3;
                 for (std::size_t a = 0; a < m; ++a)
                   for (std::size_t b = 0; b < m; ++b)
                     if (!q_apply(SuperFunction(super_inner_product(a, b, m), M(0, 0))).is_zero())
                       return std::optional<std::string>("Q(u_" + std::to_string(a) + ", u_" + std::to_string(b) +
                                                         ") != 0 for m=" + std::to_string(m));
                 return std::optional<std::string>();
               }});
  p.push_back({"superspace", "supergaussian_unit_mass", s, [](std::mt19937_64& rng, std::size_t i) {
                 const M a = rnd::random_spd(rng, 1 + i % 3);
                 return expect_equal(super_integrate(supergaussian(a)), Rational(1), "A=" + show(a));
               }});
  p.push_back({"superspace", "localization", s, [](std::mt19937_64& rng, std::size_t i) -> std::optional<std::string> {
                 const M a = rnd::random_spd(rng, 1 + i % 3);
                 std::vector<Rational> g(1 + i % 4);
                 for (auto& c : g) c = rnd::random_rational(rng);
                 const auto r = localization_check(polynomial_of_form(a, g));
                 if (!r.q_closed) return "test function not Q-closed for A=" + show(a);
                 return expect_equal(r.integral, r.body_at_zero, "A=" + show(a));
               }});
  return p;
}

}  // namespace detail::verify

inline std::vector<Property> verification_properties(const VerifyOptions& opt = {}) {
  using namespace detail::verify;
  std::vector<Property> all;
  for (auto* group : {&grassmann_properties, &gaussian_properties, &graph_properties, &cumulant_properties,
                      &superspace_properties})
    for (auto& p : (*group)(opt.instances)) all.push_back(std::move(p));
  return all;
}

/// Runs one property; exceptions count as failures.
inline PropertyResult run_property(const Property& p, std::uint64_t seed, std::size_t position) {
  PropertyResult r{p.module, p.name, p.instances, true, {}, 0};
  std::seed_seq seq{seed, static_cast<std::uint64_t>(position)};
  std::mt19937_64 rng(seq);
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < p.instances && r.passed; ++i) {
    try {
      if (auto fail = p.check(rng, i)) {
        r.passed = false;
        r.counterexample = "instance " + std::to_string(i) + ": " + *fail;
      }
    } catch (const std::exception& e) {
      r.passed = false;
      r.counterexample = "instance " + std::to_string(i) + " threw: " + e.what();
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::vector<PropertyResult> run_verification(const VerifyOptions& opt = {}) {
  const auto props = verification_properties(opt);
  std::vector<PropertyResult> out;
  for (std::size_t k = 0; k < props.size(); ++k) out.push_back(run_property(props[k], opt.seed, k));
  return out;
}

/// One line per property; no timings, so equal seeds give equal transcripts.
inline std::string transcript(const std::vector<PropertyResult>& results) {
  std::ostringstream out;
  for (const auto& r : results) {
    out << (r.passed ? "PASS" : "FAIL") << ' ' << r.module << '.' << r.name << " (" << r.instances << ")";
    if (!r.passed) out << ": " << r.counterexample;
    out << '\n';
  }
  return out.str();
}

}  // namespace berezin
