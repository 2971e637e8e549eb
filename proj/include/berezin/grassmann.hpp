#pragma once

// Grassmann algebra over finitely many generators, with Berezin integration.
//
// Monomials are bitmasks over a fixed total order of generators. In a paired
// algebra with m sites the order is xi_0..xi_{m-1} followed by
// xibar_0..xibar_{m-1}; bit k of a mask is the k-th generator in that order.
// A stored monomial always means the product of its generators in ascending
// bit order, with sign +1. All signs are reduced to that order on
// construction, so equal subsets merge in the term map.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "berezin/errors.hpp"
#include "berezin/scalar.hpp"

namespace berezin {

using Mask = std::uint64_t;

inline constexpr std::size_t kMaxGenerators = 64;

enum class GeneratorKind : std::uint8_t { plain, barred };

struct GeneratorIndex {
  std::size_t site = 0;
  GeneratorKind kind = GeneratorKind::plain;

  friend bool operator==(const GeneratorIndex&, const GeneratorIndex&) = default;
};

inline GeneratorIndex xi(std::size_t site) { return {site, GeneratorKind::plain}; }
inline GeneratorIndex xibar(std::size_t site) { return {site, GeneratorKind::barred}; }

/// Shape of the ambient algebra: how many generators and whether they come in
/// (plain, barred) pairs.
class Algebra {
 public:
  static Algebra paired(std::size_t sites) { return Algebra(2 * sites, true); }
  static Algebra unpaired(std::size_t generators) { return Algebra(generators, false); }

  std::size_t generators() const noexcept { return n_; }
  std::size_t sites() const noexcept { return paired_ ? n_ / 2 : n_; }
  bool is_paired() const noexcept { return paired_; }
  Mask full_mask() const noexcept { return n_ == 64 ? ~Mask{0} : (Mask{1} << n_) - 1; }

  std::size_t bit(GeneratorIndex g) const {
    if (g.kind == GeneratorKind::barred && !paired_)
      throw DimensionError("barred generator in an unpaired algebra");
    if (g.site >= sites()) throw DimensionError("generator site " + std::to_string(g.site) + " out of range");
    return g.kind == GeneratorKind::plain ? g.site : sites() + g.site;
  }

  GeneratorIndex generator_at(std::size_t bit) const {
    if (bit >= n_) throw DimensionError("generator bit out of range");
    if (paired_ && bit >= sites()) return xibar(bit - sites());
    return xi(bit);
  }

  std::string name(std::size_t bit) const {
    const GeneratorIndex g = generator_at(bit);
    return std::string(g.kind == GeneratorKind::plain ? "ξ" : "ξ̄") + "_" + std::to_string(g.site);
  }

  friend bool operator==(const Algebra&, const Algebra&) = default;

 private:
  Algebra(std::size_t n, bool paired) : n_(n), paired_(paired) {
    if (n > kMaxGenerators)
      throw CapacityError("at most " + std::to_string(kMaxGenerators) + " generators are supported");
  }
  std::size_t n_ = 0;
  bool paired_ = false;
};

enum class Parity : std::uint8_t { even, odd, mixed };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::even:
      return "even";
    case Parity::odd:
      return "odd";
    default:
      return "mixed";
  }
}

namespace detail {

inline Mask bits_below(std::size_t b) { return b == 0 ? 0 : (Mask{1} << b) - 1; }
inline Mask bits_above(std::size_t b) { return b >= 63 ? 0 : ~((Mask{2} << b) - 1); }

// Sign of (monomial a)(monomial b) once reordered canonically: one factor of
// -1 per pair (g in a, h in b) with g > h.
inline int product_sign(Mask a, Mask b) {
  int inversions = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    const auto h = static_cast<std::size_t>(std::countr_zero(rest));
    inversions += std::popcount(a & bits_above(h));
  }
  return (inversions & 1) ? -1 : 1;
}

}  // namespace detail

/// Element of a Grassmann algebra with coefficients in the commutative ring R.
/// Terms are kept sorted by mask with no zero coefficients.
template <typename R>
class Element {
 public:
  using Term = std::pair<Mask, R>;

  explicit Element(Algebra alg) : alg_(alg) {}

  static Element zero(Algebra alg) { return Element(alg); }
  static Element scalar(Algebra alg, R c) {
    Element e(alg);
    if (!RingTraits<R>::is_zero(c)) e.terms_.emplace_back(0, std::move(c));
    return e;
  }
  static Element one(Algebra alg) { return scalar(alg, R(1)); }
  static Element generator(Algebra alg, GeneratorIndex g, R c = R(1)) {
    return monomial(alg, Mask{1} << alg.bit(g), std::move(c));
  }
  static Element monomial(Algebra alg, Mask mask, R c = R(1)) {
    if (mask & ~alg.full_mask()) throw DimensionError("monomial uses generators outside the algebra");
    Element e(alg);
    if (!RingTraits<R>::is_zero(c)) e.terms_.emplace_back(mask, std::move(c));
    return e;
  }
  /// Product of generators in the order given (not necessarily canonical).
  static Element word(Algebra alg, std::span<const GeneratorIndex> gens, R c = R(1)) {
    Element e = scalar(alg, std::move(c));
    for (const auto& g : gens) e = e * generator(alg, g);
    return e;
  }
  static Element word(Algebra alg, std::initializer_list<GeneratorIndex> gens, R c = R(1)) {
    return word(alg, std::span<const GeneratorIndex>(gens.begin(), gens.size()), std::move(c));
  }

  /// Builds from arbitrary (mask, coefficient) pairs, merging duplicates.
  static Element from_terms(Algebra alg, std::vector<Term> raw) {
    Element e(alg);
    std::map<Mask, R> acc;
    for (auto& [m, c] : raw) {
      if (m & ~alg.full_mask()) throw DimensionError("monomial uses generators outside the algebra");
      auto [it, fresh] = acc.try_emplace(m, c);
      if (!fresh) it->second += c;
    }
    for (auto& [m, c] : acc)
      if (!RingTraits<R>::is_zero(c)) e.terms_.emplace_back(m, std::move(c));
    return e;
  }

  const Algebra& algebra() const noexcept { return alg_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Coefficient of a canonical monomial (zero when absent).
  R coefficient(Mask mask) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                               [](const Term& t, Mask m) { return t.first < m; });
    return (it != terms_.end() && it->first == mask) ? it->second : R(0);
  }

  /// Coefficient of the empty monomial.
  R body() const { return coefficient(0); }
  Element soul() const {
    Element s(alg_);
    for (const auto& t : terms_)
      if (t.first != 0) s.terms_.push_back(t);
    return s;
  }

  /// Union of the generators appearing in any term.
  Mask support() const {
    Mask s = 0;
    for (const auto& t : terms_) s |= t.first;
    return s;
  }

  Element operator-() const {
    Element r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  friend Element operator+(const Element& a, const Element& b) { return combine(a, b, false); }
  friend Element operator-(const Element& a, const Element& b) { return combine(a, b, true); }

  friend Element operator*(const R& c, const Element& a) {
    Element r(a.alg_);
    if (RingTraits<R>::is_zero(c)) return r;
    for (const auto& [m, v] : a.terms_) {
      R p = c * v;
      if (!RingTraits<R>::is_zero(p)) r.terms_.emplace_back(m, std::move(p));
    }
    return r;
  }

  /// Wedge product.
  friend Element operator*(const Element& a, const Element& b) {
    require_same(a, b);
    if (a.is_zero() || b.is_zero()) return Element(a.alg_);
    std::unordered_map<Mask, R> acc;
    acc.reserve(a.size() * b.size());
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        if (ma & mb) continue;
        R p = ca * cb;
        if (detail::product_sign(ma, mb) < 0) p = -p;
        auto [it, fresh] = acc.try_emplace(ma | mb, std::move(p));
        if (!fresh) it->second += p;
      }
    return collect(a.alg_, acc);
  }

  Element& operator+=(const Element& b) { return *this = *this + b; }
  Element& operator-=(const Element& b) { return *this = *this - b; }
  Element& operator*=(const Element& b) { return *this = *this * b; }

  friend bool operator==(const Element& a, const Element& b) {
    if (!(a.alg_ == b.alg_)) return false;
    std::size_t i = 0, j = 0;
    const R zero(0);
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
        if (!RingTraits<R>::equal(a.terms_[i].second, zero)) return false;
        ++i;
      } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
        if (!RingTraits<R>::equal(zero, b.terms_[j].second)) return false;
        ++j;
      } else {
        if (!RingTraits<R>::equal(a.terms_[i].second, b.terms_[j].second)) return false;
        ++i;
        ++j;
      }
    }
    return true;
  }

  static void require_same(const Element& a, const Element& b) {
    if (!(a.alg_ == b.alg_)) throw DimensionError("operands live in different algebras");
  }

  static Element collect(Algebra alg, std::unordered_map<Mask, R>& acc) {
    Element r(alg);
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (!RingTraits<R>::is_zero(c)) r.terms_.emplace_back(m, std::move(c));
    std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    return r;
  }

  // Internal: appends without checks. Caller keeps the sorted/nonzero invariant.
  std::vector<Term>& mutable_terms() { return terms_; }

 private:
  static Element combine(const Element& a, const Element& b, bool subtract) {
    require_same(a, b);
    Element r(a.alg_);
    r.terms_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a.terms_[i].first < b.terms_[j].first)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.size() || b.terms_[j].first < a.terms_[i].first) {
        r.terms_.emplace_back(b.terms_[j].first, subtract ? R(-b.terms_[j].second) : b.terms_[j].second);
        ++j;
      } else {
        R c = subtract ? R(a.terms_[i].second - b.terms_[j].second) : R(a.terms_[i].second + b.terms_[j].second);
        if (!RingTraits<R>::is_zero(c)) r.terms_.emplace_back(a.terms_[i].first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  Algebra alg_;
  std::vector<Term> terms_;
};

template <typename R>
Element<R> wedge_product(const Element<R>& a, const Element<R>& b) {
  return a * b;
}

/// Even if every monomial has even degree, odd if every one is odd. The zero
/// element is even.
template <typename R>
Parity parity(const Element<R>& a) {
  bool has_even = false, has_odd = false;
  for (const auto& t : a.terms()) (std::popcount(t.first) % 2 ? has_odd : has_even) = true;
  if (has_even && has_odd) return Parity::mixed;
  return has_odd ? Parity::odd : Parity::even;
}

/// Parity operator: negates odd-degree monomials.
template <typename R>
Element<R> parity_operator(const Element<R>& a) {
  Element<R> r = a;
  for (auto& t : r.mutable_terms())
    if (std::popcount(t.first) % 2) t.second = -t.second;
  return r;
}

/// Grassmann derivative with the sign (-1)^(alpha-1), where alpha is the
/// 1-based position of g inside the canonical monomial. Acts from the left.
template <typename R>
Element<R> derivative(const Element<R>& a, GeneratorIndex g) {
  const std::size_t b = a.algebra().bit(g);
  const Mask bit = Mask{1} << b;
  Element<R> r(a.algebra());
  auto& out = r.mutable_terms();
  for (const auto& [m, c] : a.terms()) {
    if (!(m & bit)) continue;
    const bool neg = std::popcount(m & detail::bits_below(b)) % 2;
    out.emplace_back(m & ~bit, neg ? R(-c) : c);
  }
  // Removing the same bit from distinct masks keeps them distinct and ordered.
  return r;
}

/// Derivative acting from the right: removes g after moving it to the end of
/// the monomial, sign (-1)^(#generators after g).
template <typename R>
Element<R> right_derivative(const Element<R>& a, GeneratorIndex g) {
  const std::size_t b = a.algebra().bit(g);
  const Mask bit = Mask{1} << b;
  Element<R> r(a.algebra());
  auto& out = r.mutable_terms();
  for (const auto& [m, c] : a.terms()) {
    if (!(m & bit)) continue;
    const bool neg = std::popcount(m & detail::bits_above(b)) % 2;
    out.emplace_back(m & ~bit, neg ? R(-c) : c);
  }
  return r;
}

/// Berezin integral for the measure string  ∫ dξ_{o_1} dξ_{o_2} ... dξ_{o_k},
/// i.e. the operator ∂_{o_1} ∘ ∂_{o_2} ∘ ... ∘ ∂_{o_k} (the last listed
/// generator is differentiated first).
template <typename R>
Element<R> berezin_integral(const Element<R>& a, std::span<const GeneratorIndex> order) {
  Mask seen = 0;
  for (const auto& g : order) {
    const Mask bit = Mask{1} << a.algebra().bit(g);
    if (seen & bit) throw ArgumentError("duplicate generator in integration order");
    seen |= bit;
  }
  Element<R> r = a;
  for (auto it = order.rbegin(); it != order.rend(); ++it) r = derivative(r, *it);
  return r;
}

template <typename R>
Element<R> berezin_integral(const Element<R>& a, std::initializer_list<GeneratorIndex> order) {
  return berezin_integral(a, std::span<const GeneratorIndex>(order.begin(), order.size()));
}

/// Sign of the full paired integral  ∫ ∏_i dξ_i dξ̄_i  on the canonical top
/// monomial xi_0..xi_{m-1} xibar_0..xibar_{m-1}.
inline int pair_integral_top_sign(const Algebra& alg) {
  if (!alg.is_paired()) throw DimensionError("paired integral needs a paired algebra");
  const std::size_t m = alg.sites();
  // Each step peels xibar_i then xi_i off the top monomial.
  Mask mask = alg.full_mask();
  int sign = 1;
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t b : {m + i, i}) {
      if (std::popcount(mask & detail::bits_below(b)) % 2) sign = -sign;
      mask &= ~(Mask{1} << b);
    }
  }
  return sign;
}

/// Scalar value of  ∫ ∏_i dξ_i dξ̄_i  a.  Only the saturating monomial
/// contributes.
template <typename R>
R berezin_pair_integral(const Element<R>& a) {
  const int sign = pair_integral_top_sign(a.algebra());
  R top = a.coefficient(a.algebra().full_mask());
  return sign < 0 ? R(-top) : top;
}

/// Replaces every generator by its image (generators without an entry stay
/// put) and re-expands, keeping the original factor order. Images must be odd.
template <typename R>
Element<R> substitute(const Element<R>& a, const std::vector<std::optional<Element<R>>>& images) {
  const Algebra& alg = a.algebra();
  if (images.size() > alg.generators()) throw DimensionError("substitution map larger than the algebra");
  std::vector<Element<R>> img;
  img.reserve(alg.generators());
  for (std::size_t b = 0; b < alg.generators(); ++b) {
    if (b < images.size() && images[b]) {
      const auto& e = *images[b];
      if (!(e.algebra() == alg)) throw DimensionError("substitution image from another algebra");
      if (parity(e) != Parity::odd)
        throw ParityError("substitution image for " + alg.name(b) + " is not odd");
      img.push_back(e);
    } else {
      img.push_back(Element<R>::monomial(alg, Mask{1} << b));
    }
  }
  Element<R> r(alg);
  for (const auto& [m, c] : a.terms()) {
    Element<R> prod = Element<R>::scalar(alg, c);
    for (Mask rest = m; rest; rest &= rest - 1) prod = prod * img[std::countr_zero(rest)];
    r += prod;
  }
  return r;
}

template <typename R>
Element<R> substitute(const Element<R>& a, const std::map<std::size_t, Element<R>>& by_bit) {
  std::vector<std::optional<Element<R>>> images(a.algebra().generators());
  for (const auto& [b, e] : by_bit) {
    if (b >= images.size()) throw DimensionError("substitution key out of range");
    images[b] = e;
  }
  return substitute(a, images);
}

/// Scalar function with derivatives: derivative(b, j) returns f^(j)(b).
template <Scalar T>
using SeriesEvaluator = std::function<T(const T& body, std::size_t order)>;

/// f(a) = Σ_j f^(j)(body) / j! · soul^j, which terminates by nilpotency.
template <Scalar T>
Element<T> apply_series(const SeriesEvaluator<T>& f, const Element<T>& a) {
  const Algebra& alg = a.algebra();
  const T b = a.body();
  const Element<T> soul = a.soul();
  Element<T> result = Element<T>::zero(alg);
  Element<T> power = Element<T>::one(alg);
  T factorial(1);
  for (std::size_t j = 0; j <= alg.generators(); ++j) {
    if (j > 0) {
      power = power * soul;
      factorial *= T(static_cast<long long>(j));
      if (power.is_zero()) break;
    }
    T dj;
    try {
      dj = f(b, j);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw EvaluationError(std::string("series evaluation failed: ") + e.what());
    }
    if constexpr (!ScalarTraits<T>::exact) {
      if (!std::isfinite(dj)) throw EvaluationError("series evaluation produced a non-finite value");
    }
    result += T(dj / factorial) * power;
  }
  return result;
}

/// Exponential of a Grassmann element. In exact mode the body must be zero
/// (e^b is irrational otherwise).
template <Scalar T>
Element<T> exp(const Element<T>& a) {
  return apply_series<T>(
      [](const T& b, std::size_t) -> T {
        if constexpr (ScalarTraits<T>::exact) {
          if (b != 0) throw EvaluationError("exp of a nonzero rational body is not rational");
          return T(1);
        } else {
          return std::exp(b);
        }
      },
      a);
}

/// Product of `factors` in order, discarding every partial term that can no
/// longer cover `target` given the generators still available in the
/// remaining factors. Coefficients of monomials containing `target` are exact.
template <typename R>
Element<R> product_covering(std::span<const Element<R>> factors, Mask target, const Algebra& alg) {
  std::vector<Mask> remaining(factors.size() + 1, 0);
  for (std::size_t k = factors.size(); k-- > 0;) remaining[k] = remaining[k + 1] | factors[k].support();
  Element<R> acc = Element<R>::one(alg);
  if ((remaining[0] & target) != target) return Element<R>::zero(alg);
  for (std::size_t k = 0; k < factors.size(); ++k) {
    acc = acc * factors[k];
    auto& t = acc.mutable_terms();
    std::erase_if(t, [&](const auto& term) { return ((term.first | remaining[k + 1]) & target) != target; });
    if (acc.is_zero()) break;
  }
  return acc;
}

/// Debug rendering: terms by ascending mask, `±c·ξ_i…ξ̄_j`.
template <typename R>
std::string to_string(const Element<R>& a) {
  if (a.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : a.terms()) {
    std::string cs = RingTraits<R>::to_string(c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (neg) cs.erase(0, 1);
    if (!first || neg) s += neg ? (first ? "-" : " - ") : " + ";
    first = false;
    s += cs;
    for (Mask rest = m; rest; rest &= rest - 1) s += "·" + a.algebra().name(std::countr_zero(rest));
  }
  return s;
}

}  // namespace berezin
