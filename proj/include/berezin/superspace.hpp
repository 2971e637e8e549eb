#pragma once

// Superfunctions on m superspins u_i = (x_i, y_i, ξ_i, ξ̄_i): polynomial
// coefficients times one shared Gaussian exp(-(x, Mx) - (y, My)). The
// supersymmetry generator Q, exact superintegration, localization.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "berezin/cumulants.hpp"
#include "berezin/errors.hpp"
#include "berezin/gaussian.hpp"
#include "berezin/grassmann.hpp"
#include "berezin/matrix.hpp"
#include "berezin/scalar.hpp"

namespace berezin {

/// Rational polynomial in x_0, y_0, x_1, y_1, … (variable 2i is x_i, 2i+1 is
/// y_i). Exponent vectors carry no trailing zeros, so the constant monomial
/// is the empty vector.
class Polynomial {
 public:
  using Exponent = std::vector<unsigned>;

  Polynomial() = default;
  Polynomial(int c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(const Rational& c) {                  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_[{}] = c;
  }

  static Polynomial variable(std::size_t v, const Rational& c = 1) {
    Exponent e(v + 1, 0);
    e[v] = 1;
    Polynomial p;
    if (c != 0) p.terms_[e] = c;
    return p;
  }
  static Polynomial x(std::size_t site) { return variable(2 * site); }
  static Polynomial y(std::size_t site) { return variable(2 * site + 1); }

  const std::map<Exponent, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Rational constant_term() const {
    auto it = terms_.find({});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (auto k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(std::max(ea.size(), eb.size()), 0);
        for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
        for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
        r.add(e, ca * cb);
      }
    return r;
  }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Polynomial derivative(std::size_t v) const {
    Polynomial r;
    for (const auto& [e, c] : terms_) {
      if (v >= e.size() || e[v] == 0) continue;
      Exponent d = e;
      --d[v];
      r.add(trim(std::move(d)), c * e[v]);
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      std::string mono;
      for (std::size_t v = 0; v < e.size(); ++v) {
        if (!e[v]) continue;
        if (!mono.empty()) mono += "·";
        mono += (v % 2 ? "y_" : "x_") + std::to_string(v / 2);
        if (e[v] > 1) mono += "^" + std::to_string(e[v]);
      }
      std::string cs = c.str();
      if (!out.empty()) {
        if (cs[0] == '-') {
          out += " - ";
          cs.erase(0, 1);
        } else {
          out += " + ";
        }
      }
      if (mono.empty())
        out += cs;
      else if (cs == "1")
        out += mono;
      else if (cs == "-1")
        out += "-" + mono;
      else
        out += cs + "·" + mono;
    }
    return out;
  }

 private:
  static Exponent trim(Exponent e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
    return e;
  }
  void add(const Exponent& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(trim(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::map<Exponent, Rational> terms_;
};

template <>
struct RingTraits<Polynomial> {
  static bool is_zero(const Polynomial& p) { return p.is_zero(); }
  static bool equal(const Polynomial& a, const Polynomial& b) { return a == b; }
  static std::string to_string(const Polynomial& p) {
    return p.size() > 1 ? "(" + p.to_string() + ")" : p.to_string();
  }
};

using SuperElement = Element<Polynomial>;

/// Lifts a rational Grassmann element to polynomial coefficients.
inline SuperElement lift(const Element<Rational>& a) {
  std::vector<SuperElement::Term> t;
  for (const auto& [m, c] : a.terms()) t.emplace_back(m, Polynomial(c));
  return SuperElement::from_terms(a.algebra(), std::move(t));
}

/// F = Σ_I f_I ξ^I with every f_I = P_I(x, y) · exp(-(x, Mx) - (y, My)).
/// An empty M means no Gaussian factor.
class SuperFunction {
 public:
  SuperFunction(SuperElement poly, Matrix<Rational> gaussian) : poly_(std::move(poly)), m_(std::move(gaussian)) {
    if (m_.rows() != 0) {
      if (!m_.square() || m_.rows() != sites()) throw ClassError("Gaussian matrix must be m×m for m sites");
      if (!m_.is_symmetric()) throw ClassError("Gaussian matrix must be symmetric");
    }
  }

  std::size_t sites() const { return poly_.algebra().sites(); }
  const SuperElement& polynomial_part() const noexcept { return poly_; }
  const Matrix<Rational>& gaussian() const noexcept { return m_; }
  bool has_gaussian() const noexcept { return m_.rows() != 0; }

  /// f_∅ at the origin.
  Rational body_at_zero() const { return poly_.body().constant_term(); }

  SuperFunction operator+(const SuperFunction& o) const {
    require_same_class(o);
    return {poly_ + o.poly_, m_};
  }
  SuperFunction operator-(const SuperFunction& o) const {
    require_same_class(o);
    return {poly_ - o.poly_, m_};
  }
  /// Multiplies the polynomial part; the Gaussian factor is unchanged.
  friend SuperFunction operator*(const SuperElement& g, const SuperFunction& f) { return {g * f.poly_, f.m_}; }
  friend SuperFunction operator*(const SuperFunction& f, const SuperElement& g) { return {f.poly_ * g, f.m_}; }

  bool is_zero() const { return poly_.is_zero(); }
  friend bool operator==(const SuperFunction& a, const SuperFunction& b) {
    return a.m_ == b.m_ && a.poly_ == b.poly_;
  }

  void require_same_class(const SuperFunction& o) const {
    if (!(m_ == o.m_)) throw ClassError("superfunctions carry different Gaussian factors");
  }

 private:
  SuperElement poly_;
  Matrix<Rational> m_;
};

namespace detail {

inline void require_symmetric(const Matrix<Rational>& a) {
  if (!a.square()) throw DimensionError("A must be square");
  if (!a.is_symmetric()) throw ArgumentError("super inner products need a symmetric matrix");
}

}  // namespace detail

/// (u_i, u_j) = x_i x_j + y_i y_j + ½(ξ_j ξ̄_i + ξ_i ξ̄_j).
inline SuperElement super_inner_product(std::size_t i, std::size_t j, std::size_t m) {
  const Algebra alg = Algebra::paired(m);
  const Rational half(1, 2);
  return SuperElement::scalar(alg, Polynomial::x(i) * Polynomial::x(j) + Polynomial::y(i) * Polynomial::y(j)) +
         SuperElement::word(alg, {xi(j), xibar(i)}, Polynomial(half)) +
         SuperElement::word(alg, {xi(i), xibar(j)}, Polynomial(half));
}

struct SuperQuadraticForm {
  Matrix<Rational> a;
  SuperElement form;             // (u, Au)
  Polynomial bosonic;            // (x, Ax) + (y, Ay)
  Element<Rational> fermionic;   // (ξ̄, Aξ), the fermionic part of -(u, Au)
};

inline SuperQuadraticForm super_quadratic_form(const Matrix<Rational>& a) {
  detail::require_symmetric(a);
  const std::size_t m = a.rows();
  SuperQuadraticForm q{a, SuperElement::zero(Algebra::paired(m)), Polynomial(), quadratic_form(a)};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (a(i, j) == 0) continue;
      q.form += Polynomial(a(i, j)) * super_inner_product(i, j, m);
      q.bosonic += Polynomial(a(i, j)) * (Polynomial::x(i) * Polynomial::x(j) + Polynomial::y(i) * Polynomial::y(j));
    }
  return q;
}

/// exp(-(u, Au)): the bosonic part becomes the Gaussian factor, the fermionic
/// part exp((ξ̄, Aξ)) is expanded.
inline SuperFunction supergaussian(const Matrix<Rational>& a) {
  const auto q = super_quadratic_form(a);
  return {lift(berezin::exp(q.fermionic)), a};
}

/// ∂/∂x_i or ∂/∂y_i of F, including the Gaussian factor.
inline SuperFunction boson_derivative(const SuperFunction& f, std::size_t site, bool y_coordinate) {
  const std::size_t var = 2 * site + (y_coordinate ? 1 : 0);
  Polynomial mx;  // (M x)_i or (M y)_i
  if (f.has_gaussian())
    for (std::size_t j = 0; j < f.sites(); ++j)
      if (f.gaussian()(site, j) != 0) mx += Polynomial::variable(2 * j + (y_coordinate ? 1 : 0), f.gaussian()(site, j));
  std::vector<SuperElement::Term> out;
  for (const auto& [mask, p] : f.polynomial_part().terms()) {
    Polynomial d = p.derivative(var);
    if (f.has_gaussian()) d -= Polynomial(2) * mx * p;
    out.emplace_back(mask, std::move(d));
  }
  return {SuperElement::from_terms(f.polynomial_part().algebra(), std::move(out)), f.gaussian()};
}

/// Q F = Σ_i (∂_{x_i} F) ξ_i + (∂_{y_i} F) ξ̄_i - 2 x_i ∂ᴿ_{ξ̄_i} F + 2 y_i ∂ᴿ_{ξ_i} F,
/// with ∂ᴿ the right derivative, so that Q is a right-acting odd derivation.
inline SuperFunction q_apply(const SuperFunction& f) {
  const Algebra alg = f.polynomial_part().algebra();
  const SuperElement& p = f.polynomial_part();
  SuperElement out = SuperElement::zero(alg);
  for (std::size_t i = 0; i < alg.sites(); ++i) {
    out += boson_derivative(f, i, false).polynomial_part() * SuperElement::generator(alg, xi(i));
    out += boson_derivative(f, i, true).polynomial_part() * SuperElement::generator(alg, xibar(i));
    out += Polynomial::variable(2 * i, -2) * right_derivative(p, xibar(i));
    out += Polynomial::variable(2 * i + 1, 2) * right_derivative(p, xi(i));
  }
  return {std::move(out), f.gaussian()};
}

inline bool is_supersymmetric(const SuperFunction& f) { return q_apply(f).is_zero(); }

/// ∫ exp(-(x, Mx) - (y, My)) ∏ dx_i dy_i / π = det(M)⁻¹.
inline Rational bosonic_gaussian_integral(const Matrix<Rational>& m) {
  if (!is_positive_definite(m)) throw IntegrabilityError("Gaussian matrix is not positive-definite");
  return Rational(1) / determinant(m);
}

/// ∫ P(x, y) exp(-(x, Mx) - (y, My)) ∏ dx_i dy_i / π, exactly: x and y are
/// independent N(0, ½M⁻¹) and the mass is det(M)⁻¹.
inline Rational integrate_bosonic(const Polynomial& p, const Matrix<Rational>& m) {
  const Rational mass = bosonic_gaussian_integral(m);
  const Matrix<Rational> cov = Rational(1, 2) * inverse(m);
  Rational sum = 0;
  for (const auto& [e, c] : p.terms()) {
    std::vector<std::size_t> xs, ys;
    for (std::size_t v = 0; v < e.size(); ++v)
      for (unsigned k = 0; k < e[v]; ++k) (v % 2 ? ys : xs).push_back(v / 2);
    if (xs.size() % 2 || ys.size() % 2) continue;
    sum += c * isserlis_moment(cov, xs) * isserlis_moment(cov, ys);
  }
  return mass * sum;
}

/// ∫ F du: Berezin integral over every (ξ, ξ̄) pair, then the bosonic
/// integral with measure ∏ dx_i dy_i / π.
inline Rational super_integrate(const SuperFunction& f) {
  if (!f.has_gaussian()) throw IntegrabilityError("superfunction has no Gaussian factor");
  return integrate_bosonic(berezin_pair_integral(f.polynomial_part()), f.gaussian());
}

struct LocalizationReport {
  Matrix<Rational> matrix;
  Rational integral = 0;
  Rational body_at_zero = 0;
  bool q_closed = false;

  /// Localization holds, or does not apply.
  bool consistent() const { return !q_closed || integral == body_at_zero; }
};

inline LocalizationReport localization_check(const SuperFunction& f) {
  return {f.gaussian(), super_integrate(f), f.body_at_zero(), is_supersymmetric(f)};
}

/// g((u, Au)) exp(-(u, Au)) for g(t) = Σ_k c_k t^k.
inline SuperFunction polynomial_of_form(const Matrix<Rational>& a, const std::vector<Rational>& g) {
  const auto q = super_quadratic_form(a);
  const Algebra alg = Algebra::paired(a.rows());
  SuperElement sum = SuperElement::zero(alg), power = SuperElement::one(alg);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k) power = power * q.form;
    if (g[k] != 0) sum += Polynomial(g[k]) * power;
  }
  return sum * supergaussian(a);
}

}  // namespace berezin
