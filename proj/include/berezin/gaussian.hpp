#pragma once

// Fermionic Gaussian integrals. Each identity has a symbolic route through the
// Grassmann engine and a linear-algebra route; the symbolic one fixes signs.

#include <cstddef>
#include <string>
#include <vector>

#include "berezin/errors.hpp"
#include "berezin/grassmann.hpp"
#include "berezin/matrix.hpp"

namespace berezin {

/// Largest number of (ξ, ξ̄) pairs the symbolic routes accept.
inline constexpr std::size_t kMaxSymbolicPairs = 16;

namespace detail {

inline void require_symbolic_size(std::size_t m) {
  if (m > kMaxSymbolicPairs)
    throw CapacityError("symbolic route supports at most " + std::to_string(kMaxSymbolicPairs) +
                        " pairs, got " + std::to_string(m));
}

template <Scalar T>
void require_square(const Matrix<T>& a, const char* what) {
  if (!a.square()) throw DimensionError(std::string(what) + " must be square");
}

}  // namespace detail

/// (ξ̄, Aξ) = Σ_{i,j} ξ̄_i A(i,j) ξ_j in the paired algebra over A's index set.
template <Scalar T>
Element<T> quadratic_form(const Matrix<T>& a) {
  detail::require_square(a, "quadratic form matrix");
  const Algebra alg = Algebra::paired(a.rows());
  Element<T> q = Element<T>::zero(alg);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!ScalarTraits<T>::is_zero(a(i, j))) q += Element<T>::word(alg, {xibar(i), xi(j)}, a(i, j));
  return q;
}

/// The factors exp(ξ̄_i Σ_j A(i,j) ξ_j) = 1 + ξ̄_i Σ_j A(i,j) ξ_j whose product
/// is exp((ξ̄, Aξ)).
template <Scalar T>
std::vector<Element<T>> gaussian_factors(const Matrix<T>& a) {
  detail::require_square(a, "Gaussian matrix");
  const Algebra alg = Algebra::paired(a.rows());
  std::vector<Element<T>> factors;
  factors.reserve(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Element<T> row = Element<T>::zero(alg);
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!ScalarTraits<T>::is_zero(a(i, j))) row += Element<T>::generator(alg, xi(j), a(i, j));
    factors.push_back(berezin::exp(Element<T>::generator(alg, xibar(i)) * row));
  }
  return factors;
}

/// exp((ξ̄, Aξ)) expanded in full through the power series of the whole form.
/// Exponential in m; meant for small checks.
template <Scalar T>
Element<T> gaussian_exponential(const Matrix<T>& a) {
  return berezin::exp(quadratic_form(a));
}

/// ∫ D(ξ,ξ̄) F exp((ξ̄, Aξ)), computed symbolically with saturation pruning.
template <Scalar T>
T gaussian_moment_symbolic(const Matrix<T>& a, const Element<T>& f) {
  detail::require_square(a, "Gaussian matrix");
  detail::require_symbolic_size(a.rows());
  const Algebra alg = Algebra::paired(a.rows());
  if (!(f.algebra() == alg)) throw DimensionError("integrand algebra does not match the matrix size");
  std::vector<Element<T>> factors;
  factors.reserve(a.rows() + 1);
  factors.push_back(f);
  for (auto& g : gaussian_factors(a)) factors.push_back(std::move(g));
  return berezin_pair_integral(product_covering<T>(factors, alg.full_mask(), alg));
}

/// ∫ D(ξ,ξ̄) exp((ξ̄, Aξ)); equals det(A) for every square A.
template <Scalar T>
T gaussian_integral_symbolic(const Matrix<T>& a) {
  detail::require_square(a, "Gaussian matrix");
  detail::require_symbolic_size(a.rows());
  const Algebra alg = Algebra::paired(a.rows());
  const auto factors = gaussian_factors(a);
  return berezin_pair_integral(product_covering<T>(factors, alg.full_mask(), alg));
}

/// ∏_α (ξ̄ᵀC)_α (Bξ)_α for B (r×m) and C (m×r).
template <Scalar T>
Element<T> bilinear_insertion(const Matrix<T>& b, const Matrix<T>& c, std::size_t m) {
  if (b.cols() != m || c.rows() != m || b.rows() != c.cols())
    throw DimensionError("B must be r×m and C must be m×r");
  const Algebra alg = Algebra::paired(m);
  Element<T> prod = Element<T>::one(alg);
  for (std::size_t alpha = 0; alpha < b.rows(); ++alpha) {
    Element<T> left = Element<T>::zero(alg), right = Element<T>::zero(alg);
    for (std::size_t i = 0; i < m; ++i) {
      if (!ScalarTraits<T>::is_zero(c(i, alpha))) left += Element<T>::generator(alg, xibar(i), c(i, alpha));
      if (!ScalarTraits<T>::is_zero(b(alpha, i))) right += Element<T>::generator(alg, xi(i), b(alpha, i));
    }
    prod = prod * left * right;
  }
  return prod;
}

template <Scalar T>
T wick_bilinear_symbolic(const Matrix<T>& a, const Matrix<T>& b, const Matrix<T>& c) {
  detail::require_square(a, "A");
  return gaussian_moment_symbolic(a, bilinear_insertion(b, c, a.rows()));
}

/// det(A) · det(B A⁻¹ C).
template <Scalar T>
T wick_bilinear_determinant(const Matrix<T>& a, const Matrix<T>& b, const Matrix<T>& c) {
  detail::require_square(a, "A");
  const std::size_t m = a.rows();
  if (b.cols() != m || c.rows() != m || b.rows() != c.cols())
    throw DimensionError("B must be r×m and C must be m×r");
  return determinant(a) * determinant(b * inverse(a) * c);
}

/// Wick bilinear moment: symbolic within the pair cap, determinant route
/// beyond it.
template <Scalar T>
T wick_bilinear(const Matrix<T>& a, const Matrix<T>& b, const Matrix<T>& c) {
  detail::require_square(a, "A");
  if (b.rows() > a.rows()) throw DimensionError("r must not exceed m");
  if (a.rows() <= kMaxSymbolicPairs) return wick_bilinear_symbolic(a, b, c);
  return wick_bilinear_determinant(a, b, c);
}

/// ∫ D(ξ,ξ̄) ξ̄_i ξ_j exp((ξ̄, Aξ)) by symbolic expansion.
template <Scalar T>
T two_point_symbolic(const Matrix<T>& a, std::size_t i, std::size_t j) {
  detail::require_square(a, "A");
  const Algebra alg = Algebra::paired(a.rows());
  return gaussian_moment_symbolic(a, Element<T>::word(alg, {xibar(i), xi(j)}));
}

/// (-1)^(i+j) det(A with row i and column j removed) = det(A) · A⁻¹(j, i).
template <Scalar T>
T two_point_cofactor(const Matrix<T>& a, std::size_t i, std::size_t j) {
  detail::require_square(a, "A");
  if (i >= a.rows() || j >= a.rows()) throw DimensionError("two-point index out of range");
  const T minor = determinant(a.minor_matrix(i, j));
  return (i + j) % 2 ? T(-minor) : minor;
}

/// ⟨F⟩ = det(O)⁻¹ ∫ D(ξ,ξ̄) exp((ξ̄, Oξ)) F.
template <Scalar T>
T fermionic_expectation(const Matrix<T>& o, const Element<T>& f) {
  detail::require_square(o, "O");
  const T det = determinant(o);
  if (ScalarTraits<T>::is_zero(det)) throw SingularityError("fermionic expectation needs det(O) != 0");
  // The Gaussian weight is even, so it commutes with F.
  return gaussian_moment_symbolic(o, f) / det;
}

}  // namespace berezin
