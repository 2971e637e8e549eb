#pragma once

// Joint cumulants and moments over set partitions, Gaussian moments by
// perfect matchings, cumulants of squared Gaussians, and the discrete
// Gaussian free field on boxes.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "berezin/errors.hpp"
#include "berezin/matrix.hpp"
#include "berezin/scalar.hpp"

namespace berezin {

inline constexpr std::size_t kMaxPartitionSet = 8;
inline constexpr std::size_t kMaxIsserlisOrder = 12;

// ---- set partitions ----

/// Set partitions of {0..n-1} as restricted-growth strings: a[0] = 0 and
/// a[i] ≤ 1 + max(a[0..i-1]).
class SetPartitions {
 public:
  explicit SetPartitions(std::size_t n) : a_(n, 0), max_(n, 0) {}

  std::size_t size() const noexcept { return a_.size(); }
  std::size_t block_count() const noexcept { return a_.empty() ? 0 : max_.back() + 1; }
  const std::vector<std::size_t>& labels() const noexcept { return a_; }

  std::vector<std::vector<std::size_t>> blocks() const {
    std::vector<std::vector<std::size_t>> out(block_count());
    for (std::size_t i = 0; i < a_.size(); ++i) out[a_[i]].push_back(i);
    return out;
  }

  /// Advances to the next partition; false once every partition was visited.
  bool next() {
    for (std::size_t i = a_.size(); i-- > 1;) {
      if (a_[i] <= max_[i - 1]) {
        ++a_[i];
        max_[i] = std::max(max_[i - 1], a_[i]);
        for (std::size_t j = i + 1; j < a_.size(); ++j) {
          a_[j] = 0;
          max_[j] = max_[i];
        }
        return true;
      }
    }
    return false;
  }

 private:
  std::vector<std::size_t> a_;
  std::vector<std::size_t> max_;  // max_[i] = max(a[0..i])
};

template <typename F>
void for_each_partition(std::size_t n, F&& f) {
  SetPartitions p(n);
  do f(p);
  while (p.next());
}

/// Oracle over sub-multisets of the index list: receives the selected labels
/// in their original order.
template <Scalar T>
using SubsetOracle = std::function<T(const std::vector<std::size_t>&)>;

namespace detail {

inline void require_partition_size(std::size_t n) {
  if (n > kMaxPartitionSet)
    throw CapacityError("partition sums support at most " + std::to_string(kMaxPartitionSet) + " indices");
}

/// Memoizes an oracle by position subset.
template <Scalar T>
class SubsetCache {
 public:
  SubsetCache(const SubsetOracle<T>& oracle, const std::vector<std::size_t>& labels)
      : oracle_(oracle), labels_(labels) {}
  const T& operator()(const std::vector<std::size_t>& positions) {
    std::uint32_t key = 0;
    for (auto p : positions) key |= 1u << p;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<std::size_t> sel;
    for (auto p : positions) sel.push_back(labels_[p]);
    return cache_.emplace(key, oracle_(sel)).first->second;
  }

 private:
  const SubsetOracle<T>& oracle_;
  const std::vector<std::size_t>& labels_;
  std::unordered_map<std::uint32_t, T> cache_;
};

}  // namespace detail

/// κ(X_a : a ∈ A) = Σ_π (|π|-1)! (-1)^{|π|-1} ∏_{B∈π} E[∏_{b∈B} X_b].
template <Scalar T>
T joint_cumulant(const SubsetOracle<T>& moment, const std::vector<std::size_t>& a) {
  detail::require_partition_size(a.size());
  if (a.empty()) return T(0);
  detail::SubsetCache<T> cache(moment, a);
  std::vector<T> coeff(a.size() + 1, T(1));  // (b-1)! (-1)^{b-1}
  for (std::size_t b = 2; b <= a.size(); ++b) coeff[b] = coeff[b - 1] * T(-static_cast<long>(b - 1));
  T sum(0);
  for_each_partition(a.size(), [&](const SetPartitions& p) {
    T term = coeff[p.block_count()];
    for (const auto& block : p.blocks()) term *= cache(block);
    sum += term;
  });
  return sum;
}

/// E[∏_{a∈A} X_a] = Σ_π ∏_{B∈π} κ(X_b : b ∈ B).
template <Scalar T>
T cumulants_to_moments(const SubsetOracle<T>& cumulant, const std::vector<std::size_t>& a) {
  detail::require_partition_size(a.size());
  if (a.empty()) return T(1);
  detail::SubsetCache<T> cache(cumulant, a);
  T sum(0);
  for_each_partition(a.size(), [&](const SetPartitions& p) {
    T term(1);
    for (const auto& block : p.blocks()) term *= cache(block);
    sum += term;
  });
  return sum;
}

// ---- Gaussian moments ----

/// E[∏ X_{i}] for a centered Gaussian with covariance C: the sum over perfect
/// matchings of the index multiset.
template <Scalar T>
T isserlis_moment(const Matrix<T>& c, const std::vector<std::size_t>& idx) {
  if (idx.size() > kMaxIsserlisOrder)
    throw CapacityError("Isserlis moments support at most " + std::to_string(kMaxIsserlisOrder) + " factors");
  for (auto i : idx)
    if (i >= c.rows() || i >= c.cols()) throw DimensionError("moment index outside the covariance");
  if (idx.size() % 2) return T(0);
  std::unordered_map<std::uint32_t, T> memo;
  auto rec = [&](auto&& self, std::uint32_t left) -> T {
    if (left == 0) return T(1);
    if (auto it = memo.find(left); it != memo.end()) return it->second;
    const int first = std::countr_zero(left);
    const std::uint32_t rest = left & ~(1u << first);
    T sum(0);
    for (std::uint32_t r = rest; r; r &= r - 1) {
      const int j = std::countr_zero(r);
      const T& cij = c(idx[first], idx[j]);
      if (!ScalarTraits<T>::is_zero(cij)) sum += cij * self(self, rest & ~(1u << j));
    }
    return memo.emplace(left, sum).first->second;
  };
  return rec(rec, (1u << idx.size()) - 1);
}

/// Σ over full cycles σ of {0..k-1} of ∏_α C(x_α, x_{σ(α)}).
template <Scalar T>
T cyp(const Matrix<T>& c, const std::vector<std::size_t>& points) {
  const std::size_t k = points.size();
  if (k == 0) throw ArgumentError("cyp needs at least one point");
  if (k > 10) throw CapacityError("cyp supports at most 10 points");
  for (auto p : points)
    if (p >= c.rows() || p >= c.cols()) throw DimensionError("point outside the covariance");
  // A full cycle is 0 → π(1) → … → π(k-1) → 0 for a permutation π of 1..k-1.
  std::vector<std::size_t> order(k - 1);
  std::iota(order.begin(), order.end(), 1);
  T sum(0);
  do {
    T term = c(points[0], points[order.empty() ? 0 : order[0]]);
    for (std::size_t a = 0; a + 1 < order.size(); ++a) term *= c(points[order[a]], points[order[a + 1]]);
    if (!order.empty()) term *= c(points[order.back()], points[0]);
    sum += term;
  } while (std::next_permutation(order.begin(), order.end()));
  return sum;
}

enum class GaussianKind { real, complex };

/// κ(φ²_{x_1}, …, φ²_{x_k}): ½ cyp(C) for a real field with covariance C/2,
/// cyp(C) for |φ|² of a complex field with covariance C.
template <Scalar T>
T squared_gaussian_cumulant(const Matrix<T>& c, const std::vector<std::size_t>& points, GaussianKind kind) {
  const T v = cyp(c, points);
  return kind == GaussianKind::real ? T(v / T(2)) : v;
}

/// The same cumulant from Isserlis moments and partition inversion. The real
/// field has covariance C/2; the complex field Z = X + iY with a real kernel
/// is the 2k-dimensional real vector (X, Y) with covariance ½ diag(C, C).
template <Scalar T>
T squared_gaussian_cumulant_isserlis(const Matrix<T>& c, const std::vector<std::size_t>& points,
                                     GaussianKind kind) {
  const std::size_t n = c.rows();
  const T half = T(1) / T(2);
  if (kind == GaussianKind::real) {
    const Matrix<T> cov = half * c;
    SubsetOracle<T> moment = [&](const std::vector<std::size_t>& sel) {
      std::vector<std::size_t> idx;
      for (auto s : sel) idx.insert(idx.end(), {s, s});
      return isserlis_moment(cov, idx);
    };
    return joint_cumulant(moment, points);
  }
  Matrix<T> cov(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cov(i, j) = cov(n + i, n + j) = half * c(i, j);
  SubsetOracle<T> moment = [&](const std::vector<std::size_t>& sel) {
    // ∏ (X_s² + Y_s²) expanded over which factors take the Y part.
    T sum(0);
    for (std::uint32_t ys = 0; ys < (1u << sel.size()); ++ys) {
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < sel.size(); ++k) {
        const std::size_t at = (ys >> k) & 1u ? n + sel[k] : sel[k];
        idx.insert(idx.end(), {at, at});
      }
      sum += isserlis_moment(cov, idx);
    }
    return sum;
  };
  return joint_cumulant(moment, points);
}

// ---- discrete Gaussian free field ----

/// Box {0..s_0-1} × … × {0..s_{d-1}-1}; vertex id = Σ c_i · Π_{j<i} s_j.
struct GridSpec {
  std::vector<std::size_t> sides;
  std::vector<bool> boundary;  // indexed by vertex id

  std::size_t dimension() const noexcept { return sides.size(); }
  std::size_t vertex_count() const {
    return std::accumulate(sides.begin(), sides.end(), std::size_t{1}, std::multiplies<>());
  }

  std::vector<std::size_t> coordinates(std::size_t v) const {
    std::vector<std::size_t> c(sides.size());
    for (std::size_t i = 0; i < sides.size(); ++i) {
      c[i] = v % sides[i];
      v /= sides[i];
    }
    return c;
  }

  std::size_t vertex(const std::vector<std::size_t>& c) const {
    if (c.size() != sides.size()) throw DimensionError("coordinate dimension mismatch");
    std::size_t v = 0, stride = 1;
    for (std::size_t i = 0; i < sides.size(); ++i) {
      if (c[i] >= sides[i]) throw RangeError("coordinate outside the grid");
      v += c[i] * stride;
      stride *= sides[i];
    }
    return v;
  }

  /// v + e_dir, or nothing when it leaves the box.
  std::optional<std::size_t> step(std::size_t v, std::size_t dir) const {
    auto c = coordinates(v);
    if (c[dir] + 1 >= sides[dir]) return std::nullopt;
    ++c[dir];
    return vertex(c);
  }

  /// Box whose boundary is every vertex with an extreme coordinate.
  static GridSpec all_sides(std::vector<std::size_t> sides) {
    GridSpec g{std::move(sides), {}};
    if (g.sides.empty()) throw DimensionError("grid needs at least one dimension");
    for (auto s : g.sides)
      if (s == 0) throw DimensionError("grid sides must be positive");
    g.boundary.assign(g.vertex_count(), false);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      const auto c = g.coordinates(v);
      for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] == 0 || c[i] + 1 == g.sides[i]) g.boundary[v] = true;
    }
    return g;
  }
};

template <Scalar T>
struct DgffCovariance {
  Matrix<T> cov;                                // over interior vertices
  std::vector<std::size_t> interior;            // row → vertex
  std::vector<std::optional<std::size_t>> row;  // vertex → row

  /// Covariance between any two vertices; zero on the boundary.
  T operator()(std::size_t u, std::size_t v) const {
    const auto ru = row.at(u), rv = row.at(v);
    return ru && rv ? cov(*ru, *rv) : T(0);
  }
};

/// Covariance of the field with density ∝ exp(-½ Σ (1/2d) φ_i (-Δ)(i,j) φ_j),
/// Δ the box's graph Laplacian restricted to the interior.
template <Scalar T>
DgffCovariance<T> dgff_covariance(const GridSpec& grid) {
  const std::size_t n = grid.vertex_count();
  if (grid.boundary.size() != n) throw DimensionError("boundary mask does not cover the grid");
  DgffCovariance<T> out;
  out.row.assign(n, std::nullopt);
  for (std::size_t v = 0; v < n; ++v)
    if (!grid.boundary[v]) {
      out.row[v] = out.interior.size();
      out.interior.push_back(v);
    }
  if (out.interior.empty()) throw BoundaryError("grid has no interior vertices");
  if (out.interior.size() == n) throw BoundaryError("boundary set is empty; the restricted Laplacian is singular");
  const std::size_t m = out.interior.size();
  const T scale = T(1) / T(static_cast<long>(2 * grid.dimension()));
  Matrix<T> prec(m, m);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t dir = 0; dir < grid.dimension(); ++dir) {
      const auto w = grid.step(v, dir);
      if (!w) continue;
      const auto rv = out.row[v], rw = out.row[*w];
      if (rv) prec(*rv, *rv) += scale;
      if (rw) prec(*rw, *rw) += scale;
      if (rv && rw) {
        prec(*rv, *rw) -= scale;
        prec(*rw, *rv) -= scale;
      }
    }
  try {
    out.cov = inverse(prec);
  } catch (const SingularityError&) {
    throw BoundaryError("restricted Laplacian is singular");
  }
  return out;
}

/// Gradient components ∇_i φ(v) = φ(v + e_i) - φ(v) at the given points and
/// their covariance. Component (a, i) sits at row a·d + i.
template <Scalar T>
Matrix<T> gradient_covariance(const GridSpec& grid, const DgffCovariance<T>& g,
                              const std::vector<std::size_t>& points) {
  const std::size_t d = grid.dimension();
  std::vector<std::pair<std::size_t, std::size_t>> comp;  // (v + e_i, v)
  for (auto v : points) {
    if (v >= grid.vertex_count()) throw RangeError("point outside the grid");
    if (grid.boundary[v]) throw RangeError("point " + std::to_string(v) + " lies on the boundary");
    for (std::size_t i = 0; i < d; ++i) {
      const auto w = grid.step(v, i);
      if (!w) throw RangeError("gradient at vertex " + std::to_string(v) + " leaves the grid");
      comp.emplace_back(*w, v);
    }
  }
  Matrix<T> k(comp.size(), comp.size());
  for (std::size_t a = 0; a < comp.size(); ++a)
    for (std::size_t b = 0; b < comp.size(); ++b) {
      const auto [x1, x0] = comp[a];
      const auto [y1, y0] = comp[b];
      k(a, b) = g(x1, y1) - g(x1, y0) - g(x0, y1) + g(x0, y0);
    }
  return k;
}

/// κ(Φ(v_1), …, Φ(v_k)) with Φ(v) = Σ_i (∇_i φ(v))², by multilinearity over
/// direction tuples: each term is 2^{k-1} cyp of the gradient covariance.
template <Scalar T>
T gradient_squared_cumulant(const GridSpec& grid, const DgffCovariance<T>& g, const std::vector<std::size_t>& points) {
  const std::size_t k = points.size(), d = grid.dimension();
  if (k == 0) throw ArgumentError("need at least one point");
  const Matrix<T> kc = gradient_covariance(grid, g, points);
  T pow2(1);
  for (std::size_t j = 1; j < k; ++j) pow2 *= T(2);
  T sum(0);
  std::vector<std::size_t> dirs(k, 0);
  for (;;) {
    std::vector<std::size_t> rows(k);
    for (std::size_t a = 0; a < k; ++a) rows[a] = a * d + dirs[a];
    sum += cyp(kc, rows);
    std::size_t a = 0;
    while (a < k && ++dirs[a] == d) dirs[a++] = 0;
    if (a == k) break;
  }
  return pow2 * sum;
}

/// The same cumulant through Isserlis moments of Φ and partition inversion.
template <Scalar T>
T gradient_squared_cumulant_isserlis(const GridSpec& grid, const DgffCovariance<T>& g,
                                     const std::vector<std::size_t>& points) {
  const std::size_t k = points.size(), d = grid.dimension();
  if (k == 0) throw ArgumentError("need at least one point");
  const Matrix<T> kc = gradient_covariance(grid, g, points);
  std::vector<std::size_t> labels(k);
  std::iota(labels.begin(), labels.end(), 0);
  SubsetOracle<T> moment = [&](const std::vector<std::size_t>& sel) {
    T sum(0);
    std::vector<std::size_t> dirs(sel.size(), 0);
    for (;;) {
      std::vector<std::size_t> idx;
      for (std::size_t a = 0; a < sel.size(); ++a) idx.insert(idx.end(), 2, sel[a] * d + dirs[a]);
      sum += isserlis_moment(kc, idx);
      std::size_t a = 0;
      while (a < sel.size() && ++dirs[a] == d) dirs[a++] = 0;
      if (a == sel.size()) break;
    }
    return sum;
  };
  return joint_cumulant(moment, labels);
}

template <Scalar T>
T gradient_squared_cumulant(const GridSpec& grid, const std::vector<std::size_t>& points) {
  return gradient_squared_cumulant(grid, dgff_covariance<T>(grid), points);
}

// ---- tables ----

/// κ(φ²_{v_1}, …, φ²_{v_k}) for the field itself: the field covariance G is
/// C/2 with C = 2G, so the value is ½ cyp(2G).
template <Scalar T>
T field_squared_cumulant(const DgffCovariance<T>& g, const std::vector<std::size_t>& points) {
  std::vector<std::size_t> rows;
  for (auto v : points) {
    const auto r = g.row.at(v);
    if (!r) throw RangeError("point " + std::to_string(v) + " lies on the boundary");
    rows.push_back(*r);
  }
  return squared_gaussian_cumulant(T(2) * g.cov, rows, GaussianKind::real);
}

enum class TableQuantity { field_squared, gradient_squared };

inline const char* to_string(TableQuantity q) {
  return q == TableQuantity::field_squared ? "field_squared" : "gradient_squared";
}

template <Scalar T>
struct CumulantRow {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> points;  // coordinates
  T value = T(0);
};

/// Cumulants for k = 1..k_max at points spaced `s` apart along direction 0
/// from `anchor`, for every spacing that keeps all points (and their forward
/// neighbours) inside the interior.
template <Scalar T>
std::vector<CumulantRow<T>> cumulant_table(const GridSpec& grid, const DgffCovariance<T>& cov, TableQuantity q,
                                           std::size_t k_max, std::vector<std::size_t> anchor) {
  std::vector<CumulantRow<T>> rows;
  auto usable = [&](const std::vector<std::size_t>& c) {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] + 1 >= grid.sides[i]) return false;
    return !grid.boundary[grid.vertex(c)];
  };
  for (std::size_t k = 1; k <= k_max; ++k) {
    for (std::size_t s = (k == 1 ? 0 : 1); s < grid.sides[0]; ++s) {
      std::vector<std::vector<std::size_t>> coords;
      std::vector<std::size_t> ids;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        auto c = anchor;
        c[0] += j * s;
        ok = usable(c);
        if (ok) {
          coords.push_back(c);
          ids.push_back(grid.vertex(c));
        }
      }
      if (!ok) break;
      const T v = q == TableQuantity::field_squared ? field_squared_cumulant(cov, ids)
                                                    : gradient_squared_cumulant(grid, cov, ids);
      rows.push_back({k, coords, v});
      if (k == 1) break;
    }
  }
  return rows;
}

template <Scalar T>
std::vector<CumulantRow<T>> gradient_cumulant_table(const GridSpec& grid, std::size_t k_max,
                                                    std::vector<std::size_t> anchor) {
  return cumulant_table(grid, dgff_covariance<T>(grid), TableQuantity::gradient_squared, k_max, std::move(anchor));
}

inline std::string format_point(const std::vector<std::size_t>& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

template <Scalar T>
std::string to_tsv(const std::vector<CumulantRow<T>>& rows) {
  std::ostringstream out;
  out << "k\tpoints\tvalue\n";
  for (const auto& r : rows) {
    out << r.k << '\t';
    for (std::size_t i = 0; i < r.points.size(); ++i) out << (i ? " " : "") << format_point(r.points[i]);
    out << '\t' << ScalarTraits<T>::to_string(r.value) << '\n';
  }
  return out.str();
}

// ---- truncated formal power series ----

/// Multivariate power series in n variables truncated at total degree D.
template <Scalar T>
class TruncatedSeries {
 public:
  using Exponent = std::vector<unsigned>;

  TruncatedSeries(std::size_t vars, unsigned degree) : n_(vars), d_(degree) {}

  static TruncatedSeries constant(std::size_t vars, unsigned degree, const T& c) {
    TruncatedSeries s(vars, degree);
    s.set({}, c);
    return s;
  }

  std::size_t variables() const noexcept { return n_; }
  unsigned degree() const noexcept { return d_; }
  const std::map<Exponent, T>& coefficients() const noexcept { return c_; }

  T coefficient(Exponent e) const {
    e.resize(n_, 0);
    auto it = c_.find(e);
    return it == c_.end() ? T(0) : it->second;
  }

  void set(Exponent e, const T& v) {
    e.resize(n_, 0);
    if (std::accumulate(e.begin(), e.end(), 0u) > d_) return;
    if (ScalarTraits<T>::is_zero(v))
      c_.erase(e);
    else
      c_[e] = v;
  }

  TruncatedSeries operator+(const TruncatedSeries& o) const {
    check(o);
    TruncatedSeries r = *this;
    for (const auto& [e, v] : o.c_) r.set(e, r.coefficient(e) + v);
    return r;
  }

  TruncatedSeries operator-() const {
    TruncatedSeries r(n_, d_);
    for (const auto& [e, v] : c_) r.c_[e] = -v;
    return r;
  }

  TruncatedSeries operator*(const TruncatedSeries& o) const {
    check(o);
    TruncatedSeries r(n_, d_);
    for (const auto& [ea, va] : c_)
      for (const auto& [eb, vb] : o.c_) {
        Exponent e(n_);
        for (std::size_t i = 0; i < n_; ++i) e[i] = ea[i] + eb[i];
        r.set(e, r.coefficient(e) + va * vb);
      }
    return r;
  }

  TruncatedSeries scaled(const T& s) const {
    TruncatedSeries r(n_, d_);
    for (const auto& [e, v] : c_) r.set(e, v * s);
    return r;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.c_ == b.c_;
  }

 private:
  void check(const TruncatedSeries& o) const {
    if (o.n_ != n_ || o.d_ != d_) throw DimensionError("series shapes differ");
  }

  std::size_t n_;
  unsigned d_;
  std::map<Exponent, T> c_;
};

/// exp(K) for K with zero constant term: Σ_{j≤D} K^j / j!.
template <Scalar T>
TruncatedSeries<T> exp(const TruncatedSeries<T>& k) {
  if (!ScalarTraits<T>::is_zero(k.coefficient({})))
    throw EvaluationError("series exponential needs a zero constant term");
  auto result = TruncatedSeries<T>::constant(k.variables(), k.degree(), T(1));
  auto power = result;
  T fact(1);
  for (unsigned j = 1; j <= k.degree(); ++j) {
    power = power * k;
    fact *= T(static_cast<long>(j));
    result = result + power.scaled(T(1) / fact);
  }
  return result;
}

/// 1/G for G with nonzero constant term g₀: (1/g₀) Σ_j (1 - G/g₀)^j.
template <Scalar T>
TruncatedSeries<T> reciprocal(const TruncatedSeries<T>& g) {
  const T g0 = g.coefficient({});
  if (ScalarTraits<T>::is_zero(g0)) throw EvaluationError("series reciprocal needs a nonzero constant term");
  const auto one = TruncatedSeries<T>::constant(g.variables(), g.degree(), T(1));
  const auto u = one + (-g.scaled(T(1) / g0));
  auto result = one, power = one;
  for (unsigned j = 1; j <= g.degree(); ++j) {
    power = power * u;
    result = result + power;
  }
  return result.scaled(T(1) / g0);
}

/// K(t) = Σ_{α} κ_α t^α / α! from joint cumulants, where κ_α is the cumulant of
/// the multiset with α_i copies of variable i.
template <Scalar T>
TruncatedSeries<T> cumulant_series(std::size_t vars, unsigned degree, const SubsetOracle<T>& cumulant) {
  TruncatedSeries<T> k(vars, degree);
  std::vector<unsigned> e(vars, 0);
  for (;;) {
    std::size_t i = 0;
    for (; i < vars; ++i) {
      ++e[i];
      if (std::accumulate(e.begin(), e.end(), 0u) <= degree) break;
      e[i] = 0;
    }
    if (i == vars) break;
    std::vector<std::size_t> labels;
    T fact(1);
    for (std::size_t v = 0; v < vars; ++v)
      for (unsigned c = 0; c < e[v]; ++c) {
        labels.push_back(v);
        fact *= T(static_cast<long>(c + 1));
      }
    k.set(e, cumulant(labels) / fact);
  }
  return k;
}

}  // namespace berezin
