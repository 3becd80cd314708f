#pragma once

// Period-2 Ehrhart structure of M(n,.): recovery of the even/odd polynomial
// branches, the rational generating series over (1-z^2)^{d+1}, h-vectors,
// and the vertex set of the unit polytope.

#include "symcount/core.hpp"

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace symcount {

enum class Parity { even, odd };

inline constexpr Parity parity_of(int l) { return l % 2 == 0 ? Parity::even : Parity::odd; }

/// Coefficients are stored lowest degree first.
struct Quasipolynomial2 {
  int n = 0;
  int d = 0;
  std::vector<Rational> even_branch;
  std::vector<Rational> odd_branch;

  const std::vector<Rational>& branch(Parity par) const {
    return par == Parity::even ? even_branch : odd_branch;
  }
};

/// sum_l M(n,l) z^l = (sum_i numerator[i] z^i) / (1 - z^2)^denominator_exponent.
struct EhrhartSeries {
  int n = 0;
  std::vector<BigInt> numerator;
  int denominator_exponent = 0;
};

/// M(n, 2m + parity) = sum_{i=0}^{d} h[d-i] * C(m+i, d).
struct HVector {
  Parity parity = Parity::even;
  std::vector<BigInt> h;
};

namespace poly {

inline Rational evaluate(std::span<const Rational> coeffs, const Rational& x) {
  Rational acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Newton divided differences through (xs[i], ys[i]), converted to the
/// monomial basis. xs must be distinct.
inline std::vector<Rational> interpolate(std::span<const Rational> xs, std::span<const Rational> ys) {
  const std::size_t k = xs.size();
  std::vector<Rational> table(ys.begin(), ys.end());
  for (std::size_t level = 1; level < k; ++level)
    for (std::size_t i = k - 1; i >= level; --i)
      table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level]);

  // Horner over the Newton basis: P = c_0 + (x - x_0)(c_1 + (x - x_1)(...)).
  std::vector<Rational> out(k == 0 ? 0 : 1, Rational(0));
  for (std::size_t t = k; t-- > 0;) {
    std::vector<Rational> next(out.size() + 1, Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
      next[i + 1] += out[i];
      next[i] -= out[i] * xs[t];
    }
    next[0] += table[t];
    out = std::move(next);
  }
  out.resize(k);
  return out;
}

}  // namespace poly

namespace detail {

inline void require_polytope_n(int n) {
  if (n < 3) throw Error(ErrorKind::domain_error, "Ehrhart data needs n >= 3");
}

// l -> M(n,l) with duplicate and instance checks.
inline std::map<int, BigInt> index_values(int n, std::span<const CountValue> values) {
  std::map<int, BigInt> out;
  for (const auto& cv : values) {
    if (cv.instance.n != n)
      throw Error(ErrorKind::invalid_argument, "value for n=" + std::to_string(cv.instance.n) +
                                                   " passed for n=" + std::to_string(n));
    auto [it, inserted] = out.emplace(cv.instance.l, cv.value);
    if (!inserted && it->second != cv.value)
      throw Error(ErrorKind::non_polynomial_data,
                  "conflicting values at l=" + std::to_string(cv.instance.l));
  }
  return out;
}

inline BigInt integer_or_throw(const Rational& r, const std::string& where) {
  if (denominator(r) != 1)
    throw Error(ErrorKind::non_integer_value, where + " evaluates to " + r.str());
  return numerator(r);
}

}  // namespace detail

/// Recovers both branches from exact counts: the first d+1 points of each
/// parity class are interpolated and any further points are held out and
/// checked.
inline Quasipolynomial2 interpolate_quasipolynomial(int n, std::span<const CountValue> values) {
  detail::require_polytope_n(n);
  const int d = polytope_dimension(n);
  const auto indexed = detail::index_values(n, values);

  Quasipolynomial2 out{n, d, {}, std::vector<Rational>(d + 1, Rational(0))};
  auto fit = [&](Parity par) {
    std::vector<Rational> xs;
    std::vector<Rational> ys;
    std::vector<std::pair<int, BigInt>> held_out;
    for (const auto& [l, v] : indexed) {
      if (parity_of(l) != par) continue;
      if (xs.size() < static_cast<std::size_t>(d + 1)) {
        xs.emplace_back(l);
        ys.emplace_back(v);
      } else {
        held_out.emplace_back(l, v);
      }
    }
    if (xs.size() < static_cast<std::size_t>(d + 1))
      throw Error(ErrorKind::insufficient_points,
                  std::string(par == Parity::even ? "even" : "odd") + " branch needs " +
                      std::to_string(d + 1) + " points, got " + std::to_string(xs.size()));
    auto coeffs = poly::interpolate(xs, ys);
    for (const auto& [l, v] : held_out) {
      if (poly::evaluate(coeffs, Rational(l)) != Rational(v))
        throw Error(ErrorKind::non_polynomial_data,
                    "held-out point l=" + std::to_string(l) + " disagrees with the fit");
    }
    return coeffs;
  };

  out.even_branch = fit(Parity::even);
  if (n % 2 == 0) {
    out.odd_branch = fit(Parity::odd);
  } else {
    for (const auto& [l, v] : indexed)
      if (l % 2 != 0 && v != 0)
        throw Error(ErrorKind::non_polynomial_data,
                    "odd n with odd l must count zero, got l=" + std::to_string(l));
  }
  return out;
}

/// Exact M(n,l) from the parity-matching branch.
inline CountValue evaluate(const Quasipolynomial2& qp, int l) {
  if (l < 0) throw Error(ErrorKind::invalid_argument, "l must be non-negative");
  const Rational v = poly::evaluate(qp.branch(parity_of(l)), Rational(l));
  BigInt value = detail::integer_or_throw(v, "quasipolynomial at l=" + std::to_string(l));
  if (value < 0) throw Error(ErrorKind::non_integer_value, "negative count at l=" + std::to_string(l));
  return CountValue{Instance{qp.n, l}, value, Method::quasipolynomial};
}

/// Numerator f_n(z) = (sum_l M(n,l) z^l)(1 - z^2)^{d+1}, truncated. The
/// values must cover l = 0..L consecutively with L >= 2(d+1); every product
/// coefficient from 2(d+1) to L must vanish.
inline EhrhartSeries series_numerator(int n, std::span<const CountValue> values) {
  detail::require_polytope_n(n);
  const int d = polytope_dimension(n);
  const int top = 2 * (d + 1);
  const auto indexed = detail::index_values(n, values);
  int max_l = -1;
  while (indexed.count(max_l + 1) != 0) ++max_l;
  if (max_l < top)
    throw Error(ErrorKind::insufficient_points,
                "series needs l = 0.." + std::to_string(top) + " consecutively");

  std::vector<BigInt> m(max_l + 1);
  for (int l = 0; l <= max_l; ++l) m[l] = indexed.at(l);
  std::vector<BigInt> coeffs(max_l + 1, BigInt(0));
  for (int deg = 0; deg <= max_l; ++deg) {
    BigInt c = 0;
    for (int t = 0; t <= d + 1 && 2 * t <= deg; ++t) {
      const BigInt term = binomial(d + 1, t) * m[deg - 2 * t];
      c += (t % 2 == 0) ? term : BigInt(-term);
    }
    coeffs[deg] = c;
  }
  for (int deg = top; deg <= max_l; ++deg)
    if (coeffs[deg] != 0)
      throw Error(ErrorKind::trailing_nonzero,
                  "numerator coefficient at degree " + std::to_string(deg) + " is " + coeffs[deg].str());
  coeffs.resize(top);
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] < 0)
      throw Error(ErrorKind::negative_entry, "numerator coefficient " + std::to_string(i) + " is negative");
  return EhrhartSeries{n, std::move(coeffs), d + 1};
}

/// Rewrites a numerator over (1-z)^a (1+z)^b as one over (1-z^2)^{d+1}.
inline std::vector<BigInt> canonical_numerator(std::span<const BigInt> numerator, int one_minus_exp,
                                               int one_plus_exp, int d) {
  if (one_minus_exp > d + 1 || one_plus_exp > d + 1 || one_minus_exp < 0 || one_plus_exp < 0)
    throw Error(ErrorKind::invalid_argument, "denominator does not divide (1-z^2)^{d+1}");
  std::vector<BigInt> out(numerator.begin(), numerator.end());
  auto multiply = [&out](int sign) {
    std::vector<BigInt> next(out.size() + 1, BigInt(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
      next[i] += out[i];
      next[i + 1] += sign * out[i];
    }
    out = std::move(next);
  };
  for (int t = one_minus_exp; t < d + 1; ++t) multiply(-1);
  for (int t = one_plus_exp; t < d + 1; ++t) multiply(+1);
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

/// Power-series coefficients M(n,0..max_l) of the series.
inline std::vector<BigInt> expand_series(const EhrhartSeries& series, int max_l) {
  // 1/(1-z^2)^{e} = sum_j C(j+e-1, e-1) z^{2j}.
  const int e = series.denominator_exponent;
  std::vector<BigInt> out(max_l + 1, BigInt(0));
  for (int l = 0; l <= max_l; ++l) {
    for (std::size_t i = 0; i < series.numerator.size() && static_cast<int>(i) <= l; ++i) {
      if ((l - static_cast<int>(i)) % 2 != 0) continue;
      const int j = (l - static_cast<int>(i)) / 2;
      out[l] += series.numerator[i] * binomial(j + e - 1, e - 1);
    }
  }
  return out;
}

inline bool is_palindromic(std::span<const BigInt> coeffs) {
  return std::equal(coeffs.begin(), coeffs.begin() + coeffs.size() / 2, coeffs.rbegin());
}

/// Solves the triangular system in the basis C(m+i, d), m = floor(l/2), from
/// at least d+1 counts of the requested parity.
inline HVector h_vector(int n, Parity parity, std::span<const CountValue> values) {
  detail::require_polytope_n(n);
  const int d = polytope_dimension(n);
  const auto indexed = detail::index_values(n, values);
  std::vector<Rational> ms;
  std::vector<Rational> ys;
  for (const auto& [l, v] : indexed) {
    if (parity_of(l) != parity) continue;
    ms.emplace_back(l / 2);
    ys.emplace_back(v);
  }
  if (ms.size() < static_cast<std::size_t>(d + 1))
    throw Error(ErrorKind::insufficient_points, "h-vector needs " + std::to_string(d + 1) + " values");
  ms.resize(d + 1);
  ys.resize(d + 1);
  const auto branch = poly::interpolate(ms, ys);

  // At m, only h_0..h_m contribute: h_m = P(m) - sum_{t<m} h_t C(m+d-t, d).
  HVector out{parity, std::vector<BigInt>(d + 1, BigInt(0))};
  for (int m = 0; m <= d; ++m) {
    Rational rest = poly::evaluate(branch, Rational(m));
    for (int t = 0; t < m; ++t) rest -= Rational(out.h[t] * binomial(m + d - t, d));
    out.h[m] = detail::integer_or_throw(rest, "h_" + std::to_string(m));
    if (out.h[m] < 0)
      throw Error(ErrorKind::negative_entry, "h_" + std::to_string(m) + " = " + out.h[m].str());
  }
  return out;
}

/// A symmetric n x n matrix, row-major.
struct VertexMatrix {
  int n = 0;
  std::vector<Rational> entries;

  const Rational& at(int j, int k) const { return entries[static_cast<std::size_t>(j) * n + k]; }
};

/// Vertices of the polytope of symmetric non-negative zero-diagonal matrices
/// with unit row sums: the covers of {0..n-1} by disjoint edges (weight 1)
/// and odd cycles (weight 1/2).
inline std::vector<VertexMatrix> polytope_vertices(int n) {
  if (n < 3 || n > 8) throw Error(ErrorKind::domain_error, "vertex enumeration supports 3 <= n <= 8");
  std::vector<VertexMatrix> out;
  std::vector<Rational> m(static_cast<std::size_t>(n) * n, Rational(0));
  std::vector<bool> used(n, false);
  auto set = [&](int a, int b, const Rational& w) {
    m[a * n + b] = w;
    m[b * n + a] = w;
  };

  auto cover = [&](auto&& self) -> void {
    int v = 0;
    while (v < n && used[v]) ++v;
    if (v == n) {
      out.push_back(VertexMatrix{n, m});
      return;
    }
    std::vector<int> free;
    for (int u = v + 1; u < n; ++u)
      if (!used[u]) free.push_back(u);
    used[v] = true;

    for (int u : free) {
      used[u] = true;
      set(v, u, Rational(1));
      self(self);
      set(v, u, Rational(0));
      used[u] = false;
    }

    // Odd cycles v -> path through 2t more vertices -> v, one orientation each.
    const Rational half(1, 2);
    const int f = static_cast<int>(free.size());
    for (int mask = 1; mask < (1 << f); ++mask) {
      if (__builtin_popcount(mask) % 2 != 0) continue;
      std::vector<int> path;
      for (int i = 0; i < f; ++i)
        if ((mask >> i) & 1) path.push_back(free[i]);
      std::sort(path.begin(), path.end());
      do {
        if (path.front() > path.back()) continue;
        for (int u : path) used[u] = true;
        int prev = v;
        for (int u : path) {
          set(prev, u, half);
          prev = u;
        }
        set(prev, v, half);
        self(self);
        prev = v;
        for (int u : path) {
          set(prev, u, Rational(0));
          prev = u;
        }
        set(prev, v, Rational(0));
        for (int u : path) used[u] = false;
      } while (std::next_permutation(path.begin(), path.end()));
    }
    used[v] = false;
  };
  cover(cover);
  return out;
}

/// Exact rank of {v - v_0} over the upper-triangle coordinates.
inline int affine_rank(std::span<const VertexMatrix> vertices) {
  if (vertices.size() < 2) return 0;
  const int n = vertices.front().n;
  std::vector<std::vector<Rational>> rows;
  for (std::size_t t = 1; t < vertices.size(); ++t) {
    std::vector<Rational> row;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) row.push_back(vertices[t].at(j, k) - vertices[0].at(j, k));
    rows.push_back(std::move(row));
  }
  const std::size_t cols = rows.front().size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][c] == 0) continue;
      const Rational factor = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= factor * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace symcount
