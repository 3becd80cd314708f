#include "reference_values.hpp"

#include "symcount/counting.hpp"
#include "symcount/ehrhart.hpp"

#include <gtest/gtest.h>

namespace symcount {
namespace {

std::vector<CountValue> counts(int n, int max_l) {
  std::vector<CountValue> out;
  for (int l = 0; l <= max_l; ++l) out.push_back(count_exact({n, l}));
  return out;
}

std::vector<Rational> parse_rationals(const std::vector<std::string_view>& v) {
  std::vector<Rational> out;
  for (auto s : v) out.emplace_back(std::string(s));
  return out;
}

const reference::Branches& branches(int n) {
  for (const auto& b : reference::quasipolynomials())
    if (b.n == n) return b;
  throw std::out_of_range("no reference branch");
}

TEST(Poly, InterpolatesExactly) {
  const std::vector<Rational> xs = {0, 1, 2, 3};
  const std::vector<Rational> ys = {1, 3, 11, 31};  // 1 + x + x^3
  const auto c = poly::interpolate(xs, ys);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0], 1);
  EXPECT_EQ(c[1], 1);
  EXPECT_EQ(c[2], 0);
  EXPECT_EQ(c[3], 1);
}

TEST(Quasipolynomial, RecoversReferenceBranchesForSmallN) {
  for (int n = 3; n <= 6; ++n) {
    const int d = polytope_dimension(n);
    const auto qp = interpolate_quasipolynomial(n, counts(n, 2 * d + 3));
    const auto& ref = branches(n);
    EXPECT_EQ(qp.even_branch, parse_rationals(ref.even)) << n;
    if (ref.odd.empty()) {
      for (const auto& c : qp.odd_branch) EXPECT_EQ(c, 0);
    } else {
      EXPECT_EQ(qp.odd_branch, parse_rationals(ref.odd)) << n;
    }
  }
}

TEST(Quasipolynomial, EvaluatesToExactCounts) {
  const auto values = counts(5, 13);
  const auto qp = interpolate_quasipolynomial(5, values);
  for (int l = 0; l <= 20; ++l) {
    const CountValue cv = evaluate(qp, l);
    EXPECT_EQ(cv.method, Method::quasipolynomial);
    if (l <= 13) {
      EXPECT_EQ(cv.value, values[l].value) << l;
    }
  }
  EXPECT_EQ(evaluate(qp, 8).value, 1980);
}

TEST(Quasipolynomial, ReportsBadInput) {
  auto values = counts(4, 7);
  auto expect_kind = [](ErrorKind kind, auto&& f) {
    try {
      f();
      ADD_FAILURE() << "expected " << to_string(kind);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind) << e.what();
    }
  };
  expect_kind(ErrorKind::insufficient_points, [&] { interpolate_quasipolynomial(4, std::span(values).first(4)); });
  values[7].value += 1;
  expect_kind(ErrorKind::non_polynomial_data, [&] { interpolate_quasipolynomial(4, values); });
  expect_kind(ErrorKind::domain_error, [&] { interpolate_quasipolynomial(2, values); });

  Quasipolynomial2 frac{4, 2, {Rational(1, 2)}, {Rational(1, 2)}};
  expect_kind(ErrorKind::non_integer_value, [&] { evaluate(frac, 2); });

  auto five = counts(5, 13);
  five[3].value = 1;
  expect_kind(ErrorKind::non_polynomial_data, [&] { interpolate_quasipolynomial(5, five); });

  auto series_in = counts(4, 8);
  series_in[8].value += 1;
  expect_kind(ErrorKind::trailing_nonzero, [&] { series_numerator(4, series_in); });
  expect_kind(ErrorKind::insufficient_points, [&] { series_numerator(4, std::span(series_in).first(5)); });
}

TEST(Series, MatchesReferenceAfterCanonicalConversion) {
  for (const auto& ref : reference::series()) {
    if (ref.n > 6) continue;
    const int d = polytope_dimension(ref.n);
    std::vector<BigInt> printed;
    for (auto s : ref.numerator) printed.emplace_back(std::string(s));
    const auto expected = canonical_numerator(printed, ref.one_minus_exp, ref.one_plus_exp, d);
    const auto got = series_numerator(ref.n, counts(ref.n, 2 * (d + 1) + 2));
    EXPECT_EQ(got.numerator, expected) << ref.n;
    EXPECT_EQ(got.denominator_exponent, d + 1);
    EXPECT_TRUE(is_palindromic(got.numerator)) << ref.n;
  }
}

TEST(Series, ExpansionReproducesQuasipolynomial) {
  for (int n = 3; n <= 6; ++n) {
    const int d = polytope_dimension(n);
    const auto values = counts(n, 2 * d + 3);
    const auto qp = interpolate_quasipolynomial(n, values);
    const auto ser = series_numerator(n, values);
    const auto expanded = expand_series(ser, 40);
    for (int l = 0; l <= 40; ++l) EXPECT_EQ(expanded[l], evaluate(qp, l).value) << n << "," << l;
  }
}

TEST(HVector, SmallCases) {
  const auto four = counts(4, 7);
  EXPECT_EQ(h_vector(4, Parity::even, four).h, (std::vector<BigInt>{1, 3, 0}));
  EXPECT_EQ(h_vector(4, Parity::odd, four).h, (std::vector<BigInt>{3, 1, 0}));
  const auto five = counts(5, 13);
  EXPECT_EQ(h_vector(5, Parity::even, five).h, (std::vector<BigInt>{1, 16, 41, 16, 1, 0}));
}

TEST(HVector, ReconstructsBranchValues) {
  for (int n = 4; n <= 6; ++n) {
    const int d = polytope_dimension(n);
    const auto values = counts(n, 2 * d + 3);
    const auto qp = interpolate_quasipolynomial(n, values);
    for (Parity par : {Parity::even, Parity::odd}) {
      const auto h = h_vector(n, par, values);
      for (int m = 0; m <= 15; ++m) {
        BigInt sum = 0;
        for (int i = 0; i <= d; ++i) sum += h.h[d - i] * binomial(m + i, d);
        EXPECT_EQ(sum, evaluate(qp, 2 * m + (par == Parity::odd ? 1 : 0)).value) << n << "," << m;
      }
    }
  }
}

TEST(Vertices, CountsAndDimension) {
  EXPECT_EQ(polytope_vertices(3).size(), 1u);
  EXPECT_EQ(polytope_vertices(4).size(), 3u);
  EXPECT_EQ(polytope_vertices(5).size(), 22u);
  for (int n = 3; n <= 7; ++n) {
    const auto v = polytope_vertices(n);
    EXPECT_EQ(affine_rank(v), polytope_dimension(n)) << n;
    for (const auto& m : v)
      for (int j = 0; j < n; ++j) {
        Rational row = 0;
        for (int k = 0; k < n; ++k) {
          EXPECT_EQ(m.at(j, k), m.at(k, j));
          row += m.at(j, k);
        }
        EXPECT_EQ(row, 1);
        EXPECT_EQ(m.at(j, j), 0);
      }
  }
  EXPECT_THROW(polytope_vertices(9), Error);
}

}  // namespace
}  // namespace symcount
