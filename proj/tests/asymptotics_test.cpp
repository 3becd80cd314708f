#include "reference_values.hpp"

#include "symcount/asymptotics.hpp"
#include "symcount/counting.hpp"

#include <gtest/gtest.h>

#include <random>

namespace symcount {
namespace {

const Real tiny("1e-45");

Real ratio_to_estimate(std::string_view exact, const LogEstimate& e) {
  return exp(log(Real(BigInt(std::string(exact)))) - e.log_value);
}

TEST(Estimates, BinomialMinusNaiveIsConstant) {
  std::mt19937 rng(7);
  const Real c = log(Real(2)) / 2 + Real(3) / 4;
  for (int t = 0; t < 50; ++t) {
    const int n = std::uniform_int_distribution<int>(3, 300)(rng);
    int l = std::uniform_int_distribution<int>(1, 400)(rng);
    if (n % 2 != 0 && l % 2 != 0) ++l;
    const Instance inst{n, l};
    EXPECT_LT(abs(estimate_binomial_form(inst).log_value - estimate_naive(inst).log_value - c), tiny);
  }
  EXPECT_LT(abs(sqrt(Real(2)) * exp(Real(3) / 4) - Real("2.9939")), Real("5e-5"));
}

TEST(Estimates, AgreeWithExactValues) {
  const Real r19 = ratio_to_estimate(reference::m_19_10, estimate_binomial_form({19, 10}));
  EXPECT_GE(r19, Real("1.015"));
  EXPECT_LE(r19, Real("1.025"));
  const Real r9 = ratio_to_estimate(reference::m_9_20, estimate_binomial_form({9, 20}));
  EXPECT_GT(r9, Real("0.9"));
  EXPECT_LT(r9, Real("1.1"));
}

TEST(Estimates, TwoFormsConvergeAsNGrows) {
  Real previous = 1;
  for (int n : {50, 100, 200}) {
    const Instance inst{n, 2 * (n - 1)};
    const Real gap = abs(estimate_saddle_form(inst).log_value - estimate_binomial_form(inst).log_value);
    EXPECT_LT(gap, previous) << n;
    previous = gap;
  }
  const Instance big{1000, 1998};
  EXPECT_LE(abs(estimate_saddle_form(big).log_value - estimate_binomial_form(big).log_value), Real("1e-3"));
}

TEST(Estimates, LargeLambdaFormApproachesSaddleForm) {
  Real previous = 1;
  for (int l : {90, 900, 9000, 90000}) {
    const Instance inst{10, l};
    const Real gap = abs(estimate_big_lambda(inst).log_value - estimate_saddle_form(inst).log_value);
    EXPECT_LT(gap * 50, previous) << l;
    previous = gap;
  }
}

TEST(Estimates, DomainChecks) {
  EXPECT_THROW(estimate_binomial_form({5, 0}), Error);
  EXPECT_THROW(estimate_saddle_form({2, 4}), Error);
  EXPECT_THROW(estimate_big_lambda({5, 3}), Error);
  EXPECT_NO_THROW(estimate_saddle_form({4, 2}));
  EXPECT_NO_THROW(estimate_big_lambda({3, 4}));
  EXPECT_EQ(estimate({4, 2}, formula_from_string("naive")).formula, Formula::naive);
  EXPECT_THROW(formula_from_string("other"), Error);
}

TEST(Delta, KnownValuesStayBelowOne) {
  const Instance i9{9, 20};
  const DeltaValue d9 = conjecture_delta(i9, {i9, BigInt(std::string(reference::m_9_20)), Method::cached});
  EXPECT_LT(abs(d9.delta), 1);
  const Instance i19{19, 10};
  EXPECT_LT(abs(conjecture_delta(i19, {i19, BigInt(std::string(reference::m_19_10)), Method::cached}).delta), 1);
  const Instance i5{5, 2};
  EXPECT_LT(abs(conjecture_delta(i5, {i5, BigInt(22), Method::cached}).delta), 1);
  EXPECT_THROW(conjecture_delta({5, 0}, {{5, 0}, BigInt(1), Method::cached}), Error);
  EXPECT_THROW(conjecture_delta(i5, {{5, 4}, BigInt(22), Method::cached}), Error);
}

TEST(MinEntry, ExactRatios) {
  const ExactCounter count = [](const Instance& i) { return count_exact(i).value; };
  EXPECT_EQ(min_entry_prob_exact({4, 3}, 1, count), Rational(1, 10));
  EXPECT_EQ(min_entry_prob_exact({5, 8}, 0, count), 1);
  EXPECT_EQ(min_entry_prob_exact({5, 8}, 2, count), Rational(1, 1980));
  EXPECT_EQ(min_entry_prob_exact({6, 6}, 3, count), 0);
  Rational previous = 2;
  for (int k = 0; k <= 3; ++k) {
    const Rational p = min_entry_prob_exact({5, 8}, k, count);
    EXPECT_LE(p, previous);
    EXPECT_GE(p, 0);
    EXPECT_LE(p, 1);
    previous = p;
  }
}

TEST(MinEntry, AsymptoticLaw) {
  EXPECT_EQ(min_entry_prob_asymptotic({6, 6}, 0), 1);
  EXPECT_LT(abs(min_entry_prob_asymptotic({6, 2160}, 1) - exp(Real("-0.05"))), tiny);
  EXPECT_LT(min_entry_prob_asymptotic({6, 6}, 3), Real("1e-20"));
  EXPECT_GE(min_entry_prob_asymptotic({6, 6}, 3), 0);
}

}  // namespace
}  // namespace symcount
