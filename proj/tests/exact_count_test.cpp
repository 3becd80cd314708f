#include "oracles.hpp"

#include "symcount/counting.hpp"
#include "symcount/exact_count.hpp"

#include <gtest/gtest.h>

namespace symcount {
namespace {

TEST(Backtracking, MatchesGeneratingFunctionOracle) {
  for (int n = 1; n <= 6; ++n)
    for (int l = 0; l <= (n <= 4 ? 9 : 5); ++l) {
      const Instance inst{n, l};
      EXPECT_EQ(count_backtracking(inst).value, oracle::generating_function_count(inst)) << n << "," << l;
    }
}

TEST(Backtracking, SmallKnownValues) {
  EXPECT_EQ(count_backtracking({4, 1}).value, 3);
  EXPECT_EQ(count_backtracking({4, 2}).value, 6);
  EXPECT_EQ(count_backtracking({3, 6}).value, 1);
  EXPECT_EQ(count_backtracking({3, 5}).value, 0);
  EXPECT_EQ(count_backtracking({5, 2}).value, 22);
  EXPECT_EQ(count_backtracking({2, 7}).value, 1);
  EXPECT_EQ(count_backtracking({1, 0}).value, 1);
  EXPECT_EQ(count_backtracking({1, 3}).value, 0);
}

TEST(Backtracking, OddTotalIsEmptyWithoutSearch) {
  EXPECT_EQ(count_backtracking({5, 3}, 1).value, 0);
  EXPECT_EQ(count_backtracking({7, 1}, 1).value, 0);
}

TEST(Backtracking, BudgetIsEnforced) {
  try {
    count_backtracking({6, 8}, 100);
    FAIL() << "expected BudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget_exceeded);
  }
  EXPECT_THROW(count_backtracking({4, 2}, 0), Error);
}

TEST(Backtracking, RejectsInvalidInstances) {
  EXPECT_THROW(count_backtracking({0, 2}), Error);
  EXPECT_THROW(count_backtracking({3, -1}), Error);
}

TEST(Witnesses, AreSymmetricZeroDiagonalAndMatchBruteForce) {
  for (int n = 2; n <= 4; ++n)
    for (int l = 0; l <= 4; ++l) {
      const Instance inst{n, l};
      std::vector<std::vector<int>> seen;
      detail::for_each_matrix(inst, [&](const std::vector<int>& m) { seen.push_back(m); });
      for (const auto& m : seen)
        for (int j = 0; j < n; ++j) {
          EXPECT_EQ(m[j * n + j], 0);
          int row = 0;
          for (int k = 0; k < n; ++k) {
            EXPECT_EQ(m[j * n + k], m[k * n + j]);
            EXPECT_GE(m[j * n + k], 0);
            row += m[j * n + k];
          }
          EXPECT_EQ(row, l);
        }
      auto brute = oracle::all_matrices(inst);
      std::sort(seen.begin(), seen.end());
      std::sort(brute.begin(), brute.end());
      EXPECT_EQ(seen, brute) << n << "," << l;
    }
}

TEST(CountExact, PicksACorrectMethod) {
  EXPECT_EQ(count_exact({4, 3}).value, 10);
  EXPECT_EQ(count_exact({4, 3}).method, Method::backtracking);
  const CountValue big = count_exact({7, 12});
  EXPECT_EQ(big.method, Method::modular_crt);
  EXPECT_EQ(big.value, count_crt({7, 12}).value);
}

}  // namespace
}  // namespace symcount
