#pragma once

// Ground-truth counting of M(n,l) by depth-first assignment of the upper
// triangle. Small instances only; everything else is checked against it.

#include "symcount/core.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace symcount {

inline constexpr std::uint64_t default_node_budget = 100'000'000;

namespace detail {

// Pairs (j,k), j<k, in row-major order. The visitor is called once per
// complete matrix with the upper-triangle entries in pair order.
template <class Visitor>
class Backtracker {
 public:
  Backtracker(const Instance& inst, std::uint64_t budget, Visitor& visit)
      : n_(inst.n), budget_(budget), visit_(visit), residual_(inst.n, inst.l) {
    for (int j = 0; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k) pairs_.emplace_back(j, k);
    entries_.assign(pairs_.size(), 0);
  }

  void run() { descend(0); }

  std::uint64_t nodes() const { return nodes_; }

 private:
  void descend(std::size_t pos) {
    if (pos == pairs_.size()) {
      if (n_ == 0 || residual_[n_ - 1] == 0) visit_(entries_);
      return;
    }
    const auto [j, k] = pairs_[pos];
    if (k == j + 1) {
      // Starting row j: the entries still to come must be able to absorb it.
      std::int64_t room = 0;
      for (int t = j + 1; t < n_; ++t) room += residual_[t];
      if (residual_[j] > room) return;
    }
    int lo = 0;
    int hi = std::min(residual_[j], residual_[k]);
    if (k == n_ - 1) {
      // Last entry of row j is forced to close the row.
      if (residual_[j] > residual_[k]) return;
      lo = hi = residual_[j];
    }
    for (int v = lo; v <= hi; ++v) {
      if (++nodes_ > budget_)
        throw Error(ErrorKind::budget_exceeded,
                    "backtracking exceeded " + std::to_string(budget_) + " nodes");
      residual_[j] -= v;
      residual_[k] -= v;
      entries_[pos] = v;
      descend(pos + 1);
      residual_[j] += v;
      residual_[k] += v;
    }
  }

  int n_;
  std::uint64_t budget_;
  Visitor& visit_;
  std::vector<int> residual_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> entries_;
  std::uint64_t nodes_ = 0;
};

/// Calls visit(n x n row-major matrix) for every matrix in the class.
template <class F>
void for_each_matrix(const Instance& inst, F&& visit,
                     std::uint64_t budget = default_node_budget) {
  inst.validate();
  if (!inst.feasible()) return;
  const int n = inst.n;
  auto expand = [&](const std::vector<int>& upper) {
    std::vector<int> m(static_cast<std::size_t>(n) * n, 0);
    std::size_t pos = 0;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        m[j * n + k] = m[k * n + j] = upper[pos++];
      }
    visit(m);
  };
  Backtracker<decltype(expand)> bt(inst, budget, expand);
  bt.run();
}

}  // namespace detail

/// Exact M(n,l) by constrained backtracking. Throws BudgetExceeded once more
/// than `budget` entry assignments have been tried.
inline CountValue count_backtracking(const Instance& inst,
                                     std::uint64_t budget = default_node_budget) {
  inst.validate();
  if (budget == 0) throw Error(ErrorKind::invalid_argument, "node budget must be positive");
  CountValue out{inst, BigInt(0), Method::backtracking};
  if (!inst.feasible()) return out;

  std::uint64_t leaves = 0;
  auto count = [&leaves](const std::vector<int>&) { ++leaves; };
  detail::Backtracker<decltype(count)> bt(inst, budget, count);
  bt.run();
  out.value = BigInt(leaves);
  return out;
}

}  // namespace symcount
