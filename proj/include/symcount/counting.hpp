#pragma once

// Picks the cheapest exact method for an instance.

#include "symcount/exact_count.hpp"
#include "symcount/modular_count.hpp"

namespace symcount {

/// Below this many search nodes backtracking beats planning primes.
inline constexpr std::uint64_t small_search_budget = 200'000;

inline CountValue count_exact(const Instance& inst, unsigned threads = 1) {
  inst.validate();
  if (!inst.feasible() || inst.n <= 3 || inst.l == 0) return count_backtracking(inst);
  try {
    return count_backtracking(inst, small_search_budget);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::budget_exceeded) throw;
  }
  ModularOptions opts;
  opts.threads = threads;
  return count_crt(inst, opts);
}

}  // namespace symcount
