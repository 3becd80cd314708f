#pragma once

// Exact M(n,l) by roots-of-unity coefficient extraction in prime fields,
// recombined with the Chinese Remainder Theorem.
//
// M(n,l) is the coefficient of x_1^l..x_n^l y^{nl/2} in prod_{j<k} f(x_j x_k y)
// with f(z) = 1 + z + ... + z^l. Substituting x_j = alpha^{i_j} (alpha of order
// l+1) and y = beta^k (beta of order q) and averaging extracts it; grouping the
// tuples (i_1..i_n) by their multiplicities r_0..r_l gives
//
//   M = n!/(q (l+1)^n) sum_r prod_i alpha^{i r_i}/r_i!
//         sum_k beta^{-k nl/2} prod_i f(alpha^{2i} beta^k)^{C(r_i,2)}
//                              prod_{i<j} f(alpha^{i+j} beta^k)^{r_i r_j}   (mod p).
//
// Each factor depends on i+j only through (i+j) mod (l+1), so a composition
// reduces to an exponent vector E over those residues. Working with discrete
// logarithms, the inner sum over k becomes sum_k g^{c_k + sum_b E_b log f_bk}.

#include "symcount/core.hpp"
#include "symcount/modular_arith.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <thread>
#include <vector>

namespace symcount {

/// One prime field for the extraction: alpha has order l+1, beta order q.
struct ModularPlan {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  std::uint64_t alpha = 0;
  std::uint64_t beta = 0;

  friend bool operator==(const ModularPlan&, const ModularPlan&) = default;
};

/// q must exceed this value under the threshold policy. The first two terms
/// are the classical condition; the third is the largest y-exponent offset
/// that can survive the x-filter, l*C(n,2) - nl/2, which dominates once l > n.
inline std::int64_t q_threshold(const Instance& inst) {
  const std::int64_t n = inst.n;
  const std::int64_t l = inst.l;
  const std::int64_t half = n * l / 2;
  const std::int64_t pair_bound = n * n * (n - 1) / 2 - half;
  const std::int64_t reach = l * (n * (n - 1) / 2) - half;
  return std::max({half, pair_bound, reach, std::int64_t{0}});
}

/// True when the y-filter of order q keeps only the target monomial.
///
/// A monomial surviving the x-filter has row degrees e_j = l + (l+1) t_j with
/// 0 <= t_j <= floor((n-2) l/(l+1)), so its y-offset from nl/2 is (l+1)T/2 with
/// T = sum t_j. q works iff it divides none of the nonzero offsets.
inline bool q_isolates_target(const Instance& inst, std::uint64_t q) {
  if (q == 0) return false;
  const std::int64_t n = inst.n;
  const std::int64_t m = static_cast<std::int64_t>(inst.l) + 1;
  const std::int64_t t_max = n >= 2 ? (n - 2) * inst.l / m : 0;
  for (std::int64_t total = 1; total <= n * t_max; ++total) {
    if ((m * total) % 2 != 0) continue;
    if (static_cast<std::uint64_t>(m * total / 2) % q == 0) return false;
  }
  return true;
}

enum class QPolicy {
  /// Smallest q accepted by q_isolates_target.
  minimal,
  /// Smallest integer above q_threshold.
  threshold,
};

/// Bit length of C(n+l-2, l)^n plus 8 guard bits: every row is a weak
/// composition of l into n-1 parts, so this bounds M(n,l).
inline int upper_bound_bits(const Instance& inst) {
  inst.validate();
  BigInt rows = inst.n >= 2 ? binomial(inst.n + inst.l - 2, inst.l) : BigInt(inst.l == 0 ? 1 : 0);
  BigInt bound = pow(rows, static_cast<unsigned>(inst.n));
  const int bits = bound == 0 ? 0 : static_cast<int>(msb(bound)) + 1;
  return bits + 8;
}

struct PlanOptions {
  QPolicy policy = QPolicy::minimal;
  std::optional<std::uint64_t> force_q;
  /// Admissible primes must stay below this; past it q is incremented.
  std::uint64_t prime_ceiling = std::uint64_t{1} << 27;
};

namespace detail {

// The log accumulator is 32-bit: (C(n,2)+1)(p-1) must fit.
inline std::uint64_t accumulator_prime_limit(int n) {
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  return (std::uint64_t{1} << 32) / (pairs + 1);
}

inline ModularPlan make_plan(std::uint64_t p, std::uint64_t q, int l) {
  using namespace modarith;
  const std::uint64_t g = primitive_root(p);
  const auto m = static_cast<std::uint64_t>(l) + 1;
  return ModularPlan{p, q, pow_mod(g, (p - 1) / m, p), pow_mod(g, (p - 1) / q, p)};
}

inline std::uint64_t first_q(const Instance& inst, QPolicy policy) {
  if (policy == QPolicy::threshold) return static_cast<std::uint64_t>(q_threshold(inst)) + 1;
  std::uint64_t q = 1;
  while (!q_isolates_target(inst, q)) ++q;
  return q;
}

}  // namespace detail

/// Smallest primes p = 1 (mod lcm(l+1, q)) whose product exceeds
/// 2^upper_bound_bits. q comes from the policy unless forced; if the primes
/// run past the ceiling, the next admissible q is tried.
inline std::vector<ModularPlan> plan_primes(const Instance& inst, int upper_bound_bits,
                                            const PlanOptions& opts = {}) {
  inst.validate();
  if (!inst.feasible())
    throw Error(ErrorKind::domain_error, "n*l is odd; nothing to extract");
  if (inst.n > 64) throw Error(ErrorKind::invalid_argument, "n > 64 is not supported");
  std::uint64_t q = detail::first_q(inst, opts.policy);
  if (opts.force_q) {
    if (!q_isolates_target(inst, *opts.force_q))
      throw Error(ErrorKind::invalid_argument,
                  "forced q=" + std::to_string(*opts.force_q) +
                      " does not isolate the target coefficient");
    q = *opts.force_q;
  }
  const std::uint64_t ceiling =
      std::min(opts.prime_ceiling, detail::accumulator_prime_limit(inst.n));
  const auto m = static_cast<std::uint64_t>(inst.l) + 1;
  const BigInt target = BigInt(1) << upper_bound_bits;
  const std::uint64_t q_start = q;

  for (;; ++q) {
    if (!q_isolates_target(inst, q)) continue;
    const std::uint64_t step = std::lcm(m, q);
    std::vector<ModularPlan> plans;
    BigInt product = 1;
    for (std::uint64_t p = step + 1; p < ceiling; p += step) {
      if (p <= static_cast<std::uint64_t>(inst.n) || !modarith::is_prime(p)) continue;
      plans.push_back(detail::make_plan(p, q, inst.l));
      product *= p;
      if (product > target) return plans;
    }
    if (opts.force_q)
      throw Error(ErrorKind::no_prime_found,
                  "not enough primes = 1 mod " + std::to_string(step) + " below " +
                      std::to_string(ceiling));
    if (q > q_start + 100000)
      throw Error(ErrorKind::no_prime_found, "no admissible q with enough primes");
  }
}

/// Weak compositions r_0 + ... + r_{m-1} = n in colexicographic order,
/// starting from (n, 0, ..., 0).
class CompositionStream {
 public:
  CompositionStream(int n, int parts) : parts_(parts, 0) { parts_.at(0) = n; }

  std::span<const int> current() const { return parts_; }

  bool next() {
    const int m = static_cast<int>(parts_.size());
    int i = 0;
    while (i < m && parts_[i] == 0) ++i;
    if (i >= m - 1) return false;
    const int v = parts_[i];
    parts_[i] = 0;
    parts_[0] = v - 1;
    parts_[i + 1] += 1;
    return true;
  }

 private:
  std::vector<int> parts_;
};

namespace detail {

// Per-prime tables and the composition-term kernel.
class ModularEvaluator {
 public:
  ModularEvaluator(const Instance& inst, const ModularPlan& plan)
      : n_(inst.n), m_(inst.l + 1), p_(plan.p), fastmod_(static_cast<std::uint32_t>(plan.p - 1)) {
    using namespace modarith;
    const std::uint64_t p = plan.p;
    const std::uint64_t q = plan.q;

    // Generator tables: pow_[e] = g^e, log_[g^e] = e.
    const std::uint64_t g = primitive_root(p);
    pow_.resize(p - 1);
    log_.assign(p, 0);
    std::uint64_t x = 1;
    for (std::uint64_t e = 0; e + 1 < p; ++e) {
      pow_[e] = static_cast<std::uint32_t>(x);
      log_[x] = static_cast<std::uint32_t>(e);
      x = mul_mod(x, g, p);
    }

    auto f = [&](std::uint64_t z) {
      std::uint64_t acc = 0;
      for (int t = 0; t < m_; ++t) acc = (mul_mod(acc, z, p) + 1) % p;
      return acc;
    };

    std::vector<std::uint64_t> alpha_pow(m_);
    alpha_pow[0] = 1;
    for (int b = 1; b < m_; ++b) alpha_pow[b] = mul_mod(alpha_pow[b - 1], plan.alpha, p);

    const std::uint64_t y_exp = static_cast<std::uint64_t>(inst.n) * inst.l / 2;
    const std::uint64_t log_beta = log_[plan.beta];

    // f(alpha^b beta^k) for all b,k; k is special when some factor vanishes.
    std::vector<std::uint64_t> fv(static_cast<std::size_t>(m_) * q);
    std::uint64_t beta_k = 1;
    for (std::uint64_t k = 0; k < q; ++k) {
      bool special = false;
      for (int b = 0; b < m_; ++b) {
        const std::uint64_t v = f(mul_mod(alpha_pow[b], beta_k, p));
        fv[b * q + k] = v;
        special = special || v == 0;
      }
      const std::uint64_t ck = (p - 1 - mul_mod(k * y_exp % (p - 1), log_beta, p - 1)) % (p - 1);
      if (special) {
        special_c_.push_back(ck);
        special_k_.push_back(k);
      } else {
        regular_c_.push_back(static_cast<std::uint32_t>(ck));
        regular_k_.push_back(k);
      }
      beta_k = mul_mod(beta_k, plan.beta, p);
    }

    // Regular rows are padded to a multiple of the vector width; padding lanes
    // are computed but never summed.
    regular_count_ = regular_k_.size();
    stride_ = (regular_count_ + lanes - 1) / lanes * lanes;
    regular_c_.resize(stride_, 0);
    regular_log_.assign(static_cast<std::size_t>(m_) * stride_, 0);
    special_log_.resize(static_cast<std::size_t>(m_) * special_k_.size());
    for (int b = 0; b < m_; ++b) {
      for (std::size_t t = 0; t < regular_count_; ++t)
        regular_log_[b * stride_ + t] = log_[fv[b * q + regular_k_[t]]];
      for (std::size_t t = 0; t < special_k_.size(); ++t) {
        const std::uint64_t v = fv[b * q + special_k_[t]];
        special_log_[b * special_k_.size() + t] = v == 0 ? zero_log : log_[v];
      }
    }

    inv_fact_.resize(n_ + 1);
    std::uint64_t fact = 1;
    for (int t = 1; t <= n_; ++t) fact = mul_mod(fact, static_cast<std::uint64_t>(t), p);
    n_fact_ = fact;
    inv_fact_[n_] = inv_mod(fact, p);
    for (int t = n_; t > 0; --t) inv_fact_[t - 1] = mul_mod(inv_fact_[t], static_cast<std::uint64_t>(t), p);
    alpha_pow_ = std::move(alpha_pow);

    const std::uint64_t denom = mul_mod(q % p, pow_mod(static_cast<std::uint64_t>(m_), n_, p), p);
    prefactor_ = mul_mod(n_fact_, inv_mod(denom, p), p);
  }

  int parts() const { return m_; }
  std::uint64_t prefactor() const { return prefactor_; }

  struct Scratch {
    std::vector<std::uint32_t> exps;
    std::vector<int> active;
    std::vector<std::uint32_t> acc;
  };

  Scratch make_scratch() const {
    return Scratch{std::vector<std::uint32_t>(m_, 0), {}, std::vector<std::uint32_t>(stride_, 0)};
  }

  /// prod_i alpha^{i r_i}/r_i! times the inner k-sum, for one composition.
  std::uint64_t term(std::span<const int> r, Scratch& scratch) const {
    // p < 2^32 here, so residue products fit in 64 bits.
    const std::uint64_t p = p_;
    std::array<int, 64> support{};
    int s = 0;
    std::uint64_t weight = 1;
    std::uint64_t alpha_exp = 0;
    for (int i = 0; i < m_; ++i) {
      if (r[i] == 0) continue;
      support[s++] = i;
      weight = weight * inv_fact_[r[i]] % p;
      alpha_exp += static_cast<std::uint64_t>(i) * r[i];
    }
    weight = weight * alpha_pow_[alpha_exp % m_] % p;

    std::uint32_t* __restrict exps = scratch.exps.data();
    auto& active = scratch.active;
    active.clear();
    auto bump = [&](int b, std::uint32_t e) {
      if (e == 0) return;
      if (exps[b] == 0) active.push_back(b);
      exps[b] += e;
    };
    for (int a = 0; a < s; ++a) {
      const int i = support[a];
      const auto ri = static_cast<std::uint32_t>(r[i]);
      bump((2 * i) % m_, ri * (ri - 1) / 2);
      for (int c = a + 1; c < s; ++c) {
        const int j = support[c];
        const int b = i + j < m_ ? i + j : i + j - m_;
        bump(b, ri * static_cast<std::uint32_t>(r[j]));
      }
    }

    std::uint32_t* __restrict acc = scratch.acc.data();
    const std::size_t stride = stride_;
    std::copy_n(regular_c_.data(), stride, acc);
    for (int b : active) {
      const std::uint32_t e = exps[b];
      const std::uint32_t* __restrict row = regular_log_.data() + b * stride;
      for (std::size_t t = 0; t < stride; ++t) acc[t] += e * row[t];
    }
    std::uint64_t sum = 0;
    for (std::size_t t = 0; t < regular_count_; ++t) sum += pow_[fastmod_(acc[t])];

    const std::size_t ns = special_k_.size();
    for (std::size_t t = 0; t < ns; ++t) {
      std::uint64_t total = special_c_[t];
      for (int b : active) total += exps[b] * special_log_[b * ns + t];
      if (total < zero_log) sum += pow_[total % (p - 1)];
    }

    for (int b : active) exps[b] = 0;
    return weight * (sum % p) % p;
  }

  /// Sum of term() over every composition, by depth-first assignment of
  /// r_0, r_1, ... with the log accumulator extended one part at a time.
  /// Subtrees below the second part are dealt round-robin to `threads`
  /// workers; this returns worker `id`'s share.
  std::uint64_t sum_terms(unsigned id, unsigned threads) const {
    Walker walker(*this, id, threads);
    walker.run();
    return walker.total;
  }

 private:
  struct Walker {
    const ModularEvaluator& ev;
    unsigned id;
    unsigned threads;
    std::vector<std::uint32_t> acc;    // (n+1) levels x stride
    std::vector<std::uint64_t> sacc;   // (n+1) levels x special count
    std::vector<int> sup_index;
    std::vector<int> sup_value;
    std::uint64_t task = 0;
    std::uint64_t total = 0;

    Walker(const ModularEvaluator& e, unsigned worker, unsigned count)
        : ev(e), id(worker), threads(count),
          acc(static_cast<std::size_t>(e.n_ + 1) * e.stride_, 0),
          sacc(static_cast<std::size_t>(e.n_ + 1) * e.special_k_.size(), 0) {
      sup_index.reserve(e.n_);
      sup_value.reserve(e.n_);
    }

    void run() {
      std::copy(ev.regular_c_.begin(), ev.regular_c_.end(), acc.begin());
      std::copy(ev.special_c_.begin(), ev.special_c_.end(), sacc.begin());
      descend(0, ev.n_, 0, 1, 0, false);
    }

    // Level `level + 1` := level `level` plus the pairs created by r_i = v.
    void extend(int level, int i, int v) {
      const std::size_t stride = ev.stride_;
      const std::size_t ns = ev.special_k_.size();
      const std::uint32_t* __restrict src = acc.data() + level * stride;
      std::uint32_t* __restrict dst = acc.data() + (level + 1) * stride;
      std::copy_n(src, stride, dst);
      std::uint64_t* sdst = sacc.data() + (level + 1) * ns;
      std::copy_n(sacc.data() + level * ns, ns, sdst);
      auto add_row = [&](int b, std::uint32_t e) {
        const std::uint32_t* __restrict row = ev.regular_log_.data() + b * stride;
        for (std::size_t t = 0; t < stride; ++t) dst[t] += e * row[t];
        const std::uint64_t* srow = ev.special_log_.data() + b * ns;
        for (std::size_t t = 0; t < ns; ++t) sdst[t] += e * srow[t];
      };
      const auto vv = static_cast<std::uint32_t>(v);
      if (v >= 2) add_row((2 * i) % ev.m_, vv * (vv - 1) / 2);
      for (std::size_t a = 0; a < sup_index.size(); ++a) {
        const int b = (i + sup_index[a]) % ev.m_;
        add_row(b, vv * static_cast<std::uint32_t>(sup_value[a]));
      }
    }

    void leaf(int level, std::uint64_t weight, std::uint64_t alpha_exp, bool owned) {
      // Leaves above the split depth belong to worker 0.
      if (!owned && id != 0) return;
      const std::uint64_t p = ev.p_;
      const std::uint32_t* a = acc.data() + level * ev.stride_;
      std::uint64_t sum = 0;
      for (std::size_t t = 0; t < ev.regular_count_; ++t) sum += ev.pow_[ev.fastmod_(a[t])];
      const std::size_t ns = ev.special_k_.size();
      const std::uint64_t* sa = sacc.data() + level * ns;
      for (std::size_t t = 0; t < ns; ++t)
        if (sa[t] < zero_log) sum += ev.pow_[sa[t] % (p - 1)];
      weight = weight * ev.alpha_pow_[alpha_exp % ev.m_] % p;
      total = (total + weight * (sum % p)) % p;
    }

    void descend(int i, int remaining, int level, std::uint64_t weight, std::uint64_t alpha_exp,
                 bool owned) {
      if (!owned && i == split_depth) {
        if ((task++ % threads) != id) return;
        owned = true;
      }
      if (remaining == 0) {
        leaf(level, weight, alpha_exp, owned);
        return;
      }
      const std::uint64_t p = ev.p_;
      const bool last = i == ev.m_ - 1;
      for (int v = last ? remaining : 0; v <= remaining; ++v) {
        if (v == 0) {
          descend(i + 1, remaining, level, weight, alpha_exp, owned);
          continue;
        }
        extend(level, i, v);
        const std::uint64_t w = weight * ev.inv_fact_[v] % p;
        const std::uint64_t ae = alpha_exp + static_cast<std::uint64_t>(i) * v;
        if (v == remaining) {
          leaf(level + 1, w, ae, owned);
        } else {
          sup_index.push_back(i);
          sup_value.push_back(v);
          descend(i + 1, remaining - v, level + 1, w, ae, owned);
          sup_index.pop_back();
          sup_value.pop_back();
        }
      }
    }

    static constexpr int split_depth = 2;
  };

  // Marks f = 0 in special_log_; large enough that any sum containing it stays
  // at or above it.
  static constexpr std::uint64_t zero_log = std::uint64_t{1} << 40;

  int n_;
  int m_;
  std::uint64_t p_;
  modarith::FastMod32 fastmod_;
  std::vector<std::uint32_t> pow_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint64_t> regular_k_;
  std::vector<std::uint64_t> special_k_;
  std::vector<std::uint32_t> regular_c_;
  std::vector<std::uint64_t> special_c_;
  std::vector<std::uint32_t> regular_log_;
  std::vector<std::uint64_t> special_log_;
  std::size_t regular_count_ = 0;
  std::size_t stride_ = 0;
  static constexpr std::size_t lanes = 16;
  std::vector<std::uint64_t> inv_fact_;
  std::vector<std::uint64_t> alpha_pow_;
  std::uint64_t n_fact_ = 1;
  std::uint64_t prefactor_ = 1;
};

inline void validate_plan(const Instance& inst, const ModularPlan& plan) {
  using namespace modarith;
  const auto m = static_cast<std::uint64_t>(inst.l) + 1;
  const std::uint64_t p = plan.p;
  if (!is_prime(p)) throw Error(ErrorKind::invalid_argument, "plan modulus is not prime");
  if (p <= static_cast<std::uint64_t>(inst.n) || plan.q % p == 0 || m % p == 0)
    throw Error(ErrorKind::non_invertible_denominator,
                "p=" + std::to_string(p) + " divides q, l+1 or a factorial up to n");
  if ((p - 1) % m != 0 || (p - 1) % plan.q != 0)
    throw Error(ErrorKind::invalid_argument, "l+1 and q must divide p-1");
  if (!q_isolates_target(inst, plan.q))
    throw Error(ErrorKind::invalid_argument, "q does not isolate the target coefficient");
  if (multiplicative_order(plan.alpha % p, p) != m || multiplicative_order(plan.beta % p, p) != plan.q)
    throw Error(ErrorKind::invalid_argument, "alpha/beta are not primitive roots of the stated orders");
  if (p >= accumulator_prime_limit(inst.n))
    throw Error(ErrorKind::invalid_argument, "p too large for the 32-bit log accumulator");
}

}  // namespace detail

namespace detail {

template <class Worker>
std::uint64_t reduce_workers(unsigned threads, std::uint64_t p, Worker&& worker) {
  std::vector<std::uint64_t> partials(threads, 0);
  if (threads == 1) {
    partials[0] = worker(0U);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned id = 0; id < threads; ++id)
      pool.emplace_back([&, id] { partials[id] = worker(id); });
    for (auto& t : pool) t.join();
  }
  std::uint64_t total = 0;
  for (std::uint64_t v : partials) total = (total + v) % p;
  return total;
}

/// Same residue as count_mod_p, evaluating every composition of the colex
/// stream from scratch. Slower; kept as an independent evaluation path.
inline std::uint64_t count_mod_p_streaming(const Instance& inst, const ModularPlan& plan,
                                           unsigned threads = 1) {
  inst.validate();
  if (!inst.feasible()) return 0;
  validate_plan(inst, plan);
  const ModularEvaluator eval(inst, plan);
  threads = std::max(1U, threads);
  constexpr std::uint64_t chunk = 512;
  const std::uint64_t total = reduce_workers(threads, plan.p, [&](unsigned id) {
    CompositionStream stream(inst.n, eval.parts());
    auto scratch = eval.make_scratch();
    std::uint64_t partial = 0;
    std::uint64_t index = 0;
    do {
      if ((index / chunk) % threads == id)
        partial = (partial + eval.term(stream.current(), scratch)) % plan.p;
      ++index;
    } while (stream.next());
    return partial;
  });
  return modarith::mul_mod(total, eval.prefactor(), plan.p);
}

}  // namespace detail

/// M(n,l) mod plan.p. Composition subtrees are dealt to `threads` workers and
/// the partial sums combined in Z_p, so the residue does not depend on the
/// thread count.
inline std::uint64_t count_mod_p(const Instance& inst, const ModularPlan& plan, unsigned threads = 1) {
  inst.validate();
  if (!inst.feasible()) return 0;
  detail::validate_plan(inst, plan);
  const detail::ModularEvaluator eval(inst, plan);
  threads = std::max(1U, threads);
  const std::uint64_t total = detail::reduce_workers(
      threads, plan.p, [&](unsigned id) { return eval.sum_terms(id, threads); });
  return modarith::mul_mod(total, eval.prefactor(), plan.p);
}

/// The unique integer in [0, prod moduli) with the given residues.
inline BigInt crt_combine(std::span<const std::uint64_t> residues, std::span<const std::uint64_t> moduli) {
  if (residues.size() != moduli.size())
    throw Error(ErrorKind::invalid_argument, "residue/modulus count mismatch");
  BigInt value = 0;
  BigInt modulus = 1;
  for (std::size_t t = 0; t < moduli.size(); ++t) {
    const std::uint64_t p = moduli[t];
    const auto current = static_cast<std::uint64_t>(BigInt(value % p));
    const auto mod_p = static_cast<std::uint64_t>(BigInt(modulus % p));
    const std::uint64_t diff = (residues[t] % p + p - current) % p;
    const std::uint64_t lift = modarith::mul_mod(diff, modarith::inv_mod(mod_p, p), p);
    value += modulus * lift;
    modulus *= p;
  }
  return value;
}

struct ModularOptions {
  unsigned threads = 1;
  QPolicy policy = QPolicy::minimal;
  std::optional<std::uint64_t> force_q;
  /// Called with each plan before it is evaluated.
  std::function<void(const ModularPlan&)> on_plan;
};

/// Exact M(n,l): one residue per planned prime, combined by CRT.
inline CountValue count_crt(const Instance& inst, const ModularOptions& opts = {}) {
  inst.validate();
  CountValue out{inst, BigInt(0), Method::modular_crt};
  if (!inst.feasible()) return out;
  PlanOptions plan_opts;
  plan_opts.policy = opts.policy;
  plan_opts.force_q = opts.force_q;
  const auto plans = plan_primes(inst, upper_bound_bits(inst), plan_opts);
  std::vector<std::uint64_t> residues;
  std::vector<std::uint64_t> moduli;
  for (const auto& plan : plans) {
    if (opts.on_plan) opts.on_plan(plan);
    residues.push_back(count_mod_p(inst, plan, opts.threads));
    moduli.push_back(plan.p);
  }
  out.value = crt_combine(residues, moduli);
  return out;
}

}  // namespace symcount
