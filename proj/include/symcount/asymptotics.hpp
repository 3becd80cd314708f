#pragma once

// Closed-form asymptotic estimates of M(n,l), the normalized error term of
// the naive product model, and minimum-entry probabilities.

#include "symcount/core.hpp"

#include <boost/math/constants/constants.hpp>

#include <functional>
#include <string_view>

namespace symcount {

enum class Formula { saddle_form, binomial_form, big_lambda, naive };

inline std::string_view to_string(Formula f) {
  switch (f) {
    case Formula::saddle_form: return "saddle";
    case Formula::binomial_form: return "binomial";
    case Formula::big_lambda: return "biglambda";
    case Formula::naive: return "naive";
  }
  return "unknown";
}

inline Formula formula_from_string(std::string_view s) {
  if (s == "saddle") return Formula::saddle_form;
  if (s == "binomial") return Formula::binomial_form;
  if (s == "biglambda") return Formula::big_lambda;
  if (s == "naive") return Formula::naive;
  throw Error(ErrorKind::invalid_argument, "unknown estimate form '" + std::string(s) + "'");
}

struct LogEstimate {
  Instance instance;
  Real log_value;
  Formula formula = Formula::binomial_form;
};

struct DeltaValue {
  Instance instance;
  Real delta;
};

namespace detail {

inline Real to_real(const Rational& r) { return Real(numerator(r)) / Real(denominator(r)); }

inline Real log_big(const BigInt& v) {
  if (v <= 0) throw Error(ErrorKind::domain_error, "log of non-positive integer");
  return log(Real(v));
}

inline void require_estimable(const Instance& inst, int min_n) {
  inst.validate();
  if (inst.n < min_n)
    throw Error(ErrorKind::domain_error, "estimate needs n >= " + std::to_string(min_n));
  if (inst.l == 0) throw Error(ErrorKind::domain_error, "estimate undefined at l = 0 (exact count is 1)");
  if (!inst.feasible()) throw Error(ErrorKind::domain_error, "n*l is odd, the class is empty");
}

inline Real half_log2_plus_three_quarters() {
  return log(Real(2)) / 2 + Real(3) / 4;
}

// C(n,2)(lambda ln lambda - (1+lambda) ln(1+lambda)) + n ln C(n+l-2, l).
inline Real log_naive(const Instance& inst) {
  const Real lam = to_real(inst.lambda());
  const Real pairs = Real(inst.n) * (inst.n - 1) / 2;
  return pairs * (lam * log(lam) - (1 + lam) * log(1 + lam)) +
         Real(inst.n) * log_big(binomial(inst.n + inst.l - 2, inst.l));
}

}  // namespace detail

inline LogEstimate estimate_naive(const Instance& inst) {
  detail::require_estimable(inst, 2);
  return LogEstimate{inst, detail::log_naive(inst), Formula::naive};
}

inline LogEstimate estimate_binomial_form(const Instance& inst) {
  detail::require_estimable(inst, 3);
  return LogEstimate{inst, detail::log_naive(inst) + detail::half_log2_plus_three_quarters(),
                     Formula::binomial_form};
}

inline LogEstimate estimate_saddle_form(const Instance& inst) {
  detail::require_estimable(inst, 3);
  using boost::math::constants::two_pi;
  const Real lam = detail::to_real(inst.lambda());
  const Real n = inst.n;
  const Real l = inst.l;
  const Real inner = log(two_pi<Real>() * n) + (2 - l - n) * log(1 + lam) + (l + 1) * log(lam);
  const Real tail = (14 * lam * lam + 14 * lam - 1) / (12 * lam * (1 + lam));
  return LogEstimate{inst, log(Real(2)) / 2 - n / 2 * inner + tail, Formula::saddle_form};
}

inline LogEstimate estimate_big_lambda(const Instance& inst) {
  detail::require_estimable(inst, 3);
  using boost::math::constants::two_pi;
  const Real lam = detail::to_real(inst.lambda());
  const Real n = inst.n;
  const Real value = log(Real(2)) / 2 + n * (n - 3) / 2 * log(lam + Real(1) / 2) + n * (n - 1) / 2 +
                     Real(7) / 6 - n / 2 * log(two_pi<Real>() * n);
  return LogEstimate{inst, value, Formula::big_lambda};
}

inline LogEstimate estimate(const Instance& inst, Formula f) {
  switch (f) {
    case Formula::saddle_form: return estimate_saddle_form(inst);
    case Formula::binomial_form: return estimate_binomial_form(inst);
    case Formula::big_lambda: return estimate_big_lambda(inst);
    case Formula::naive: return estimate_naive(inst);
  }
  throw Error(ErrorKind::invalid_argument, "unknown formula");
}

/// Delta in M = M_naive sqrt(2) exp(3/4 + (3l+1)/(12 l (n-1)) + Delta/(n(n-1))).
inline DeltaValue conjecture_delta(const Instance& inst, const CountValue& exact) {
  detail::require_estimable(inst, 2);
  if (exact.instance != inst)
    throw Error(ErrorKind::invalid_argument, "exact value belongs to another instance");
  if (exact.value < 1) throw Error(ErrorKind::domain_error, "Delta needs M(n,l) >= 1");
  const Real n = inst.n;
  const Real l = inst.l;
  const Real correction = (3 * l + 1) / (12 * l * (n - 1));
  const Real inner = detail::log_big(exact.value) - detail::log_naive(inst) -
                     detail::half_log2_plus_three_quarters() - correction;
  return DeltaValue{inst, n * (n - 1) * inner};
}

using ExactCounter = std::function<BigInt(const Instance&)>;

/// Prob(min off-diagonal entry >= k) under the uniform distribution on the
/// class: subtracting k from every off-diagonal entry is a bijection onto
/// the class with row sum l - (n-1)k.
inline Rational min_entry_prob_exact(const Instance& inst, int k, const ExactCounter& count) {
  inst.validate();
  if (k < 0) throw Error(ErrorKind::invalid_argument, "k must be non-negative");
  const BigInt total = count(inst);
  if (total < 1) throw Error(ErrorKind::domain_error, "class is empty");
  if (k == 0) return Rational(1);
  const std::int64_t residual = static_cast<std::int64_t>(inst.l) - static_cast<std::int64_t>(inst.n - 1) * k;
  if (residual < 0) return Rational(0);
  return Rational(count(Instance{inst.n, static_cast<int>(residual)}), total);
}

/// exp(-a/2) with a = k n^3 / l.
inline Real min_entry_prob_asymptotic(const Instance& inst, int k) {
  inst.validate();
  if (inst.l < 1) throw Error(ErrorKind::domain_error, "asymptotic law needs l >= 1");
  if (k < 0) throw Error(ErrorKind::invalid_argument, "k must be non-negative");
  const Real a = Real(k) * Real(inst.n) * inst.n * inst.n / inst.l;
  return exp(-a / 2);
}

}  // namespace symcount
