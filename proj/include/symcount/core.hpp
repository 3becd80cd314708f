#pragma once

// Shared vocabulary: number types, instances, counted values and the error
// type thrown throughout the library.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symcount {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// 60 significant decimal digits; estimates are logged at C(n,2) scale, so
/// double precision is not enough.
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<60>,
    boost::multiprecision::et_off>;

enum class ErrorKind {
  invalid_argument,
  domain_error,
  budget_exceeded,
  store_corrupt,
  no_prime_found,
  non_invertible_denominator,
  insufficient_points,
  non_polynomial_data,
  non_integer_value,
  trailing_nonzero,
  negative_entry,
  pole_proximity,
  grid_too_coarse,
  inconsistency,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::domain_error: return "DomainError";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::store_corrupt: return "StoreCorrupt";
    case ErrorKind::no_prime_found: return "NoPrimeFound";
    case ErrorKind::non_invertible_denominator: return "NonInvertibleDenominator";
    case ErrorKind::insufficient_points: return "InsufficientPoints";
    case ErrorKind::non_polynomial_data: return "NonPolynomialData";
    case ErrorKind::non_integer_value: return "NonIntegerValue";
    case ErrorKind::trailing_nonzero: return "TrailingNonzero";
    case ErrorKind::negative_entry: return "NegativeEntry";
    case ErrorKind::pole_proximity: return "PoleProximity";
    case ErrorKind::grid_too_coarse: return "GridTooCoarse";
    case ErrorKind::inconsistency: return "Inconsistency";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// The class of n x n symmetric non-negative integer matrices with zero
/// diagonal and every row summing to l.
struct Instance {
  int n = 0;
  int l = 0;

  /// The total n*l is twice the upper-triangle sum, so odd totals are empty.
  constexpr bool feasible() const { return (static_cast<std::int64_t>(n) * l) % 2 == 0; }

  /// Mean off-diagonal entry l/(n-1); requires n >= 2.
  Rational lambda() const {
    if (n < 2) throw Error(ErrorKind::domain_error, "lambda needs n >= 2");
    return Rational(l, n - 1);
  }

  void validate() const {
    if (n < 1 || l < 0)
      throw Error(ErrorKind::invalid_argument,
                  "instance needs n >= 1 and l >= 0, got n=" + std::to_string(n) +
                      " l=" + std::to_string(l));
  }

  friend constexpr bool operator==(const Instance&, const Instance&) = default;
  friend constexpr auto operator<=>(const Instance&, const Instance&) = default;
};

enum class Method { backtracking, modular_crt, quasipolynomial, cached };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::backtracking: return "backtracking";
    case Method::modular_crt: return "modular_crt";
    case Method::quasipolynomial: return "quasipolynomial";
    case Method::cached: return "cached";
  }
  return "unknown";
}

inline Method method_from_string(std::string_view s) {
  if (s == "backtracking") return Method::backtracking;
  if (s == "modular_crt") return Method::modular_crt;
  if (s == "quasipolynomial") return Method::quasipolynomial;
  if (s == "cached") return Method::cached;
  throw Error(ErrorKind::invalid_argument, "unknown method '" + std::string(s) + "'");
}

/// An exact count M(n,l) together with how it was obtained.
struct CountValue {
  Instance instance;
  BigInt value;
  Method method = Method::backtracking;
};

inline BigInt binomial(std::int64_t top, std::int64_t bottom) {
  if (bottom < 0 || top < 0 || bottom > top) return BigInt(0);
  BigInt out;
  mpz_bin_uiui(out.backend().data(), static_cast<unsigned long>(top),
               static_cast<unsigned long>(bottom));
  return out;
}

inline BigInt factorial(unsigned long k) {
  BigInt out;
  mpz_fac_ui(out.backend().data(), k);
  return out;
}

/// Polytope dimension n(n-3)/2 of the unit-row-sum slice, defined for n >= 3.
constexpr int polytope_dimension(int n) { return n * (n - 3) / 2; }

}  // namespace symcount
