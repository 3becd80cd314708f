#pragma once

// Numerical check of the torus-integral representation of M(n,l) for
// n in {3,4}: an equal-weight rule on the N^n grid of [-pi,pi]^n.

#include "symcount/core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <thread>
#include <vector>

namespace symcount {

struct IntegrandParams {
  int n = 0;
  int l = 0;
  double lambda = 0;
  double r = 0;   // contour radius sqrt(lambda/(1+lambda))
  double A2 = 0;  // lambda(1+lambda)/2

  static IntegrandParams make(int n, int l) {
    Instance{n, l}.validate();
    if (n < 2 || l < 1) throw Error(ErrorKind::domain_error, "integrand needs n >= 2 and l >= 1");
    IntegrandParams p;
    p.n = n;
    p.l = l;
    p.lambda = static_cast<double>(l) / (n - 1);
    p.r = std::sqrt(p.lambda / (1 + p.lambda));
    p.A2 = 0.5 * p.lambda * (1 + p.lambda);
    return p;
  }
};

inline constexpr double pole_guard = 1e-12;

/// prod_{j<k} (1 - lambda(e^{i(t_j+t_k)} - 1))^{-1} * e^{-il sum t_j}.
inline std::complex<double> integrand_F(const IntegrandParams& p, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != p.n)
    throw Error(ErrorKind::invalid_argument, "theta must have n coordinates");
  std::complex<double> acc = 1.0;
  double sum = 0;
  for (int j = 0; j < p.n; ++j) {
    sum += theta[j];
    for (int k = j + 1; k < p.n; ++k) {
      const std::complex<double> den = 1.0 - p.lambda * (std::polar(1.0, theta[j] + theta[k]) - 1.0);
      if (std::abs(den) < pole_guard) throw Error(ErrorKind::pole_proximity, "integrand factor vanishes");
      acc /= den;
    }
  }
  return acc * std::polar(1.0, -p.l * sum);
}

/// |1 - lambda(e^{iz} - 1)|^{-1} = (1 + 4 A2 (1 - cos z))^{-1/2}.
inline double factor_magnitude(const IntegrandParams& p, double z) {
  return 1.0 / std::sqrt(1.0 + 4.0 * p.A2 * (1.0 - std::cos(z)));
}

inline double integrand_magnitude_bound(const IntegrandParams& p, std::span<const double> theta) {
  double acc = 1.0;
  for (int j = 0; j < p.n; ++j)
    for (int k = j + 1; k < p.n; ++k) acc *= factor_magnitude(p, theta[j] + theta[k]);
  return acc;
}

struct QuadratureResult {
  double value = 0;
  double imag = 0;
  double aliasing_bound = 0;
  int grid = 0;
};

inline int default_grid(int l) { return std::max(64, 8 * (l + 1)); }

/// Upper bound on the aliased coefficient mass picked up by an N-point rule:
/// every exponent vector congruent to (l,...,l) mod N other than (l,...,l)
/// has a coordinate >= N + l.
inline double aliasing_bound(const IntegrandParams& p, int grid) {
  const double r2 = p.r * p.r;
  const double n = p.n;
  const double log_base = -n * p.l * std::log(p.r) - ((n - 1) * (n - 2) / 2) * std::log1p(-r2);
  double best = std::numeric_limits<double>::infinity();
  const int steps = 4000;
  for (int t = 1; t < steps; ++t) {
    const double s = std::exp(std::log(1 / r2) * t / steps);
    const double v = -(grid + p.l) * std::log(s) - (n - 1) * std::log1p(-r2 * s);
    best = std::min(best, v);
  }
  return n * std::exp(log_base + best);
}

/// M(n,l) ~ (lambda^-lambda (1+lambda)^{1+lambda})^{C(n,2)} N^{-n} sum F over the grid.
inline QuadratureResult count_by_quadrature(const IntegrandParams& p, int grid, unsigned threads = 1,
                                            std::optional<double> tolerance = std::nullopt) {
  if (p.n != 3 && p.n != 4) throw Error(ErrorKind::domain_error, "full quadrature supports n in {3,4}");
  if ((p.n * p.l) % 2 != 0) throw Error(ErrorKind::domain_error, "n*l is odd, the class is empty");
  if (grid < 4 * (p.l + 1))
    throw Error(ErrorKind::grid_too_coarse, "grid must have at least 4(l+1) points per dimension");
  QuadratureResult out;
  out.grid = grid;
  out.aliasing_bound = aliasing_bound(p, grid);
  if (tolerance && out.aliasing_bound > *tolerance)
    throw Error(ErrorKind::grid_too_coarse, "aliasing bound " + std::to_string(out.aliasing_bound) +
                                                " exceeds tolerance " + std::to_string(*tolerance));

  // On the grid t_a = -pi + 2 pi a / N, t_a + t_b = 2 pi (a+b)/N mod 2 pi and
  // e^{-il sum t} = omega^{-l sum a} because n*l is even.
  const double step = 2 * std::numbers::pi / grid;
  std::vector<std::complex<double>> pair(grid);
  std::vector<std::complex<double>> phase(grid);
  for (int s = 0; s < grid; ++s) {
    pair[s] = 1.0 / (1.0 - p.lambda * (std::polar(1.0, step * s) - 1.0));
    phase[s] = std::polar(1.0, -step * ((static_cast<long long>(p.l) * s) % grid));
  }
  auto slice = [&](int a) {
    std::complex<double> acc = 0;
    for (int b = 0; b < grid; ++b) {
      const std::complex<double> ab = pair[(a + b) % grid];
      for (int c = 0; c < grid; ++c) {
        const std::complex<double> abc = ab * pair[(a + c) % grid] * pair[(b + c) % grid];
        if (p.n == 3) {
          acc += abc * phase[(a + b + c) % grid];
          continue;
        }
        std::complex<double> inner = 0;
        for (int e = 0; e < grid; ++e)
          inner += pair[(a + e) % grid] * pair[(b + e) % grid] * pair[(c + e) % grid] *
                   phase[(a + b + c + e) % grid];
        acc += abc * inner;
      }
    }
    return acc;
  };

  std::vector<std::complex<double>> partial(grid);
  threads = std::max(1u, std::min<unsigned>(threads, grid));
  if (threads == 1) {
    for (int a = 0; a < grid; ++a) partial[a] = slice(a);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < threads; ++id)
      pool.emplace_back([&, id] {
        for (int a = static_cast<int>(id); a < grid; a += static_cast<int>(threads)) partial[a] = slice(a);
      });
  }
  std::complex<double> total = 0;
  for (const auto& v : partial) total += v;

  const double pairs = p.n * (p.n - 1) / 2.0;
  const double log_pref = pairs * (-p.lambda * std::log(p.lambda) + (1 + p.lambda) * std::log1p(p.lambda)) -
                          p.n * std::log(static_cast<double>(grid));
  const double scale = std::exp(log_pref);
  out.value = total.real() * scale;
  out.imag = total.imag() * scale;
  return out;
}

}  // namespace symcount
