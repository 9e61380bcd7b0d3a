#pragma once

// Poisson(n) machinery for the split of the Chernoff sum
//   C^n - e^{n(C-1)} = sum_m pmf(n, m) (C^n - C^m)
// into a central part |m - n| <= eps and tails |m - n| > eps.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "chernoff/constants.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/linalg.hpp"

namespace chernoff::poisson {

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

// Stirling-series error log(m!) - [(m + 1/2) log m - m + log sqrt(2 pi)],
// tabulated below 16 and from its asymptotic series above (Loader's
// saddle-point scheme).
inline double stirlerr(std::uint64_t m) {
  static const std::array<double, 16> table = [] {
    std::array<double, 16> t{};
    const double log_sqrt_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    t[0] = 0.0;
    for (std::uint64_t k = 1; k < 16; ++k) {
      const double x = static_cast<double>(k);
      t[k] = std::lgamma(x + 1.0) + x - log_sqrt_2pi - (x + 0.5) * std::log(x);
    }
    return t;
  }();
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (m < 16) return table[m];
  const double r = 1.0 / static_cast<double>(m);
  const double r2 = r * r;
  if (m > 500) return (s0 - s1 * r2) * r;
  if (m > 80) return (s0 - (s1 - s2 * r2) * r2) * r;
  if (m > 35) return (s0 - (s1 - (s2 - s3 * r2) * r2) * r2) * r;
  return (s0 - (s1 - (s2 - (s3 - s4 * r2) * r2) * r2) * r2) * r;
}

// Deviance term m log(m/np) + np - m, evaluated by series when m ~ np.
inline long double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    const long double v = (static_cast<long double>(x) - np) / (static_cast<long double>(x) + np);
    long double s = (x - np) * v;
    long double ej = 2.0L * x * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v * v;
      const long double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  // Far from the mode the three terms cancel heavily; extended precision
  // keeps the result (and hence the pmf) accurate to a few ulps.
  const long double xl = x;
  const long double npl = np;
  return xl * std::log(xl / npl) + npl - xl;
}

inline void require_rate(std::uint64_t n) {
  if (n < 1) throw DomainError("poisson: rate must be >= 1");
}

}  // namespace detail

/// P{X_n = m} = e^{-n} n^m / m!, accurate to a few ulps.
inline double pmf(std::uint64_t n, std::uint64_t m) {
  detail::require_rate(n);
  const double rate = static_cast<double>(n);
  if (m == 0) return std::exp(-rate);
  const double x = static_cast<double>(m);
  const long double log_p = -static_cast<long double>(detail::stirlerr(m)) - detail::bd0(x, rate);
  return static_cast<double>(std::exp(log_p) / std::sqrt(2.0L * std::numbers::pi_v<long double> * x));
}

/// Index range [lo, hi] holding all but `dropped` of the Poisson(n) mass.
struct Window {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  double dropped = 0.0;  // rigorous upper bound on the excluded mass
};

/// Smallest window around the mode whose excluded mass is at most
/// `mass` (split evenly between the tails). Tail remainders are bounded by
/// geometric series, since pmf ratios are m/n below the mode and
/// n/(m+1) above it.
inline Window window(std::uint64_t n, double mass = tol::poisson_mass) {
  detail::require_rate(n);
  const double rate = static_cast<double>(n);
  const double per_tail = 0.5 * mass;
  Window w{n, n, 0.0};

  double upper = 0.0;
  for (;;) {
    const std::uint64_t next = w.hi + 1;
    const double ratio = rate / static_cast<double>(next + 1);
    if (ratio < 1.0) {
      upper = pmf(n, next) / (1.0 - ratio);
      if (upper <= per_tail) break;
    }
    w.hi = next;
  }

  double lower = 0.0;
  for (;;) {
    if (w.lo == 0) {
      lower = 0.0;
      break;
    }
    const std::uint64_t next = w.lo - 1;
    const double ratio = static_cast<double>(next) / rate;
    lower = pmf(n, next) / (1.0 - ratio);
    if (lower <= per_tail) break;
    w.lo = next;
  }
  w.dropped = upper + lower;
  return w;
}

/// Truncated central moment sum_m pmf(n, m) |m - n|^p.
inline double central_moment(std::uint64_t n, double p) {
  const Window w = window(n);
  const double rate = static_cast<double>(n);
  CompensatedSum sum;
  for (std::uint64_t m = w.lo; m <= w.hi; ++m) {
    sum.add(pmf(n, m) * std::pow(std::abs(static_cast<double>(m) - rate), p));
  }
  return sum.value();
}

struct TailMass {
  double value = 0.0;
  double truncation_error = 0.0;
};

/// P{|X_n - n| > eps}, summed exactly over both tails (strict inequality).
inline TailMass tail_mass(std::uint64_t n, double epsilon) {
  detail::require_rate(n);
  if (!(epsilon > 0.0)) throw DomainError("poisson_tail: epsilon must be positive");
  const double rate = static_cast<double>(n);
  CompensatedSum sum;

  // Lower tail: 0 <= m < n - eps, all terms summed.
  const double lower_edge = rate - epsilon;
  for (std::uint64_t m = 0; static_cast<double>(m) < lower_edge; ++m) sum.add(pmf(n, m));

  // Upper tail: m > n + eps, until the geometric remainder is negligible.
  const double upper_edge = rate + epsilon;
  if (upper_edge > 1e12) return {sum.value(), 0.0};  // pmf underflows long before
  auto m = static_cast<std::uint64_t>(std::floor(upper_edge)) + 1;
  double remainder = 0.0;
  for (;;) {
    const double term = pmf(n, m);
    const double ratio = rate / static_cast<double>(m + 1);
    remainder = ratio < 1.0 ? term * ratio / (1.0 - ratio) : 1.0;
    sum.add(term);
    ++m;
    if (ratio < 1.0 && remainder <= 1e-3 * tol::poisson_mass) break;
  }
  return {sum.value(), remainder};
}

inline double poisson_tail(std::uint64_t n, double epsilon) { return tail_mass(n, epsilon).value; }

/// Tchebychev bound Var(X_n) / eps^2 = n / eps^2.
inline double tchebychev_bound(std::uint64_t n, double epsilon) {
  detail::require_rate(n);
  if (!(epsilon > 0.0)) throw DomainError("tchebychev_bound: epsilon must be positive");
  return static_cast<double>(n) / (epsilon * epsilon);
}

/// Central and tail probability masses for a given split parameter.
struct PoissonSplit {
  std::uint64_t rate_n = 1;
  double epsilon = 1.0;
  double central_mass = 0.0;
  double tail_mass = 0.0;
  double truncation_error = 0.0;
};

inline PoissonSplit split(std::uint64_t n, double epsilon) {
  const TailMass tail = tail_mass(n, epsilon);
  const double rate = static_cast<double>(n);
  CompensatedSum central;
  const Window w = window(n);
  const auto lo = std::max(w.lo, static_cast<std::uint64_t>(std::max(0.0, std::ceil(rate - epsilon))));
  const auto hi = static_cast<std::uint64_t>(std::min(static_cast<double>(w.hi), std::floor(rate + epsilon)));
  for (std::uint64_t m = lo; m <= hi; ++m) {
    if (std::abs(static_cast<double>(m) - rate) <= epsilon) central.add(pmf(n, m));
  }
  // The central sum is confined to the window, so its dropped mass counts too.
  return {n, epsilon, central.value(), tail.value, tail.truncation_error + w.dropped};
}

/// The Chernoff sum e^{-n} sum_m n^m/m! |(C^n - C^m) x| split at eps.
struct ChernoffSplit {
  double central = 0.0;
  double tail = 0.0;
  PoissonSplit masses;
  /// Upper bound on the part of the sum dropped by the window (2|x| per unit mass).
  double truncation_error = 0.0;
};

inline ChernoffSplit chernoff_split_sum(const Operator& c, const Vector& x, std::uint64_t n,
                                        double epsilon) {
  require_valid(c, "chernoff_split_sum");
  detail::require_rate(n);
  if (!(epsilon > 0.0)) throw DomainError("chernoff_split_sum: epsilon must be positive");
  if (x.size() != c.rows()) throw InvalidInput("chernoff_split_sum: dimension mismatch");
  if (op_norm(c) > 1.0 + tol::contraction_out) {
    throw InvalidInput("chernoff_split_sum: operator is not a contraction");
  }
  if (std::abs(x.norm() - 1.0) > 1e-12) throw InvalidInput("chernoff_split_sum: x must be a unit vector");

  const Window w = window(n);
  const double rate = static_cast<double>(n);
  const std::uint64_t top = std::max(w.hi, n);
  std::vector<Vector> powers;
  powers.reserve(static_cast<std::size_t>(top + 1));
  powers.push_back(x);
  for (std::uint64_t m = 1; m <= top; ++m) powers.push_back(c * powers.back());
  const Vector& cn_x = powers[static_cast<std::size_t>(n)];

  CompensatedSum central;
  CompensatedSum tail;
  CompensatedSum central_mass;
  CompensatedSum tail_mass;
  for (std::uint64_t m = w.lo; m <= w.hi; ++m) {
    const double p = pmf(n, m);
    const double term = p * (cn_x - powers[static_cast<std::size_t>(m)]).norm();
    if (std::abs(static_cast<double>(m) - rate) <= epsilon) {
      central.add(term);
      central_mass.add(p);
    } else {
      tail.add(term);
      tail_mass.add(p);
    }
  }
  ChernoffSplit out;
  out.central = central.value();
  out.tail = tail.value();
  out.masses = {n, epsilon, central_mass.value(), tail_mass.value(), w.dropped};
  out.truncation_error = 2.0 * w.dropped;
  return out;
}

}  // namespace chernoff::poisson
