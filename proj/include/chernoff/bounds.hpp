#pragma once

// Closed-form constants and error bounds for Chernoff-type approximations.
// Every function here is a pure function of scalars.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>

#include <json.hpp>

#include "chernoff/constants.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/poisson.hpp"

namespace chernoff::bounds {

using std::numbers::e;
using std::numbers::pi;

namespace detail {

inline void require_n(std::uint64_t n) {
  if (n < 1) throw DomainError("n must be >= 1");
}

inline double dn(std::uint64_t n) { return static_cast<double>(n); }

}  // namespace detail

/// sqrt(n) * ||(C - 1)x||.
inline double sqrt_n_bound(std::uint64_t n, double d1) {
  detail::require_n(n);
  return std::sqrt(detail::dn(n)) * d1;
}

/// Truncated sum of pmf(n, m) (m - n)^2 over m; equals the Poisson variance n.
inline double poisson_abs_moment_identity(std::uint64_t n) {
  detail::require_n(n);
  return poisson::central_moment(n, 2.0);
}

/// Minimiser over eps of (n / eps^2) 2 |x| + eps |(1 - C)x|.
inline double epsilon_star(std::uint64_t n, double nx, double d1) {
  detail::require_n(n);
  if (!(nx > 0.0)) throw InvalidInput("epsilon_star: |x| must be positive");
  if (d1 == 0.0) {
    throw DegenerateInput("epsilon_star: |(1-C)x| = 0, the bound is minimised as eps -> inf");
  }
  if (!(d1 > 0.0)) throw InvalidInput("epsilon_star: |(1-C)x| must be nonnegative");
  return std::cbrt(4.0 * detail::dn(n) * nx / d1);
}

/// Two-term split bound: tail mass times 2|x| plus eps times |(1 - C)x|.
inline double cbrt_vector_bound(std::uint64_t n, double eps, double nx, double d1) {
  detail::require_n(n);
  if (!(eps > 0.0)) throw DomainError("cbrt_vector_bound: eps must be positive");
  return detail::dn(n) / (eps * eps) * 2.0 * nx + eps * d1;
}

/// Value of cbrt_vector_bound at eps = epsilon_star: (3/2) n^{1/3} (4|x|)^{1/3} d1^{2/3}.
inline double cbrt_vector_optimal(std::uint64_t n, double nx, double d1) {
  detail::require_n(n);
  return 1.5 * std::cbrt(detail::dn(n)) * std::cbrt(4.0 * nx) * std::pow(d1, 2.0 / 3.0);
}

/// Operator-norm form: (3/2) n^{1/3} (2 ||1 - C||)^{2/3}.
inline double cbrt_norm_bound(std::uint64_t n, double norm_one_minus_c) {
  detail::require_n(n);
  return 1.5 * std::cbrt(detail::dn(n)) * std::pow(2.0 * norm_one_minus_c, 2.0 / 3.0);
}

/// (n/2) (||(C-1)^2 x|| + (e^2/3) ||(C-1)^3 x||).
inline double telescopic_bound(std::uint64_t n, double d2, double d3) {
  detail::require_n(n);
  return 0.5 * detail::dn(n) * (d2 + e * e / 3.0 * d3);
}

/// Ritt constant K_{alpha, alpha'} from the contour estimate along the
/// boundary of D_{alpha'}.
inline double ritt_constant(double alpha, double alpha_prime) {
  if (!(alpha >= 0.0 && alpha < alpha_prime && alpha_prime < pi / 2)) {
    throw DomainError("ritt_constant: need 0 <= alpha < alpha' < pi/2");
  }
  // log sin(alpha') = log(1 - 2 sin^2(delta/2)) with delta = pi/2 - alpha';
  // stays nonzero as alpha' -> pi/2 where sin rounds to 1.
  const double half = std::sin(0.5 * (pi / 2 - alpha_prime));
  const double log_sin = std::log1p(-2.0 * half * half);
  return 2.0 / (std::cos(alpha_prime) * std::sin(alpha_prime - alpha)) * (1.0 / pi - 1.0 / (e * log_sin));
}

struct KAlpha {
  double value = 0.0;
  double argmin_alpha_prime = 0.0;
};

/// K_alpha = min over alpha' in (alpha, pi/2) of K_{alpha, alpha'}:
/// 2048-point interior grid, then golden-section refinement to 1e-8 in alpha'.
inline KAlpha k_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < pi / 2)) throw DomainError("k_alpha: alpha must lie in [0, pi/2)");
  const int grid = tol::k_alpha_grid;
  const double lo = alpha;
  const double hi = pi / 2;
  const double h = (hi - lo) / (grid + 1);
  int best = 1;
  double best_value = ritt_constant(alpha, lo + h);
  for (int i = 2; i <= grid; ++i) {
    const double v = ritt_constant(alpha, lo + i * h);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  // Golden section on the bracketing grid cells. Endpoints are never
  // evaluated, so the poles at alpha and pi/2 are avoided.
  double a = lo + (best - 1) * h;
  double b = lo + (best + 1) * h;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = ritt_constant(alpha, x1);
  double f2 = ritt_constant(alpha, x2);
  while (b - a > tol::k_alpha_refine) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = ritt_constant(alpha, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = ritt_constant(alpha, x2);
    }
  }
  KAlpha out{best_value, lo + best * h};
  const double mid = 0.5 * (a + b);
  const double fmid = ritt_constant(alpha, mid);
  if (fmid <= out.value) out = {fmid, mid};
  return out;
}

/// L_alpha = 2 K_alpha + 2.
inline double l_alpha(double alpha) { return 2.0 * k_alpha(alpha).value + 2.0; }

/// L / n^{1/3} for a precomputed L_alpha.
inline double norm_chernoff_bound_from_l(std::uint64_t n, double l) {
  detail::require_n(n);
  return l / std::cbrt(detail::dn(n));
}

/// Operator-norm Chernoff bound L_alpha / n^{1/3}.
inline double norm_chernoff_bound(std::uint64_t n, double alpha) {
  return norm_chernoff_bound_from_l(n, l_alpha(alpha));
}

struct TwoParamBound {
  double value = 0.0;
  bool clears_threshold = false;
};

/// 2 / n^{2 delta} + 2 K / n^{1/2 - delta} with eps_n = n^{delta + 1/2}.
/// The simplification from the central-part estimate needs
/// n >= 2 (floor(eps_n) - 1); `clears_threshold` reports it.
inline TwoParamBound two_param_bound(std::uint64_t n, double delta, double k_alpha_value) {
  detail::require_n(n);
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("two_param_bound: delta must lie in (0, 1/2)");
  const double x = detail::dn(n);
  const double value = 2.0 / std::pow(x, 2.0 * delta) + 2.0 * k_alpha_value / std::pow(x, 0.5 - delta);
  const double eps_floor = std::floor(std::pow(x, delta + 0.5));
  return {value, x >= 2.0 * (eps_floor - 1.0)};
}

/// Conservative proof threshold: smallest real n with n >= 2 n^{delta+1/2}
/// (the floor and -1 dropped), i.e. 2^{1/(1/2 - delta)}. Equals 8 at delta = 1/6.
inline double proof_threshold(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("proof_threshold: delta must lie in (0, 1/2)");
  return std::pow(2.0, 1.0 / (0.5 - delta));
}

/// Self-adjoint Ritt bound 1/(n+1).
inline double selfadjoint_ritt_bound(std::uint64_t n) {
  detail::require_n(n);
  return 1.0 / (detail::dn(n) + 1.0);
}

/// Self-adjoint Chernoff bound e^{-1}/n.
inline double selfadjoint_chernoff_bound(std::uint64_t n) {
  detail::require_n(n);
  return 1.0 / (e * detail::dn(n));
}

/// Certified upper value of the Euler constant M_alpha:
/// min((pi - alpha)/alpha, 2 + 2/sqrt(3)), and 2 + 2/sqrt(3) at alpha = 0.
inline double euler_upper_constant(double alpha) {
  if (!(alpha >= 0.0 && alpha < pi / 2)) throw DomainError("euler constant: alpha must lie in [0, pi/2)");
  const double m = 2.0 + 2.0 / std::sqrt(3.0);
  return alpha > 0.0 ? std::min((pi - alpha) / alpha, m) : m;
}

/// Lower end of the M_alpha interval, pi sin(alpha) / (2 alpha) (pi/2 at 0).
inline double euler_lower_constant(double alpha) {
  if (!(alpha >= 0.0 && alpha < pi / 2)) throw DomainError("euler constant: alpha must lie in [0, pi/2)");
  return alpha > 0.0 ? pi * std::sin(alpha) / (2.0 * alpha) : pi / 2.0;
}

/// M_alpha / ((cos alpha)^2 n) with the certified upper M_alpha.
inline double euler_bound(std::uint64_t n, double alpha) {
  detail::require_n(n);
  const double c = std::cos(alpha);
  return euler_upper_constant(alpha) / (c * c * detail::dn(n));
}

/// Distance from p to the closed sector |arg z| <= alpha with vertex 0.
inline double distance_to_sector(std::complex<double> p, double alpha) {
  const double r = std::abs(p);
  if (r == 0.0) return 0.0;
  const double gap = std::abs(std::arg(p)) - alpha;
  if (gap <= 0.0) return 0.0;
  return gap >= pi / 2 ? r : r * std::sin(gap);
}

/// Resolvent-difference estimate for X(s) = (1 - (1 + sA)^{-1})/s against A:
///   |(zeta + X(s))^{-1} - (zeta + A)^{-1}|
///     <= s (1 + |zeta| / dist(zeta/(1 + s zeta), -S_alpha)) (1 + |zeta| / dist(zeta, -S_alpha)).
inline double tnk_resolvent_bound(double s, std::complex<double> zeta, double alpha) {
  if (!(s > 0.0)) throw DomainError("tnk_resolvent_bound: s must be positive");
  const double z = std::abs(zeta);
  const auto shifted = zeta / (1.0 + s * zeta);
  // dist(w, -S_alpha) = dist(-w, S_alpha)
  const double d1 = distance_to_sector(-shifted, alpha);
  const double d2 = distance_to_sector(-zeta, alpha);
  if (d1 == 0.0 || d2 == 0.0) throw DomainError("tnk_resolvent_bound: zeta outside S_{pi - alpha}");
  return s * (1.0 + z / d1) * (1.0 + z / d2);
}

/// A named bound instance, as serialised into reports.
struct BoundSpec {
  std::string name;
  std::map<std::string, double> inputs;
  double value = 0.0;
  std::string paper_tag;

  bool operator==(const BoundSpec&) const = default;
};

inline void to_json(nlohmann::json& j, const BoundSpec& b) {
  j = nlohmann::json{{"name", b.name}, {"inputs", b.inputs}, {"value", b.value}, {"paper_tag", b.paper_tag}};
}

inline void from_json(const nlohmann::json& j, BoundSpec& b) {
  b.name = j.at("name").get<std::string>();
  b.inputs = j.at("inputs").get<std::map<std::string, double>>();
  b.value = j.at("value").get<double>();
  b.paper_tag = j.at("paper_tag").get<std::string>();
}

}  // namespace chernoff::bounds
