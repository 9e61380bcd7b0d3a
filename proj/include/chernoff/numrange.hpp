#pragma once

// Numerical-range geometry: boundary sampling of W(C), the regions D_alpha
// (disc of radius sin(alpha) joined to the wedge with vertex 1) and S_alpha
// (sector with vertex 0), and quasi-sectorial certification.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "chernoff/constants.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/linalg.hpp"

namespace chernoff {

namespace detail {

// Distance from p to the segment [a, b].
inline double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

// arg with the vertex convention arg(0) = 0.
inline double safe_arg(cplx z) { return z == cplx(0.0, 0.0) ? 0.0 : std::arg(z); }

inline void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < std::numbers::pi / 2)) {
    throw DomainError("semi-angle must lie in [0, pi/2)");
  }
}

}  // namespace detail

/// The closed region D_alpha with vertex at z = 1.
struct RegionDAlpha {
  double alpha = 0.0;

  /// Membership with tolerance `tol` on the radius and angle tests.
  [[nodiscard]] bool contains(cplx z, double tol = tol::geo) const {
    if (std::abs(z) <= std::sin(alpha) + tol) return true;
    const cplx w = 1.0 - z;
    return std::abs(detail::safe_arg(w)) <= alpha + tol && std::abs(w) <= std::cos(alpha) + tol;
  }

  /// Euclidean distance to the region: minimum of the distances to the disc
  /// part and to the wedge part.
  [[nodiscard]] double distance(cplx z) const {
    const double disc = std::max(0.0, std::abs(z) - std::sin(alpha));
    if (disc == 0.0) return 0.0;
    const double r = std::cos(alpha);
    // Work in w = 1 - z, where the wedge opens along the positive real axis.
    const cplx w = 1.0 - z;
    const double rho = std::abs(w);
    const double phi = detail::safe_arg(w);
    double wedge;
    if (std::abs(phi) <= alpha) {
      wedge = std::max(0.0, rho - r);
    } else {
      const cplx upper = std::polar(r, alpha);
      const cplx lower = std::polar(r, -alpha);
      wedge = std::min(detail::segment_distance(w, 0.0, upper),
                       detail::segment_distance(w, 0.0, lower));
    }
    return std::min(disc, wedge);
  }
};

/// Membership z in D_alpha. z = 1 belongs to every D_alpha.
inline bool in_D_alpha(cplx z, double alpha) { return RegionDAlpha{alpha}.contains(z); }

inline double distance_to_D_alpha(cplx z, double alpha) { return RegionDAlpha{alpha}.distance(z); }

/// Membership in the closed sector of semi-angle alpha with vertex 0.
/// Points within tol::geo of the vertex count as the vertex.
inline bool in_sector(cplx z, double alpha) {
  if (std::abs(z) <= tol::geo) return true;
  return std::abs(std::arg(z)) <= alpha + tol::geo;
}

/// Boundary sample of the numerical range W(C). For each direction
/// theta_j = 2 pi j / k the top eigenvector x_j of the Hermitian part of
/// e^{i theta_j} C is a support point, and x_j* C x_j lies on the boundary.
inline std::vector<cplx> numerical_range_boundary(const Operator& c,
                                                  int k = tol::default_boundary_points) {
  require_valid(c, "numerical_range_boundary");
  if (k < tol::min_boundary_points) {
    throw InvalidInput("numerical_range_boundary: need at least 16 directions");
  }
  std::vector<cplx> points;
  points.reserve(static_cast<std::size_t>(k));
  if (c.rows() == 1) {
    points.assign(static_cast<std::size_t>(k), c(0, 0));
    return points;
  }
  Eigen::SelfAdjointEigenSolver<Operator> es;
  for (int j = 0; j < k; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / k;
    const Operator rotated = std::polar(1.0, theta) * c;
    es.compute(hermitian_part(rotated));
    const Vector x = es.eigenvectors().col(c.rows() - 1);
    points.push_back(x.dot(c * x));  // Eigen's dot conjugates the left argument
  }
  return points;
}

struct SectorCertificate {
  double alpha_hat = 0.0;
  std::vector<cplx> boundary_points;
  double max_violation = 0.0;
};

/// Certification failure: the worst boundary point and how far outside
/// D_alpha it sits.
struct SectorFailure {
  double alpha = 0.0;
  cplx worst_point{};
  double distance = 0.0;
};

using Certification = std::variant<SectorCertificate, SectorFailure>;

inline bool certified(const Certification& c) {
  return std::holds_alternative<SectorCertificate>(c);
}

namespace detail {

inline Certification certify_points(std::vector<cplx> points, double alpha) {
  const RegionDAlpha region{alpha};
  double worst = 0.0;
  cplx worst_point = points.empty() ? cplx{} : points.front();
  for (const auto& z : points) {
    const double d = region.distance(z);
    if (d > worst) {
      worst = d;
      worst_point = z;
    }
  }
  if (worst <= tol::geo) return SectorCertificate{alpha, std::move(points), worst};
  return SectorFailure{alpha, worst_point, worst};
}

}  // namespace detail

/// Checks W(C) in D_alpha on k sampled boundary points.
inline Certification certify_quasi_sectorial(const Operator& c, double alpha,
                                             int k = tol::default_boundary_points) {
  detail::require_alpha(alpha);
  return detail::certify_points(numerical_range_boundary(c, k), alpha);
}

/// Smallest certified semi-angle by bisection, or nullopt if W(C) escapes
/// even D_{pi/2 - 1e-6}.
inline std::optional<double> min_semi_angle(const Operator& c,
                                            int k = tol::default_boundary_points) {
  if (op_norm(c) > 1.0 + tol::contraction_slack) {
    throw NotAContraction("min_semi_angle: operator norm exceeds 1");
  }
  const auto points = numerical_range_boundary(c, k);
  auto worst_at = [&](double alpha) {
    const RegionDAlpha region{alpha};
    double worst = 0.0;
    for (const auto& z : points) worst = std::max(worst, region.distance(z));
    return worst;
  };
  double lo = 0.0;
  double hi = std::numbers::pi / 2 - tol::semi_angle_abs;
  if (worst_at(lo) <= tol::geo) return 0.0;
  if (worst_at(hi) > tol::geo) return std::nullopt;
  while (hi - lo > 0.25 * tol::semi_angle_abs) {
    const double mid = 0.5 * (lo + hi);
    (worst_at(mid) <= tol::geo ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace chernoff
