#pragma once

// Riesz-Dunford calculus along the boundary of D_{alpha'}:
//   f(C) = (1 / 2 pi i) \oint f(z) (z - C)^{-1} dz
// with composite Gauss-Legendre quadrature on the three boundary pieces,
// graded geometrically toward the vertex z = 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include "chernoff/bounds.hpp"
#include "chernoff/constants.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/linalg.hpp"
#include "chernoff/numrange.hpp"

namespace chernoff::contour {

using std::numbers::pi;

enum class Segment { line_minus, arc, line_plus };

inline std::string_view to_string(Segment s) {
  switch (s) {
    case Segment::line_minus: return "line_minus";
    case Segment::arc: return "arc";
    case Segment::line_plus: return "line_plus";
  }
  return "arc";
}

struct Node {
  cplx z;
  cplx dz_weight;  // quadrature weight times z'(parameter)
  Segment segment;
};

/// Positively oriented quadrature nodes on the boundary of D_{alpha'}:
///   line_minus  z = 1 - s e^{-i alpha'},  s: 0 -> cos alpha'   (1 -> A)
///   arc         z = sin(alpha') e^{it},   t: pi/2 - alpha' -> 3pi/2 + alpha'   (A -> B)
///   line_plus   z = 1 - s e^{+i alpha'},  s: cos alpha' -> 0   (B -> 1)
struct ContourNodes {
  double alpha_prime = 0.0;
  int k_arc = 0;
  int k_line = 0;
  int level = 0;
  std::vector<Node> nodes;
};

inline constexpr int kGaussOrder = 10;

struct GaussRule {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

/// Gauss-Legendre rule by Newton iteration on P_order.
inline GaussRule gauss_legendre(int order) {
  GaussRule rule{std::vector<double>(static_cast<std::size_t>(order)),
                 std::vector<double>(static_cast<std::size_t>(order))};
  for (int i = 0; i < order; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.x[static_cast<std::size_t>(i)] = x;
    rule.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

namespace detail {

inline const GaussRule& rule() {
  static const GaussRule r = gauss_legendre(kGaussOrder);
  return r;
}

// Appends nodes for parameter panel [a, b] mapped through z(p), dz/dp.
template <typename Map, typename Deriv>
void add_panel(std::vector<Node>& out, double a, double b, Segment seg, Map&& map, Deriv&& deriv) {
  const auto& r = rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const double p = mid + half * r.x[i];
    out.push_back({map(p), half * r.w[i] * deriv(p), seg});
  }
}

// Panel breakpoints on [0, len]: geometric toward 0 (ratio 1/2, `levels`
// panels), coarse panels capped at len/8, each split uniformly into `split`
// subpanels.
inline std::vector<double> graded_breaks(double len, int levels, int split) {
  std::vector<double> coarse{0.0};
  for (int k = levels - 1; k >= 0; --k) coarse.push_back(std::ldexp(len, -k));
  std::vector<double> out{0.0};
  for (std::size_t i = 1; i < coarse.size(); ++i) {
    const double width = coarse[i] - coarse[i - 1];
    const int pieces = split * std::max(1, static_cast<int>(std::ceil(width / (len / 8) - 1e-12)));
    for (int j = 1; j <= pieces; ++j) out.push_back(coarse[i - 1] + width * j / pieces);
  }
  return out;
}

}  // namespace detail

/// Builds the contour. `k_arc` arc panels and `k_line` graded panels per
/// line at level 0; each refinement level doubles the panel count on every
/// segment and adds four finer levels of grading at the vertex.
inline ContourNodes build_contour(double alpha_prime, int k_arc, int k_line, int level = 0) {
  if (!(alpha_prime > 0.0 && alpha_prime < pi / 2)) {
    throw DomainError("build_contour: alpha' must lie in (0, pi/2)");
  }
  if (k_arc < 8 || k_line < 8) throw InvalidInput("build_contour: need k_arc, k_line >= 8");
  if (level < 0) throw InvalidInput("build_contour: negative level");

  ContourNodes c{alpha_prime, k_arc, k_line, level, {}};
  const double radius = std::sin(alpha_prime);
  const double len = std::cos(alpha_prime);
  const cplx em = std::polar(1.0, -alpha_prime);
  const cplx ep = std::polar(1.0, alpha_prime);
  const int split = 1 << level;
  const auto breaks = detail::graded_breaks(len, k_line + 4 * level, split);

  // 1 -> A
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    detail::add_panel(
        c.nodes, breaks[i - 1], breaks[i], Segment::line_minus,
        [&](double s) { return 1.0 - s * em; }, [&](double) { return -em; });
  }
  // A -> B
  const double t0 = pi / 2 - alpha_prime;
  const double t1 = 3 * pi / 2 + alpha_prime;
  const int arc_panels = k_arc * split;
  for (int i = 0; i < arc_panels; ++i) {
    const double a = t0 + (t1 - t0) * i / arc_panels;
    const double b = t0 + (t1 - t0) * (i + 1) / arc_panels;
    detail::add_panel(
        c.nodes, a, b, Segment::arc, [&](double t) { return std::polar(radius, t); },
        [&](double t) { return cplx(0.0, 1.0) * std::polar(radius, t); });
  }
  // B -> 1, traversed with decreasing s; the sign flip gives weight +e^{i alpha'}.
  for (std::size_t i = breaks.size() - 1; i >= 1; --i) {
    detail::add_panel(
        c.nodes, breaks[i - 1], breaks[i], Segment::line_plus,
        [&](double s) { return 1.0 - s * ep; }, [&](double) { return ep; });
  }
  return c;
}

/// Segment endpoints A = e^{i(pi/2 - alpha')} sin alpha' and
/// B = e^{i(3pi/2 + alpha')} sin alpha'.
inline std::pair<cplx, cplx> arc_endpoints(double alpha_prime) {
  return {std::polar(std::sin(alpha_prime), pi / 2 - alpha_prime),
          std::polar(std::sin(alpha_prime), 3 * pi / 2 + alpha_prime)};
}

/// (1 / 2 pi i) sum f(z) dz: scalar Cauchy integral on the nodes.
inline cplx scalar_integral(const std::function<cplx(cplx)>& f, const ContourNodes& c) {
  cplx sum{};
  for (const auto& node : c.nodes) sum += f(node.z) * node.dz_weight;
  return sum / cplx(0.0, 2.0 * pi);
}

struct ContourIntegral {
  Operator value;
  std::size_t nodes = 0;
  double change = 0.0;  // spectral norm of the last refinement step
  bool converged = false;
};

namespace detail {

inline Operator integrate_once(const std::function<cplx(cplx)>& f, const Operator& c,
                               const ContourNodes& contour) {
  const auto dim = c.rows();
  const Operator id = identity(dim);
  Operator sum = Operator::Zero(dim, dim);
  for (const auto& node : contour.nodes) {
    const cplx fz = f(node.z);
    if (fz == cplx(0.0, 0.0)) continue;
    Operator resolvent;
    try {
      resolvent = inverse(node.z * id - c);
    } catch (const SingularityError&) {
      throw ContourTooClose("riesz_dunford: quadrature node on the spectrum; enlarge alpha'");
    }
    sum += (fz * node.dz_weight) * resolvent;
  }
  return sum / cplx(0.0, 2.0 * pi);
}

}  // namespace detail

/// f(C) by quadrature, refining (doubling nodes) until successive results
/// differ by less than 1e-8 in spectral norm or the node cap is reached.
inline ContourIntegral riesz_dunford(const std::function<cplx(cplx)>& f, const Operator& c,
                                     const ContourNodes& contour) {
  require_valid(c, "riesz_dunford");
  ContourNodes current = contour;
  ContourIntegral out;
  out.value = detail::integrate_once(f, c, current);
  out.nodes = current.nodes.size();
  out.change = std::numeric_limits<double>::infinity();
  for (;;) {
    ContourNodes finer = build_contour(current.alpha_prime, current.k_arc, current.k_line,
                                       current.level + 1);
    if (finer.nodes.size() > static_cast<std::size_t>(tol::contour_node_cap)) break;
    Operator next = detail::integrate_once(f, c, finer);
    out.change = op_norm(next - out.value);
    out.value = std::move(next);
    out.nodes = finer.nodes.size();
    current = std::move(finer);
    if (out.change < tol::contour_convergence) {
      out.converged = true;
      break;
    }
  }
  return out;
}

/// Default alpha' = (alpha + pi/2) / 2.
inline double default_alpha_prime(double alpha) { return 0.5 * (alpha + pi / 2); }

struct SegmentRatio {
  Segment segment = Segment::arc;
  double worst_ratio = 0.0;  // max over nodes of |(z - C)^{-1}| / majorant
};

/// Node-by-node check of the resolvent majorants used in the Ritt estimate,
/// plus the chain of upper bounds for |C^n (1 - C)| it produces.
struct ContourBoundReport {
  double alpha = 0.0;
  double alpha_prime = 0.0;
  std::uint64_t n = 0;
  std::vector<SegmentRatio> segments;  // line_minus, arc, line_plus
  /// max of |(z - C)^{-1}| dist(z, D_alpha); at most 1 when W(C) is in D_alpha.
  double worst_distance_ratio = 0.0;
  double actual_norm = 0.0;         // |C^n (1 - C)|
  double resolvent_integral = 0.0;  // (1/2pi) \oint |f| |(z - C)^{-1}| |dz|
  double majorant_integral = 0.0;   // same with the geometric majorants
  double closed_form = 0.0;         // sum of the arc and line closed forms
  double closed_form_simplified = 0.0;
  double ritt_bound = 0.0;  // K_{alpha, alpha'} / (n + 1)

  [[nodiscard]] double worst_majorant_ratio() const {
    double w = 0.0;
    for (const auto& s : segments) w = std::max(w, s.worst_ratio);
    return w;
  }
};

inline ContourBoundReport contour_norm_bound_check(const Operator& c, double alpha,
                                                   double alpha_prime, std::uint64_t n,
                                                   int level = 1) {
  require_valid(c, "contour_norm_bound_check");
  if (!(alpha >= 0.0 && alpha < alpha_prime && alpha_prime < pi / 2)) {
    throw DomainError("contour_norm_bound_check: need 0 <= alpha < alpha' < pi/2");
  }
  if (!certified(certify_quasi_sectorial(c, alpha))) {
    throw InvalidInput("contour_norm_bound_check: operator is not certified for alpha");
  }
  const auto contour = build_contour(alpha_prime, 16, 16, level);
  const double sin_gap = std::sin(alpha_prime - alpha);
  const double arc_majorant = 1.0 / (std::cos(alpha_prime) * sin_gap);
  const auto dim = c.rows();
  const Operator id = identity(dim);
  const double dn = static_cast<double>(n);

  ContourBoundReport r;
  r.alpha = alpha;
  r.alpha_prime = alpha_prime;
  r.n = n;
  r.segments = {{Segment::line_minus, 0.0}, {Segment::arc, 0.0}, {Segment::line_plus, 0.0}};
  const RegionDAlpha region{alpha};
  for (const auto& node : contour.nodes) {
    const double res = op_norm(inverse(node.z * id - c));
    const double majorant =
        node.segment == Segment::arc ? arc_majorant : 1.0 / (std::abs(1.0 - node.z) * sin_gap);
    auto& seg = r.segments[static_cast<std::size_t>(node.segment)];
    seg.worst_ratio = std::max(seg.worst_ratio, res / majorant);
    r.worst_distance_ratio = std::max(r.worst_distance_ratio, res * region.distance(node.z));
    const double fz = std::pow(std::abs(node.z), dn) * std::abs(1.0 - node.z);
    const double dz = std::abs(node.dz_weight);
    r.resolvent_integral += fz * res * dz;
    r.majorant_integral += fz * majorant * dz;
  }
  r.resolvent_integral /= 2 * pi;
  r.majorant_integral /= 2 * pi;

  r.actual_norm = op_norm(mat_pow(c, n) * (id - c));
  const double s = std::sin(alpha_prime);
  const double cs = std::cos(alpha_prime) * sin_gap;
  r.closed_form = 2.0 * std::pow(s, dn + 1) / cs + 2.0 * (1.0 - std::pow(s, dn + 2)) / (pi * (dn + 2) * cs);
  r.closed_form_simplified = 2.0 / ((dn + 1) * cs) * (1.0 / pi + (dn + 1) * std::pow(s, dn + 1));
  r.ritt_bound = bounds::ritt_constant(alpha, alpha_prime) / (dn + 1);
  return r;
}

}  // namespace chernoff::contour
