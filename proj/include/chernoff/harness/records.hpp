#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chernoff/constants.hpp"
#include "chernoff/errors.hpp"

namespace chernoff::harness {

/// passed <=> empirical <= bound (1 + slack_rel) + slack_abs.
inline bool within_bound(double empirical, double bound) {
  return empirical <= bound * (1.0 + tol::slack_rel) + tol::slack_abs;
}

struct ErrorRecord {
  std::string experiment_id;
  std::uint64_t n = 0;
  double t = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool passed = false;

  bool operator==(const ErrorRecord&) const = default;
};

/// Builds a record with ratio and verdict filled in. ratio is 0 for 0/0 and
/// +inf for a positive error against a zero bound.
inline ErrorRecord make_record(std::string id, std::uint64_t n, double t, double empirical,
                               double bound) {
  ErrorRecord r{std::move(id), n, t, empirical, bound, 0.0, false};
  if (bound > 0.0) {
    r.ratio = empirical / bound;
  } else if (empirical > 0.0) {
    r.ratio = HUGE_VAL;
  }
  r.passed = within_bound(empirical, bound);
  return r;
}

struct RateEstimate {
  double exponent_p = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  double n_min = 0.0;
  double n_max = 0.0;
  std::size_t points = 0;
  std::size_t dropped_zero = 0;

  bool operator==(const RateEstimate&) const = default;
};

/// Least-squares fit of log err = log c - p log n. Nonpositive errors are
/// dropped and counted.
inline RateEstimate fit_rate(const std::vector<std::pair<double, double>>& points) {
  std::vector<std::pair<double, double>> logs;
  RateEstimate out;
  for (const auto& [n, err] : points) {
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidInput("fit_rate: n must be positive");
    if (err > 0.0 && std::isfinite(err)) {
      logs.emplace_back(std::log(n), std::log(err));
    } else {
      ++out.dropped_zero;
    }
  }
  if (logs.size() < 5) throw InsufficientData("fit_rate: need at least 5 positive points");

  const double k = static_cast<double>(logs.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw InsufficientData("fit_rate: all n coincide");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  out.exponent_p = -slope;
  out.prefactor = std::exp(intercept);
  // Exact fits leave syy at rounding level; r^2 is clamped into [0, 1].
  double r2 = 1.0;
  if (syy > 0.0) {
    double sse = 0.0;
    for (const auto& [x, y] : logs) {
      const double res = y - (intercept + slope * x);
      sse += res * res;
    }
    r2 = 1.0 - sse / syy;
  }
  out.r_squared = std::min(1.0, std::max(0.0, r2));
  out.n_min = HUGE_VAL;
  out.n_max = 0.0;
  for (const auto& [n, err] : points) {
    if (err > 0.0 && std::isfinite(err)) {
      out.n_min = std::min(out.n_min, n);
      out.n_max = std::max(out.n_max, n);
    }
  }
  out.points = logs.size();
  return out;
}

}  // namespace chernoff::harness
