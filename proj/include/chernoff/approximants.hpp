#pragma once

// Approximation schemes for e^{-tA}: Euler, Dunford-Segal, Chernoff
// power/exponential pairs, Lie-Trotter products and discrete generators.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "chernoff/ensembles.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/linalg.hpp"

namespace chernoff {

/// s -> Phi(s), a family of contractions with Phi(0) = 1. Evaluated on demand
/// so that t/n is exact for any n.
struct ContractionFamily {
  std::function<Operator(double)> evaluator;
  std::string descriptor;
  Eigen::Index dim = 1;

  Operator operator()(double s) const { return evaluator(s); }
};

/// Phi(s) = e^{-sA}.
inline ContractionFamily semigroup_family(Operator a) {
  const auto dim = a.rows();
  return {[a = std::move(a)](double s) { return expm(-s * a); }, "semigroup", dim};
}

/// Phi(s) = (1 + sA)^{-1}.
inline ContractionFamily resolvent_family(Operator a) {
  const auto dim = a.rows();
  return {[a = std::move(a)](double s) { return inverse(identity(a.rows()) + s * a); }, "resolvent",
          dim};
}

/// Phi(s) = e^{-sA} e^{-sB}.
inline ContractionFamily trotter_family(Operator a, Operator b) {
  const auto dim = a.rows();
  return {[a = std::move(a), b = std::move(b)](double s) { return Operator(expm(-s * a) * expm(-s * b)); },
          "trotter", dim};
}

inline ContractionFamily identity_family(Eigen::Index dim) {
  return {[dim](double) { return identity(dim); }, "identity", dim};
}

/// Generators A, B and their sum. In finite dimensions the algebraic sum
/// needs no closure.
struct GeneratorPair {
  Operator a;
  Operator b;
  Operator sum;

  GeneratorPair(Operator a_in, Operator b_in) : a(std::move(a_in)), b(std::move(b_in)) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw InvalidInput("GeneratorPair: dimension mismatch");
    }
    sum = a + b;
  }
};

namespace detail {

inline void require_t(double t) {
  if (!(t >= 0.0)) throw DomainError("t must be nonnegative");
}

inline void require_steps(std::uint64_t n) {
  if (n < 1) throw DomainError("n must be >= 1");
}

}  // namespace detail

/// Exact semigroup e^{-tA}.
inline Operator reference_semigroup(const Operator& a, double t) {
  detail::require_t(t);
  return expm(-t * a);
}

/// (1 + tA/n)^{-n}.
inline Operator euler_approx(const Operator& a, double t, std::uint64_t n) {
  detail::require_t(t);
  detail::require_steps(n);
  const double step = t / static_cast<double>(n);
  return mat_pow(inverse(identity(a.rows()) + step * a), n);
}

/// e^{-n(1 - e^{-tA/n})}.
inline Operator dunford_segal_approx(const Operator& a, double t, std::uint64_t n) {
  detail::require_t(t);
  detail::require_steps(n);
  const Operator step = expm(-(t / static_cast<double>(n)) * a);
  return expm(-static_cast<double>(n) * (identity(a.rows()) - step));
}

/// Phi(t/n)^n.
inline Operator chernoff_power(const ContractionFamily& phi, double t, std::uint64_t n) {
  detail::require_t(t);
  detail::require_steps(n);
  return mat_pow(phi(t / static_cast<double>(n)), n);
}

/// e^{n(Phi(t/n) - 1)}.
inline Operator chernoff_exp(const ContractionFamily& phi, double t, std::uint64_t n) {
  detail::require_t(t);
  detail::require_steps(n);
  const Operator step = phi(t / static_cast<double>(n));
  return expm(static_cast<double>(n) * (step - identity(step.rows())));
}

/// A_n(s) = (1 - Phi(s/n)) / (s/n). With n = 1 this is X(s) = (1 - Phi(s))/s.
inline Operator discrete_generator(const ContractionFamily& phi, double s, std::uint64_t n) {
  if (!(s > 0.0)) throw DomainError("discrete_generator: s must be positive");
  detail::require_steps(n);
  const double h = s / static_cast<double>(n);
  const Operator step = phi(h);
  return (identity(step.rows()) - step) / h;
}

/// (e^{-tA/n} e^{-tB/n})^n.
inline Operator trotter_approx(const GeneratorPair& pair, double t, std::uint64_t n) {
  detail::require_t(t);
  detail::require_steps(n);
  const double h = t / static_cast<double>(n);
  return mat_pow(expm(-h * pair.a) * expm(-h * pair.b), n);
}

/// Spectral-norm distance between an approximant and its reference.
inline double approx_error(const Operator& approx, const Operator& reference) {
  if (approx.rows() != reference.rows() || approx.cols() != reference.cols()) {
    throw InvalidInput("approx_error: dimension mismatch");
  }
  return op_norm(approx - reference);
}

}  // namespace chernoff
