#pragma once

// Seeded operator factories. All randomness flows through SeededRng, a
// std::mt19937_64 stream (the 64-bit Mersenne Twister, MT19937-64) with
// uniforms built from the top 53 bits and normals from Box-Muller, so the
// draws are reproducible across platforms and standard libraries.

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chernoff/errors.hpp"
#include "chernoff/linalg.hpp"

namespace chernoff {

/// splitmix64 finaliser; used to derive per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed splitting rule for parallel or repeated draws: base XOR hash(index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return base ^ splitmix64(index);
}

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (both variates are used).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  /// Complex matrix with independent standard normal real and imaginary parts.
  Operator gaussian(Eigen::Index dim) {
    Operator g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        const double re = normal();
        const double im = normal();
        g(i, j) = cplx(re, im);
      }
    }
    return g;
  }

  Vector unit_vector(Eigen::Index dim) {
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal();
      const double im = normal();
      v(i) = cplx(re, im);
    }
    return v / v.norm();
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of diag(R) divided out.
inline Operator haar_unitary(Eigen::Index dim, SeededRng& rng) {
  const Operator g = rng.gaussian(dim);
  Eigen::HouseholderQR<Operator> qr(g);
  Operator q = qr.householderQ();
  const Operator r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

/// Gaussian matrix scaled to spectral norm u with u uniform in [0.5, 1].
inline Operator random_contraction(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidInput("random_contraction: dim must be >= 1");
  SeededRng rng(seed);
  const Operator g = rng.gaussian(dim);
  const double factor = rng.uniform(0.5, 1.0);
  Operator c = g * (factor / op_norm(g));
  // Guard against the last ulp pushing the norm over 1.
  const double norm = op_norm(c);
  if (norm > 1.0) c /= norm;
  return c;
}

/// U diag(spectrum) U* for a Haar unitary U drawn from `seed`.
inline Operator self_adjoint_contraction(std::span<const double> spectrum, std::uint64_t seed) {
  if (spectrum.empty()) throw InvalidInput("self_adjoint_contraction: empty spectrum");
  for (double s : spectrum) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw InvalidInput("self_adjoint_contraction: spectrum value outside [0, 1]");
    }
  }
  const auto dim = static_cast<Eigen::Index>(spectrum.size());
  SeededRng rng(seed);
  const Operator u = haar_unitary(dim, rng);
  Eigen::VectorXd diag(dim);
  for (Eigen::Index k = 0; k < dim; ++k) diag(k) = spectrum[static_cast<std::size_t>(k)];
  const Operator c = u * diag.cast<cplx>().asDiagonal() * u.adjoint();
  return hermitian_part(c);
}

/// A = H^{1/2} (1 + iK) H^{1/2}. For unit x and y = H^{1/2} x,
/// x*Ax = |y|^2 + i y*Ky, so |arg x*Ax| <= atan(||K||).
inline Operator compose_m_sectorial(const Operator& h, const Operator& k) {
  const Operator root = psd_sqrt(h);
  return root * (identity(h.rows()) + cplx(0.0, 1.0) * hermitian_part(k)) * root;
}

/// m-sectorial generator with W(A) inside the closed sector of semi-angle
/// alpha: H = G*G/dim, K Hermitian Gaussian rescaled to ||K|| = tan(alpha).
inline Operator random_m_sectorial(Eigen::Index dim, double alpha, std::uint64_t seed) {
  if (dim < 1) throw InvalidInput("random_m_sectorial: dim must be >= 1");
  if (!(alpha >= 0.0 && alpha < std::numbers::pi / 2)) {
    throw DomainError("random_m_sectorial: alpha must lie in [0, pi/2)");
  }
  SeededRng rng(seed);
  const Operator g = rng.gaussian(dim);
  const Operator h = hermitian_part(g.adjoint() * g) / static_cast<double>(dim);
  Operator k = hermitian_part(rng.gaussian(dim));
  const double knorm = op_norm(k);
  if (alpha == 0.0 || knorm == 0.0) {
    k.setZero();
  } else {
    k *= std::tan(alpha) / knorm;
  }
  return compose_m_sectorial(h, k);
}

/// F(t) = (1 + tA)^{-1}.
inline Operator resolvent_contraction(const Operator& a, double t) {
  if (!(t > 0.0)) throw DomainError("resolvent_contraction: t must be positive");
  return inverse(identity(a.rows()) + t * a);
}

/// e^{-tA/n}.
inline Operator semigroup_step(const Operator& a, double t, std::uint64_t n) {
  if (!(t > 0.0)) throw DomainError("semigroup_step: t must be positive");
  if (n < 1) throw DomainError("semigroup_step: n must be >= 1");
  return expm(-(t / static_cast<double>(n)) * a);
}

// ---------------------------------------------------------------------------
// EnsembleSpec

enum class EnsembleKind {
  contraction,
  self_adjoint_contraction,
  m_sectorial,
  resolvent_contraction,
  semigroup_step,
};

inline std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::contraction: return "contraction";
    case EnsembleKind::self_adjoint_contraction: return "self_adjoint_contraction";
    case EnsembleKind::m_sectorial: return "m_sectorial";
    case EnsembleKind::resolvent_contraction: return "resolvent_contraction";
    case EnsembleKind::semigroup_step: return "semigroup_step";
  }
  return "contraction";
}

inline EnsembleKind ensemble_kind_from_string(std::string_view name) {
  for (auto kind : {EnsembleKind::contraction, EnsembleKind::self_adjoint_contraction,
                    EnsembleKind::m_sectorial, EnsembleKind::resolvent_contraction,
                    EnsembleKind::semigroup_step}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidInput("unknown ensemble kind: " + std::string(name));
}

/// Recipe for one operator draw. Params by kind:
///   self_adjoint_contraction: spectrum_min, spectrum_max (default 0, 1)
///   resolvent_contraction:    t (default 1)
///   semigroup_step:           t (default 1), n (default 1)
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::contraction;
  int dim = 2;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;

  [[nodiscard]] double param(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }

  bool operator==(const EnsembleSpec&) const = default;
};

inline Operator make_operator(const EnsembleSpec& spec) {
  if (spec.dim < 1) throw InvalidInput("EnsembleSpec: dim must be >= 1");
  switch (spec.kind) {
    case EnsembleKind::contraction:
      return random_contraction(spec.dim, spec.seed);
    case EnsembleKind::self_adjoint_contraction: {
      const double lo = spec.param("spectrum_min", 0.0);
      const double hi = spec.param("spectrum_max", 1.0);
      SeededRng rng(derive_seed(spec.seed, 0x5eedull));
      std::vector<double> spectrum(static_cast<std::size_t>(spec.dim));
      for (auto& s : spectrum) s = rng.uniform(lo, hi);
      return self_adjoint_contraction(spectrum, spec.seed);
    }
    case EnsembleKind::m_sectorial:
      return random_m_sectorial(spec.dim, spec.alpha, spec.seed);
    case EnsembleKind::resolvent_contraction:
      return resolvent_contraction(random_m_sectorial(spec.dim, spec.alpha, spec.seed),
                                   spec.param("t", 1.0));
    case EnsembleKind::semigroup_step:
      return semigroup_step(random_m_sectorial(spec.dim, spec.alpha, spec.seed),
                            spec.param("t", 1.0),
                            static_cast<std::uint64_t>(spec.param("n", 1.0)));
  }
  throw InvalidInput("EnsembleSpec: unhandled kind");
}

inline void to_json(nlohmann::json& j, const EnsembleSpec& spec) {
  j = nlohmann::json{{"kind", std::string(to_string(spec.kind))},
                     {"dim", spec.dim},
                     {"alpha", spec.alpha},
                     {"seed", spec.seed},
                     {"params", spec.params}};
}

inline void from_json(const nlohmann::json& j, EnsembleSpec& spec) {
  spec.kind = ensemble_kind_from_string(j.at("kind").get<std::string>());
  spec.dim = j.at("dim").get<int>();
  spec.alpha = j.at("alpha").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.params = j.at("params").get<std::map<std::string, double>>();
}

}  // namespace chernoff
