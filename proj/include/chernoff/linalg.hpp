#pragma once

// Dense complex kernels: spectral norm, matrix exponential, powers,
// inverses and Hermitian eigendecomposition.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chernoff/constants.hpp"
#include "chernoff/errors.hpp"

namespace chernoff {

using cplx = std::complex<double>;

/// Dense square complex matrix. Houses every operator the library touches:
/// contractions, generators, semigroup values and resolvents.
using Operator = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Operator identity(Eigen::Index dim) { return Operator::Identity(dim, dim); }

/// Throws InvalidInput unless `m` is square, non-empty and finite.
inline void require_valid(const Operator& m, const char* what = "operator") {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw InvalidInput(std::string(what) + ": expected a non-empty square matrix");
  }
  if (!m.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entry");
  }
}

/// Entrywise comparison; operators are never compared bit-for-bit.
inline bool approx_equal(const Operator& a, const Operator& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

/// Spectral norm (largest singular value).
inline double op_norm(const Operator& m) {
  require_valid(m);
  if (m.rows() == 1) return std::abs(m(0, 0));
  // Largest eigenvalue of M*M carries full relative accuracy for sigma_max.
  const Operator gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Operator> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Euclidean norm of a vector.
inline double vec_norm(const Vector& v) { return v.norm(); }

inline double one_norm(const Operator& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

namespace detail {

// Pade coefficients b_0..b_m for the diagonal [m/m] approximant of exp.
inline constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
inline constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
inline constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                             25200.0,    1512.0,    56.0,      1.0};
inline constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0,
                                              302702400.0,   30270240.0,   2162160.0,
                                              110880.0,      3960.0,       90.0,
                                              1.0};
inline constexpr std::array<double, 14> kPade13{
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// 1-norm thresholds below which the [m/m] approximant meets unit roundoff
// without scaling.
inline constexpr std::array<double, 5> kTheta{1.495585217958292e-2, 2.539398330063230e-1,
                                             9.504178996162932e-1, 2.097847961257068e0,
                                             5.371920351148152e0};

template <std::size_t N>
void pade_low(const Operator& a, const std::array<double, N>& b, Operator& u, Operator& v) {
  const auto dim = a.rows();
  const Operator a2 = a * a;
  Operator power = identity(dim);
  Operator odd = Operator::Zero(dim, dim);
  Operator even = Operator::Zero(dim, dim);
  for (std::size_t k = 0; k < N; k += 2) {
    even += b[k] * power;
    if (k + 1 < N) odd += b[k + 1] * power;
    power = power * a2;
  }
  u = a * odd;
  v = even;
}

inline void pade13(const Operator& a, Operator& u, Operator& v) {
  const auto& b = kPade13;
  const auto dim = a.rows();
  const Operator id = identity(dim);
  const Operator a2 = a * a;
  const Operator a4 = a2 * a2;
  const Operator a6 = a4 * a2;
  Operator tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  u = a * (a6 * tmp + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * tmp + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace detail

/// Matrix exponential by scaling and squaring with diagonal Pade
/// approximants (orders 3..13 selected from the 1-norm).
inline Operator expm(const Operator& m) {
  require_valid(m);
  const auto dim = m.rows();
  if (m.isZero(0.0)) return identity(dim);
  const double norm1 = one_norm(m);
  // ||M||_2 <= sqrt(dim) * ||M||_1, so the SVD is only needed near the limit.
  if (std::sqrt(static_cast<double>(dim)) * norm1 > tol::expm_overflow_norm &&
      op_norm(m) > tol::expm_overflow_norm) {
    throw OverflowRisk("expm: norm exceeds 1e6");
  }

  Operator u, v;
  int squarings = 0;
  if (norm1 <= detail::kTheta[0]) {
    detail::pade_low(m, detail::kPade3, u, v);
  } else if (norm1 <= detail::kTheta[1]) {
    detail::pade_low(m, detail::kPade5, u, v);
  } else if (norm1 <= detail::kTheta[2]) {
    detail::pade_low(m, detail::kPade7, u, v);
  } else if (norm1 <= detail::kTheta[3]) {
    detail::pade_low(m, detail::kPade9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / detail::kTheta[4]))));
    const Operator scaled = m / std::ldexp(1.0, squarings);
    detail::pade13(scaled, u, v);
  }
  Operator result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

/// M^n by binary exponentiation; M^0 is the identity.
inline Operator mat_pow(const Operator& m, std::uint64_t n) {
  require_valid(m);
  Operator result = identity(m.rows());
  Operator base = m;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

/// Inverse with a 1-norm condition check.
inline Operator inverse(const Operator& m) {
  require_valid(m);
  Eigen::PartialPivLU<Operator> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > tol::max_condition) {
    throw SingularityError("inverse: matrix is singular to working precision");
  }
  Operator inv = lu.inverse();
  if (!inv.allFinite()) throw SingularityError("inverse: non-finite result");
  return inv;
}

struct HermitianEig {
  Eigen::VectorXd values;  // descending
  Operator vectors;        // orthonormal columns matching `values`
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
inline HermitianEig hermitian_eig(const Operator& h) {
  require_valid(h);
  const double scale = std::max(op_norm(h), 1e-300);
  if (op_norm(h - h.adjoint()) > tol::hermitian_asym * scale) {
    throw InvalidInput("hermitian_eig: matrix is not Hermitian");
  }
  const Operator sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(sym);
  const auto dim = h.rows();
  HermitianEig out{Eigen::VectorXd(dim), Operator(dim, dim)};
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < dim; ++k) {
    out.values(k) = es.eigenvalues()(dim - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(dim - 1 - k);
  }
  return out;
}

/// Square root of a Hermitian positive-semidefinite matrix; tiny negative
/// eigenvalues from rounding are clamped to zero.
inline Operator psd_sqrt(const Operator& h) {
  const auto eig = hermitian_eig(h);
  const Eigen::VectorXd root = eig.values.cwiseMax(0.0).cwiseSqrt();
  Operator out = eig.vectors * root.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

/// Hermitian part (M + M*)/2.
inline Operator hermitian_part(const Operator& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace chernoff
