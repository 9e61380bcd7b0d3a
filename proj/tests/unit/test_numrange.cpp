#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "chernoff/ensembles.hpp"
#include "chernoff/numrange.hpp"
#include "gen.hpp"

using namespace chernoff;
using std::numbers::pi;

namespace {

Operator diag(std::initializer_list<cplx> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (auto x : values) v(i++) = x;
  return v.asDiagonal();
}

// Independent membership oracle for D_alpha written from the region's
// definition: disc of radius sin(alpha), or the wedge at 1 of half-angle
// alpha truncated at radius cos(alpha). Exact, no tolerance.
bool oracle_in_D(cplx z, double alpha) {
  if (std::abs(z) <= std::sin(alpha)) return true;
  const cplx w = 1.0 - z;
  if (w == cplx(0.0, 0.0)) return true;
  return std::abs(std::arg(w)) <= alpha && std::abs(w) <= std::cos(alpha);
}

}  // namespace

TEST(InDAlpha, Examples) {
  for (double a : {0.0, 0.3, pi / 4, 1.5}) EXPECT_TRUE(in_D_alpha(1.0, a));
  for (double a : {0.0, 0.3, pi / 4, 1.5}) EXPECT_TRUE(in_D_alpha(0.0, a));
  EXPECT_TRUE(in_D_alpha(0.5, pi / 4));
  EXPECT_FALSE(in_D_alpha(-0.5, 0.3));
  EXPECT_FALSE(in_D_alpha(cplx(0.5, 0.5), 0.1));
}

TEST(InDAlpha, AgreesWithOracleAwayFromBoundary) {
  gen::Rng rng(30);
  for (int trial = 0; trial < 20000; ++trial) {
    const cplx z(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
    const double alpha = rng.uniform(0.0, pi / 2 - 1e-3);
    const double d = distance_to_D_alpha(z, alpha);
    // The tolerance band is 1e-9 wide; stay out of it.
    if (d > 0.0 && d < 1e-6) continue;
    EXPECT_EQ(in_D_alpha(z, alpha), oracle_in_D(z, alpha)) << z << " alpha " << alpha;
  }
}

TEST(InDAlpha, MonotoneInAlpha) {
  std::vector<double> alphas;
  for (int k = 0; k < 20; ++k) alphas.push_back(k * (pi / 2 - 1e-3) / 19);
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const cplx z(i / 199.0, j / 199.0);
      bool seen = false;
      for (double a : alphas) {
        const bool in = in_D_alpha(z, a);
        EXPECT_TRUE(!seen || in) << z << " left D at alpha " << a;
        seen = seen || in;
      }
    }
  }
}

TEST(InDAlpha, ApproachesUnitDisc) {
  const double alpha = pi / 2 - 1e-9;
  gen::Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const cplx z = std::polar(rng.uniform(0.0, 0.999), rng.uniform(-pi, pi));
    EXPECT_TRUE(in_D_alpha(z, alpha)) << z;
  }
}

TEST(DistanceToDAlpha, BruteForceOracle) {
  // Sample the region densely and compare the nearest sample distance.
  gen::Rng rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const double alpha = rng.uniform(0.05, 1.4);
    std::vector<cplx> samples;
    for (int i = 0; i <= 2000; ++i) {
      const double th = 2 * pi * i / 2000;
      samples.push_back(std::polar(std::sin(alpha), th));
    }
    for (int i = 0; i <= 2000; ++i) {
      const double r = std::cos(alpha) * i / 2000;
      samples.push_back(1.0 - std::polar(r, alpha));
      samples.push_back(1.0 - std::polar(r, -alpha));
    }
    for (int q = 0; q < 20; ++q) {
      const cplx z(rng.uniform(-2, 2), rng.uniform(-2, 2));
      if (oracle_in_D(z, alpha)) {
        EXPECT_EQ(distance_to_D_alpha(z, alpha), 0.0);
        continue;
      }
      double best = HUGE_VAL;
      for (auto s : samples) best = std::min(best, std::abs(z - s));
      EXPECT_NEAR(distance_to_D_alpha(z, alpha), best, 2e-3) << z << " alpha " << alpha;
      EXPECT_LE(distance_to_D_alpha(z, alpha), best + 1e-12);
    }
  }
}

TEST(InSector, Examples) {
  EXPECT_TRUE(in_sector(1.0, 0.1));
  EXPECT_FALSE(in_sector(cplx(0.0, 1.0), pi / 4));
  EXPECT_TRUE(in_sector(0.0, 0.1));
  EXPECT_TRUE(in_sector(std::polar(2.0, 0.7), 0.7));
  EXPECT_FALSE(in_sector(-1.0, 3.0));
}

TEST(Boundary, Examples) {
  const auto d = numerical_range_boundary(diag({0.0, 1.0}), 64);
  ASSERT_EQ(d.size(), 64U);
  double lo = HUGE_VAL;
  double hi = -HUGE_VAL;
  for (auto z : d) {
    EXPECT_NEAR(z.imag(), 0.0, 1e-15);
    EXPECT_GE(z.real(), -1e-15);
    EXPECT_LE(z.real(), 1.0 + 1e-15);
    lo = std::min(lo, z.real());
    hi = std::max(hi, z.real());
  }
  EXPECT_NEAR(lo, 0.0, 1e-15);
  EXPECT_NEAR(hi, 1.0, 1e-15);

  Operator jordan = Operator::Zero(2, 2);
  jordan(0, 1) = 1.0;
  for (auto z : numerical_range_boundary(jordan, 64)) EXPECT_NEAR(std::abs(z), 0.5, 1e-8);

  for (auto z : numerical_range_boundary(identity(3), 16)) EXPECT_NEAR(std::abs(z - 1.0), 0.0, 1e-15);
}

TEST(Boundary, RejectsTooFewDirections) {
  EXPECT_THROW(numerical_range_boundary(identity(2), 15), InvalidInput);
}

TEST(Boundary, JordanDiscByDenseSampling) {
  // Oracle: x*Cx over many random unit vectors never exceeds radius 1/2 and
  // gets arbitrarily close to it.
  Operator jordan = Operator::Zero(2, 2);
  jordan(0, 1) = 1.0;
  gen::Rng rng(33);
  double best = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const auto x = gen::unit_vector(rng, 2);
    const double r = std::abs(x.dot(jordan * x));
    EXPECT_LE(r, 0.5 + 1e-12);
    best = std::max(best, r);
  }
  EXPECT_GT(best, 0.4999);
}

TEST(Boundary, ContractionPointsInUnitDisc) {
  gen::Rng rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = rng.integer(1, 10);
    const Operator c = gen::with_norm(rng, dim, rng.uniform(0.1, 1.0));
    for (auto z : numerical_range_boundary(c)) EXPECT_LE(std::abs(z), 1.0 + tol::geo);
  }
}

TEST(Boundary, NormalMatrixHullOracle) {
  // Eigenvalues at the corners of a regular polygon plus interior points: the
  // sampled boundary must hit every corner and stay inside the polygon.
  gen::Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const int corners = rng.integer(3, 7);
    const int interior = rng.integer(0, 3);
    const cplx centre(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
    const double radius = rng.uniform(0.1, 0.6);
    const double phase = rng.uniform(0, 2 * pi);
    Vector lambda(corners + interior);
    std::vector<cplx> poly;
    for (int j = 0; j < corners; ++j) {
      poly.push_back(centre + std::polar(radius, phase + 2 * pi * j / corners));
      lambda(j) = poly.back();
    }
    for (int j = 0; j < interior; ++j) lambda(corners + j) = centre + std::polar(0.5 * radius, rng.uniform(0, 2 * pi));
    const Operator c = gen::normal_with(rng, lambda);
    const auto points = numerical_range_boundary(c);
    for (auto v : poly) {
      double best = HUGE_VAL;
      for (auto p : points) best = std::min(best, std::abs(p - v));
      EXPECT_LE(best, 1e-6);
    }
    for (auto p : points) {
      for (int j = 0; j < corners; ++j) {
        const cplx a = poly[j];
        const cplx b = poly[(j + 1) % corners];
        const double cross = ((b - a) * std::conj(p - a)).imag();
        EXPECT_LE(cross, 1e-9);  // counter-clockwise polygon: p on the left of every edge
      }
    }
  }
}

TEST(Certify, Examples) {
  EXPECT_TRUE(certified(certify_quasi_sectorial(diag({0.2, 0.8}), 0.0)));
  EXPECT_TRUE(certified(certify_quasi_sectorial(identity(3), 0.0)));
  const auto bad = certify_quasi_sectorial(diag({-0.5}), 0.3);
  ASSERT_FALSE(certified(bad));
  const auto& f = std::get<SectorFailure>(bad);
  EXPECT_NEAR(f.worst_point.real(), -0.5, 1e-15);
  EXPECT_NEAR(f.distance, 0.5 - std::sin(0.3), 1e-12);
}

TEST(Certify, CertificateInvariants) {
  gen::Rng rng(36);
  for (int trial = 0; trial < 30; ++trial) {
    const double alpha = rng.uniform(0.05, pi / 4);
    const Operator c = resolvent_contraction(random_m_sectorial(4, alpha, 100 + trial), 1.0);
    const auto cert = certify_quasi_sectorial(c, alpha);
    ASSERT_TRUE(certified(cert));
    const auto& ok = std::get<SectorCertificate>(cert);
    EXPECT_EQ(ok.alpha_hat, alpha);
    EXPECT_GE(ok.max_violation, 0.0);
    for (auto z : ok.boundary_points) EXPECT_LE(distance_to_D_alpha(z, alpha), tol::geo);
  }
}

TEST(Certify, ResolventFamilyIsQuasiSectorial) {
  for (double alpha : {0.0, pi / 16, pi / 8, pi / 6, pi / 4}) {
    for (int draw = 0; draw < 10; ++draw) {
      const Operator a = random_m_sectorial(5, alpha, 1000 + draw);
      for (double t : {0.1, 1.0, 10.0}) {
        EXPECT_TRUE(certified(certify_quasi_sectorial(resolvent_contraction(a, t), alpha, 256)))
            << "alpha " << alpha << " draw " << draw << " t " << t;
      }
    }
  }
}

TEST(MinSemiAngle, Examples) {
  EXPECT_NEAR(*min_semi_angle(diag({0.0, 0.5, 1.0})), 0.0, 1e-6);
  EXPECT_NEAR(*min_semi_angle(diag({cplx(0.0, 0.3)})), std::asin(0.3), 1e-6);
  EXPECT_NEAR(*min_semi_angle(identity(2)), 0.0, 1e-6);
}

TEST(MinSemiAngle, NotAContraction) { EXPECT_THROW(min_semi_angle(diag({1.1})), NotAContraction); }

TEST(MinSemiAngle, UnitCirclePointNeedsNearlyRightAngle) {
  // -1 enters D_alpha only through the disc: sin(alpha) + 1e-9 >= 1.
  const auto hat = min_semi_angle(diag({-1.0}));
  ASSERT_TRUE(hat.has_value());
  EXPECT_NEAR(*hat, std::asin(1.0 - tol::geo), 1e-6);
}

TEST(MinSemiAngle, IsSmallestCertifiedAngle) {
  gen::Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = rng.uniform(0.05, pi / 4);
    const Operator c = resolvent_contraction(random_m_sectorial(3, alpha, 500 + trial), 0.5);
    const auto hat = min_semi_angle(c);
    ASSERT_TRUE(hat.has_value());
    EXPECT_LE(*hat, alpha + 1e-6);
    EXPECT_TRUE(certified(certify_quasi_sectorial(c, *hat)));
    if (*hat > 2e-6) {
      EXPECT_FALSE(certified(certify_quasi_sectorial(c, *hat - 1e-6)));
    }
  }
}
