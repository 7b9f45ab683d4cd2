#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "nodim/errors.hpp"
#include "nodim/geometry.hpp"

using namespace nodim;

TEST(DistToHull, PointInsideTriangle) {
  auto p = PointSet::from_rows({{0, 0}, {1, 0}, {0, 1}});
  Vector q(2);
  q << 0.2, 0.2;
  const auto c = dist_to_hull(NormSpec::euclidean(), q, p, 1e-9);
  EXPECT_LE(c.upper, 1e-8);
  EXPECT_LE(c.lower, c.upper);
  EXPECT_EQ(c.status, CertificateStatus::converged);
  double s = 0;
  for (double w : c.witness_weights) {
    EXPECT_GE(w, 0.0);
    s += w;
  }
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(DistToHull, PointOutsideSegment) {
  auto p = PointSet::from_rows({{0, 0}, {2, 0}});
  Vector q(2);
  q << 1, 3;
  for (double norm : {1.0, 2.0, 3.0, kInfinity}) {
    const auto c = dist_to_hull(NormSpec::from_q(norm), q, p, 1e-7);
    EXPECT_NEAR(c.upper, 3.0, 1e-6) << norm;
    EXPECT_LE(c.lower, 3.0 + 1e-12);
    EXPECT_GE(c.lower, 3.0 - 2e-6);
  }
}

TEST(DistToHull, MatchesQuadraticProgramOracle) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> npts(1, 6), ndim(1, 4);
  for (int t = 0; t < 100; ++t) {
    const int n = npts(rng), d = ndim(rng);
    const Matrix x = oracle::gaussian(d, n, rng);
    const Vector q = oracle::gaussian(d, 1, rng).col(0) * 1.5;
    const auto c = dist_to_hull(NormSpec::euclidean(), q, PointSet(x), 1e-9);
    const double ref = oracle::qp_distance(q, x);
    EXPECT_NEAR(c.upper, ref, 1e-6) << "trial " << t;
    EXPECT_LE(c.lower, ref + 1e-9);
  }
}

TEST(DistToHull, LowerBoundIsValidInOtherNorms) {
  std::mt19937_64 rng(4);
  for (double norm : {1.0, 1.5, 3.0, kInfinity}) {
    const auto s = NormSpec::from_q(norm);
    for (int t = 0; t < 10; ++t) {
      const Matrix x = oracle::gaussian(3, 5, rng);
      const Vector q = oracle::gaussian(3, 1, rng).col(0) * 2;
      const auto c = dist_to_hull(s, q, PointSet(x), 1e-6);
      // Every vertex is feasible, so the lower bound can never exceed them.
      for (Eigen::Index j = 0; j < x.cols(); ++j)
        EXPECT_LE(c.lower, oracle::lq_norm(q - x.col(j), norm) + 1e-12);
      EXPECT_LE(c.lower, c.upper + 1e-12);
      EXPECT_LE(c.gap(), 1e-6);
    }
  }
}

// Both sides of the certificate re-derived from what it reports: the norm
// at the witness weights, and the separating functional's minimum.
TEST(DistToHull, CertificateIsSelfVerifying) {
  std::mt19937_64 rng(40);
  for (double norm : {1.0, 1.5, 2.0, 4.0, kInfinity}) {
    const auto s = NormSpec::from_q(norm);
    const double dual = norm == 1.0 ? kInfinity : (std::isinf(norm) ? 1.0 : norm / (norm - 1));
    for (int t = 0; t < 15; ++t) {
      const Matrix x = oracle::gaussian(4, 6, rng);
      const Vector q = oracle::gaussian(4, 1, rng).col(0) * 2.5;
      const auto c = dist_to_hull(s, q, PointSet(x), 1e-7);
      Vector combo = Vector::Zero(4);
      for (int j = 0; j < 6; ++j) combo += c.witness_weights[j] * x.col(j);
      EXPECT_NEAR(oracle::lq_norm(combo - q, norm), c.upper, 1e-12);
      const Eigen::Map<const Vector> g(c.separator.data(), 4);
      EXPECT_LE(oracle::lq_norm(g, dual), 1 + 1e-12);
      double low = kInfinity;
      for (int j = 0; j < 6; ++j) low = std::min(low, g.dot(x.col(j) - q));
      EXPECT_GE(low, c.lower - 1e-12) << "q=" << norm;
      EXPECT_EQ(c.status, CertificateStatus::converged);
    }
  }
}

TEST(DistToHull, RejectsBadArguments) {
  auto p = PointSet::from_rows({{0, 0}, {1, 0}});
  Vector q(3);
  q.setZero();
  EXPECT_THROW(dist_to_hull(NormSpec::euclidean(), q, p, 1e-6), InputError);
  Vector q2 = Vector::Zero(2);
  EXPECT_THROW(dist_to_hull(NormSpec::euclidean(), q2, p, 0.0), InputError);
}

TEST(BallHull, ThreeWayAnswer) {
  auto p = PointSet::from_rows({{0, 0}, {2, 0}});
  Vector q(2);
  q << 1, 3;
  const auto s = NormSpec::euclidean();
  EXPECT_EQ(ball_hull_intersects(s, q, 3.5, p, 1e-8), Intersection::yes);
  EXPECT_EQ(ball_hull_intersects(s, q, 2.5, p, 1e-8), Intersection::no);
  DistanceCertificate c;
  ball_hull_intersects(s, q, 3.0 + 1e-12, p, 1e-3, &c);
  EXPECT_GT(c.iterations + 1, 0u);
}

// An extremal configuration: small-subset centroids stay far from the origin
// although the origin lies in the hull.
TEST(NegativeExample, CentroidsFarHullContainsOrigin) {
  const int m = 8;
  Matrix x(2, m + 1);
  for (int i = 0; i < m; ++i) {
    x(0, i) = 1.0;
    x(1, i) = 1e-3 * (i - 3.5);
  }
  x(0, m) = -1.0;
  x(1, m) = 0.0;
  const auto c = dist_to_hull(NormSpec::euclidean(), Vector::Zero(2), PointSet(x), 1e-9);
  EXPECT_LE(c.upper, 1e-6);
}
