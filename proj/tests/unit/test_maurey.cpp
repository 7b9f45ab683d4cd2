#include <gtest/gtest.h>

#include <cmath>

#include "../oracles.hpp"
#include "nodim/errors.hpp"
#include "nodim/maurey.hpp"

using namespace nodim;

TEST(ConvexWitness, FoundAndAbsent) {
  auto p = PointSet::from_rows({{0, 0}, {1, 0}, {0, 1}});
  Vector in(2), out(2);
  in << 0.25, 0.25;
  out << 2, 2;
  const auto s = NormSpec::euclidean();
  const auto w = convex_witness(s, in, p, 1e-6);
  EXPECT_EQ(w.status, WitnessStatus::found);
  Vector combo = Vector::Zero(2);
  for (std::size_t j = 0; j < 3; ++j) combo += w.weights[j] * p.point(j);
  EXPECT_LE((combo - in).norm(), 1e-6);
  EXPECT_EQ(convex_witness(s, out, p, 1e-6).status, WitnessStatus::absent);
}

TEST(MaureySample, SingleDrawOfVertexIsExact) {
  auto p = PointSet::from_rows({{0, 0}, {1, 0}});
  const auto a = maurey_sample(NormSpec::euclidean(), p, {1.0, 0.0}, 3);
  EXPECT_EQ(a.achieved_error, 0.0);
  EXPECT_TRUE(a.within_bound);
  EXPECT_EQ(a.trials_used, 1u);
}

TEST(MaureySample, MeetsTheBoundAndIsDeterministic) {
  std::mt19937_64 rng(8);
  const Matrix x = oracle::gaussian(20, 12, rng);
  std::vector<double> w(12, 1.0 / 12);
  const auto s = NormSpec::euclidean();
  const auto a = maurey_sample(s, PointSet(x), w, 9, 64, 5);
  const auto b = maurey_sample(s, PointSet(x), w, 9, 64, 5);
  EXPECT_TRUE(a.within_bound);
  EXPECT_LE(a.achieved_error, a.bound * (1 + 1e-9));
  EXPECT_NEAR(a.bound, oracle::diameter(x, 2) / 3.0, 1e-9);
  EXPECT_EQ(a.chosen, b.chosen);
  EXPECT_EQ(a.achieved_error, b.achieved_error);
}

TEST(MaureySample, RejectsBadWeights) {
  auto p = PointSet::from_rows({{0}, {1}});
  const auto s = NormSpec::euclidean();
  EXPECT_THROW(maurey_sample(s, p, {0.5}, 2), InputError);
  EXPECT_THROW(maurey_sample(s, p, {-0.5, 1.5}, 2), InputError);
  EXPECT_THROW(maurey_sample(s, p, {0.5, 0.5}, 0), InputError);
}

TEST(ColoredCaratheodory, ReachesTargetWithinBound) {
  std::mt19937_64 rng(12);
  std::vector<PointSet> classes;
  for (int c = 0; c < 3; ++c) classes.emplace_back(oracle::gaussian(6, 8, rng));
  // Centring every class puts the origin in each hull.
  Vector target = Vector::Zero(6);
  for (auto& cls : classes) {
    Matrix m = cls.coords();
    m.colwise() -= m.rowwise().mean();
    cls = PointSet(m);
  }
  const auto s = NormSpec::euclidean();
  const auto a = colored_caratheodory(s, classes, target, 1e-6, 4, 64, 3);
  EXPECT_TRUE(a.within_bound);
  EXPECT_EQ(a.chosen.size(), 3u);
  for (const auto& c : a.chosen) EXPECT_EQ(c.size(), 4u);
  EXPECT_LE(a.achieved_error, a.bound * (1 + 1e-9));
}

TEST(ColoredCaratheodory, MissingWitnessIsAPreconditionFailure) {
  std::vector<PointSet> classes{PointSet::from_rows({{0, 0}, {1, 0}}),
                                PointSet::from_rows({{5, 5}, {6, 5}})};
  EXPECT_THROW(colored_caratheodory(NormSpec::euclidean(), classes, Vector::Zero(2), 0.1, 2),
               PreconditionError);
}
