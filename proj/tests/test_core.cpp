#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hyperagg/core.hpp"

using namespace hyperagg;

namespace {

std::shared_ptr<const Sample> sample_of(std::size_t n) {
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = static_cast<double>(i);
  return std::make_shared<const Sample>(y);
}

}  // namespace

TEST(SplitSample, SequentialHalves) {
  const auto s = split_sample(sample_of(4), 0);
  EXPECT_EQ(s.idx1(), (IndexSet{0, 1}));
  EXPECT_EQ(s.idx2(), (IndexSet{2, 3}));
}

TEST(SplitSample, OddSizeGivesTrainingTheExtra) {
  const auto s = split_sample(sample_of(5), 0);
  EXPECT_EQ(s.idx1(), (IndexSet{0, 1, 2}));
  EXPECT_EQ(s.idx2(), (IndexSet{3, 4}));
}

TEST(SplitSample, RandomIsSeededAndPartitions) {
  const auto a = split_sample(sample_of(100), 7, 0.5, SplitMode::random);
  const auto b = split_sample(sample_of(100), 7, 0.5, SplitMode::random);
  EXPECT_EQ(a.idx1(), b.idx1());
  EXPECT_EQ(a.idx2(), b.idx2());
  std::vector<int> seen(100, 0);
  for (auto i : a.idx1()) ++seen[i];
  for (auto i : a.idx2()) ++seen[i];
  for (int c : seen) EXPECT_EQ(c, 1);
  EXPECT_EQ(a.idx1().size(), 50u);
  const auto c = split_sample(sample_of(100), 8, 0.5, SplitMode::random);
  EXPECT_NE(a.idx1(), c.idx1());
}

TEST(SplitSample, RejectsEmptyPart) {
  EXPECT_THROW(split_sample(sample_of(10), 0, 1.0), std::invalid_argument);
  EXPECT_THROW(split_sample(sample_of(10), 0, 0.0), std::invalid_argument);
  EXPECT_THROW(split_sample(sample_of(3), 0), std::invalid_argument);
}

TEST(SplitSample, RejectsNonPartition) {
  auto s = sample_of(4);
  EXPECT_THROW(SplitSample(s, {0, 1}, {1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(SplitSample(s, {0, 1}, {2}), std::invalid_argument);
  EXPECT_THROW(SplitSample(s, {}, {0, 1, 2, 3}), std::invalid_argument);
}

TEST(Sample, RejectsNonFinite) {
  Vector y(3);
  y << 1, std::numeric_limits<double>::quiet_NaN(), 2;
  EXPECT_THROW(Sample{y}, ValidationError);
}

TEST(Dictionary, Construction) {
  PredMatrix p(2, 3);
  p << 1, 2, 3, 4, 5, 6;
  const auto d = dictionary_from_predictions(p);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.sample_size(), 3u);
  EXPECT_EQ(d.labels()[1], "f_2");
  EXPECT_EQ(d.row(1)[2], 6.0);
}

TEST(Dictionary, NanReportsRowAndColumn) {
  PredMatrix p = PredMatrix::Zero(2, 3);
  p(1, 2) = std::numeric_limits<double>::quiet_NaN();
  try {
    dictionary_from_predictions(p);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.col(), 2u);
  }
}

TEST(Dictionary, NeedsTwoPredictors) {
  EXPECT_THROW(dictionary_from_predictions(PredMatrix::Zero(1, 3)), std::invalid_argument);
}

TEST(Dictionary, FromCoefficientsIdentity) {
  const Matrix eye = Matrix::Identity(3, 3);
  const auto d = dictionary_from_coefficients(eye, eye);
  EXPECT_TRUE(d.preds().isApprox(PredMatrix(Matrix::Identity(3, 3)), 0.0));
}

TEST(Dictionary, FromCoefficientsZeroRow) {
  Matrix coefs(2, 2);
  coefs << 0, 0, 1, 2;
  Matrix x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  const auto d = dictionary_from_coefficients(coefs, x);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(d.row(0)[i], 0.0);
}

TEST(Dictionary, FromCoefficientsMatchesLoopProduct) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Matrix coefs(3, 2), x(4, 2);
  for (auto* m : {&coefs, &x})
    for (Eigen::Index i = 0; i < m->rows(); ++i)
      for (Eigen::Index j = 0; j < m->cols(); ++j) (*m)(i, j) = g(rng);
  Vector b0(3);
  b0 << 0.5, -1, 2;
  const auto d = dictionary_from_coefficients(coefs, x, b0);
  for (Eigen::Index k = 0; k < 3; ++k)
    for (Eigen::Index i = 0; i < 4; ++i) {
      double s = b0(k);
      for (Eigen::Index j = 0; j < 2; ++j) s += coefs(k, j) * x(i, j);
      EXPECT_NEAR(d.preds()(k, i), s, 1e-12);
    }
  ASSERT_TRUE(d.coefs().has_value());
  EXPECT_TRUE(d.coefs()->isApprox(coefs, 0.0));
}

TEST(Dictionary, CoefficientShapeMismatch) {
  EXPECT_THROW(dictionary_from_coefficients(Matrix::Zero(2, 3), Matrix::Zero(4, 2)), std::invalid_argument);
}

TEST(SimplexWeights, Validation) {
  Vector ok(3);
  ok << 0.2, 0.8, 0.0;
  SimplexWeights w(ok);
  EXPECT_EQ(w.support(), (IndexSet{0, 1}));
  Vector neg(2);
  neg << 1.5, -0.5;
  EXPECT_THROW(SimplexWeights{neg}, std::invalid_argument);
  Vector off(2);
  off << 0.5, 0.6;
  EXPECT_THROW(SimplexWeights{off}, std::invalid_argument);
}

TEST(SimplexWeights, Factories) {
  EXPECT_EQ(SimplexWeights::point_mass(4, 2).support(), (IndexSet{2}));
  const auto p = SimplexWeights::pair(4, 3, 1, 0.25);
  EXPECT_DOUBLE_EQ(p.theta()(3), 0.25);
  EXPECT_DOUBLE_EQ(p.theta()(1), 0.75);
  Vector raw(2);
  raw << 1, 3;
  EXPECT_DOUBLE_EQ(SimplexWeights::normalized(raw).theta()(1), 0.75);
}

TEST(Regime, Validation) {
  EXPECT_THROW(Regime::bounded(0.0).validate(), std::invalid_argument);
  EXPECT_THROW(Regime::subgaussian(-1.0, 1.0).validate(), std::invalid_argument);
  EXPECT_NO_THROW(Regime::subgaussian(1.0, 1.0).validate());
}
