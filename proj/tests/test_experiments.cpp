#include <gtest/gtest.h>

#include "hyperagg/experiments.hpp"
#include "hyperagg/lars.hpp"

using namespace hyperagg;

TEST(Beta0, Shape) {
  const Vector b = default_beta0();
  ASSERT_EQ(b.size(), 91);
  // 2 + 3 + 1 + 2 + 3 nonzero entries.
  EXPECT_EQ((b.array() != 0.0).count(), 11);
  EXPECT_EQ(b(0), 3.0);
  EXPECT_EQ(b(1), 1.5);
}

TEST(Covariance, Toeplitz) {
  const Matrix s = toeplitz_covariance(91);
  EXPECT_TRUE(s.diagonal().isOnes(0.0));
  EXPECT_EQ(s(0, 1), 0.5);
  EXPECT_EQ(s(3, 6), 0.125);
  EXPECT_TRUE(s.isApprox(s.transpose(), 0.0));
}

TEST(Simulation, SampleCovarianceMatches) {
  const Vector beta = default_beta0();
  const Sample s = simulate_lasso_data(100000, beta, 1.0, 1);
  const Matrix& x = *s.x();
  const Matrix centered = x.rowwise() - x.colwise().mean();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
  EXPECT_LE((cov - toeplitz_covariance(91)).cwiseAbs().maxCoeff(), 0.02);
}

TEST(Simulation, DeterministicAndNoiseScales) {
  const Vector beta = default_beta0();
  const Sample a = simulate_lasso_data(20, beta, 2.0, 5), b = simulate_lasso_data(20, beta, 2.0, 5);
  EXPECT_TRUE((a.y().array() == b.y().array()).all());
  EXPECT_TRUE((a.x()->array() == b.x()->array()).all());
  const Sample quiet = simulate_lasso_data(20, beta, 1e-12, 5);
  EXPECT_LE((quiet.y() - *quiet.x() * beta).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Quantile, Type7) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile({7}, 0.9), 7.0);
  const auto s = summarize({1, 2, 3, 4, 5});
  EXPECT_EQ(s.count, 5u);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.median, 3.0);
  EXPECT_DOUBLE_EQ(s.q1, 2.0);
  EXPECT_DOUBLE_EQ(s.q3, 4.0);
}

TEST(LassoStudy, ConfigValidation) {
  LassoStudyConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.effective_temperature(), 16.0);
  cfg.jackknife_splits = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.sigma = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(parse_dictionary_source(to_string(DictionarySource::full_sample)), DictionarySource::full_sample);
}

TEST(LassoStudy, AggregateCoefficientsAreLinearInWeights) {
  for (auto source : {DictionarySource::training_half, DictionarySource::full_sample}) {
    LassoStudyConfig cfg;
    cfg.n = 80;
    cfg.jackknife_splits = 3;
    cfg.dictionary_source = source;
    const auto rep = run_replication(cfg, 17);
    EXPECT_NEAR(rep.theta_aew.sum(), 1.0, 1e-12);
    EXPECT_NEAR(rep.theta_star.sum(), 1.0, 1e-12);
    EXPECT_TRUE(rep.beta_aew.isApprox(rep.knot_coefs.transpose() * rep.theta_aew, 0.0));
    EXPECT_TRUE(rep.beta_star.isApprox(rep.knot_coefs.transpose() * rep.theta_star, 0.0));

    const Matrix& x = *rep.data.x();
    const auto path = lars_path(x, rep.data.y());
    const auto dict = path_to_dictionary(path, x);
    for (const Vector* theta : {&rep.theta_aew, &rep.theta_star}) {
      Vector fit = Vector::Zero(x.rows());
      for (std::size_t k = 0; k < dict.size(); ++k)
        fit += (*theta)(static_cast<Eigen::Index>(k)) *
               (dict.preds().row(static_cast<Eigen::Index>(k)).transpose().array() - path.knots[k].intercept).matrix();
      const Vector& beta = theta == &rep.theta_aew ? rep.beta_aew : rep.beta_star;
      EXPECT_NEAR((fit - x * cfg.beta0).norm(), (x * (beta - cfg.beta0)).norm(), 1e-8);
    }
  }
}

TEST(LassoStudy, NearNoiselessRecovery) {
  LassoStudyConfig cfg;
  cfg.sigma = 1e-9;
  cfg.reps = 1;
  const auto report = run_lasso_study(cfg, 1);
  ASSERT_EQ(report.failures, 0u);
  ASSERT_EQ(report.records.size(), 3u);
  for (const auto& r : report.records) {
    EXPECT_LE(r.beta_err, 0.01) << r.method;
    EXPECT_GE(r.pred_err, 0.0);
  }
}

TEST(LassoStudy, DeterministicAcrossRunsAndThreads) {
  LassoStudyConfig cfg;
  cfg.n = 70;
  cfg.reps = 6;
  cfg.jackknife_splits = 2;
  const auto a = run_lasso_study(cfg, 1), b = run_lasso_study(cfg, 1), c = run_lasso_study(cfg, 4);
  ASSERT_EQ(a.records.size(), 18u);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].method, c.records[i].method);
    EXPECT_EQ(a.records[i].beta_err, b.records[i].beta_err);
    EXPECT_EQ(a.records[i].pred_err, c.records[i].pred_err);
  }
  const auto resummed = summarize_records(a.records);
  EXPECT_EQ(resummed.at("star").pred_err.median, a.summary.at("star").pred_err.median);
  EXPECT_EQ(a.summary.at("cp").beta_err.count, 6u);
}
