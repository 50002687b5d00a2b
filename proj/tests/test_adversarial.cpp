#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hyperagg/adversarial.hpp"
#include "oracles.hpp"

using namespace hyperagg;

namespace {

struct MeanSe {
  double mean, se;
};

template <class Fn>
MeanSe mc(std::size_t n, Fn&& value) {
  double s = 0, ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = value(i);
    s += v;
    ss += v * v;
  }
  const double mean = s / static_cast<double>(n);
  const double var = ss / static_cast<double>(n) - mean * mean;
  return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n))};
}

// Large h so that the closed forms are far apart.
const AdversarialModel kWide{4, 4, 4.0, 1.0};

}  // namespace

TEST(Adversarial, NoiselessResponseEqualsRegression) {
  AdversarialModel m{8, 50, 1.0, 1e-12};
  const auto s = build_adversarial(m, 5);
  const double h = m.h();
  for (Eigen::Index i = 0; i < s.y.size(); ++i)
    EXPECT_NEAR(s.y(i), s.bits(i, 7) ? 2 * h : h, 1e-9);
  const Vector f0 = regression_values(m, s);
  EXPECT_NEAR((f0 - s.y).cwiseAbs().maxCoeff(), 0.0, 1e-9);
}

TEST(Adversarial, Deterministic) {
  const AdversarialModel m{16, 100, 1.0, 1.0};
  const auto a = build_adversarial(m, 9), b = build_adversarial(m, 9), c = build_adversarial(m, 10);
  EXPECT_TRUE((a.bits.array() == b.bits.array()).all());
  EXPECT_TRUE((a.y.array() == b.y.array()).all());
  EXPECT_FALSE((a.y.array() == c.y.array()).all());
}

TEST(Adversarial, BitMeansAreFair) {
  const AdversarialModel m{70, 100, 1.0, 1.0};
  const auto s = build_adversarial(m, 11, 100000);
  for (Eigen::Index j = 0; j < 70; ++j) {
    double mean = 0;
    for (Eigen::Index i = 0; i < s.bits.rows(); ++i) mean += s.bits(i, j);
    EXPECT_NEAR(mean / 1e5, 0.5, 0.01) << "bit " << j;
  }
}

TEST(Adversarial, AdjacentBitPairsAreUniform) {
  const AdversarialModel m{51, 100, 1.0, 1.0};
  const auto s = build_adversarial(m, 12, 20000);
  // chi-square with 3 degrees of freedom exceeds 16.266 with probability 0.001.
  for (Eigen::Index j = 0; j + 1 < 51; ++j) {
    std::vector<std::size_t> cells(4, 0);
    for (Eigen::Index i = 0; i < s.bits.rows(); ++i) ++cells[2 * s.bits(i, j) + s.bits(i, j + 1)];
    EXPECT_LT(oracle::chi_square_uniform(cells), 16.266) << "bits " << j << "," << j + 1;
  }
}

TEST(Adversarial, ExactRisksClosedForm) {
  for (double h : {0.0, 0.1, 0.37}) {
    // Pick C so that h() hits the target with M = 4, n = 4.
    AdversarialModel m{4, 4, 0.0, 1.0};
    m.c = h * 4.0 / std::sqrt(std::log(4.0) / 4.0);
    const auto r = exact_risks(m);
    EXPECT_NEAR(r.other, 1 + 2.5 * h * h, 1e-14);
    EXPECT_NEAR(r.best, 1 - h + 2.5 * h * h, 1e-14);
  }
}

TEST(Adversarial, ExactRisksMatchMonteCarlo) {
  const std::size_t n = 1000000;
  const auto s = build_adversarial(kWide, 13, n);
  const auto d = adversarial_dictionary(s);
  const Vector f0 = regression_values(kWide, s);
  const auto r = exact_risks(kWide);
  for (std::size_t j = 0; j < 4; ++j) {
    const auto row = d.row(j);
    const auto est = mc(n, [&](std::size_t i) { return std::pow(row[i] - f0(static_cast<Eigen::Index>(i)), 2); });
    const double want = j == 3 ? r.best : r.other;
    EXPECT_LT(std::abs(est.mean - want), 3 * est.se) << "j=" << j;
  }
}

TEST(Adversarial, PopulationInnerProducts) {
  const std::size_t n = 1000000;
  const auto s = build_adversarial(kWide, 14, n);
  const auto d = adversarial_dictionary(s);
  const Vector f0 = regression_values(kWide, s);
  const double h = kWide.h();
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t k = j; k < 4; ++k) {
      const auto est = mc(n, [&](std::size_t i) { return d.row(j)[i] * d.row(k)[i]; });
      const double want = j == k ? 1.0 : 0.0;
      if (j == k) EXPECT_EQ(est.mean, 1.0);
      else EXPECT_LT(std::abs(est.mean - want), 3 * est.se);
    }
    const auto cross = mc(n, [&](std::size_t i) { return d.row(j)[i] * f0(static_cast<Eigen::Index>(i)); });
    EXPECT_LT(std::abs(cross.mean - (j == 3 ? h / 2 : 0.0)), 3 * cross.se) << "j=" << j;
  }
}

TEST(Adversarial, PopulationErrorOfWeightsMatchesMonteCarlo) {
  const std::size_t n = 1000000;
  const auto s = build_adversarial(kWide, 15, n);
  const auto d = adversarial_dictionary(s);
  const Vector f0 = regression_values(kWide, s);
  Vector raw(4);
  raw << 0.1, 0.2, 0.3, 0.4;
  const SimplexWeights w(raw);
  const auto est = mc(n, [&](std::size_t i) {
    double f = 0;
    for (std::size_t j = 0; j < 4; ++j) f += raw(static_cast<Eigen::Index>(j)) * d.row(j)[i];
    return std::pow(f - f0(static_cast<Eigen::Index>(i)), 2);
  });
  EXPECT_LT(std::abs(est.mean - population_sq_error(kWide, w)), 3 * est.se);
  EXPECT_NEAR(population_sq_error(kWide, SimplexWeights::point_mass(4, 3)), exact_risks(kWide).best, 1e-14);
}

TEST(Adversarial, BestConvexCombinationIsOptimal) {
  const AdversarialModel m{6, 50, 1.0, 1.0};
  const double best = best_convex_sq_error(m);
  std::mt19937_64 rng(16);
  std::gamma_distribution<double> gam(1.0, 1.0);
  for (int rep = 0; rep < 2000; ++rep) {
    Vector raw(6);
    for (auto& v : raw) v = gam(rng);
    EXPECT_GE(population_sq_error(m, SimplexWeights::normalized(raw)), best - 1e-14);
  }
  EXPECT_LE(best, exact_risks(m).best);
}

TEST(ErmMonteCarlo, ZeroSignalHasZeroExcess) {
  const auto r = erm_excess_risk_mc({16, 100, 0.0, 1.0}, 200, 1);
  EXPECT_EQ(r.excess_risk, 0.0);
  EXPECT_EQ(r.h, 0.0);
}

TEST(ErmMonteCarlo, NoiselessFindsTheBest) {
  const auto r = erm_excess_risk_mc({16, 500, 1.0, 1e-6}, 500, 2);
  EXPECT_LE(r.p_misselect, 0.01);
}

TEST(ErmMonteCarlo, DeterministicAcrossThreads) {
  const AdversarialModel m{16, 100, 1.0, 1.0};
  const auto a = erm_excess_risk_mc(m, 1, 3), b = erm_excess_risk_mc(m, 1, 3);
  EXPECT_EQ(a.misselections, b.misselections);
  const auto c = erm_excess_risk_mc(m, 300, 4, 1), d = erm_excess_risk_mc(m, 300, 4, 4);
  EXPECT_EQ(c.misselections, d.misselections);
  EXPECT_EQ(c.excess_risk, d.excess_risk);
  EXPECT_EQ(c.stderr_excess, d.stderr_excess);
  EXPECT_DOUBLE_EQ(c.reference, std::sqrt(std::log(16.0) / 100.0));
  EXPECT_DOUBLE_EQ(c.excess_risk, c.h * c.p_misselect);
}

TEST(StarMonteCarlo, FeasibleAndBeatsErm) {
  const AdversarialModel m{64, 100, 1.0, 1.0};
  PreselectConfig cfg;
  cfg.regime = Regime::subgaussian(1.0, 1.0);
  const auto r = star_excess_risk_mc(m, cfg, 1000, 5, 0);
  ASSERT_EQ(r.star_by_rep.size(), 1000u);
  for (double v : r.star_by_rep) EXPECT_GE(v, r.oracle_excess - 1e-12);
  EXPECT_LE(r.star_excess, r.erm_excess);
  RecordProperty("star_excess", std::to_string(r.star_excess));
  RecordProperty("erm_excess", std::to_string(r.erm_excess));
  const auto again = star_excess_risk_mc(m, cfg, 50, 5, 1), four = star_excess_risk_mc(m, cfg, 50, 5, 4);
  EXPECT_EQ(again.star_by_rep, four.star_by_rep);
}
