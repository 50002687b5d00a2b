#include "hyperagg/adversarial.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "hyperagg/aggregate.hpp"
#include "hyperagg/parallel.hpp"

namespace hyperagg {

namespace {

struct Stats {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

Stats mean_stderr(const std::vector<double>& v) {
  Stats s;
  const double n = static_cast<double>(v.size());
  for (double x : v) s.mean += x;
  s.mean /= n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stderr_mean = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

// Index of the largest sum_i y_i (2 x_i^(j) - 1), i.e. the smallest
// empirical risk, since every f_j^2 = 1. Ties go to the smallest index.
std::size_t dyadic_erm(const DyadicSample& s) {
  const auto m = s.bits.cols();
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < m; ++j) {
    double score = 0.0;
    for (Eigen::Index i = 0; i < s.y.size(); ++i) score += s.bits(i, j) ? s.y(i) : -s.y(i);
    if (score > best_score) {
      best_score = score;
      best = static_cast<std::size_t>(j);
    }
  }
  return best;
}

}  // namespace

double AdversarialModel::h() const {
  return c / 4.0 * std::sqrt(std::log(static_cast<double>(m)) / static_cast<double>(n));
}

void AdversarialModel::validate() const {
  if (m < 2) throw std::invalid_argument("adversarial model needs M >= 2");
  if (n < 1) throw std::invalid_argument("adversarial model needs n >= 1");
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("adversarial model needs C >= 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("adversarial model needs sigma > 0");
}

DyadicSample build_adversarial(const AdversarialModel& model, std::uint64_t seed,
                               std::optional<std::size_t> n_obs) {
  model.validate();
  const auto n = static_cast<Eigen::Index>(n_obs.value_or(model.n));
  if (n < 1) throw std::invalid_argument("build_adversarial: n_obs must be positive");
  const auto m = static_cast<Eigen::Index>(model.m);
  const double h = model.h();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  DyadicSample s{BitMatrix(n, m), Vector(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    std::uint64_t word = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j % 64 == 0) word = rng();
      s.bits(i, j) = static_cast<std::uint8_t>(word & 1u);
      word >>= 1;
    }
    const double f0 = s.bits(i, m - 1) ? 2.0 * h : h;
    s.y(i) = f0 + model.sigma * noise(rng);
  }
  return s;
}

Vector regression_values(const AdversarialModel& model, const DyadicSample& sample) {
  const double h = model.h();
  const auto last = sample.bits.cols() - 1;
  Vector f0(sample.bits.rows());
  for (Eigen::Index i = 0; i < f0.size(); ++i) f0(i) = sample.bits(i, last) ? 2.0 * h : h;
  return f0;
}

Dictionary adversarial_dictionary(const DyadicSample& sample) {
  PredMatrix preds = 2.0 * sample.bits.transpose().cast<double>().array() - 1.0;
  return dictionary_from_predictions(std::move(preds));
}

ExactRisks exact_risks(const AdversarialModel& model) {
  model.validate();
  const double h = model.h();
  return {2.5 * h * h + 1.0, 2.5 * h * h - h + 1.0};
}

double population_sq_error(const AdversarialModel& model, const SimplexWeights& weights) {
  if (weights.size() != model.m) throw std::invalid_argument("weights do not match the dictionary size");
  const double h = model.h();
  const double theta_last = weights.theta()(static_cast<Eigen::Index>(model.m - 1));
  return weights.theta().squaredNorm() - h * theta_last + 2.5 * h * h;
}

double best_convex_sq_error(const AdversarialModel& model) {
  model.validate();
  // Minimize sum theta^2 - h theta_M on the simplex: the stationary point is
  // theta_j = mu / 2 (j < M), theta_M = (mu + h) / 2 with mu = (2 - h) / M.
  const double h = model.h();
  const double m = static_cast<double>(model.m);
  const double mu = (2.0 - h) / m;
  double quad;
  if (mu >= 0.0) {
    const double t_other = mu / 2.0;
    const double t_last = (mu + h) / 2.0;
    quad = (m - 1.0) * t_other * t_other + t_last * t_last - h * t_last;
  } else {
    quad = 1.0 - h;
  }
  return quad + 2.5 * h * h;
}

ErmReport erm_excess_risk_mc(const AdversarialModel& model, std::size_t reps, std::uint64_t seed,
                             unsigned threads) {
  model.validate();
  if (reps < 1) throw std::invalid_argument("erm_excess_risk_mc: reps must be positive");
  std::vector<std::uint8_t> missed(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const DyadicSample s = build_adversarial(model, derive_seed(seed, r));
    missed[r] = dyadic_erm(s) != model.m - 1;
  });

  ErmReport out;
  out.m = model.m;
  out.n = model.n;
  out.reps = reps;
  out.h = model.h();
  for (auto v : missed) out.misselections += v;
  const double p = static_cast<double>(out.misselections) / static_cast<double>(reps);
  out.p_misselect = p;
  out.excess_risk = out.h * p;
  out.stderr_excess = out.h * std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
  out.reference = std::sqrt(std::log(static_cast<double>(model.m)) / static_cast<double>(model.n));
  return out;
}

StarReport star_excess_risk_mc(const AdversarialModel& model, const PreselectConfig& cfg,
                               std::size_t reps, std::uint64_t seed, unsigned threads) {
  model.validate();
  cfg.validate();
  if (reps < 1) throw std::invalid_argument("star_excess_risk_mc: reps must be positive");
  const double best_single = exact_risks(model).best;
  const double h = model.h();

  StarReport out;
  out.reps = reps;
  out.star_by_rep.assign(reps, 0.0);
  out.erm_by_rep.assign(reps, 0.0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const DyadicSample s = build_adversarial(model, derive_seed(seed, r), 2 * model.n);
    const Dictionary dict = adversarial_dictionary(s);
    auto sample = std::make_shared<const Sample>(s.y);
    const SplitSample split = split_sample(sample, 0, 0.5, SplitMode::sequential);
    const AggregateResult star = star_aggregate(dict, split, cfg);
    out.star_by_rep[r] = population_sq_error(model, star.weights) - best_single;
    out.erm_by_rep[r] = dyadic_erm(s) != model.m - 1 ? h : 0.0;
  });

  const Stats star = mean_stderr(out.star_by_rep);
  const Stats erm = mean_stderr(out.erm_by_rep);
  out.star_excess = star.mean;
  out.star_stderr = star.stderr_mean;
  out.erm_excess = erm.mean;
  out.erm_stderr = erm.stderr_mean;
  out.oracle_excess = best_convex_sq_error(model) - best_single;
  return out;
}

}  // namespace hyperagg
