#include "hyperagg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "hyperagg/aggregate.hpp"
#include "hyperagg/lars.hpp"
#include "hyperagg/parallel.hpp"

namespace hyperagg {

namespace {

constexpr const char* kMethods[] = {"cp", "aew", "star"};

}  // namespace

Vector default_beta0() {
  std::vector<double> b;
  auto zeros = [&](int k) { b.insert(b.end(), static_cast<std::size_t>(k), 0.0); };
  b.insert(b.end(), {3.0, 1.5});
  zeros(30);
  b.insert(b.end(), {2.0, -6.0, 4.0});
  zeros(25);
  b.push_back(-4.0);
  zeros(15);
  b.insert(b.end(), {2.5, 3.0});
  zeros(10);
  b.insert(b.end(), {3.0, 1.0, -2.0});
  return Eigen::Map<const Vector>(b.data(), static_cast<Eigen::Index>(b.size()));
}

Matrix toeplitz_covariance(std::size_t p) {
  const auto d = static_cast<Eigen::Index>(p);
  Matrix s(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) s(i, j) = std::ldexp(1.0, -static_cast<int>(std::abs(i - j)));
  return s;
}

Sample simulate_lasso_data(std::size_t n, const Vector& beta0, double sigma, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("simulate_lasso_data: n must be at least 2");
  if (!(sigma >= 0.0)) throw std::invalid_argument("simulate_lasso_data: sigma must be nonnegative");
  const auto p = beta0.size();
  const Eigen::LLT<Matrix> llt(toeplitz_covariance(static_cast<std::size_t>(p)));
  if (llt.info() != Eigen::Success) throw std::runtime_error("simulate_lasso_data: covariance not positive definite");
  const Matrix lower = llt.matrixL();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto rows = static_cast<Eigen::Index>(n);
  Matrix z(rows, p);
  Vector eps(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(i, j) = gauss(rng);
    eps(i) = gauss(rng);
  }
  Matrix x = z * lower.transpose();
  Vector y = x * beta0 + sigma * eps;
  return Sample(std::move(y), std::move(x));
}

void LassoStudyConfig::validate() const {
  if (n < 4) throw std::invalid_argument("lasso experiment needs n >= 4");
  if (!(sigma > 0.0)) throw std::invalid_argument("lasso experiment needs sigma > 0");
  if (reps < 1 || jackknife_splits < 1) throw std::invalid_argument("lasso experiment counts must be >= 1");
  if (!(star_c > 0.0) || !(confidence_x > 0.0)) throw std::invalid_argument("star constants must be positive");
  if (beta0.size() < 1) throw std::invalid_argument("beta0 is empty");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ErrorSummary summarize(const std::vector<double>& values) {
  ErrorSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  s.median = quantile(values, 0.5);
  s.q1 = quantile(values, 0.25);
  s.q3 = quantile(values, 0.75);
  return s;
}

std::map<std::string, MethodSummary> summarize_records(const std::vector<ErrorRecord>& records) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_method;
  for (const auto& r : records) {
    by_method[r.method].first.push_back(r.beta_err);
    by_method[r.method].second.push_back(r.pred_err);
  }
  std::map<std::string, MethodSummary> out;
  for (const auto& [method, errs] : by_method)
    out[method] = {summarize(errs.first), summarize(errs.second)};
  return out;
}

std::string_view to_string(DictionarySource s) {
  return s == DictionarySource::training_half ? "training" : "full";
}

DictionarySource parse_dictionary_source(std::string_view name) {
  if (name == "training") return DictionarySource::training_half;
  if (name == "full") return DictionarySource::full_sample;
  throw std::invalid_argument("unknown dictionary source '" + std::string(name) + "'");
}

ReplicationResult run_replication(const LassoStudyConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  auto data = std::make_shared<const Sample>(
      simulate_lasso_data(cfg.n, cfg.beta0, cfg.sigma, derive_seed(seed, 0)));
  const Matrix& x = *data->x();
  const Vector& y = data->y();
  const std::span<const double> ys(y.data(), static_cast<std::size_t>(y.size()));

  const LassoPath path = lars_path(x, y);
  const Dictionary dict = path_to_dictionary(path, x);
  const double sigma_sq = cfg.sigma * cfg.sigma;

  ReplicationResult out{*data, path.knots[mallows_cp_select(path, y, sigma_sq)].coefs};
  out.knot_coefs = *dict.coefs();

  PreselectConfig star_cfg;
  star_cfg.x = cfg.confidence_x;
  star_cfg.c = cfg.star_c;
  star_cfg.regime = Regime::bounded(cfg.star_b > 0.0 ? cfg.star_b : y.cwiseAbs().maxCoeff());
  const double temperature = cfg.effective_temperature();

  const auto m = static_cast<Eigen::Index>(dict.size());
  out.theta_aew = Vector::Zero(m);
  out.theta_star = Vector::Zero(m);
  for (std::size_t s = 0; s < cfg.jackknife_splits; ++s) {
    const SplitSample split = split_sample(data, derive_seed(seed, 1 + s), 0.5, SplitMode::random);
    if (cfg.dictionary_source == DictionarySource::full_sample) {
      out.theta_aew += aew_weights(dict, ys, split.idx2(), temperature).theta();
      out.theta_star += star_aggregate(dict, split, star_cfg).weights.theta();
      continue;
    }
    const Matrix x_train = x(split.idx1(), Eigen::all);
    const Vector y_train = y(split.idx1());
    const Dictionary local = path_to_dictionary(lars_path(x_train, y_train), x);
    const Vector aew = aew_weights(local, ys, split.idx2(), temperature).theta();
    const Vector star = star_aggregate(local, ys, split.idx2(), split.idx2(), star_cfg).weights.theta();
    for (Eigen::Index k = 0; k < aew.size(); ++k) {
      const Eigen::Index target = std::min(k, m - 1);
      out.theta_aew(target) += aew(k);
      out.theta_star(target) += star(k);
    }
  }
  out.theta_aew = SimplexWeights::normalized(out.theta_aew).theta();
  out.theta_star = SimplexWeights::normalized(out.theta_star).theta();
  out.beta_aew = out.knot_coefs.transpose() * out.theta_aew;
  out.beta_star = out.knot_coefs.transpose() * out.theta_star;
  return out;
}

MonteCarloReport run_lasso_study(const LassoStudyConfig& cfg, unsigned threads) {
  cfg.validate();
  std::vector<std::vector<ErrorRecord>> per_rep(cfg.reps);
  std::vector<std::string> errors(cfg.reps);

  parallel_for(cfg.reps, threads, [&](std::size_t r) {
    try {
      const ReplicationResult rep = run_replication(cfg, derive_seed(cfg.seed, r));
      const Matrix& x = *rep.data.x();
      for (const char* method : kMethods) {
        const std::string name = method;
        const Vector& beta = name == "cp" ? rep.beta_cp : (name == "aew" ? rep.beta_aew : rep.beta_star);
        const Vector diff = beta - cfg.beta0;
        per_rep[r].push_back({r, name, diff.norm(), (x * diff).norm()});
      }
    } catch (const std::exception& e) {
      per_rep[r].clear();
      errors[r] = e.what();
    }
  });

  MonteCarloReport report;
  for (std::size_t r = 0; r < cfg.reps; ++r) {
    if (!errors[r].empty()) {
      ++report.failures;
      report.failure_messages.push_back("rep " + std::to_string(r) + ": " + errors[r]);
      continue;
    }
    report.records.insert(report.records.end(), per_rep[r].begin(), per_rep[r].end());
  }
  report.summary = summarize_records(report.records);
  return report;
}

}  // namespace hyperagg
