#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperagg/core.hpp"
#include "hyperagg/preselect.hpp"

namespace hyperagg {

/// Uniform design on [0, 1] with a dictionary of Rademacher-type dyadic
/// digits f_j(x) = 2 x^(j) - 1 and a regression function that depends only
/// on the last digit: f_0(x) = 2h if x^(M) = 1, h otherwise, with
/// h = (C / 4) sqrt(log M / n). The ERM over this dictionary picks f_M too
/// rarely, which costs a sqrt(log M / n) excess risk.
struct AdversarialModel {
  std::size_t m = 16;
  std::size_t n = 100;
  double c = 1.0;
  double sigma = 1.0;

  double h() const;
  void validate() const;
};

using BitMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

struct DyadicSample {
  BitMatrix bits;  // n x M, bits(i, j) is digit j + 1 of X_i
  Vector y;
};

/// Digits are drawn directly as fair coins. `n_obs` overrides model.n.
DyadicSample build_adversarial(const AdversarialModel& model, std::uint64_t seed,
                               std::optional<std::size_t> n_obs = std::nullopt);

/// f_0 evaluated at each observation of the sample.
Vector regression_values(const AdversarialModel& model, const DyadicSample& sample);

/// The M dictionary predictors evaluated on the sample.
Dictionary adversarial_dictionary(const DyadicSample& sample);

struct ExactRisks {
  double other;  // ||f_j - f_0||^2 for j < M
  double best;   // ||f_M - f_0||^2
};

ExactRisks exact_risks(const AdversarialModel& model);

/// ||sum_j theta_j f_j - f_0||^2 under the uniform design. Uses
/// E f_j f_k = delta_jk, E f_j f_0 = 0 (j < M), E f_M f_0 = h / 2 and
/// E f_0^2 = 5 h^2 / 2.
double population_sq_error(const AdversarialModel& model, const SimplexWeights& weights);

/// Smallest population squared error over the whole simplex.
double best_convex_sq_error(const AdversarialModel& model);

struct ErmReport {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t misselections = 0;
  double h = 0.0;
  double p_misselect = 0.0;
  double excess_risk = 0.0;  // h * p_misselect
  double stderr_excess = 0.0;
  double reference = 0.0;  // sqrt(log M / n)
};

/// Replications of the unpenalized ERM; excess risk is exact given the
/// selection because the population risks are known in closed form.
ErmReport erm_excess_risk_mc(const AdversarialModel& model, std::size_t reps, std::uint64_t seed,
                             unsigned threads = 1);

struct StarReport {
  std::size_t reps = 0;
  double star_excess = 0.0;  // mean over replications
  double star_stderr = 0.0;
  double erm_excess = 0.0;  // ERM selector on the same 2n observations
  double erm_stderr = 0.0;
  double oracle_excess = 0.0;  // best convex combination, <= 0
  std::vector<double> star_by_rep;
  std::vector<double> erm_by_rep;
};

/// Head-to-head of the star aggregate (2n observations, sequential halves)
/// against the ERM selector on the same data.
StarReport star_excess_risk_mc(const AdversarialModel& model, const PreselectConfig& cfg,
                               std::size_t reps, std::uint64_t seed, unsigned threads = 1);

}  // namespace hyperagg
