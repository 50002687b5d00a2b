#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hyperagg/core.hpp"
#include "hyperagg/preselect.hpp"

namespace hyperagg {

/// The 91-dimensional sparse coefficient vector of the lasso study.
Vector default_beta0();

/// Sigma_ij = 2^{-|i - j|}.
Matrix toeplitz_covariance(std::size_t p);

/// Rows of X i.i.d. N(0, Sigma), Y = X beta0 + sigma * eps.
Sample simulate_lasso_data(std::size_t n, const Vector& beta0, double sigma, std::uint64_t seed);

/// Where the aggregation weights' dictionary comes from.
///   training_half: per split, a LARS path fitted on the training half; AEW
///     and the star aggregate (preselection and aggregation both on the
///     unsplit learning half) weight its knots, and knot k's weight is moved
///     to knot min(k, K - 1) of the full-sample path.
///   full_sample: the full-sample path is weighted directly; the star
///     aggregate preselects on the training half and aggregates on the
///     learning half.
enum class DictionarySource { training_half, full_sample };

std::string_view to_string(DictionarySource s);
DictionarySource parse_dictionary_source(std::string_view name);

struct LassoStudyConfig {
  std::size_t n = 150;
  double sigma = 2.0;
  std::size_t reps = 100;
  std::size_t jackknife_splits = 10;
  /// Values <= 0 select 4 * sigma^2.
  double temperature = 0.0;
  double star_c = 2.0;
  double confidence_x = 1.0;
  /// Values <= 0 use max |y| of the sample being split.
  double star_b = 0.0;
  std::uint64_t seed = 42;
  DictionarySource dictionary_source = DictionarySource::training_half;
  Vector beta0 = default_beta0();

  double effective_temperature() const { return temperature > 0.0 ? temperature : 4.0 * sigma * sigma; }
  void validate() const;
};

struct ErrorRecord {
  std::size_t rep = 0;
  std::string method;  // "cp", "aew" or "star"
  double beta_err = 0.0;
  double pred_err = 0.0;
};

struct ErrorSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct MethodSummary {
  ErrorSummary beta_err;
  ErrorSummary pred_err;
};

struct MonteCarloReport {
  std::vector<ErrorRecord> records;  // ordered by rep, then method
  std::map<std::string, MethodSummary> summary;
  std::size_t failures = 0;
  std::vector<std::string> failure_messages;
};

/// Linear-interpolation quantiles (type 7) of an unsorted sample.
double quantile(std::vector<double> values, double q);
ErrorSummary summarize(const std::vector<double>& values);
std::map<std::string, MethodSummary> summarize_records(const std::vector<ErrorRecord>& records);

/// Outcome of one replication, exposed for testing.
struct ReplicationResult {
  Sample data;
  Vector beta_cp;
  Vector beta_aew;
  Vector beta_star;
  Vector theta_aew;  // jackknife-averaged weights over the full-sample knots
  Vector theta_star;
  Matrix knot_coefs;  // full-sample path, one knot per row
};

ReplicationResult run_replication(const LassoStudyConfig& cfg, std::uint64_t seed);

MonteCarloReport run_lasso_study(const LassoStudyConfig& cfg, unsigned threads = 1);

}  // namespace hyperagg
