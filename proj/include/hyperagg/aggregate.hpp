#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperagg/core.hpp"
#include "hyperagg/preselect.hpp"

namespace hyperagg {

enum class Variant { star, segment, convex_hull, aew, acew };

std::string_view to_string(Variant v);
/// Accepts "star", "segment", "convex", "aew", "acew".
Variant parse_variant(std::string_view name);

struct AggregateResult {
  SimplexWeights weights;
  Variant variant;
  /// R_{n,2} of the aggregate. Not set for the exponential-weights baselines.
  std::optional<double> validation_risk;

  IndexSet kept;
  std::optional<std::size_t> erm_index;
  std::optional<double> lambda;  // weight on pair->first
  std::optional<std::pair<std::size_t, std::size_t>> pair;

  bool converged = true;
  std::optional<double> duality_gap;
  std::size_t iterations = 0;
  std::vector<double> risk_trace;  // convex hull only, one entry per iterate
};

/// ERM over the segments joining the training ERM to each preselected
/// predictor, evaluated on the validation part. Weight lambda goes to the
/// ERM and 1 - lambda to the chosen partner.
AggregateResult star_aggregate(const Dictionary& dict, const SplitSample& split,
                               const PreselectConfig& cfg);

/// Star aggregate with explicit observation sets. `train` and `valid` may
/// overlap, e.g. when both steps run on one unsplit learning sample.
AggregateResult star_aggregate(const Dictionary& dict, std::span<const double> y, const IndexSet& train,
                               const IndexSet& valid, const PreselectConfig& cfg);

/// ERM over all segments between pairs of preselected predictors.
AggregateResult segment_aggregate(const Dictionary& dict, const SplitSample& split,
                                  const PreselectConfig& cfg);
AggregateResult segment_aggregate(const Dictionary& dict, std::span<const double> y, const IndexSet& train,
                                  const IndexSet& valid, const PreselectConfig& cfg);

struct ConvexOptions {
  double tol = 1e-8;
  /// 0 selects 10 * |kept| + 100.
  std::size_t max_iters = 0;
};

/// ERM over the convex hull of the preselected predictors by Frank-Wolfe
/// with exact line search, started from the segment ERM. Stops once the
/// duality gap is at most `tol`; otherwise returns with converged = false.
AggregateResult convex_aggregate(const Dictionary& dict, const SplitSample& split,
                                 const PreselectConfig& cfg, const ConvexOptions& opts = {});

/// theta_j proportional to exp(-sum_{i in idx} (y_i - f_j(x_i))^2 / T).
SimplexWeights aew_weights(const Dictionary& dict, std::span<const double> y, const IndexSet& idx,
                           double temperature);

/// Average over prefixes k = 1..|idx| of the AEW weights computed on the
/// first k observations of `idx`, in the given order.
SimplexWeights acew_weights(const Dictionary& dict, std::span<const double> y, const IndexSet& idx,
                            double temperature);

/// sum_j theta_j f_j(x_i) for each i in idx.
Vector predict(const SimplexWeights& weights, const Dictionary& dict, const IndexSet& idx);
/// Same over every observation.
Vector predict(const SimplexWeights& weights, const Dictionary& dict);

}  // namespace hyperagg
