#pragma once

#include <string>
#include <vector>

#include "hyperagg/core.hpp"

namespace hyperagg {

struct LassoKnot {
  /// Max absolute correlation x_j^T r on the working scale; the lasso
  /// penalty of 0.5 ||r||^2 + penalty * |b|_1 at this knot.
  double penalty_level = 0.0;
  Vector coefs;  // original scale
  double intercept = 0.0;
  IndexSet active_set;  // ascending
  double rss = 0.0;
};

/// Lasso-modified LARS path from the null model.
///
/// With standardization, columns are centered and scaled to unit (population)
/// variance and y is centered; the working problem is stated on that scale,
/// and coefficients and intercept are mapped back. Without it the raw
/// problem is solved with no intercept.
struct LassoPath {
  std::vector<LassoKnot> knots;
  bool standardized = true;
  Vector x_center;  // zero without standardization
  Vector x_scale;   // one without standardization
  double y_center = 0.0;
  bool truncated = false;
  std::string truncation_reason;
};

struct LarsOptions {
  /// 0 selects 8 * min(n, p).
  std::size_t max_steps = 0;
  bool standardize = true;
};

LassoPath lars_path(const Matrix& x, const Vector& y, const LarsOptions& opts = {});

/// Cp(k) = rss_k / sigma^2 - n + 2 |active_k| for each knot.
std::vector<double> mallows_cp(const LassoPath& path, std::size_t n, double sigma_sq);
/// Knot minimizing Cp; earlier knots win ties.
std::size_t mallows_cp_select(const LassoPath& path, const Vector& y, double sigma_sq);

/// One predictor per knot: intercept_k + x_i^T coefs_k.
Dictionary path_to_dictionary(const LassoPath& path, const Matrix& x);

}  // namespace hyperagg
