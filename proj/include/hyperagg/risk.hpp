#pragma once

#include <span>

#include "hyperagg/core.hpp"

namespace hyperagg {

/// Squared-loss empirical risk (1/n) sum (y_i - f_i)^2.
double empirical_risk(std::span<const double> f, std::span<const double> y);
/// Same, restricted to the observations in `idx`.
double empirical_risk(std::span<const double> f, std::span<const double> y, const IndexSet& idx);

/// Empirical squared distance (1/n) sum (f_i - g_i)^2.
double empirical_sq_norm(std::span<const double> f, std::span<const double> g);
double empirical_sq_norm(std::span<const double> f, std::span<const double> g, const IndexSet& idx);

struct SegmentSolution {
  double lambda = 1.0;  // weight on f; 1 - lambda goes to g
  double risk = 0.0;
};

/// Minimizer over [0, 1] of lambda -> R(lambda f + (1 - lambda) g) given
/// R(f), R(g) and ||f - g||^2. A zero-length segment resolves to the
/// lower-risk endpoint, f on ties.
double segment_lambda(double risk_f, double risk_g, double sq_dist);

/// Closed-form segment minimum from the three sufficient statistics.
SegmentSolution segment_from_stats(double risk_f, double risk_g, double sq_dist);

SegmentSolution segment_min(std::span<const double> f, std::span<const double> g,
                            std::span<const double> y);
SegmentSolution segment_min(std::span<const double> f, std::span<const double> g,
                            std::span<const double> y, const IndexSet& idx);

}  // namespace hyperagg
