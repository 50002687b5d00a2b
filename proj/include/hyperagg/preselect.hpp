#pragma once

#include <vector>

#include "hyperagg/core.hpp"

namespace hyperagg {

struct PreselectConfig {
  double x = 1.0;  // confidence level
  double c = 2.0;  // threshold constant
  Regime regime = Regime::bounded(1.0);

  void validate() const;
};

struct PreselectResult {
  IndexSet kept;              // ascending
  std::size_t erm_index = 0;  // training-half ERM
  double phi = 0.0;
  std::vector<double> risks;       // R_{n,1}(f_j)
  std::vector<double> thresholds;  // right-hand side of the keep test, per predictor
};

/// Residue scale of the preselection band; natural logarithms throughout.
///   bounded:     b * sqrt((log M + x) / n)
///   subgaussian: (sigma_eps + b) * sqrt((log M + x) log n / n)
double phi(const Regime& regime, std::size_t n, std::size_t m, double x);

/// Index of the smallest empirical risk over the observations in `idx`;
/// ties go to the smallest index.
std::size_t erm_index(const Dictionary& dict, std::span<const double> y, const IndexSet& idx);

/// Keeps f_j when R_1(f_j) <= R_1(erm) + c * max(phi * ||erm - f_j||_1, phi^2),
/// all quantities taken on the training part of the split.
PreselectResult preselect(const Dictionary& dict, const SplitSample& split, const PreselectConfig& cfg);
/// Same test over an explicit set of training observations.
PreselectResult preselect(const Dictionary& dict, std::span<const double> y, const IndexSet& train,
                          const PreselectConfig& cfg);

}  // namespace hyperagg
