#include "hyperagg/preselect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hyperagg/risk.hpp"

namespace hyperagg {

namespace {

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void check_dims(const Dictionary& dict, std::size_t n) {
  if (dict.sample_size() != n)
    throw std::invalid_argument("dictionary covers " + std::to_string(dict.sample_size()) +
                                " observations but the sample has " + std::to_string(n));
}

}  // namespace

void PreselectConfig::validate() const {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("confidence level x must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("threshold constant c must be positive");
  regime.validate();
}

double phi(const Regime& regime, std::size_t n, std::size_t m, double x) {
  if (n == 0) throw std::invalid_argument("phi: n must be positive");
  if (m < 2) throw std::invalid_argument("phi: M must be at least 2");
  if (!(x > 0.0)) throw std::invalid_argument("phi: x must be positive");
  regime.validate();
  const double nn = static_cast<double>(n);
  const double complexity = std::log(static_cast<double>(m)) + x;
  if (regime.kind == Regime::Kind::bounded) return regime.b * std::sqrt(complexity / nn);
  return (regime.sigma_eps + regime.b) * std::sqrt(complexity * std::log(nn) / nn);
}

std::size_t erm_index(const Dictionary& dict, std::span<const double> y, const IndexSet& idx) {
  if (idx.empty()) throw std::invalid_argument("erm_index: empty index set");
  check_dims(dict, y.size());
  std::size_t best = 0;
  double best_risk = empirical_risk(dict.row(0), y, idx);
  for (std::size_t j = 1; j < dict.size(); ++j) {
    const double r = empirical_risk(dict.row(j), y, idx);
    if (r < best_risk) {
      best_risk = r;
      best = j;
    }
  }
  return best;
}

PreselectResult preselect(const Dictionary& dict, const SplitSample& split, const PreselectConfig& cfg) {
  return preselect(dict, as_span(split.parent().y()), split.idx1(), cfg);
}

PreselectResult preselect(const Dictionary& dict, std::span<const double> y, const IndexSet& idx,
                          const PreselectConfig& cfg) {
  cfg.validate();
  check_dims(dict, y.size());
  if (idx.empty()) throw std::invalid_argument("preselect: empty training set");
  for (std::size_t i : idx)
    if (i >= y.size()) throw std::invalid_argument("preselect: index " + std::to_string(i) + " out of range");

  PreselectResult out;
  out.phi = phi(cfg.regime, idx.size(), dict.size(), cfg.x);
  out.risks.resize(dict.size());
  for (std::size_t j = 0; j < dict.size(); ++j) out.risks[j] = empirical_risk(dict.row(j), y, idx);
  out.erm_index = static_cast<std::size_t>(
      std::min_element(out.risks.begin(), out.risks.end()) - out.risks.begin());

  const auto erm = dict.row(out.erm_index);
  const double base = out.risks[out.erm_index];
  const double phi2 = out.phi * out.phi;
  out.thresholds.resize(dict.size());
  for (std::size_t j = 0; j < dict.size(); ++j) {
    const double dist = j == out.erm_index ? 0.0 : std::sqrt(empirical_sq_norm(erm, dict.row(j), idx));
    out.thresholds[j] = base + cfg.c * std::max(out.phi * dist, phi2);
    if (out.risks[j] <= out.thresholds[j]) out.kept.push_back(j);
  }
  return out;
}

}  // namespace hyperagg
