#include "hyperagg/risk.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hyperagg {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b)
    throw std::invalid_argument("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  if (a == 0) throw std::invalid_argument("empty input");
}

void check_index(const IndexSet& idx, std::size_t n) {
  if (idx.empty()) throw std::invalid_argument("empty index set");
  for (std::size_t i : idx)
    if (i >= n) throw std::invalid_argument("index " + std::to_string(i) + " out of range");
}

template <class Fn>
double mean_over(const IndexSet& idx, Fn&& term) {
  double s = 0.0;
  for (std::size_t i : idx) s += term(i);
  return s / static_cast<double>(idx.size());
}

}  // namespace

double empirical_risk(std::span<const double> f, std::span<const double> y) {
  check_lengths(f.size(), y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = y[i] - f[i];
    s += r * r;
  }
  return s / static_cast<double>(f.size());
}

double empirical_risk(std::span<const double> f, std::span<const double> y, const IndexSet& idx) {
  check_lengths(f.size(), y.size());
  check_index(idx, f.size());
  return mean_over(idx, [&](std::size_t i) {
    const double r = y[i] - f[i];
    return r * r;
  });
}

double empirical_sq_norm(std::span<const double> f, std::span<const double> g) {
  return empirical_risk(f, g);
}

double empirical_sq_norm(std::span<const double> f, std::span<const double> g, const IndexSet& idx) {
  return empirical_risk(f, g, idx);
}

double segment_lambda(double risk_f, double risk_g, double sq_dist) {
  if (sq_dist < 0.0) throw std::invalid_argument("segment_lambda: negative squared distance");
  if (sq_dist == 0.0) return risk_f <= risk_g ? 1.0 : 0.0;
  const double lambda = 0.5 * ((risk_g - risk_f) / sq_dist + 1.0);
  return std::clamp(lambda, 0.0, 1.0);
}

SegmentSolution segment_from_stats(double risk_f, double risk_g, double sq_dist) {
  const double lambda = segment_lambda(risk_f, risk_g, sq_dist);
  double risk = lambda * risk_f + (1.0 - lambda) * risk_g - lambda * (1.0 - lambda) * sq_dist;
  // Endpoints are exact; only the interior value carries rounding.
  if (lambda == 1.0) risk = risk_f;
  else if (lambda == 0.0) risk = risk_g;
  return {lambda, std::max(risk, 0.0)};
}

SegmentSolution segment_min(std::span<const double> f, std::span<const double> g,
                            std::span<const double> y) {
  check_lengths(f.size(), g.size());
  check_lengths(f.size(), y.size());
  return segment_from_stats(empirical_risk(f, y), empirical_risk(g, y), empirical_sq_norm(f, g));
}

SegmentSolution segment_min(std::span<const double> f, std::span<const double> g,
                            std::span<const double> y, const IndexSet& idx) {
  check_lengths(f.size(), g.size());
  check_lengths(f.size(), y.size());
  return segment_from_stats(empirical_risk(f, y, idx), empirical_risk(g, y, idx),
                            empirical_sq_norm(f, g, idx));
}

}  // namespace hyperagg
