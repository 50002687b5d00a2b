#include "hyperagg/aggregate.hpp"

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

void check_index(const IndexSet& idx, std::size_t n) {
  if (idx.empty()) throw std::invalid_argument("empty index set");
  for (std::size_t i : idx)
    if (i >= n) throw std::invalid_argument("index " + std::to_string(i) + " out of range");
}

// Max-subtracted softmax of -losses / T, written into `out`.
void softmax_neg(const Vector& losses, double temperature, Vector& out) {
  const double lo = losses.minCoeff();
  out = (-(losses.array() - lo) / temperature).exp().matrix();
  out /= out.sum();
}

void check_temperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("temperature must be positive");
}

struct Candidate {
  std::size_t first = 0;
  std::size_t second = 0;
  SegmentSolution seg;
};

AggregateResult finish(const Dictionary& dict, std::span<const double> y, const IndexSet& valid,
                       Variant variant, const PreselectResult& pre, const Candidate& best) {
  AggregateResult r{SimplexWeights::pair(dict.size(), best.first, best.second, best.seg.lambda),
                    variant, std::nullopt, pre.kept, pre.erm_index};
  r.lambda = best.seg.lambda;
  r.pair = std::make_pair(best.first, best.second);
  r.validation_risk = empirical_risk(as_span(predict(r.weights, dict)), y, valid);
  return r;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::star: return "star";
    case Variant::segment: return "segment";
    case Variant::convex_hull: return "convex";
    case Variant::aew: return "aew";
    case Variant::acew: return "acew";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::star, Variant::segment, Variant::convex_hull, Variant::aew, Variant::acew})
    if (name == to_string(v)) return v;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

AggregateResult star_aggregate(const Dictionary& dict, const SplitSample& split,
                               const PreselectConfig& cfg) {
  return star_aggregate(dict, as_span(split.parent().y()), split.idx1(), split.idx2(), cfg);
}

AggregateResult star_aggregate(const Dictionary& dict, std::span<const double> y, const IndexSet& train,
                               const IndexSet& valid, const PreselectConfig& cfg) {
  check_dims(dict, y.size());
  check_index(valid, y.size());
  const PreselectResult pre = preselect(dict, y, train, cfg);
  const auto erm = dict.row(pre.erm_index);

  Candidate best{pre.erm_index, pre.erm_index, {1.0, empirical_risk(erm, y, valid)}};
  for (std::size_t j : pre.kept) {
    if (j == pre.erm_index) continue;
    const SegmentSolution seg = segment_min(erm, dict.row(j), y, valid);
    if (seg.risk < best.seg.risk) best = {pre.erm_index, j, seg};
  }
  return finish(dict, y, valid, Variant::star, pre, best);
}

AggregateResult segment_aggregate(const Dictionary& dict, const SplitSample& split,
                                  const PreselectConfig& cfg) {
  return segment_aggregate(dict, as_span(split.parent().y()), split.idx1(), split.idx2(), cfg);
}

AggregateResult segment_aggregate(const Dictionary& dict, std::span<const double> y, const IndexSet& train,
                                  const IndexSet& valid, const PreselectConfig& cfg) {
  check_dims(dict, y.size());
  check_index(valid, y.size());
  const PreselectResult pre = preselect(dict, y, train, cfg);
  const IndexSet& kept = pre.kept;

  std::vector<double> risk2(kept.size());
  for (std::size_t a = 0; a < kept.size(); ++a) risk2[a] = empirical_risk(dict.row(kept[a]), y, valid);

  // Lexicographic scan with strict improvement keeps the smallest pair on ties.
  Candidate best{kept[0], kept[0], {1.0, risk2[0]}};
  for (std::size_t a = 0; a < kept.size(); ++a) {
    if (risk2[a] < best.seg.risk) best = {kept[a], kept[a], {1.0, risk2[a]}};
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      const double d = empirical_sq_norm(dict.row(kept[a]), dict.row(kept[b]), valid);
      const SegmentSolution seg = segment_from_stats(risk2[a], risk2[b], d);
      if (seg.risk < best.seg.risk) best = {kept[a], kept[b], seg};
    }
  }
  return finish(dict, y, valid, Variant::segment, pre, best);
}

AggregateResult convex_aggregate(const Dictionary& dict, const SplitSample& split,
                                 const PreselectConfig& cfg, const ConvexOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("convex_aggregate: tol must be positive");
  const AggregateResult start = segment_aggregate(dict, split, cfg);
  const IndexSet& kept = start.kept;
  const IndexSet& idx2 = split.idx2();
  const auto k = static_cast<Eigen::Index>(kept.size());
  const auto n2 = static_cast<Eigen::Index>(idx2.size());
  const std::size_t max_iters = opts.max_iters ? opts.max_iters : 10 * kept.size() + 100;

  // Kept predictors and responses restricted to the validation part.
  PredMatrix p(k, n2);
  Vector y2(n2);
  for (Eigen::Index i = 0; i < n2; ++i) {
    y2(i) = split.parent().y()(static_cast<Eigen::Index>(idx2[static_cast<std::size_t>(i)]));
    for (Eigen::Index a = 0; a < k; ++a)
      p(a, i) = dict.preds()(static_cast<Eigen::Index>(kept[static_cast<std::size_t>(a)]),
                             static_cast<Eigen::Index>(idx2[static_cast<std::size_t>(i)]));
  }

  Vector theta = Vector::Zero(k);
  for (Eigen::Index a = 0; a < k; ++a)
    theta(a) = start.weights.theta()(static_cast<Eigen::Index>(kept[static_cast<std::size_t>(a)]));
  Vector g = p.transpose() * theta;
  double risk = (y2 - g).squaredNorm() / static_cast<double>(n2);

  AggregateResult r{start.weights, Variant::convex_hull, std::nullopt, kept, start.erm_index};
  r.converged = false;
  r.risk_trace.push_back(risk);

  const auto y2s = as_span(y2);
  double gap = 0.0;
  std::size_t it = 0;
  for (;; ++it) {
    const Vector grad = (-2.0 / static_cast<double>(n2)) * (p * (y2 - g));
    Eigen::Index s = 0;
    grad.minCoeff(&s);
    gap = theta.dot(grad) - grad(s);
    if (gap <= opts.tol) {
      r.converged = true;
      break;
    }
    if (it == max_iters) break;

    const std::span<const double> vertex(p.data() + s * n2, static_cast<std::size_t>(n2));
    const SegmentSolution seg = segment_min(vertex, as_span(g), y2s);
    if (seg.lambda == 0.0) break;  // no representable descent left
    theta *= 1.0 - seg.lambda;
    theta(s) += seg.lambda;
    g = seg.lambda * p.row(s).transpose() + (1.0 - seg.lambda) * g;
    risk = std::min(risk, seg.risk);
    r.risk_trace.push_back(seg.risk);
  }

  Vector full = Vector::Zero(static_cast<Eigen::Index>(dict.size()));
  for (Eigen::Index a = 0; a < k; ++a)
    full(static_cast<Eigen::Index>(kept[static_cast<std::size_t>(a)])) = std::max(theta(a), 0.0);
  r.weights = SimplexWeights::normalized(std::move(full));
  r.iterations = it;
  r.duality_gap = gap;
  r.validation_risk =
      empirical_risk(as_span(predict(r.weights, dict)), as_span(split.parent().y()), idx2);
  return r;
}

SimplexWeights aew_weights(const Dictionary& dict, std::span<const double> y, const IndexSet& idx,
                           double temperature) {
  check_temperature(temperature);
  check_dims(dict, y.size());
  check_index(idx, y.size());
  Vector losses(static_cast<Eigen::Index>(dict.size()));
  for (std::size_t j = 0; j < dict.size(); ++j) {
    const auto f = dict.row(j);
    double s = 0.0;
    for (std::size_t i : idx) s += (y[i] - f[i]) * (y[i] - f[i]);
    losses(static_cast<Eigen::Index>(j)) = s;
  }
  Vector theta;
  softmax_neg(losses, temperature, theta);
  return SimplexWeights::normalized(std::move(theta));
}

SimplexWeights acew_weights(const Dictionary& dict, std::span<const double> y, const IndexSet& idx,
                            double temperature) {
  check_temperature(temperature);
  check_dims(dict, y.size());
  check_index(idx, y.size());
  const auto m = static_cast<Eigen::Index>(dict.size());
  Vector cum = Vector::Zero(m);
  Vector acc = Vector::Zero(m);
  Vector w;
  for (std::size_t i : idx) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double r = y[i] - dict.row(static_cast<std::size_t>(j))[i];
      cum(j) += r * r;
    }
    softmax_neg(cum, temperature, w);
    acc += w;
  }
  acc /= static_cast<double>(idx.size());
  return SimplexWeights::normalized(std::move(acc));
}

Vector predict(const SimplexWeights& weights, const Dictionary& dict, const IndexSet& idx) {
  if (weights.size() != dict.size())
    throw std::invalid_argument("weights have " + std::to_string(weights.size()) +
                                " entries but the dictionary has " + std::to_string(dict.size()));
  check_index(idx, dict.sample_size());
  Vector out = Vector::Zero(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j : weights.support()) {
    const double t = weights.theta()(static_cast<Eigen::Index>(j));
    const auto f = dict.row(j);
    for (std::size_t a = 0; a < idx.size(); ++a) out(static_cast<Eigen::Index>(a)) += t * f[idx[a]];
  }
  return out;
}

Vector predict(const SimplexWeights& weights, const Dictionary& dict) {
  if (weights.size() != dict.size())
    throw std::invalid_argument("weights have " + std::to_string(weights.size()) +
                                " entries but the dictionary has " + std::to_string(dict.size()));
  return dict.preds().transpose() * weights.theta();
}

}  // namespace hyperagg
