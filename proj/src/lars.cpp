#include "hyperagg/lars.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyperagg {

namespace {

constexpr double kPivotTol = 1e-12;

// Cholesky factor of the active Gram matrix, grown one column at a time.
class ActiveCholesky {
 public:
  explicit ActiveCholesky(const Matrix& xw) : xw_(xw) {}

  // False when the new column is numerically in the span of the active ones.
  bool add(Eigen::Index j, const IndexSet& active) {
    const auto k = static_cast<Eigen::Index>(active.size());
    const double diag = xw_.col(j).squaredNorm();
    Vector v(k);
    for (Eigen::Index a = 0; a < k; ++a)
      v(a) = xw_.col(static_cast<Eigen::Index>(active[static_cast<std::size_t>(a)])).dot(xw_.col(j));
    Vector w = k ? Vector(l_.triangularView<Eigen::Lower>().solve(v)) : Vector(0);
    const double pivot = diag - w.squaredNorm();
    if (!(pivot > kPivotTol * std::max(diag, 1.0))) return false;
    Matrix grown = Matrix::Zero(k + 1, k + 1);
    grown.topLeftCorner(k, k) = l_;
    grown.block(k, 0, 1, k) = w.transpose();
    grown(k, k) = std::sqrt(pivot);
    l_ = std::move(grown);
    return true;
  }

  bool rebuild(const IndexSet& active) {
    l_.resize(0, 0);
    IndexSet prefix;
    for (std::size_t j : active) {
      if (!add(static_cast<Eigen::Index>(j), prefix)) return false;
      prefix.push_back(j);
    }
    return true;
  }

  Vector solve(const Vector& rhs) const {
    Vector t = l_.triangularView<Eigen::Lower>().solve(rhs);
    return l_.transpose().triangularView<Eigen::Upper>().solve(t);
  }

 private:
  const Matrix& xw_;
  Matrix l_;
};

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

LassoPath lars_path(const Matrix& x, const Vector& y, const LarsOptions& opts) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (n != y.size()) throw std::invalid_argument("lars_path: x has " + std::to_string(n) +
                                                 " rows but y has " + std::to_string(y.size()));
  if (n < 2) throw std::invalid_argument("lars_path: need at least 2 observations");
  if (p < 1) throw std::invalid_argument("lars_path: design has no columns");
  if (!x.allFinite() || !y.allFinite()) throw ValidationError("lars_path: non-finite input");

  LassoPath path;
  path.standardized = opts.standardize;
  Matrix xw = x;
  Vector yw = y;
  path.x_center = Vector::Zero(p);
  path.x_scale = Vector::Ones(p);
  if (opts.standardize) {
    path.x_center = x.colwise().mean().transpose();
    xw.rowwise() -= path.x_center.transpose();
    for (Eigen::Index j = 0; j < p; ++j) {
      const double sd = std::sqrt(xw.col(j).squaredNorm() / static_cast<double>(n));
      if (!(sd > 1e-12 * std::max(1.0, std::abs(path.x_center(j)))))
        throw ValidationError("lars_path: column " + std::to_string(j) + " has zero variance", 0,
                              static_cast<std::size_t>(j));
      path.x_scale(j) = sd;
      xw.col(j) /= sd;
    }
    path.y_center = y.mean();
    yw.array() -= path.y_center;
  }

  const std::size_t max_steps =
      opts.max_steps ? opts.max_steps : 8 * static_cast<std::size_t>(std::min(n, p));

  Vector b = Vector::Zero(p);
  IndexSet active;
  std::vector<double> sign(static_cast<std::size_t>(p), 0.0);
  std::vector<char> is_active(static_cast<std::size_t>(p), 0);

  auto record = [&](double lambda) {
    LassoKnot k;
    k.penalty_level = lambda;
    k.coefs = b.cwiseQuotient(path.x_scale);
    k.intercept = path.y_center - path.x_center.dot(k.coefs);
    k.active_set = active;
    std::sort(k.active_set.begin(), k.active_set.end());
    k.rss = (yw - xw * b).squaredNorm();
    path.knots.push_back(std::move(k));
  };

  Vector corr = xw.transpose() * yw;
  Eigen::Index first = 0;
  double lambda = corr.cwiseAbs().maxCoeff(&first);
  const double scale = std::max(lambda, std::numeric_limits<double>::min());
  const double tiny = 1e-12 * scale;
  record(lambda);
  if (lambda <= 1e-12 * std::max(1.0, yw.norm() * xw.norm())) return path;

  ActiveCholesky chol(xw);
  auto enter = [&](Eigen::Index j) {
    if (!chol.add(j, active)) return false;
    active.push_back(static_cast<std::size_t>(j));
    is_active[static_cast<std::size_t>(j)] = 1;
    sign[static_cast<std::size_t>(j)] = sign_of(corr(j));
    return true;
  };
  enter(first);

  Eigen::Index just_dropped = -1;
  for (std::size_t step = 0;; ++step) {
    if (step == max_steps) {
      path.truncated = true;
      path.truncation_reason = "max_steps reached";
      break;
    }
    const auto k = static_cast<Eigen::Index>(active.size());
    Vector s(k);
    for (Eigen::Index a = 0; a < k; ++a) s(a) = sign[active[static_cast<std::size_t>(a)]];
    // Moving b_A along d lowers every active |correlation| at unit rate.
    const Vector d = chol.solve(s);
    Vector u = Vector::Zero(n);
    for (Eigen::Index a = 0; a < k; ++a)
      u += d(a) * xw.col(static_cast<Eigen::Index>(active[static_cast<std::size_t>(a)]));
    const Vector rate = xw.transpose() * u;

    double gamma = lambda;
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (is_active[static_cast<std::size_t>(j)] || j == just_dropped) continue;
      for (double g : {(lambda - corr(j)) / (1.0 - rate(j)), (lambda + corr(j)) / (1.0 + rate(j))}) {
        if (std::isfinite(g) && g > tiny && g < gamma) {
          gamma = g;
          entering = j;
        }
      }
    }
    // Candidates tying only at lambda = 0 are already spanned by the active set.
    if (entering >= 0 && gamma >= lambda * (1.0 - 1e-9)) {
      gamma = lambda;
      entering = -1;
    }
    Eigen::Index leaving = -1;
    for (Eigen::Index a = 0; a < k; ++a) {
      const auto j = static_cast<Eigen::Index>(active[static_cast<std::size_t>(a)]);
      if (d(a) == 0.0) continue;
      const double g = -b(j) / d(a);
      if (g > tiny && g < gamma) {
        gamma = g;
        leaving = a;
        entering = -1;
      }
    }

    for (Eigen::Index a = 0; a < k; ++a)
      b(static_cast<Eigen::Index>(active[static_cast<std::size_t>(a)])) += gamma * d(a);
    lambda = leaving < 0 && entering < 0 ? 0.0 : lambda - gamma;
    corr = xw.transpose() * (yw - xw * b);
    just_dropped = -1;

    if (leaving >= 0) {
      const std::size_t j = active[static_cast<std::size_t>(leaving)];
      b(static_cast<Eigen::Index>(j)) = 0.0;
      active.erase(active.begin() + leaving);
      is_active[j] = 0;
      sign[j] = 0.0;
      just_dropped = static_cast<Eigen::Index>(j);
      if (!chol.rebuild(active)) {
        record(lambda);
        path.truncated = true;
        path.truncation_reason = "active Gram matrix became singular";
        break;
      }
    }
    record(lambda);
    if (lambda <= 0.0) break;
    if (entering >= 0 && !enter(entering)) {
      path.truncated = true;
      path.truncation_reason = "active Gram matrix became singular";
      break;
    }
  }
  return path;
}

std::vector<double> mallows_cp(const LassoPath& path, std::size_t n, double sigma_sq) {
  if (!(sigma_sq > 0.0)) throw std::invalid_argument("mallows_cp: sigma_sq must be positive");
  if (path.knots.empty()) throw std::invalid_argument("mallows_cp: empty path");
  std::vector<double> cp;
  cp.reserve(path.knots.size());
  for (const auto& k : path.knots)
    cp.push_back(k.rss / sigma_sq - static_cast<double>(n) + 2.0 * static_cast<double>(k.active_set.size()));
  return cp;
}

std::size_t mallows_cp_select(const LassoPath& path, const Vector& y, double sigma_sq) {
  if (path.knots.empty()) throw std::invalid_argument("mallows_cp_select: empty path");
  const auto cp = mallows_cp(path, static_cast<std::size_t>(y.size()), sigma_sq);
  return static_cast<std::size_t>(std::min_element(cp.begin(), cp.end()) - cp.begin());
}

Dictionary path_to_dictionary(const LassoPath& path, const Matrix& x) {
  if (path.knots.empty()) throw std::invalid_argument("path_to_dictionary: empty path");
  const auto p = x.cols();
  const auto m = static_cast<Eigen::Index>(path.knots.size());
  Matrix coefs(m, p);
  Vector intercepts(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& knot = path.knots[static_cast<std::size_t>(k)];
    if (knot.coefs.size() != p) throw std::invalid_argument("path_to_dictionary: design width mismatch");
    coefs.row(k) = knot.coefs.transpose();
    intercepts(k) = knot.intercept;
  }
  return dictionary_from_coefficients(coefs, x, intercepts);
}

}  // namespace hyperagg
