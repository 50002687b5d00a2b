#include "hyperagg/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hyperagg {

namespace {

std::string at(std::size_t row, std::size_t col) {
  return " at (" + std::to_string(row) + ", " + std::to_string(col) + ")";
}

template <class Mat>
void require_finite(const Mat& m, const std::string& name) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j)))
        throw ValidationError(name + ": non-finite entry" +
                                  at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)),
                              static_cast<std::size_t>(i), static_cast<std::size_t>(j));
}

}  // namespace

ValidationError::ValidationError(const std::string& what, std::size_t row, std::size_t col)
    : std::invalid_argument(what), row_(row), col_(col) {}

Sample::Sample(Vector y, std::optional<Matrix> x) : y_(std::move(y)), x_(std::move(x)) {
  if (y_.size() < 2) throw ValidationError("sample needs at least 2 observations");
  require_finite(y_, "y");
  if (x_) {
    if (x_->rows() != y_.size())
      throw ValidationError("design matrix has " + std::to_string(x_->rows()) +
                            " rows but y has " + std::to_string(y_.size()));
    require_finite(*x_, "x");
  }
}

SplitSample::SplitSample(std::shared_ptr<const Sample> parent, IndexSet idx1, IndexSet idx2)
    : parent_(std::move(parent)), idx1_(std::move(idx1)), idx2_(std::move(idx2)) {
  if (!parent_) throw std::invalid_argument("split needs a parent sample");
  if (idx1_.empty() || idx2_.empty()) throw std::invalid_argument("split parts must be nonempty");
  const std::size_t n = parent_->size();
  std::vector<int> seen(n, 0);
  for (const auto* part : {&idx1_, &idx2_})
    for (std::size_t i : *part) {
      if (i >= n) throw std::invalid_argument("split index " + std::to_string(i) + " out of range");
      if (seen[i]++) throw std::invalid_argument("split index " + std::to_string(i) + " repeated");
    }
  if (idx1_.size() + idx2_.size() != n)
    throw std::invalid_argument("split does not cover the sample");
}

SplitSample split_sample(std::shared_ptr<const Sample> sample, std::uint64_t seed, double ratio,
                         SplitMode mode) {
  if (!sample) throw std::invalid_argument("split_sample: null sample");
  const std::size_t n = sample->size();
  if (n < 4) throw std::invalid_argument("split_sample: need at least 4 observations");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("split_sample: ratio must be in (0, 1)");
  const auto n1 = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n)));
  if (n1 == 0 || n1 >= n) throw std::invalid_argument("split_sample: ratio leaves a part empty");

  IndexSet order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (mode == SplitMode::random) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  IndexSet idx1(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n1));
  IndexSet idx2(order.begin() + static_cast<std::ptrdiff_t>(n1), order.end());
  std::sort(idx1.begin(), idx1.end());
  std::sort(idx2.begin(), idx2.end());
  return SplitSample(std::move(sample), std::move(idx1), std::move(idx2));
}

Dictionary::Dictionary(PredMatrix preds, std::vector<std::string> labels,
                       std::optional<Matrix> coefs, std::optional<Vector> intercepts)
    : preds_(std::move(preds)),
      labels_(std::move(labels)),
      coefs_(std::move(coefs)),
      intercepts_(std::move(intercepts)) {
  if (preds_.rows() < 2) throw std::invalid_argument("dictionary needs at least 2 predictors");
  if (preds_.cols() < 1) throw std::invalid_argument("dictionary predictors have no values");
  require_finite(preds_, "predictions");
  if (labels_.empty()) {
    for (Eigen::Index j = 0; j < preds_.rows(); ++j) labels_.push_back("f_" + std::to_string(j + 1));
  } else if (labels_.size() != size()) {
    throw std::invalid_argument("dictionary has " + std::to_string(size()) + " predictors but " +
                                std::to_string(labels_.size()) + " labels");
  }
  if (coefs_) {
    if (coefs_->rows() != preds_.rows())
      throw std::invalid_argument("coefficient matrix row count differs from predictor count");
    require_finite(*coefs_, "coefficients");
  }
  if (intercepts_) {
    if (!coefs_) throw std::invalid_argument("intercepts given without coefficients");
    if (intercepts_->size() != preds_.rows())
      throw std::invalid_argument("intercept count differs from predictor count");
    require_finite(*intercepts_, "intercepts");
  }
}

Dictionary dictionary_from_predictions(PredMatrix preds, std::vector<std::string> labels) {
  return Dictionary(std::move(preds), std::move(labels));
}

Dictionary dictionary_from_coefficients(const Matrix& coefs, const Matrix& x,
                                        std::optional<Vector> intercepts) {
  if (coefs.cols() != x.cols())
    throw std::invalid_argument("coefficients have " + std::to_string(coefs.cols()) +
                                " columns but design has " + std::to_string(x.cols()));
  require_finite(x, "x");
  PredMatrix preds = coefs * x.transpose();
  if (intercepts) {
    if (intercepts->size() != coefs.rows())
      throw std::invalid_argument("intercept count differs from predictor count");
    preds.colwise() += *intercepts;
  }
  return Dictionary(std::move(preds), {}, coefs, std::move(intercepts));
}

SimplexWeights::SimplexWeights(Vector theta) : theta_(std::move(theta)) {
  if (theta_.size() == 0) throw std::invalid_argument("empty weight vector");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < theta_.size(); ++j) {
    const double t = theta_(j);
    if (!std::isfinite(t) || t < 0.0)
      throw std::invalid_argument("weight " + std::to_string(j) + " is negative or non-finite");
    sum += t;
    if (t > 0.0) support_.push_back(static_cast<std::size_t>(j));
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("weights sum to " + std::to_string(sum) + ", not 1");
}

SimplexWeights SimplexWeights::normalized(Vector theta) {
  if (theta.size() == 0) throw std::invalid_argument("empty weight vector");
  if ((theta.array() < 0.0).any() || !theta.allFinite())
    throw std::invalid_argument("weights must be finite and nonnegative");
  const double sum = theta.sum();
  if (!(sum > 0.0)) throw std::invalid_argument("weights have zero sum");
  theta /= sum;
  return SimplexWeights(std::move(theta));
}

SimplexWeights SimplexWeights::point_mass(std::size_t m, std::size_t j) {
  if (j >= m) throw std::invalid_argument("point mass index out of range");
  Vector theta = Vector::Zero(static_cast<Eigen::Index>(m));
  theta(static_cast<Eigen::Index>(j)) = 1.0;
  return SimplexWeights(std::move(theta));
}

SimplexWeights SimplexWeights::pair(std::size_t m, std::size_t j, std::size_t k, double lambda) {
  if (j >= m || k >= m) throw std::invalid_argument("pair index out of range");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda outside [0, 1]");
  if (j == k || lambda == 1.0) return point_mass(m, j);
  if (lambda == 0.0) return point_mass(m, k);
  Vector theta = Vector::Zero(static_cast<Eigen::Index>(m));
  theta(static_cast<Eigen::Index>(j)) = lambda;
  theta(static_cast<Eigen::Index>(k)) = 1.0 - lambda;
  return SimplexWeights(std::move(theta));
}

Regime Regime::bounded(double b) {
  Regime r{Kind::bounded, b, 0.0};
  r.validate();
  return r;
}

Regime Regime::subgaussian(double sigma_eps, double b) {
  Regime r{Kind::subgaussian, b, sigma_eps};
  r.validate();
  return r;
}

void Regime::validate() const {
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("regime constant b must be positive");
  if (kind == Kind::subgaussian && (!(sigma_eps > 0.0) || !std::isfinite(sigma_eps)))
    throw std::invalid_argument("subgaussian regime needs sigma_eps > 0");
}

}  // namespace hyperagg
