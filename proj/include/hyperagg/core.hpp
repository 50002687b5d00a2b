#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hyperagg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// One predictor per row, so each predictor's values are contiguous.
using PredMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IndexSet = std::vector<std::size_t>;

/// Raised for malformed or non-finite inputs. When the failure concerns a
/// single matrix entry, `row()`/`col()` locate it.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
  ValidationError(const std::string& what, std::size_t row, std::size_t col);

  std::optional<std::size_t> row() const { return row_; }
  std::optional<std::size_t> col() const { return col_; }

 private:
  std::optional<std::size_t> row_;
  std::optional<std::size_t> col_;
};

/// Responses and, for linear predictors, the design matrix.
class Sample {
 public:
  Sample(Vector y, std::optional<Matrix> x = std::nullopt);

  const Vector& y() const { return y_; }
  const std::optional<Matrix>& x() const { return x_; }
  std::size_t size() const { return static_cast<std::size_t>(y_.size()); }

 private:
  Vector y_;
  std::optional<Matrix> x_;
};

enum class SplitMode { sequential, random };

/// A partition of a sample into a training part (idx1, used for
/// preselection) and a validation part (idx2, used for aggregation).
class SplitSample {
 public:
  /// Validates that idx1/idx2 are nonempty, disjoint and cover 0..n-1.
  SplitSample(std::shared_ptr<const Sample> parent, IndexSet idx1, IndexSet idx2);

  const Sample& parent() const { return *parent_; }
  std::shared_ptr<const Sample> parent_ptr() const { return parent_; }
  const IndexSet& idx1() const { return idx1_; }
  const IndexSet& idx2() const { return idx2_; }

 private:
  std::shared_ptr<const Sample> parent_;
  IndexSet idx1_;
  IndexSet idx2_;
};

/// Sequential mode puts the first ceil(ratio * n) observations in idx1.
/// Random mode draws a uniformly random subset of the same size.
SplitSample split_sample(std::shared_ptr<const Sample> sample, std::uint64_t seed,
                         double ratio = 0.5, SplitMode mode = SplitMode::sequential);

/// A finite set of predictors represented by their values on a sample.
/// Immutable once built.
class Dictionary {
 public:
  Dictionary(PredMatrix preds, std::vector<std::string> labels,
             std::optional<Matrix> coefs = std::nullopt,
             std::optional<Vector> intercepts = std::nullopt);

  const PredMatrix& preds() const { return preds_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<Matrix>& coefs() const { return coefs_; }
  const std::optional<Vector>& intercepts() const { return intercepts_; }

  std::size_t size() const { return static_cast<std::size_t>(preds_.rows()); }
  std::size_t sample_size() const { return static_cast<std::size_t>(preds_.cols()); }

  std::span<const double> row(std::size_t j) const {
    return {preds_.data() + j * sample_size(), sample_size()};
  }

 private:
  PredMatrix preds_;
  std::vector<std::string> labels_;
  std::optional<Matrix> coefs_;
  std::optional<Vector> intercepts_;
};

/// Labels default to f_1..f_M when `labels` is empty.
Dictionary dictionary_from_predictions(PredMatrix preds, std::vector<std::string> labels = {});

/// preds(j, i) = intercepts(j) + sum_k coefs(j, k) * x(i, k).
Dictionary dictionary_from_coefficients(const Matrix& coefs, const Matrix& x,
                                        std::optional<Vector> intercepts = std::nullopt);

/// Aggregation weights on the probability simplex.
class SimplexWeights {
 public:
  /// Requires nonnegative entries summing to 1 within 1e-12.
  explicit SimplexWeights(Vector theta);

  /// Rescales a nonnegative vector with positive sum onto the simplex.
  static SimplexWeights normalized(Vector theta);
  static SimplexWeights point_mass(std::size_t m, std::size_t j);
  /// `lambda` on j, `1 - lambda` on k.
  static SimplexWeights pair(std::size_t m, std::size_t j, std::size_t k, double lambda);

  const Vector& theta() const { return theta_; }
  const IndexSet& support() const { return support_; }
  std::size_t size() const { return static_cast<std::size_t>(theta_.size()); }

 private:
  Vector theta_;
  IndexSet support_;
};

struct Regime {
  enum class Kind { bounded, subgaussian };

  Kind kind = Kind::bounded;
  double b = 1.0;
  double sigma_eps = 0.0;

  static Regime bounded(double b);
  static Regime subgaussian(double sigma_eps, double b);
  void validate() const;
};

}  // namespace hyperagg
