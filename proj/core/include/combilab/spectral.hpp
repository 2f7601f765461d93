#pragma once

// Smallest singular value, exact singularity, restricted operator norm and
// row-to-span distance for dense matrices at desk scale.

#include <optional>

#include <Eigen/Dense>

#include "combilab/combi_core.hpp"

namespace combilab {

struct SpectralOptions {
  double relative_tolerance = 1e-10;
  int max_iterations = 10'000;
  /// Floating-point rank threshold is this factor times ||A||_HS.
  double singularity_factor = 1e-8;
  /// Above this column count the smallest singular value switches from a
  /// full SVD to inverse iteration.
  int full_svd_limit = 256;

  void validate() const;
};

/// Row-major real matrix with finite entries and m, n >= 1.
class DenseMatrix {
 public:
  explicit DenseMatrix(Eigen::MatrixXd values);
  DenseMatrix(int m, int n, std::initializer_list<double> row_major);

  int rows() const noexcept { return static_cast<int>(values_.rows()); }
  int cols() const noexcept { return static_cast<int>(values_.cols()); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(int i, int j) const { return values_(i, j); }

  double frobenius_norm() const { return values_.norm(); }
  DenseMatrix transpose() const { return DenseMatrix(values_.transpose()); }

 private:
  Eigen::MatrixXd values_;
};

DenseMatrix to_dense(const RowRegularMatrix& a);

/// singularity_factor * ||A||_HS.
double singularity_threshold(const DenseMatrix& a, const SpectralOptions& opts = {});

/// s_n(A) = min over unit v of ||Av||; 0 when m < n. Throws
/// ConvergenceError from the inverse-iteration path.
double smallest_singular_value(const DenseMatrix& a, const SpectralOptions& opts = {});

/// Largest singular value.
double operator_norm(const DenseMatrix& a);

/// Exact rank decision over the integers; no floating point involved.
bool is_singular_exact(const RowRegularMatrix& a);

/// sup of ||Av|| over unit v with sum(v) = 0.
double restricted_operator_norm(const DenseMatrix& a, const SpectralOptions& opts = {});

struct RowSpanDistance {
  double distance = 0.0;
  /// Unit normal to the span of the first n-1 rows; absent when that span
  /// has dimension below n-1.
  std::optional<Eigen::VectorXd> normal;
};

/// Distance from the last row to the span of the others. Distances below
/// the singularity threshold are reported as exactly 0.
RowSpanDistance row_span_distance(const DenseMatrix& a, const SpectralOptions& opts = {});

}  // namespace combilab
