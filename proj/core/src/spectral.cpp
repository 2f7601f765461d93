#include "combilab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "combilab/detail/exact_rank.hpp"
#include "combilab/errors.hpp"

namespace combilab {

void SpectralOptions::validate() const {
  if (!(relative_tolerance > 0.0)) throw DomainError("spectral tolerance must be positive");
  if (max_iterations < 1) throw DomainError("spectral max_iterations must be at least 1");
  if (!(singularity_factor > 0.0)) throw DomainError("singularity factor must be positive");
}

DenseMatrix::DenseMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) throw DomainError("dense matrix must be non-empty");
  if (!values_.allFinite()) throw DomainError("dense matrix entries must be finite");
}

DenseMatrix::DenseMatrix(int m, int n, std::initializer_list<double> row_major)
    : DenseMatrix([&] {
        if (m < 1 || n < 1 || row_major.size() != static_cast<std::size_t>(m) * n) {
          throw DomainError("dense matrix: entry count does not match shape");
        }
        Eigen::MatrixXd values(m, n);
        auto it = row_major.begin();
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < n; ++j) values(i, j) = *it++;
        }
        return values;
      }()) {}

DenseMatrix to_dense(const RowRegularMatrix& a) {
  Eigen::MatrixXd values(a.m(), a.n());
  for (int i = 0; i < a.m(); ++i) {
    const auto bits = a.row(i).bits();
    for (int j = 0; j < a.n(); ++j) values(i, j) = bits[static_cast<std::size_t>(j)];
  }
  return DenseMatrix(std::move(values));
}

double singularity_threshold(const DenseMatrix& a, const SpectralOptions& opts) {
  return opts.singularity_factor * a.frobenius_norm();
}

namespace {

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  if (svd.info() != Eigen::Success) {
    throw ConvergenceError("SVD did not converge", 0.0, a.norm());
  }
  return svd.singularValues();
}

double inverse_iteration(const Eigen::MatrixXd& a, const SpectralOptions& opts) {
  const auto n = a.cols();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  if ((r.diagonal().array() == 0.0).any()) return 0.0;

  auto rng = substream(0x5eed'1e55'0000'0000ULL, static_cast<std::uint64_t>(n));
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.normal();
  x.normalize();

  double best = (r * x).norm();
  for (int it = 0; it < opts.max_iterations; ++it) {
    // x <- (R^T R)^{-1} x, normalized.
    Eigen::VectorXd y = r.transpose().triangularView<Eigen::Lower>().solve(x);
    Eigen::VectorXd z = r.triangularView<Eigen::Upper>().solve(y);
    const double zn = z.norm();
    if (!std::isfinite(zn)) return 0.0;
    x = z / zn;
    const double sigma = (r * x).norm();
    const double previous = best;
    best = std::min(best, sigma);
    if (std::abs(previous - sigma) <= opts.relative_tolerance * sigma) return sigma;
  }
  throw ConvergenceError("inverse iteration for s_min did not converge", 0.0, best);
}

}  // namespace

double smallest_singular_value(const DenseMatrix& a, const SpectralOptions& opts) {
  opts.validate();
  if (a.rows() < a.cols()) return 0.0;
  if (a.cols() <= opts.full_svd_limit) {
    const auto s = singular_values(a.values());
    return s(s.size() - 1);
  }
  return inverse_iteration(a.values(), opts);
}

double operator_norm(const DenseMatrix& a) { return singular_values(a.values())(0); }

bool is_singular_exact(const RowRegularMatrix& a) {
  if (a.m() != a.n()) {
    throw DomainError("is_singular_exact needs a square matrix, got " + std::to_string(a.m()) +
                      "x" + std::to_string(a.n()));
  }
  if (a.d() == 0) return true;
  detail::IntegerRows rows(static_cast<std::size_t>(a.n()));
  for (int i = 0; i < a.m(); ++i) {
    const auto bits = a.row(i).bits();
    rows[static_cast<std::size_t>(i)].assign(bits.begin(), bits.end());
  }
  // Hadamard: |det| <= prod ||row_i|| = d^(n/2).
  const double log2_bound = 0.5 * a.n() * std::log2(static_cast<double>(a.d()));
  if (log2_bound <= 62.0) return detail::bareiss_singular(rows);
  return detail::modular_singular(rows, log2_bound);
}

double restricted_operator_norm(const DenseMatrix& a, const SpectralOptions& opts) {
  opts.validate();
  const auto& m = a.values();
  const auto n = m.cols();
  // A P_H with P_H = I - 11^T / n.
  const Eigen::VectorXd row_sums = m.rowwise().sum();
  const Eigen::MatrixXd projected = m - row_sums * Eigen::RowVectorXd::Constant(n, 1.0 / n);
  return singular_values(projected)(0);
}

RowSpanDistance row_span_distance(const DenseMatrix& a, const SpectralOptions& opts) {
  opts.validate();
  const int n = a.cols();
  if (a.rows() != n) throw DomainError("row_span_distance needs a square matrix");
  const Eigen::VectorXd last = a.values().row(n - 1).transpose();
  const double threshold = singularity_threshold(a, opts);

  RowSpanDistance out;
  if (n == 1) {
    out.distance = std::abs(last(0)) < threshold ? 0.0 : std::abs(last(0));
    out.normal = Eigen::VectorXd::Ones(1);
    return out;
  }

  const Eigen::MatrixXd span_cols = a.values().topRows(n - 1).transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(span_cols);
  qr.setThreshold(opts.singularity_factor);
  const auto rank = qr.rank();
  const Eigen::VectorXd coords = qr.householderQ().adjoint() * last;
  out.distance = coords.tail(n - rank).norm();
  if (out.distance < threshold) out.distance = 0.0;
  if (rank == n - 1) {
    out.normal = qr.householderQ() * Eigen::VectorXd::Unit(n, n - 1);
  }
  return out;
}

}  // namespace combilab
