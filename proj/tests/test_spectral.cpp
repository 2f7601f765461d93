#include <gtest/gtest.h>

#include <cmath>

#include "combilab/combi_core.hpp"
#include "combilab/detail/exact_rank.hpp"
#include "combilab/errors.hpp"
#include "combilab/spectral.hpp"
#include "oracles.hpp"

using namespace combilab;

namespace {

std::vector<std::vector<long>> to_long(const RowRegularMatrix& q) {
  std::vector<std::vector<long>> rows(static_cast<std::size_t>(q.m()));
  for (int i = 0; i < q.m(); ++i)
    for (int j = 0; j < q.n(); ++j) rows[static_cast<std::size_t>(i)].push_back(q(i, j));
  return rows;
}

RowRegularMatrix from_rows(std::initializer_list<std::vector<std::uint8_t>> rows) {
  std::vector<FixedWeightVector> r;
  for (const auto& row : rows) r.emplace_back(row);
  return RowRegularMatrix(std::move(r));
}

}  // namespace

TEST(SmallestSingularValue, Examples) {
  EXPECT_NEAR(smallest_singular_value(DenseMatrix(2, 2, {1, 0, 0, 1})), 1.0, 1e-12);
  EXPECT_NEAR(smallest_singular_value(DenseMatrix(2, 2, {1, 0, 1, 0})), 0.0, 1e-12);
  EXPECT_NEAR(smallest_singular_value(DenseMatrix(2, 2, {1, 1, 1, 0})), (std::sqrt(5.0) - 1) / 2, 1e-12);
  EXPECT_EQ(smallest_singular_value(DenseMatrix(1, 2, {1, 1})), 0.0);
}

TEST(SmallestSingularValue, TransposeInvariant) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto rng = substream(21, t);
    const auto a = to_dense(sample_row_regular(12, 12, 6, rng));
    EXPECT_NEAR(smallest_singular_value(a), smallest_singular_value(a.transpose()), 1e-10);
  }
}

TEST(SmallestSingularValue, LargeMatrixPathAgreesWithSvd) {
  auto rng = substream(4, 0);
  const auto q = to_dense(sample_row_regular(300, 300, 150, rng));
  SpectralOptions full;
  full.full_svd_limit = 1000;
  const double reference = smallest_singular_value(q, full);
  const double iterative = smallest_singular_value(q);
  EXPECT_NEAR(iterative, reference, 1e-8 * std::max(1.0, reference));
}

TEST(SpectralOptions, Validates) {
  SpectralOptions o;
  o.relative_tolerance = 0;
  EXPECT_THROW(o.validate(), DomainError);
  o = {};
  o.max_iterations = 0;
  EXPECT_THROW(o.validate(), DomainError);
}

TEST(IsSingularExact, Examples) {
  EXPECT_TRUE(is_singular_exact(from_rows({{1, 0}, {1, 0}})));
  EXPECT_FALSE(is_singular_exact(from_rows({{1, 0}, {0, 1}})));
  int singular = 0;
  const auto rows = enumerate_fixed_weight(2, 1);
  for (const auto& r0 : rows)
    for (const auto& r1 : rows) singular += is_singular_exact(RowRegularMatrix({r0, r1}));
  EXPECT_EQ(singular, 2);
}

TEST(IsSingularExact, AgreesWithGmpOracle) {
  for (int n : {4, 6, 8, 10, 12, 16, 24, 40, 64}) {
    for (std::uint64_t t = 0; t < 40; ++t) {
      auto rng = substream(100 + static_cast<std::uint64_t>(n), t);
      auto q = sample_row_regular(n, n, n / 2, rng);
      if (t % 4 == 0) {
        // Force a dependency: duplicate a row.
        std::vector<FixedWeightVector> rows(q.rows().begin(), q.rows().end());
        rows.back() = rows.front();
        q = RowRegularMatrix(std::move(rows));
      }
      EXPECT_EQ(is_singular_exact(q), oracle::singular_gmp(to_long(q))) << "n=" << n << " t=" << t;
    }
  }
}

TEST(IsSingularExact, SubtleDependency) {
  // r3 = r0 + r1 - r2 without any repeated row.
  const auto q = from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}});
  EXPECT_TRUE(is_singular_exact(q));
  EXPECT_TRUE(oracle::singular_gmp(to_long(q)));
}

TEST(ExactRank, ModularPathMatchesBareiss) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    auto rng = substream(55, t);
    const int n = 3 + static_cast<int>(rng.below(8));
    detail::IntegerRows rows(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
    for (auto& r : rows)
      for (auto& x : r) x = static_cast<std::int64_t>(rng.below(3));
    if (t % 3 == 0) rows[1] = rows[0];
    // Hadamard bound for entries in {0,1,2}.
    const double log2_bound = 0.5 * n * std::log2(4.0 * n);
    EXPECT_EQ(detail::modular_singular(rows, log2_bound), detail::bareiss_singular(rows));
  }
  EXPECT_GT(detail::certificate_primes().size(), 10u);
}

TEST(IsSingularExact, FloatingPointThresholdAgrees) {
  for (int n : {8, 12, 16}) {
    int disagreements = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
      auto rng = substream(300 + static_cast<std::uint64_t>(n), t);
      const auto q = sample_row_regular(n, n, n / 2, rng);
      const auto a = to_dense(q);
      disagreements += is_singular_exact(q) != (smallest_singular_value(a) < singularity_threshold(a));
    }
    EXPECT_EQ(disagreements, 0) << "n=" << n;
  }
}

TEST(IsSingularExact, RejectsNonSquare) {
  auto rng = substream(1, 1);
  EXPECT_THROW(is_singular_exact(sample_row_regular(3, 4, 2, rng)), DomainError);
}

TEST(RestrictedOperatorNorm, Examples) {
  EXPECT_NEAR(restricted_operator_norm(DenseMatrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1})), 1.0, 1e-12);
  EXPECT_NEAR(restricted_operator_norm(DenseMatrix(2, 2, {1, 1, 1, 1})), 0.0, 1e-12);
  EXPECT_NEAR(restricted_operator_norm(DenseMatrix(2, 2, {1, 0, 0, 2})), std::sqrt(2.5), 1e-12);
}

TEST(RestrictedOperatorNorm, BelowOperatorNormAndRowSums) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    auto rng = substream(8, t);
    const int n = 10, m = 7, d = 5;
    const auto a = to_dense(sample_row_regular(m, n, d, rng));
    EXPECT_LE(restricted_operator_norm(a), operator_norm(a) + 1e-12);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    EXPECT_DOUBLE_EQ((a.values() * ones).norm(), d * std::sqrt(static_cast<double>(m)));
  }
}

TEST(RowSpanDistance, Examples) {
  const auto e = row_span_distance(DenseMatrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  EXPECT_NEAR(e.distance, 1.0, 1e-12);
  ASSERT_TRUE(e.normal.has_value());
  EXPECT_NEAR(std::abs((*e.normal)(2)), 1.0, 1e-12);

  const auto inside = row_span_distance(DenseMatrix(3, 3, {1, 0, 0, 0, 1, 0, 1, 1, 0}));
  EXPECT_EQ(inside.distance, 0.0);

  const auto two = row_span_distance(DenseMatrix(2, 2, {1, 0, 1, 1}));
  EXPECT_NEAR(two.distance, 1.0, 1e-12);
  ASSERT_TRUE(two.normal.has_value());
  EXPECT_NEAR(std::abs((*two.normal)(1)), 1.0, 1e-12);
  EXPECT_NEAR((*two.normal)(0), 0.0, 1e-12);
}

TEST(RowSpanDistance, DegenerateSpanHasNoNormalButCorrectDistance) {
  // First two rows equal: span{(1,0,0)}; last row (0,1,0) at distance 1.
  const auto r = row_span_distance(DenseMatrix(3, 3, {1, 0, 0, 1, 0, 0, 0, 1, 0}));
  EXPECT_FALSE(r.normal.has_value());
  EXPECT_NEAR(r.distance, 1.0, 1e-12);
}

TEST(RowSpanDistance, ZeroIffDependent) {
  for (std::uint64_t t = 0; t < 500; ++t) {
    auto rng = substream(17, t);
    const auto q = sample_row_regular(8, 8, 4, rng);
    const auto r = row_span_distance(to_dense(q));
    const bool singular = oracle::singular_gmp(to_long(q));
    EXPECT_EQ(singular, r.distance == 0.0 || !r.normal.has_value()) << t;
    if (r.normal) {
      EXPECT_NEAR(std::abs(to_dense(q).values().row(7).dot(*r.normal)), r.distance, 1e-9);
      EXPECT_NEAR(r.normal->norm(), 1.0, 1e-12);
    }
  }
}
