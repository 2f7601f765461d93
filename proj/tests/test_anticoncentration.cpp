#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "combilab/anticoncentration.hpp"
#include "combilab/errors.hpp"
#include "oracles.hpp"

using namespace combilab;

namespace {

oracle::Law as_law(const AtomicDistribution& d) {
  oracle::Law out;
  for (const auto& a : d.atoms()) out.emplace_back(a.value, a.probability);
  return out;
}

void expect_same_law(const AtomicDistribution& d, const oracle::Law& law, double tol = 1e-12) {
  ASSERT_EQ(d.size(), law.size());
  for (std::size_t i = 0; i < law.size(); ++i) {
    EXPECT_NEAR(d.atoms()[i].value, law[i].first, tol);
    EXPECT_NEAR(d.atoms()[i].probability, law[i].second, tol);
  }
}

std::vector<double> normals(int n, RngSubstream& rng) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.normal();
  return v;
}

}  // namespace

TEST(AtomicDistribution, MergesAndValidates) {
  const AtomicDistribution d({{1.0, 0.25}, {0.0, 0.5}, {1.0 + 5e-13, 0.25}});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.atoms()[0].value, 0.0);
  EXPECT_DOUBLE_EQ(d.atoms()[1].probability, 0.5);
  EXPECT_THROW(AtomicDistribution({{0.0, 0.5}}), DomainError);
  EXPECT_THROW(AtomicDistribution({{0.0, -0.5}, {1.0, 1.5}}), DomainError);
  EXPECT_DOUBLE_EQ(AtomicDistribution::point_mass(3.0).mean(), 3.0);
}

TEST(ExactLawW, Examples) {
  expect_same_law(exact_law_W(std::vector<double>{1, 0}, 1), {{0, 0.5}, {1, 0.5}});
  expect_same_law(exact_law_W(std::vector<double>{1, 1, 0, 0}, 2), {{0, 1.0 / 6}, {1, 4.0 / 6}, {2, 1.0 / 6}});
  expect_same_law(exact_law_W(std::vector<double>{0, 0, 0}, 2), {{0, 1.0}});
  EXPECT_THROW(exact_law_W(std::vector<double>(30, 1.0), 15, 1000), ResourceError);
}

TEST(ExactLawW, MatchesBitmaskOracle) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    auto rng = substream(3, t);
    const int n = 2 + static_cast<int>(rng.below(11));
    const int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = static_cast<double>(rng.below(4));  // collisions on purpose
    expect_same_law(exact_law_W(v, d), oracle::law_by_bitmask(v, d));
  }
}

TEST(ExactLawW, MomentsMatchFormula) {
  for (int n = 2; n <= 12; n += 2) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      auto rng = substream(500 + static_cast<std::uint64_t>(n), t);
      const auto v = normals(n, rng);
      const auto law = exact_law_W(v, n / 2);
      double sum = 0.0;
      for (double x : v) sum += x;
      EXPECT_NEAR(law.mean(), sum / 2, 1e-10);
      EXPECT_NEAR(law.raw_moment(2), expected_square_W(v, n / 2), 1e-10);
    }
  }
}

TEST(ExpectedSquareW, Examples) {
  EXPECT_NEAR(expected_square_W(std::vector<double>{1, 0, 0, 0}, 2), 0.5, 1e-15);
  const double h = 1 / std::sqrt(2.0);
  EXPECT_NEAR(expected_square_W(std::vector<double>{h, -h, 0, 0}, 2), 1.0 / 3, 1e-15);
  EXPECT_EQ(expected_square_W(std::vector<double>{0, 0, 0, 0}, 2), 0.0);
  EXPECT_THROW(expected_square_W(std::vector<double>{1, 0, 0, 0}, 1), DomainError);
  EXPECT_THROW(expected_square_W(std::vector<double>{1, 0, 0}, 1), DomainError);
  // Brute force over the 6 supports.
  const oracle::Law law = oracle::law_by_bitmask({h, -h, 0, 0}, 2);
  double m2 = 0.0;
  for (const auto& [x, p] : law) m2 += p * x * x;
  EXPECT_NEAR(m2, 1.0 / 3, 1e-15);
}

TEST(ExactLawWPerm, Examples) {
  expect_same_law(exact_law_W_perm(std::vector<double>{1, 0}, std::vector<double>{1, 0}), {{0, 0.5}, {1, 0.5}});
  expect_same_law(exact_law_W_perm(std::vector<double>{2, 2, 2}, std::vector<double>{1, 5, -1}), {{10, 1.0}});
  expect_same_law(exact_law_W_perm(std::vector<double>{1, 2, 3}, std::vector<double>{0, 0, 1}),
                  {{1, 1.0 / 3}, {2, 1.0 / 3}, {3, 1.0 / 3}});
  EXPECT_THROW(exact_law_W_perm(std::vector<double>(11, 1.0), std::vector<double>(11, 1.0)), ResourceError);
}

TEST(ExactLawWPerm, MatchesPermutationOracle) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    auto rng = substream(8, t);
    const int n = 2 + static_cast<int>(rng.below(6));
    std::vector<double> a(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
    for (auto& x : a) x = static_cast<double>(rng.below(5));
    for (auto& x : v) x = static_cast<double>(rng.below(3));
    expect_same_law(exact_law_W_perm(a, v), oracle::law_by_permutations(a, v));
  }
}

TEST(LevyExact, Examples) {
  const auto point = AtomicDistribution::point_mass(2.0);
  EXPECT_EQ(levy_exact(point, 0.0), 1.0);
  EXPECT_EQ(levy_exact(point, 5.0), 1.0);
  const AtomicDistribution coin({{0, 0.5}, {1, 0.5}});
  EXPECT_DOUBLE_EQ(levy_exact(coin, 0.4), 0.5);
  EXPECT_DOUBLE_EQ(levy_exact(coin, 1.1), 1.0);
  // Strict inequality: atoms exactly 2 eps apart are not both covered.
  EXPECT_DOUBLE_EQ(levy_exact(coin, 0.5), 0.5);
}

TEST(LevyExact, MatchesQuadraticOracle) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    auto rng = substream(9, t);
    const auto law = random_atomic_law(rng);
    for (double eps : {0.0, 0.05, 0.3, 0.7, 1.5}) {
      EXPECT_NEAR(levy_exact(law, eps), oracle::levy_quadratic(as_law(law), eps), 1e-12);
    }
  }
}

TEST(LevyEmpirical, Examples) {
  EXPECT_EQ(levy_empirical(SampleSet({2, 2, 2}), 0.1), 1.0);
  EXPECT_DOUBLE_EQ(levy_empirical(SampleSet({0, 1, 0, 1}), 0.4), 0.5);
  EXPECT_THROW(levy_empirical(SampleSet({0, 1}), 0.0), DomainError);
  EXPECT_THROW(SampleSet({}), DomainError);
}

TEST(LevyEmpirical, CloseToExactOnSixteen) {
  auto vr = substream(10, 1u << 20);
  const auto v = normals(16, vr);
  std::vector<double> samples(100'000);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto rng = substream(10, i);
    samples[i] = sample_fixed_weight(16, 8, rng).dot(v);
  }
  const SampleSet set(samples);
  const auto law = exact_law_W(v, 8);
  for (double eps : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    EXPECT_NEAR(levy_empirical(set, eps), levy_exact(law, eps), 0.02) << eps;
  }
}

TEST(ExactChf, Examples) {
  const AtomicDistribution coin({{0, 0.5}, {1, 0.5}});
  EXPECT_DOUBLE_EQ(exact_chf(coin, 0.0), 1.0);
  EXPECT_NEAR(exact_chf(coin, 0.5), 0.0, 1e-15);
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto rng = substream(12, t);
    const auto law = random_atomic_law(rng);
    const double theta = 4 * rng.normal();
    EXPECT_LE(exact_chf(law, theta), 1.0 + 1e-15);
    EXPECT_NEAR(exact_chf(law, theta), oracle::chf_complex(as_law(law), theta), 1e-12);
  }
}

TEST(RoosBound, Examples) {
  const std::vector<double> a{1, 0}, v{1, 0};
  // cos(pi / 2) is 6e-17 in doubles and the exponent is 1/4.
  EXPECT_NEAR(roos_bound(a, v, 0.5), 0.0, 1e-8);
  EXPECT_NEAR(roos_bound(a, v, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(roos_bound(a, v, 0.25), std::pow(0.5, 0.25), 1e-15);
  EXPECT_NEAR(exact_chf(exact_law_W_perm(a, v), 0.25), std::cos(std::numbers::pi / 4), 1e-15);
  EXPECT_THROW(roos_bound(std::vector<double>{1}, std::vector<double>{1}, 0.1), DomainError);
}

TEST(RoosBound, MatchesNaiveSumAndDominatesChf) {
  for (std::uint64_t t = 0; t < 200; ++t) {
    auto rng = substream(13, t);
    const int n = 2 + static_cast<int>(rng.below(6));
    const auto a = normals(n, rng);
    const auto v = normals(n, rng);
    const double theta = 2 * rng.normal();
    const double bound = roos_bound(a, v, theta);
    EXPECT_NEAR(bound, oracle::roos_naive(a, v, theta), 1e-12);
    const double chf = oracle::chf_complex(oracle::law_by_permutations(a, v), theta);
    EXPECT_LE(chf, bound + 1e-12) << t;
  }
}

TEST(EsseenBound, Examples) {
  BoundParams unit;
  unit.set("C_E", 1.0);
  EXPECT_NEAR(esseen_bound([](double) { return 1.0; }, 0.3, unit), 2.0, 1e-10);
  const AtomicDistribution coin({{0, 0.5}, {1, 0.5}});
  EXPECT_NEAR(esseen_bound(coin, 1.0, unit), 4 / std::numbers::pi, 1e-8);
  BoundParams twice;
  twice.set("C_E", 2.0);
  EXPECT_NEAR(esseen_bound(coin, 0.7, twice), 2 * esseen_bound(coin, 0.7, unit), 1e-12);
  EXPECT_THROW(esseen_bound(coin, 0.0, unit), DomainError);
  EXPECT_DOUBLE_EQ(BoundParams().get("C_E"), 2.0);
}

TEST(EsseenBound, CalibratedConstantDominatesOnFreshLaws) {
  BoundParams params;
  params.set("C_E", kCalibratedEsseenConstant);
  EXPECT_LE(kCalibratedEsseenConstant, 4.0);
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto rng = substream(777, t);
    const auto law = random_atomic_law(rng);
    for (int e = 1; e <= 10; ++e) {
      EXPECT_LE(levy_exact(law, 0.1 * e), esseen_bound(law, 0.1 * e, params));
    }
  }
}

TEST(EsseenBound, CalibrationIsReproducible) {
  std::vector<AtomicDistribution> laws;
  for (int i = 0; i < 200; ++i) {
    auto rng = substream(1, static_cast<std::uint64_t>(i));
    laws.push_back(random_atomic_law(rng));
  }
  std::vector<double> grid;
  for (int e = 1; e <= 10; ++e) grid.push_back(0.1 * e);
  const double c = calibrate_esseen_constant(laws, grid);
  EXPECT_NEAR(c, 1.6308779881846, 1e-9);
  EXPECT_EQ(std::ceil(c * 4) / 4, kCalibratedEsseenConstant);
}

TEST(SmallballBound, Examples) {
  EXPECT_EQ(smallball_terms(1.0, 0.0, std::numeric_limits<double>::infinity(), -1e9), 0.0);
  EXPECT_NEAR(smallball_terms(1.0, 0.1, 10.0, -2.0 * 2 * 2 / 8), 0.1 + 0.1 + std::exp(-1.0), 1e-15);
  EXPECT_NEAR(0.1 + 0.1 + std::exp(-1.0), 0.5679, 1e-4);
}

TEST(SmallballBound, PlainUsesClcdAndIsMonotone) {
  const std::vector<double> v{1, 0};
  BoundParams params;
  const auto at = [&](double eps) {
    return smallball_bound(PlainSmallBall{v, 10.0, 0.5}, eps, params);
  };
  const auto b = at(0.1);
  ClcdQuery q;
  q.cap = 10.0;
  q.slope = 0.5;
  const auto direct = clcd_search(difference_vector(v).entries(), q);
  ASSERT_TRUE(b.clcd.is_finite());
  EXPECT_EQ(b.clcd.value, direct.value);
  EXPECT_NEAR(b.value, 0.1 + 1 / direct.value + std::exp(-2.0 * 100 / 2), 1e-12);
  EXPECT_NEAR(b.b_max, difference_vector(v).norm() / std::sqrt(2.0), 1e-15);
  double prev = 0.0;
  for (double eps = 0.0; eps <= 1.0; eps += 0.1) {
    const double value = at(eps).value;
    EXPECT_GE(value, prev);
    prev = value;
  }
  params.set("b", 0.9);
  EXPECT_FALSE(smallball_bound(PlainSmallBall{v, 10.0, 0.5}, 0.1, params).hypothesis_holds);
}

TEST(SmallballBound, ConstantVectorDropsStructureTerm) {
  const std::vector<double> v{1, 1, 1, 1};
  const auto b = smallball_bound(PlainSmallBall{v, 4.0, 0.5}, 0.2, BoundParams());
  EXPECT_FALSE(b.clcd.is_finite());
  EXPECT_EQ(b.structure_term, 0.0);
  EXPECT_NEAR(b.value, 0.2 + std::exp(-8.0), 1e-15);
}

TEST(SmallballBound, HorizonFlagsUpperBound) {
  const std::vector<double> v{1.0, std::sqrt(2.0), std::sqrt(3.0)};
  ClcdQuery search;
  search.horizon = 5.0;
  const auto b = smallball_bound(PlainSmallBall{v, 1e-3, 1e-4}, 0.1, BoundParams(), search);
  EXPECT_TRUE(b.upper_bound_on_bound);
  EXPECT_FALSE(b.clcd.is_finite());
  EXPECT_GE(b.clcd.lower_bound(), 5.0 - 1e-9);
  EXPECT_NEAR(b.structure_term, 1.0 / b.clcd.lower_bound(), 1e-15);
}

TEST(SmallballBound, TensorShape) {
  const std::vector<double> a{1, 0}, v{1, 0};
  const auto b = smallball_bound(TensorSmallBall{a, v, 10.0, 0.5}, 0.1, BoundParams());
  ASSERT_TRUE(b.clcd.is_finite());
  EXPECT_NEAR(b.exponential_term, std::exp(-8.0 * 100 / 8), 1e-15);
}

TEST(PsiNorm, Examples) {
  EXPECT_NEAR(psi_norm_estimate(SampleSet({1, 1, 1}), 2.0, 8.0), 1.0, 1e-15);
  EXPECT_EQ(psi_norm_estimate(SampleSet({0, 0}), 2.0, 8.0), 0.0);
  const SampleSet s({0.3, -1.2, 2.0, 0.5});
  const SampleSet scaled({-0.9, 3.6, -6.0, -1.5});
  EXPECT_NEAR(psi_norm_estimate(scaled, 1.0, 10.0), 3.0 * psi_norm_estimate(s, 1.0, 10.0), 1e-12);
}

TEST(PsiNorm, SubGaussianSquaresSandwich) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto rng = substream(14, t);
    std::vector<double> x(20'000), sq(20'000);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.normal();
      sq[i] = x[i] * x[i];
    }
    const double psi2 = psi_norm_estimate(SampleSet(x), 2.0, 8.0);
    const double psi1_sq = psi_norm_estimate(SampleSet(sq), 1.0, 4.0);
    EXPECT_LE(psi2 * psi2, psi1_sq * 1.1);
    EXPECT_LE(psi1_sq, 2 * psi2 * psi2 * 1.1);
  }
}

TEST(EvaluateBound, Examples) {
  BoundParams comb;
  comb.set("t", 4.0).set_increments(std::vector<double>(8, 1.0));
  EXPECT_NEAR(evaluate_bound(BoundKind::combinatorial_concentration, comb), 2 * std::exp(-0.25), 1e-15);

  BoundParams pz;
  pz.set("m2", 1).set("m4", 1).set("lambda", 0);
  EXPECT_DOUBLE_EQ(evaluate_bound(BoundKind::paley_zygmund, pz), 1.0);
  pz.set("lambda", 0.5);
  EXPECT_DOUBLE_EQ(evaluate_bound(BoundKind::paley_zygmund, pz), 0.5625);

  BoundParams tens;
  tens.set("B", 3).set("eps", 0).set("m", 4);
  EXPECT_EQ(evaluate_bound(BoundKind::tensorization, tens), 0.0);

  BoundParams missing;
  try {
    evaluate_bound(BoundKind::bernstein, missing);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("'t'"), std::string::npos) << e.what();
  }
  BoundParams rn;
  rn.set("t", 0.5).set("n", 16).set("c3", 0.25);
  EXPECT_NEAR(evaluate_bound(BoundKind::restricted_norm_tail, rn), 2 * std::exp(-0.25 * 0.25 * 16), 1e-15);
  BoundParams mc;
  mc.set("t", 2).set("r", 1).set("n", 16);
  EXPECT_NEAR(evaluate_bound(BoundKind::matrix_concentration, mc), 2 * std::exp(-(1.0 / 16) * std::min(4.0 / 64, 1.0)), 1e-15);
  BoundParams bern;
  bern.set("t", 3).set("K", 2).set("n", 10);
  EXPECT_NEAR(evaluate_bound(BoundKind::bernstein, bern), 2 * std::exp(-(1.0 / 16) * std::min(9.0 / 40, 1.5)), 1e-15);
  BoundParams row;
  row.set("n", 3000);
  EXPECT_NEAR(evaluate_bound(BoundKind::row_anticoncentration, row), std::exp(-1.0), 1e-15);
}

TEST(EvaluateBound, CombinatorialConcentrationHolds) {
  auto vr = substream(15, 1u << 20);
  const int n = 20;
  const auto v = normals(n, vr);
  double vmax = 0.0, mean = 0.0;
  for (double x : v) {
    vmax = std::max(vmax, std::abs(x));
    mean += x / 2;
  }
  // Swapping one coordinate of the support changes f by at most 2 max|v_i|.
  std::vector<double> increments(n / 2, 2 * vmax);
  std::vector<double> f(100'000);
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto rng = substream(15, i);
    f[i] = sample_fixed_weight(n, n / 2, rng).dot(v);
  }
  for (double t = 0.5; t <= 8.0; t += 0.5) {
    double freq = 0.0;
    for (double x : f) freq += std::abs(x - mean) >= t;
    freq /= static_cast<double>(f.size());
    BoundParams p;
    p.set("t", t).set_increments(increments);
    EXPECT_LE(freq, evaluate_bound(BoundKind::combinatorial_concentration, p)) << t;
  }
}

TEST(Hypercontractive, HoldsForLinearBernoulliFunctionals) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto rng = substream(16, t);
    const int n = 2 + static_cast<int>(rng.below(15));
    const auto c = normals(n, rng);
    std::vector<double> p(static_cast<std::size_t>(n));
    double b = 1.0;
    for (auto& x : p) {
      x = 1.0 / 3 + rng.uniform01() / 3;
      b = std::min(b, std::min(x, 1 - x));
    }
    const auto [m2, m4] = oracle::bernoulli_moments(c, p, 4.0);
    BoundParams params;
    params.set("q", 4).set("b", b).set("d", 1).set("m2", m2);
    EXPECT_LE(std::pow(m4, 0.25), evaluate_bound(BoundKind::hypercontractive, params) * (1 + 1e-12)) << t;
  }
}

TEST(Pawlowski, NeverExceededOnSmallIntegerCorpus) {
  // a distinct (sorted: rho is invariant under permuting a), v non-constant.
  for (int n = 2; n <= 6; ++n) {
    const double bound = pawlowski_bound(n);
    for (unsigned mask = 0; mask < 64; ++mask) {
      if (std::popcount(mask) != n) continue;
      std::vector<double> a;
      for (int k = 0; k < 6; ++k)
        if (mask >> k & 1u) a.push_back(k);
      int total = 1;
      for (int i = 0; i < n; ++i) total *= 4;
      for (int code = 0; code < total; ++code) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0, c = code; i < n; ++i, c /= 4) v[static_cast<std::size_t>(i)] = c % 4;
        if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) continue;
        ASSERT_LE(levy_exact(exact_law_W_perm(a, v), 0.0), bound + 1e-12) << n << " " << code;
      }
    }
  }
}

TEST(Pawlowski, ValuesAndSharpness) {
  EXPECT_DOUBLE_EQ(pawlowski_bound(3), 1.0 / 3);
  EXPECT_DOUBLE_EQ(pawlowski_bound(4), 1.0 / 3);
  EXPECT_DOUBLE_EQ(pawlowski_bound(2), 1.0);
  EXPECT_DOUBLE_EQ(levy_exact(exact_law_W_perm(std::vector<double>{1, 2, 3}, std::vector<double>{0, 0, 1}), 0.0),
                   1.0 / 3);
  EXPECT_THROW(pawlowski_bound(1), DomainError);
}
