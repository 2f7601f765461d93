#include "combilab/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "combilab/anticoncentration.hpp"
#include "combilab/clcd.hpp"
#include "combilab/combi_core.hpp"
#include "combilab/experiments.hpp"
#include "combilab/spectral.hpp"
#include "combilab/sphere_geometry.hpp"

namespace combilab {
namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<double> random_vector(int n, RngSubstream& rng) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.normal();
  return v;
}

CheckOutcome check_rows_regular(std::uint64_t seed, int count) {
  int bad = 0;
  for (int t = 0; t < count; ++t) {
    auto rng = substream(seed, static_cast<std::uint64_t>(t));
    const int n = 2 + static_cast<int>(rng.below(30));
    const int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    const auto q = sample_row_regular(n, n, d, rng);
    for (const auto& r : q.rows()) bad += static_cast<int>(r.support().size()) != d;
  }
  return {"row_sums_equal_d", bad == 0, std::to_string(bad) + " bad rows"};
}

CheckOutcome check_substream_replay(std::uint64_t seed) {
  auto a = substream(seed, 17);
  auto b = substream(seed, 17);
  bool same = true;
  for (int i = 0; i < 1000; ++i) same &= a() == b();
  return {"substream_replay", same, same ? "identical" : "streams diverged"};
}

CheckOutcome check_census_two(int threads) {
  ExperimentConfig cfg;
  cfg.n = 2;
  cfg.threads = threads;
  const auto c = run_singularity_census(2, RunMode::exhaustive, cfg);
  const auto [num, den] = c.reduced_fraction();
  return {"census_n2_is_one_half", num == 1 && den == 2,
          std::to_string(num) + "/" + std::to_string(den)};
}

CheckOutcome check_moment_formula(std::uint64_t seed, int count) {
  double worst = 0.0;
  for (int t = 0; t < count; ++t) {
    auto rng = substream(seed, 1000 + static_cast<std::uint64_t>(t));
    const int n = 4 + 2 * static_cast<int>(rng.below(4));
    const auto v = random_vector(n, rng);
    const double exact = exact_law_W(v, n / 2).raw_moment(2);
    worst = std::max(worst, std::abs(exact - expected_square_W(v, n / 2)) / std::max(1.0, exact));
  }
  return {"second_moment_formula", worst <= 1e-10, "max relative error " + fmt(worst)};
}

CheckOutcome check_roos(std::uint64_t seed, int count) {
  int violations = 0;
  double worst = -1.0;
  for (int t = 0; t < count; ++t) {
    auto rng = substream(seed, 2000 + static_cast<std::uint64_t>(t));
    const int n = 2 + static_cast<int>(rng.below(5));
    const auto a = random_vector(n, rng);
    const auto v = random_vector(n, rng);
    const double theta = rng.uniform01() * 2.0;
    const double lhs = exact_chf(exact_law_W_perm(a, v), theta);
    const double rhs = roos_bound(a, v, theta);
    worst = std::max(worst, lhs - rhs);
    violations += lhs > rhs + 1e-12;
  }
  return {"roos_dominates_chf", violations == 0, "max chf - bound " + fmt(worst)};
}

CheckOutcome check_esseen(std::uint64_t seed, int count) {
  BoundParams params;
  params.set("C_E", kCalibratedEsseenConstant);
  int violations = 0;
  for (int t = 0; t < count; ++t) {
    auto rng = substream(seed, 3000 + static_cast<std::uint64_t>(t));
    const int k = 2 + static_cast<int>(rng.below(8));
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      atoms.push_back({rng.normal() * 3.0, rng.uniform01() + 0.05});
      total += atoms.back().probability;
    }
    for (auto& a : atoms) a.probability /= total;
    const AtomicDistribution law(atoms);
    for (int e = 1; e <= 10; ++e) {
      const double eps = 0.1 * e;
      const double bound =
          esseen_bound(law, eps, params);
      violations += levy_exact(law, eps) > bound;
    }
  }
  return {"esseen_dominates_levy", violations == 0, std::to_string(violations) + " violations"};
}

CheckOutcome check_clcd_examples() {
  const std::vector<double> v{1.0, 0.0};
  ClcdQuery q;
  q.slope = 0.5;
  q.cap = 10.0;
  const double wide = clcd_search(difference_vector(v).entries(), q).value;
  q.cap = 0.2;
  const double narrow = clcd_search(difference_vector(v).entries(), q).value;
  const bool ok = std::abs(wide - 2.0 / 3.0) <= 1e-6 && std::abs(narrow - 0.8) <= 1e-6;
  return {"clcd_ground_truth", ok, "values " + fmt(wide) + ", " + fmt(narrow)};
}

CheckOutcome check_rounding(std::uint64_t seed, int count) {
  int violations = 0;
  for (int t = 0; t < count; ++t) {
    auto rng = substream(seed, 4000 + static_cast<std::uint64_t>(t));
    const int n = 2 + static_cast<int>(rng.below(40));
    const auto v = random_unit_vector(n, rng);
    const double beta = 0.01 + rng.uniform01();
    auto dir = random_unit_vector(n, rng);
    const double r = beta * rng.uniform01();
    std::vector<double> x(v);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] += r * dir[static_cast<std::size_t>(i)];
    const auto w = round_to_net(v, x, beta);
    double dist2 = 0.0, sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double diff = v[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(i)];
      dist2 += diff * diff;
      sum += diff;
    }
    violations += std::sqrt(dist2) > 2.0 * beta * (1 + 1e-12) ||
                  std::abs(sum) > beta / std::sqrt(static_cast<double>(n)) * (1 + 1e-12);
  }
  return {"rounding_guarantees", violations == 0, std::to_string(violations) + " violations"};
}

CheckOutcome check_pawlowski() {
  const std::vector<double> a{1, 2, 3}, v{0, 0, 1};
  const double l = levy_exact(exact_law_W_perm(a, v), 0.0);
  return {"pawlowski_sharp_n3", std::abs(l - pawlowski_bound(3)) <= 1e-15,
          "L = " + fmt(l) + " bound " + fmt(pawlowski_bound(3))};
}

CheckOutcome check_partition_monotone(std::uint64_t seed, int count) {
  int violations = 0;
  for (int t = 0; t < count; ++t) {
    auto rng = substream(seed, 5000 + static_cast<std::uint64_t>(t));
    const int n = 4 + static_cast<int>(rng.below(40));
    auto v = random_unit_vector(n, rng);
    // Pull most coordinates together so both answers occur.
    const double c = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
      if (rng.uniform01() < 0.8) v[static_cast<std::size_t>(i)] = c + 0.05 * c * rng.normal();
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    for (auto& x : v) x /= std::sqrt(norm);
    const PartitionParams p{0.1 + 0.3 * rng.uniform01(), 0.1 + 0.3 * rng.uniform01()};
    const PartitionParams bigger{std::min(0.99, p.delta * 1.5), std::min(0.99, p.rho * 1.5)};
    if (is_almost_constant(v, p).almost_constant && !is_almost_constant(v, bigger).almost_constant) {
      ++violations;
    }
  }
  return {"almost_constant_monotone", violations == 0, std::to_string(violations) + " violations"};
}

CheckOutcome check_distance_identity(std::uint64_t seed, int threads, std::uint64_t trials) {
  ExperimentConfig cfg;
  cfg.experiment = "distance";
  cfg.n = 12;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.threads = threads;
  const auto res = run_distance_experiment(cfg);
  const double err = res.metric("max_identity_error").value_or(1.0);
  return {"distance_identity", res.all_checks_passed(), "max identity error " + fmt(err)};
}

CheckOutcome check_tail_monotone(std::uint64_t seed, int threads, std::uint64_t trials) {
  ExperimentConfig cfg;
  cfg.n = 10;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.threads = threads;
  const auto res = run_tail_experiment(cfg);
  bool monotone = true;
  for (std::size_t i = 1; i < res.summary.size(); ++i) {
    monotone &= res.summary[i].estimate >= res.summary[i - 1].estimate;
  }
  return {"tail_nondecreasing", monotone && res.all_checks_passed(),
          monotone ? "nondecreasing, singularity counters agree" : "summary decreased"};
}

}  // namespace

std::vector<CheckOutcome> run_property_suite(const PropertySuiteOptions& options) {
  const int scale = options.quick ? 1 : 5;
  const auto seed = options.seed;
  std::vector<CheckOutcome> out;
  out.push_back(check_substream_replay(seed));
  out.push_back(check_rows_regular(seed, 40 * scale));
  out.push_back(check_census_two(options.threads));
  out.push_back(check_moment_formula(seed, 20 * scale));
  out.push_back(check_roos(seed, 40 * scale));
  out.push_back(check_esseen(seed, 20 * scale));
  out.push_back(check_clcd_examples());
  out.push_back(check_rounding(seed, 200 * scale));
  out.push_back(check_pawlowski());
  out.push_back(check_partition_monotone(seed, 100 * scale));
  out.push_back(check_distance_identity(seed, options.threads, 200 * static_cast<std::uint64_t>(scale)));
  out.push_back(check_tail_monotone(seed, options.threads, 200 * static_cast<std::uint64_t>(scale)));
  return out;
}

}  // namespace combilab
