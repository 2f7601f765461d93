#include "combilab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "combilab/anticoncentration.hpp"
#include "combilab/clcd.hpp"
#include "combilab/combi_core.hpp"
#include "combilab/errors.hpp"
#include "combilab/spectral.hpp"
#include "combilab/sphere_geometry.hpp"

namespace combilab {
namespace {

constexpr double kSlopeLow = 0.1;
constexpr double kSlopeHigh = 0.8;

SummaryRow proportion_row(const std::string& name, int n, double eps, std::uint64_t hits,
                          std::uint64_t trials) {
  const auto ci = wilson_interval(hits, trials);
  return {name, n, eps, static_cast<double>(hits) / static_cast<double>(trials), ci.low, ci.high,
          trials};
}

SummaryRow exact_row(const std::string& name, int n, double eps, double p, std::uint64_t trials) {
  return {name, n, eps, p, p, p, trials};
}

std::uint64_t saturating_power(std::uint64_t base, int exponent) {
  unsigned __int128 result = 1;
  for (int i = 0; i < exponent; ++i) {
    result *= base;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

// Every n x n matrix with rows from `rows`, indexed by a mixed-radix code.
class MatrixEnumeration {
 public:
  MatrixEnumeration(int n, int d) : n_(n), rows_(enumerate_fixed_weight(n, d)) {
    total_ = saturating_power(rows_.size(), n);
    if (total_ > kExhaustiveMatrixCap) {
      throw ResourceError("exhaustive enumeration of C(" + std::to_string(n) + "," +
                              std::to_string(d) + ")^" + std::to_string(n) + " = " +
                              (total_ == std::numeric_limits<std::uint64_t>::max()
                                   ? std::string("more than 2^64")
                                   : std::to_string(total_)) +
                              " matrices exceeds cap " + std::to_string(kExhaustiveMatrixCap),
                          total_, kExhaustiveMatrixCap);
    }
  }

  std::uint64_t total() const { return total_; }

  RowRegularMatrix matrix(std::uint64_t code) const {
    std::vector<FixedWeightVector> chosen;
    chosen.reserve(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      chosen.push_back(rows_[code % rows_.size()]);
      code /= rows_.size();
    }
    return RowRegularMatrix(std::move(chosen));
  }

 private:
  int n_;
  std::vector<FixedWeightVector> rows_;
  std::uint64_t total_ = 0;
};

// Largest number of exactly equal values.
std::uint64_t max_multiplicity(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::uint64_t best = 0;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    best = std::max<std::uint64_t>(best, j - i);
    i = j;
  }
  return best;
}

std::uint64_t levy_count(const std::vector<double>& values, double eps) {
  if (eps == 0.0) return max_multiplicity(values);
  const double fraction = levy_empirical(SampleSet(values), eps);
  return static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(values.size())));
}

std::vector<double> fixed_vector(const ExperimentConfig& cfg) {
  if (!cfg.vector.empty()) return cfg.vector;
  auto rng = substream(cfg.seed, kVectorStream);
  return random_non_almost_constant(cfg.n, {cfg.delta, cfg.rho}, rng);
}

// ||M v||^2 for an m x n row-regular M drawn row by row from rng.
double squared_image_norm(int m, int n, int d, std::span<const double> v, RngSubstream& rng) {
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = sample_fixed_weight(n, d, rng).dot(v);
    total += x * x;
  }
  return total;
}

// Critical constant c for which 2 exp(-c * rate(t)) first meets a frequency.
double critical_constant(std::span<const double> freq, std::span<const double> rate) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < freq.size(); ++i) {
    if (freq[i] > 0.0 && rate[i] > 0.0) best = std::min(best, -std::log(freq[i] / 2.0) / rate[i]);
  }
  return best;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

ExperimentResult run_tail_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const int d = cfg.resolved_d();
  ExperimentResult res;
  res.config = cfg;

  struct Outcome {
    double s = 0.0;
    bool fp_singular = false;
    bool exact_singular = false;
  };
  auto evaluate = [](const RowRegularMatrix& q) {
    const auto a = to_dense(q);
    Outcome o;
    o.s = smallest_singular_value(a);
    o.fp_singular = o.s < singularity_threshold(a);
    o.exact_singular = is_singular_exact(q);
    return o;
  };

  std::vector<Outcome> outcomes;
  const bool exhaustive = cfg.mode == RunMode::exhaustive;
  if (exhaustive) {
    const MatrixEnumeration all(n, d);
    outcomes.resize(all.total());
    parallel_for(all.total(), cfg.threads, [&](std::uint64_t i) { outcomes[i] = evaluate(all.matrix(i)); });
  } else {
    outcomes.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t i) {
      auto rng = substream(cfg.seed, i);
      outcomes[i] = evaluate(sample_row_regular(n, n, d, rng));
    });
  }
  const auto total = static_cast<std::uint64_t>(outcomes.size());

  std::uint64_t fp = 0, exact = 0, disagree = 0;
  res.records.reserve(outcomes.size());
  for (std::uint64_t i = 0; i < total; ++i) {
    const auto& o = outcomes[i];
    fp += o.fp_singular;
    exact += o.exact_singular;
    disagree += o.fp_singular != o.exact_singular;
    std::string flag;
    if (o.exact_singular && o.fp_singular) flag = "singular";
    else if (o.exact_singular) flag = "singular_exact_only";
    else if (o.fp_singular) flag = "singular_fp_only";
    res.records.push_back({i, "s_n", o.s, std::move(flag)});
  }

  const double root_n = std::sqrt(static_cast<double>(n));
  std::vector<double> xs, ys;
  for (double eps : cfg.eps_grid) {
    std::uint64_t hits = 0;
    for (const auto& o : outcomes) hits += (o.fp_singular || o.s <= eps / root_n);
    const double p = static_cast<double>(hits) / static_cast<double>(total);
    res.summary.push_back(exhaustive ? exact_row("tail", n, eps, p, total)
                                     : proportion_row("tail", n, eps, hits, total));
    if (eps >= kSlopeLow - 1e-12 && eps <= kSlopeHigh + 1e-12) {
      xs.push_back(eps);
      ys.push_back(p);
    }
  }
  res.metrics.emplace_back("trials", static_cast<double>(total));
  res.metrics.emplace_back("singular_fp", static_cast<double>(fp));
  res.metrics.emplace_back("singular_exact", static_cast<double>(exact));
  res.metrics.emplace_back("rank_disagreements", static_cast<double>(disagree));
  if (xs.size() >= 2) res.metrics.emplace_back("slope", least_squares_slope(xs, ys));
  res.checks.push_back({"fp_and_exact_singularity_agree", disagree == 0,
                        std::to_string(disagree) + " disagreements"});
  return res;
}

std::pair<std::uint64_t, std::uint64_t> CensusResult::reduced_fraction() const {
  const auto g = std::gcd(singular, total);
  if (g == 0) return {0, 1};
  return {singular / g, total / g};
}

namespace {

std::vector<std::uint8_t> census_flags(int n, int d, RunMode mode, const ExperimentConfig& cfg) {
  std::vector<std::uint8_t> flags;
  if (mode == RunMode::exhaustive) {
    const MatrixEnumeration all(n, d);
    flags.resize(all.total());
    parallel_for(all.total(), cfg.threads,
                 [&](std::uint64_t i) { flags[i] = is_singular_exact(all.matrix(i)); });
  } else {
    flags.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t i) {
      auto rng = substream(cfg.seed, i);
      flags[i] = is_singular_exact(sample_row_regular(n, n, d, rng));
    });
  }
  return flags;
}

CensusResult summarize_census(int n, int d, RunMode mode, const std::vector<std::uint8_t>& flags) {
  CensusResult out;
  out.n = n;
  out.d = d;
  out.mode = mode;
  out.total = flags.size();
  out.singular = static_cast<std::uint64_t>(std::count(flags.begin(), flags.end(), 1));
  out.estimate = static_cast<double>(out.singular) / static_cast<double>(out.total);
  if (mode == RunMode::exhaustive) {
    out.ci_low = out.ci_high = out.estimate;
  } else {
    const auto ci = wilson_interval(out.singular, out.total);
    out.ci_low = ci.low;
    out.ci_high = ci.high;
  }
  out.trivial_lower_bound = 1.0 / static_cast<double>(binomial(n, d));
  return out;
}

}  // namespace

CensusResult run_singularity_census(int n, RunMode mode, const ExperimentConfig& cfg) {
  const int d = cfg.d.value_or(n / 2);
  if (n < 1 || d < 0 || d > n) throw DomainError("census needs 0 <= d <= n");
  return summarize_census(n, d, mode, census_flags(n, d, mode, cfg));
}

ExperimentResult run_singularity_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const int d = cfg.resolved_d();
  const auto flags = census_flags(n, d, cfg.mode, cfg);
  const auto census = summarize_census(n, d, cfg.mode, flags);
  ExperimentResult res;
  res.config = cfg;
  for (std::uint64_t i = 0; i < flags.size(); ++i) {
    res.records.push_back({i, "singular", static_cast<double>(flags[i]), flags[i] ? "singular" : ""});
  }
  res.summary.push_back({"singularity", n, 0.0, census.estimate, census.ci_low, census.ci_high,
                         census.total});
  const auto [num, den] = census.reduced_fraction();
  res.metrics.emplace_back("singular", static_cast<double>(census.singular));
  res.metrics.emplace_back("total", static_cast<double>(census.total));
  res.metrics.emplace_back("p_numerator", static_cast<double>(num));
  res.metrics.emplace_back("p_denominator", static_cast<double>(den));
  res.metrics.emplace_back("trivial_lower_bound", census.trivial_lower_bound);
  if (cfg.mode == RunMode::montecarlo) {
    const double sigma = std::sqrt(census.trivial_lower_bound * (1.0 - census.trivial_lower_bound) /
                                   static_cast<double>(census.total));
    res.checks.push_back({"at_least_trivial_lower_bound",
                          census.estimate >= census.trivial_lower_bound - 3.0 * sigma,
                          "estimate " + fmt(census.estimate) + " vs 1/C(n,d) = " +
                              fmt(census.trivial_lower_bound)});
  }
  return res;
}

ExperimentResult run_distance_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const int d = cfg.resolved_d();
  ExperimentResult res;
  res.config = cfg;

  struct Outcome {
    double dist = 0.0;
    bool degenerate = false;
    double inner = 0.0;
    double s = 0.0;
    bool exact_singular = false;
  };
  std::vector<Outcome> outcomes(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t i) {
    auto rng = substream(cfg.seed, i);
    const auto q = sample_row_regular(n, n, d, rng);
    const auto a = to_dense(q);
    const auto rsd = row_span_distance(a);
    Outcome o;
    o.dist = rsd.distance;
    o.degenerate = !rsd.normal.has_value();
    if (rsd.normal) o.inner = std::abs(a.values().row(n - 1).dot(*rsd.normal));
    o.s = smallest_singular_value(a);
    o.exact_singular = is_singular_exact(q);
    outcomes[i] = o;
  });

  std::uint64_t degenerate = 0, singular = 0, zero = 0, zero_mismatch = 0;
  double identity_error = 0.0;
  std::vector<double> distances;
  distances.reserve(outcomes.size());
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    const auto& o = outcomes[i];
    degenerate += o.degenerate;
    singular += o.exact_singular;
    zero += o.dist == 0.0;
    zero_mismatch += (o.dist == 0.0 || o.degenerate) != o.exact_singular;
    distances.push_back(o.dist);
    std::string flag = o.degenerate ? "degenerate" : (o.exact_singular ? "singular" : "");
    res.records.push_back({i, "dist", o.dist, flag});
    if (!o.degenerate) {
      identity_error = std::max(identity_error, std::abs(o.inner - o.dist));
      res.records.push_back({i, "abs_inner", o.inner, ""});
    }
    res.records.push_back({i, "s_n", o.s, o.exact_singular ? "singular" : ""});
  }

  const double root_n = std::sqrt(static_cast<double>(n));
  const double zero_level = static_cast<double>(levy_count(distances, 0.0)) /
                            static_cast<double>(cfg.trials);
  double fitted_c = 0.0;
  for (double eps : cfg.eps_grid) {
    const auto levy = levy_count(distances, eps);
    res.summary.push_back(proportion_row("distance.levy", n, eps, levy, cfg.trials));
    if (eps > 0.0) {
      const double l = static_cast<double>(levy) / static_cast<double>(cfg.trials);
      fitted_c = std::max(fitted_c, (l - zero_level) / eps);
    }
    std::uint64_t tail = 0, lhs = 0;
    for (const auto& o : outcomes) {
      tail += o.dist <= eps;
      lhs += o.s <= eps * cfg.rho / root_n;
    }
    res.summary.push_back(proportion_row("distance.tail", n, eps, tail, cfg.trials));
    res.summary.push_back(proportion_row("distance.invertibility_lhs", n, eps, lhs, cfg.trials));
    auto rhs = proportion_row("distance.invertibility_rhs", n, eps, tail, cfg.trials);
    rhs.estimate /= cfg.delta;
    rhs.ci_low /= cfg.delta;
    rhs.ci_high /= cfg.delta;
    res.summary.push_back(rhs);
  }

  res.metrics.emplace_back("trials", static_cast<double>(cfg.trials));
  res.metrics.emplace_back("degenerate", static_cast<double>(degenerate));
  res.metrics.emplace_back("singular_exact", static_cast<double>(singular));
  res.metrics.emplace_back("zero_distance", static_cast<double>(zero));
  res.metrics.emplace_back("max_identity_error", identity_error);
  res.metrics.emplace_back("fitted_C", fitted_c);
  res.metrics.emplace_back("fitted_const", zero_level);
  res.checks.push_back({"normal_projection_identity", identity_error <= 1e-9,
                        "max | |<R_n, v>| - dist | = " + fmt(identity_error)});
  res.checks.push_back({"singular_iff_zero_distance_or_degenerate", zero_mismatch == 0,
                        std::to_string(zero_mismatch) + " mismatches"});
  return res;
}

ExperimentResult run_smallball_validation(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const int d = cfg.resolved_d();
  ExperimentResult res;
  res.config = cfg;
  const auto v = fixed_vector(cfg);

  std::vector<double> samples(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t i) {
    auto rng = substream(cfg.seed, i);
    samples[i] = sample_fixed_weight(n, d, rng).dot(v);
  });

  BoundParams params;
  params.set("C", 1.0);
  ClcdQuery query;
  query.horizon = cfg.horizon;
  const double alpha = cfg.resolved_alpha();
  const auto shape = smallball_bound(PlainSmallBall{v, alpha, cfg.gamma}, 0.0, params, query);
  const double base = shape.structure_term + shape.exponential_term;

  std::optional<AtomicDistribution> exact;
  if (n <= 24 && binomial(n, d) <= kDefaultEnumerationCap) exact = exact_law_W(v, d);

  double required = 0.0;
  double exact_gap = 0.0;
  std::vector<double> levels;
  for (double eps : cfg.eps_grid) {
    const auto hits = levy_count(samples, eps);
    auto row = proportion_row("smallball.levy_empirical", n, eps, hits, cfg.trials);
    res.summary.push_back(row);
    levels.push_back(row.estimate);
    if (exact) {
      const double l = levy_exact(*exact, eps);
      exact_gap = std::max(exact_gap, std::abs(l - row.estimate));
      res.summary.push_back(exact_row("smallball.levy_exact", n, eps, l, binomial(n, d)));
    }
    const double denom = eps + base;
    if (denom > 0.0) {
      required = std::max(required, row.estimate / denom);
      res.summary.push_back({"smallball.required_C", n, eps, row.estimate / denom,
                             row.ci_low / denom, row.ci_high / denom, cfg.trials});
    }
  }
  for (std::size_t k = 0; k < cfg.eps_grid.size(); ++k) {
    const double eps = cfg.eps_grid[k];
    const double bound = required * (eps + base);
    res.summary.push_back({"smallball.bound", n, eps, bound, bound, bound, cfg.trials});
  }
  for (std::uint64_t i = 0; i < cfg.trials; ++i) res.records.push_back({i, "W_v", samples[i], ""});

  res.metrics.emplace_back("clcd", shape.clcd.lower_bound());
  res.metrics.emplace_back("clcd_finite", shape.clcd.is_finite() ? 1.0 : 0.0);
  res.metrics.emplace_back("upper_bound_on_bound", shape.upper_bound_on_bound ? 1.0 : 0.0);
  res.metrics.emplace_back("b_max", shape.b_max);
  res.metrics.emplace_back("alpha", alpha);
  res.metrics.emplace_back("gamma", cfg.gamma);
  res.metrics.emplace_back("required_C", required);
  if (exact) res.metrics.emplace_back("levy_exact_max_abs_diff", exact_gap);
  res.arrays.emplace_back("vector", v);
  res.checks.push_back({"required_C_finite", std::isfinite(required) && required > 0.0,
                        "C = " + fmt(required)});
  if (exact) {
    res.checks.push_back({"empirical_matches_exact", exact_gap <= 0.02,
                          "max |L_emp - L_exact| = " + fmt(exact_gap)});
  }
  return res;
}

ExperimentResult run_inequality_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const int m = cfg.resolved_m();
  const int d = cfg.resolved_d();
  if (n % 2 != 0 || 2 * d != n) throw DomainError("inequality suite needs even n and d = n/2");
  ExperimentResult res;
  res.config = cfg;
  const auto trials = cfg.trials;

  // (a) concentration of ||Mv||^2 around m E[W_v^2].
  {
    auto vr = substream(cfg.seed, kVectorStream);
    const auto v = random_unit_vector(n, vr);
    double r = 0.0;
    for (double x : v) r += x;
    r = std::abs(r);
    const double expected = m * expected_square_W(v, d);
    std::vector<double> x(trials);
    parallel_for(trials, cfg.threads, [&](std::uint64_t i) {
      auto rng = substream(cfg.seed, i);
      x[i] = squared_image_norm(m, n, d, v, rng);
    });
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(trials);
    double var = 0.0;
    for (double xi : x) var += (xi - mean) * (xi - mean);
    const double sd = std::sqrt(var / static_cast<double>(std::max<std::uint64_t>(trials - 1, 1)));
    const double se = sd / std::sqrt(static_cast<double>(trials));
    res.checks.push_back({"matrix_concentration_mean", std::abs(mean - expected) <= 3.0 * se,
                          "mean " + fmt(mean) + " vs m E[X^2] = " + fmt(expected) + " (3 se = " +
                              fmt(3.0 * se) + ")"});
    res.metrics.emplace_back("a_mean", mean);
    res.metrics.emplace_back("a_expected", expected);

    std::vector<double> freq, rate;
    const double s = r * r + 1.0;
    for (int k = 1; k <= 8; ++k) {
      const double t = 0.5 * k * sd;
      std::uint64_t hits = 0;
      for (double xi : x) hits += std::abs(xi - expected) >= t;
      res.summary.push_back(proportion_row("inequality.matrix_concentration", n, t, hits, trials));
      freq.push_back(static_cast<double>(hits) / static_cast<double>(trials));
      rate.push_back(std::min(t * t / (s * s * n), t / s));
    }
    const double c1 = critical_constant(freq, rate);
    res.metrics.emplace_back("fitted_c1", c1);
    res.checks.push_back({"matrix_concentration_tail", c1 > 0.0, "largest passing c1 = " + fmt(c1)});

    // Constant direction: every row contributes (d / sqrt(n))^2.
    std::vector<double> flat(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    const double target = m * static_cast<double>(d) * d / n;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < std::min<std::uint64_t>(trials, 1000); ++i) {
      auto rng = substream(cfg.seed, i);
      worst = std::max(worst, std::abs(squared_image_norm(m, n, d, flat, rng) - target));
    }
    res.checks.push_back({"constant_direction_deterministic", worst <= 1e-9 * target,
                          "max deviation from m d^2 / n: " + fmt(worst)});
  }

  // (b) restricted operator norm tail.
  {
    const std::uint64_t t_b = std::min<std::uint64_t>(trials, 5000);
    std::vector<double> norms(t_b);
    parallel_for(t_b, cfg.threads, [&](std::uint64_t i) {
      auto rng = substream(cfg.seed ^ 0xb0b0ULL, i);
      norms[i] = restricted_operator_norm(to_dense(sample_row_regular(m, n, d, rng))) /
                 std::sqrt(static_cast<double>(n));
    });
    std::vector<double> freq, rate;
    for (int k = 0; k <= 10; ++k) {
      const double t = 0.6 + 0.1 * k;
      std::uint64_t hits = 0;
      for (double x : norms) hits += x >= t;
      res.summary.push_back(proportion_row("inequality.restricted_norm", n, t, hits, t_b));
      freq.push_back(static_cast<double>(hits) / static_cast<double>(t_b));
      rate.push_back(t * t * n);
    }
    const double c3 = critical_constant(freq, rate);
    res.metrics.emplace_back("fitted_c3", c3);
    res.metrics.emplace_back("restricted_norm_max_over_sqrt_n",
                             *std::max_element(norms.begin(), norms.end()));
    res.checks.push_back({"restricted_norm_tail", c3 > 0.0, "largest passing c3 = " + fmt(c3)});
  }

  // (c) P{||Mv|| <= sqrt(n)/5} for an alternating unit v, and
  // (d) P{||x^T Q_n|| <= sqrt(n)/90} for a random unit x.
  {
    std::vector<double> small_image;
    for (int nc : {16, 32, 64}) {
      const int dc = nc / 2;
      std::vector<double> alt(static_cast<std::size_t>(nc));
      for (int i = 0; i < nc; ++i) alt[static_cast<std::size_t>(i)] = (i % 2 == 0 ? 1.0 : -1.0) / std::sqrt(nc);
      auto xr = substream(cfg.seed, kVectorStream + static_cast<std::uint64_t>(nc));
      const auto x = random_unit_vector(nc, xr);
      std::vector<std::uint8_t> hit_c(trials), hit_d(trials);
      parallel_for(trials, cfg.threads, [&](std::uint64_t i) {
        auto rng = substream(cfg.seed + static_cast<std::uint64_t>(nc), i);
        std::vector<double> xq(static_cast<std::size_t>(nc), 0.0);
        double image = 0.0;
        for (int row = 0; row < nc; ++row) {
          const auto r = sample_fixed_weight(nc, dc, rng);
          const double y = r.dot(alt);
          image += y * y;
          for (int j : r.support()) xq[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(row)];
        }
        double xq_norm2 = 0.0;
        for (double e : xq) xq_norm2 += e * e;
        hit_c[i] = image <= nc / 25.0;
        hit_d[i] = xq_norm2 <= nc / 8100.0;
      });
      const auto count_c = static_cast<std::uint64_t>(std::count(hit_c.begin(), hit_c.end(), 1));
      const auto count_d = static_cast<std::uint64_t>(std::count(hit_d.begin(), hit_d.end(), 1));
      res.summary.push_back(proportion_row("inequality.single_vector", nc, 0.2, count_c, trials));
      res.summary.push_back(proportion_row("inequality.row_anticoncentration", nc, 1.0 / 90.0, count_d, trials));
      small_image.push_back(static_cast<double>(count_c) / static_cast<double>(trials));
      BoundParams bp;
      bp.set("n", nc);
      const double bound = evaluate_bound(BoundKind::row_anticoncentration, bp);
      const double freq_d = static_cast<double>(count_d) / static_cast<double>(trials);
      res.checks.push_back({"row_anticoncentration_n" + std::to_string(nc), freq_d <= bound,
                            "frequency " + fmt(freq_d) + " vs exp(-n/3000) = " + fmt(bound)});
    }
    const bool monotone = small_image[0] >= small_image[1] && small_image[1] >= small_image[2];
    res.checks.push_back({"single_vector_decreasing_in_n", monotone,
                          "frequencies " + fmt(small_image[0]) + ", " + fmt(small_image[1]) + ", " +
                              fmt(small_image[2])});
    res.checks.push_back({"single_vector_zero_at_n64", small_image[2] == 0.0,
                          "frequency at n=64: " + fmt(small_image[2])});
  }
  return res;
}

ExperimentResult run_sample(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  const int m = cfg.resolved_m();
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    auto rng = substream(cfg.seed, i);
    const auto q = sample_row_regular(m, cfg.n, cfg.resolved_d(), rng);
    for (int r = 0; r < q.m(); ++r) {
      std::string bits;
      for (auto b : q.row(r).bits()) bits.push_back(b ? '1' : '0');
      res.records.push_back({i, "row", static_cast<double>(r), bits});
    }
  }
  return res;
}

ExperimentResult run_svmin(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  const int m = cfg.resolved_m();
  std::vector<double> s(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t i) {
    auto rng = substream(cfg.seed, i);
    s[i] = smallest_singular_value(to_dense(sample_row_regular(m, cfg.n, cfg.resolved_d(), rng)));
  });
  for (std::uint64_t i = 0; i < cfg.trials; ++i) res.records.push_back({i, "s_n", s[i], ""});
  res.metrics.emplace_back("min", *std::min_element(s.begin(), s.end()));
  res.metrics.emplace_back("mean", std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size()));
  return res;
}

ExperimentResult run_clcd(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  const auto v = fixed_vector(cfg);
  ClcdQuery q;
  q.cap = cfg.resolved_alpha();
  q.slope = cfg.gamma;
  q.horizon = cfg.horizon;
  const auto dv = difference_vector(v);
  const auto r = clcd_search(dv.entries(), q);
  res.metrics.emplace_back("finite", r.is_finite() ? 1.0 : 0.0);
  res.metrics.emplace_back("value", r.value);
  res.metrics.emplace_back("searched_to", r.searched_to);
  res.metrics.emplace_back("certified_gap", r.certified_gap);
  res.metrics.emplace_back("evaluations", static_cast<double>(r.evaluations));
  res.metrics.emplace_back("norm_D", dv.norm());
  res.metrics.emplace_back("almost_constant_lower_bound",
                           std::sqrt(cfg.delta * cfg.n) / 7.0);
  res.arrays.emplace_back("vector", v);
  res.arrays.emplace_back("witness", std::vector<double>(r.witness.begin(), r.witness.end()));
  return res;
}

}  // namespace combilab
