#pragma once

// Exact laws of combinatorial sums, Levy concentration estimators,
// characteristic functions, and evaluators for the closed-form bounds.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "combilab/clcd.hpp"
#include "combilab/combi_core.hpp"

namespace combilab {

inline constexpr double kAtomMergeTolerance = 1e-12;

struct Atom {
  double value;
  double probability;
};

/// Finite law: strictly increasing atoms with positive probabilities that
/// sum to 1 within 1e-12.
class AtomicDistribution {
 public:
  /// Sorts, merges atoms closer than merge_tolerance (to the first atom of
  /// each run), drops zero weights and validates the total.
  explicit AtomicDistribution(std::vector<Atom> atoms,
                              double merge_tolerance = kAtomMergeTolerance);

  /// Law of equally likely values, merged at merge_tolerance.
  static AtomicDistribution from_equally_likely(std::vector<double> values,
                                                double merge_tolerance = kAtomMergeTolerance);

  static AtomicDistribution point_mass(double x);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  double mean() const;
  /// E[X^k] for integer k >= 0.
  double raw_moment(int k) const;
  /// Largest atom probability.
  double max_probability() const;

 private:
  std::vector<Atom> atoms_;
};

/// Values of a Monte Carlo statistic plus the substreams that produced them.
class SampleSet {
 public:
  explicit SampleSet(std::vector<double> values, std::uint64_t seed = 0,
                     std::uint64_t first_stream = 0, std::uint64_t stream_count = 0);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t first_stream() const noexcept { return first_stream_; }
  std::uint64_t stream_count() const noexcept { return stream_count_; }

 private:
  std::vector<double> values_;
  std::uint64_t seed_;
  std::uint64_t first_stream_;
  std::uint64_t stream_count_;
};

/// Absolute constants and symbols of the closed-form bounds, by name.
/// Defaults: C = 1, c1 = c2 = 1/16, C_E = 2.
class BoundParams {
 public:
  BoundParams();

  BoundParams& set(const std::string& name, double value);
  /// Throws DomainError naming the symbol when it was never set.
  double get(const std::string& name) const;
  bool has(const std::string& name) const { return values_.contains(name); }

  /// Per-coordinate increments d_i of the combinatorial concentration bound.
  BoundParams& set_increments(std::vector<double> d);
  std::span<const double> increments() const;

  const std::map<std::string, double>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
  std::vector<double> increments_;
  bool has_increments_ = false;
};

/// C_E fixed by the Esseen calibration run: the largest observed ratio
/// L(xi, eps) / int_{-1}^{1} |phi(theta/eps)| d theta was 1.6309 over 200
/// random_atomic_law draws (seed 1, eps = 0.1..1.0), rounded up to the next
/// multiple of 1/4. Reproduce with `combilab calibrate-esseen --seed 1`.
inline constexpr double kCalibratedEsseenConstant = 1.75;

/// Law of W_v = sum_i eta_i v_i, eta uniform over weight-d supports.
AtomicDistribution exact_law_W(std::span<const double> v, int d,
                               std::uint64_t cap = kDefaultEnumerationCap);

inline constexpr int kMaxPermutationDimension = 10;

/// Law of W_{a,v} = sum_i a_i v_{sigma(i)} over uniform permutations sigma.
AtomicDistribution exact_law_W_perm(std::span<const double> a, std::span<const double> v);

/// sup_x P{|xi - x| < eps}; eps = 0 gives the largest atom.
double levy_exact(const AtomicDistribution& dist, double eps);

/// Largest fraction of samples in a half-open window [s, s + 2 eps)
/// anchored at a sample s. Requires eps > 0.
double levy_empirical(const SampleSet& samples, double eps);

/// |E exp(2 pi i theta xi)|.
double exact_chf(const AtomicDistribution& dist, double theta);

/// Roos's bound on |phi_{W_{a,v}}(theta)|, O(n^4) with compensated summation.
double roos_bound(std::span<const double> a, std::span<const double> v, double theta);

/// C_E * int_{-1}^{1} |chf(theta / eps)| d theta by panelled adaptive
/// Gauss-Kronrod quadrature to absolute error 1e-8. spread bounds the
/// support width of the law (it sets the panel count); 0 means one panel.
double esseen_bound(const std::function<double(double)>& chf, double eps,
                    const BoundParams& params, double spread = 0.0);

/// Same, with the chf and spread taken from the law.
double esseen_bound(const AtomicDistribution& law, double eps, const BoundParams& params);

/// A random finite law for Esseen calibration and testing: 1 to 12 atoms,
/// either on a lattice of random spacing in [0.05, 2] or at Gaussian
/// positions, with random weights.
AtomicDistribution random_atomic_law(RngSubstream& rng);

/// Smallest C_E making levy_exact <= esseen_bound hold on every (law, eps)
/// pair given.
double calibrate_esseen_constant(std::span<const AtomicDistribution> laws,
                                 std::span<const double> eps_grid);

/// E[W_v^2] = (n-2) r^2 / (4(n-1)) + ||v||^2 n / (4(n-1)), r = |sum v|.
/// Only the d = n/2 regime is supported.
double expected_square_W(std::span<const double> v, int d);

struct PlainSmallBall {
  std::vector<double> v;
  double alpha;
  double gamma;
};

struct TensorSmallBall {
  std::vector<double> a;
  std::vector<double> v;
  double cap;    // L
  double slope;  // u
};

using SmallBallInputs = std::variant<PlainSmallBall, TensorSmallBall>;

struct SmallBallBound {
  double value = 0.0;
  double linear_term = 0.0;
  double structure_term = 0.0;
  double exponential_term = 0.0;
  ClcdResult clcd;
  /// CLCD was not found within the horizon, so the structure term used the
  /// horizon and value is an upper bound on the bound.
  bool upper_bound_on_bound = false;
  /// Largest b with ||D(v)|| >= b sqrt(n) (plain) or
  /// ||D(a) (x) D(v)|| >= b n^{3/2} (tensor).
  double b_max = 0.0;
  /// Whether the b in params (if any) satisfies the norm hypothesis.
  bool hypothesis_holds = true;
};

/// C eps + C / clcd + C exp(exponent): the three-term shape shared by both
/// small-ball theorems. clcd = +inf drops the middle term.
double smallball_terms(double constant, double eps, double clcd, double exponent);

/// Evaluates C eps + C / CLCD + C e^{-2 alpha^2 / n} (plain) or
/// C eps + C / CLCD^a + C e^{-8 L^2 / n^3} (tensor). search supplies the
/// horizon and tolerances; its cap and slope are taken from inputs.
SmallBallBound smallball_bound(const SmallBallInputs& inputs, double eps,
                               const BoundParams& params, ClcdQuery search = {});

/// max over a geometric grid of p in [1, p_max] of p^{-1/alpha} (mean |x|^p)^{1/p}.
double psi_norm_estimate(const SampleSet& samples, double alpha, double p_max);

enum class BoundKind {
  combinatorial_concentration,  // 2 exp(-t^2 / (8 sum d_i^2)); t, increments
  bernstein,                    // 2 exp(-c2 min(t^2/(K^2 n), t/K)); t, K, n, c2
  matrix_concentration,         // 2 exp(-c1 min(t^2/((r^2+1)^2 n), t/(r^2+1))); t, r, n, c1
  restricted_norm_tail,         // 2 exp(-c3 t^2 n); t, n, c3
  tensorization,                // (C B eps)^m; C, B, eps, m
  paley_zygmund,                // (m2 - lambda^2)^2 / m4; m2, m4, lambda
  hypercontractive,             // (sqrt(q-1) b^{1/q-1/2})^d sqrt(m2); q, b, d, m2
  row_anticoncentration,        // exp(-n / 3000); n
};

double evaluate_bound(BoundKind kind, const BoundParams& params);

/// 2 floor(n/2) / (n(n-1)), n >= 2.
double pawlowski_bound(int n);

}  // namespace combilab
