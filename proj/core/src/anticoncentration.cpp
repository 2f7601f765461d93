#include "combilab/anticoncentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "combilab/errors.hpp"

namespace combilab {
namespace {

// Neumaier's compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fractional_offset(double x) { return x - std::nearbyint(x); }

std::vector<double> pair_differences(std::span<const double> v) {
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) out.push_back(v[i] - v[j]);
  }
  return out;
}

}  // namespace

AtomicDistribution::AtomicDistribution(std::vector<Atom> atoms, double merge_tolerance) {
  if (atoms.empty()) throw DomainError("atomic distribution needs at least one atom");
  for (const auto& a : atoms) {
    if (!std::isfinite(a.value) || !std::isfinite(a.probability)) {
      throw DomainError("atomic distribution entries must be finite");
    }
    if (a.probability < 0.0) throw DomainError("atom probabilities must be non-negative");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.value < y.value; });
  CompensatedSum total;
  std::size_t i = 0;
  while (i < atoms.size()) {
    const double anchor = atoms[i].value;
    CompensatedSum mass;
    while (i < atoms.size() && atoms[i].value - anchor <= merge_tolerance) {
      mass.add(atoms[i].probability);
      ++i;
    }
    if (mass.value() > 0.0) {
      atoms_.push_back({anchor, mass.value()});
      total.add(mass.value());
    }
  }
  if (atoms_.empty() || std::abs(total.value() - 1.0) > 1e-12) {
    throw DomainError("atom probabilities must sum to 1 within 1e-12, got " +
                      std::to_string(total.value()));
  }
}

AtomicDistribution AtomicDistribution::from_equally_likely(std::vector<double> values,
                                                           double merge_tolerance) {
  if (values.empty()) throw DomainError("atomic distribution needs at least one value");
  std::sort(values.begin(), values.end());
  const double total = static_cast<double>(values.size());
  std::vector<Atom> atoms;
  std::size_t i = 0;
  while (i < values.size()) {
    const double anchor = values[i];
    std::size_t count = 0;
    while (i < values.size() && values[i] - anchor <= merge_tolerance) {
      ++count;
      ++i;
    }
    atoms.push_back({anchor, static_cast<double>(count) / total});
  }
  return AtomicDistribution(std::move(atoms), 0.0);
}

AtomicDistribution AtomicDistribution::point_mass(double x) {
  return AtomicDistribution({{x, 1.0}});
}

double AtomicDistribution::mean() const { return raw_moment(1); }

double AtomicDistribution::raw_moment(int k) const {
  if (k < 0) throw DomainError("raw_moment order must be non-negative");
  CompensatedSum s;
  for (const auto& a : atoms_) s.add(a.probability * std::pow(a.value, k));
  return s.value();
}

double AtomicDistribution::max_probability() const {
  double best = 0.0;
  for (const auto& a : atoms_) best = std::max(best, a.probability);
  return best;
}

SampleSet::SampleSet(std::vector<double> values, std::uint64_t seed, std::uint64_t first_stream,
                     std::uint64_t stream_count)
    : values_(std::move(values)),
      seed_(seed),
      first_stream_(first_stream),
      stream_count_(stream_count) {
  if (values_.empty()) throw DomainError("sample set must be non-empty");
  for (double x : values_) {
    if (!std::isfinite(x)) throw DomainError("sample values must be finite");
  }
}

BoundParams::BoundParams() {
  values_ = {{"C", 1.0}, {"c1", 1.0 / 16.0}, {"c2", 1.0 / 16.0}, {"C_E", 2.0}};
}

BoundParams& BoundParams::set(const std::string& name, double value) {
  if (!std::isfinite(value)) throw DomainError("bound parameter '" + name + "' must be finite");
  values_[name] = value;
  return *this;
}

double BoundParams::get(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw DomainError("missing bound parameter '" + name + "'");
  return it->second;
}

BoundParams& BoundParams::set_increments(std::vector<double> d) {
  increments_ = std::move(d);
  has_increments_ = true;
  return *this;
}

std::span<const double> BoundParams::increments() const {
  if (!has_increments_) throw DomainError("missing bound parameter 'd_i'");
  return increments_;
}

AtomicDistribution exact_law_W(std::span<const double> v, int d, std::uint64_t cap) {
  const int n = static_cast<int>(v.size());
  std::vector<double> sums;
  const auto count = binomial(n, d);
  if (count <= cap) sums.reserve(static_cast<std::size_t>(count));
  for_each_support(
      n, d,
      [&](std::span<const int> support) {
        double s = 0.0;
        for (int i : support) s += v[static_cast<std::size_t>(i)];
        sums.push_back(s);
      },
      cap);
  return AtomicDistribution::from_equally_likely(std::move(sums));
}

AtomicDistribution exact_law_W_perm(std::span<const double> a, std::span<const double> v) {
  if (a.size() != v.size()) throw DomainError("exact_law_W_perm: a and v differ in length");
  if (a.empty()) throw DomainError("exact_law_W_perm needs n >= 1");
  const int n = static_cast<int>(a.size());
  if (n > kMaxPermutationDimension) {
    throw ResourceError("permutation enumeration limited to n <= " +
                            std::to_string(kMaxPermutationDimension) + ", got " +
                            std::to_string(n),
                        static_cast<std::uint64_t>(n), kMaxPermutationDimension);
  }
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<double> sums;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) s += a[i] * v[static_cast<std::size_t>(sigma[i])];
    sums.push_back(s);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return AtomicDistribution::from_equally_likely(std::move(sums));
}

double levy_exact(const AtomicDistribution& dist, double eps) {
  if (!(eps >= 0.0)) throw DomainError("levy_exact: eps must be non-negative");
  if (eps == 0.0) return dist.max_probability();
  const auto atoms = dist.atoms();
  // Mass of the open window (x - eps, x + eps) is maximized by some run of
  // atoms whose spread is strictly below 2 eps.
  double best = 0.0;
  double window = 0.0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < atoms.size(); ++hi) {
    window += atoms[hi].probability;
    while (atoms[hi].value - atoms[lo].value >= 2.0 * eps) {
      window -= atoms[lo].probability;
      ++lo;
    }
    best = std::max(best, window);
  }
  return std::min(best, 1.0);
}

double levy_empirical(const SampleSet& samples, double eps) {
  if (!(eps > 0.0)) throw DomainError("levy_empirical: eps must be positive");
  std::vector<double> sorted(samples.values().begin(), samples.values().end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t best = 0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < sorted.size(); ++lo) {
    if (hi < lo) hi = lo;
    while (hi < sorted.size() && sorted[hi] - sorted[lo] < 2.0 * eps) ++hi;
    best = std::max(best, hi - lo);
  }
  return static_cast<double>(best) / static_cast<double>(sorted.size());
}

double exact_chf(const AtomicDistribution& dist, double theta) {
  CompensatedSum re;
  CompensatedSum im;
  for (const auto& a : dist.atoms()) {
    const double angle = kTwoPi * fractional_offset(theta * a.value);
    re.add(a.probability * std::cos(angle));
    im.add(a.probability * std::sin(angle));
  }
  return std::min(1.0, std::hypot(re.value(), im.value()));
}

double roos_bound(std::span<const double> a, std::span<const double> v, double theta) {
  if (a.size() != v.size()) throw DomainError("roos_bound: a and v differ in length");
  const int n = static_cast<int>(a.size());
  if (n < 2) throw DomainError("roos_bound needs n >= 2");
  if (n > 64) {
    throw ResourceError("roos_bound is capped at n <= 64", static_cast<std::uint64_t>(n), 64);
  }
  const auto da = pair_differences(a);
  const auto dv = pair_differences(v);
  CompensatedSum total;
  for (double x : da) {
    for (double y : dv) {
      const double c = std::cos(std::numbers::pi * fractional_offset(theta * x * y));
      total.add(c * c);
    }
  }
  const double pairs = static_cast<double>(da.size());
  const double mean = std::clamp(total.value() / (pairs * pairs), 0.0, 1.0);
  return std::pow(mean, (n - 1) / 4.0);
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;

// Bisects until each piece meets its share of an absolute error budget.
template <class F>
double integrate_absolute(const F& f, double a, double b, double tol, int depth, double& error) {
  double local = 0.0;
  const double estimate = Kronrod::integrate(f, a, b, 0, 0.0, &local);
  // Without subdivision the reported error refers to the rescaled [-1, 1] rule.
  local *= 0.5 * (b - a);
  if (local <= tol || depth == 0) {
    error += local;
    return estimate;
  }
  const double mid = 0.5 * (a + b);
  return integrate_absolute(f, a, mid, tol / 2, depth - 1, error) +
         integrate_absolute(f, mid, b, tol / 2, depth - 1, error);
}

}  // namespace

double esseen_bound(const std::function<double(double)>& chf, double eps,
                    const BoundParams& params, double spread) {
  if (!(eps > 0.0)) throw DomainError("esseen_bound: eps must be positive");
  if (!(spread >= 0.0)) throw DomainError("esseen_bound: spread must be non-negative");
  const double constant = params.get("C_E");
  // About four panels per period of the fastest oscillation.
  const int panels = static_cast<int>(std::min(4096.0, std::ceil(8.0 * spread / eps) + 1.0));
  const double width = 2.0 / panels;
  const auto integrand = [&](double theta) { return std::abs(chf(theta / eps)); };
  double error = 0.0;
  double integral = 0.0;
  for (int k = 0; k < panels; ++k) {
    integral += integrate_absolute(integrand, -1.0 + k * width, -1.0 + (k + 1) * width,
                                   1e-9 / panels, 30, error);
  }
  if (!std::isfinite(integral) || error > 1e-8) {
    throw ConvergenceError("Esseen quadrature did not reach absolute error 1e-8",
                           integral - error, integral + error);
  }
  return constant * integral;
}

double esseen_bound(const AtomicDistribution& law, double eps, const BoundParams& params) {
  const auto atoms = law.atoms();
  const double spread = atoms.back().value - atoms.front().value;
  return esseen_bound([&law](double t) { return exact_chf(law, t); }, eps, params, spread);
}

AtomicDistribution random_atomic_law(RngSubstream& rng) {
  const int k = 1 + static_cast<int>(rng.below(12));
  const bool lattice = rng.uniform01() < 0.5;
  const double spacing = 0.05 + 1.95 * rng.uniform01();
  std::vector<Atom> atoms;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double x = lattice ? spacing * i : 2.0 * rng.normal();
    atoms.push_back({x, 0.05 + rng.uniform01()});
    total += atoms.back().probability;
  }
  for (auto& a : atoms) a.probability /= total;
  return AtomicDistribution(std::move(atoms));
}

double calibrate_esseen_constant(std::span<const AtomicDistribution> laws,
                                 std::span<const double> eps_grid) {
  BoundParams unit;
  unit.set("C_E", 1.0);
  double worst = 0.0;
  for (const auto& law : laws) {
    for (double eps : eps_grid) {
      worst = std::max(worst, levy_exact(law, eps) / esseen_bound(law, eps, unit));
    }
  }
  return worst;
}

double expected_square_W(std::span<const double> v, int d) {
  const int n = static_cast<int>(v.size());
  if (n < 2 || n % 2 != 0 || 2 * d != n) {
    throw DomainError("expected_square_W supports only even n with d = n/2 (n=" +
                      std::to_string(n) + ", d=" + std::to_string(d) + ")");
  }
  double sum = 0.0;
  double norm2 = 0.0;
  for (double x : v) {
    sum += x;
    norm2 += x * x;
  }
  const double denom = 4.0 * (n - 1);
  return (n - 2) * sum * sum / denom + norm2 * n / denom;
}

double smallball_terms(double constant, double eps, double clcd, double exponent) {
  const double structure = std::isinf(clcd) ? 0.0 : constant / clcd;
  return constant * eps + structure + constant * std::exp(exponent);
}

SmallBallBound smallball_bound(const SmallBallInputs& inputs, double eps,
                               const BoundParams& params, ClcdQuery search) {
  if (!(eps >= 0.0)) throw DomainError("smallball_bound: eps must be non-negative");
  const double constant = params.get("C");
  SmallBallBound out;
  double exponent = 0.0;
  double norm = 0.0;
  double scale = 0.0;

  if (const auto* plain = std::get_if<PlainSmallBall>(&inputs)) {
    const double n = static_cast<double>(plain->v.size());
    const auto dv = difference_vector(plain->v);
    search.cap = plain->alpha;
    search.slope = plain->gamma;
    out.clcd = clcd_search(dv.entries(), search);
    exponent = -2.0 * plain->alpha * plain->alpha / n;
    norm = dv.norm();
    scale = std::sqrt(n);
  } else {
    const auto& tensor = std::get<TensorSmallBall>(inputs);
    const double n = static_cast<double>(tensor.v.size());
    const auto td = tensor_difference(tensor.a, tensor.v);
    search.cap = tensor.cap;
    search.slope = tensor.slope;
    out.clcd = clcd_search(td.entries(), search);
    exponent = -8.0 * tensor.cap * tensor.cap / (n * n * n);
    norm = td.norm();
    scale = std::pow(n, 1.5);
  }

  out.b_max = norm / scale;
  if (params.has("b")) out.hypothesis_holds = norm >= params.get("b") * scale;

  const double denominator = out.clcd.lower_bound();
  out.upper_bound_on_bound = !out.clcd.is_finite() && std::isfinite(denominator);
  out.linear_term = constant * eps;
  out.structure_term = std::isinf(denominator) ? 0.0 : constant / denominator;
  out.exponential_term = constant * std::exp(exponent);
  out.value = out.linear_term + out.structure_term + out.exponential_term;
  return out;
}

double psi_norm_estimate(const SampleSet& samples, double alpha, double p_max) {
  if (!(alpha > 0.0)) throw DomainError("psi_norm_estimate: alpha must be positive");
  if (!(p_max >= 2.0)) throw DomainError("psi_norm_estimate: p_max must be at least 2");
  std::vector<double> logs;
  logs.reserve(samples.size());
  for (double x : samples.values()) {
    if (x != 0.0) logs.push_back(std::log(std::abs(x)));
  }
  if (logs.empty()) return 0.0;
  const double log_count = std::log(static_cast<double>(samples.size()));
  const double max_log = *std::max_element(logs.begin(), logs.end());

  constexpr int kGridPoints = 65;
  double best = 0.0;
  for (int k = 0; k < kGridPoints; ++k) {
    const double p = std::pow(p_max, static_cast<double>(k) / (kGridPoints - 1));
    // log mean |x|^p via log-sum-exp around the largest term.
    CompensatedSum s;
    for (double l : logs) s.add(std::exp(p * (l - max_log)));
    const double log_moment = p * max_log + std::log(s.value()) - log_count;
    best = std::max(best, std::exp(log_moment / p - std::log(p) / alpha));
  }
  return best;
}

double evaluate_bound(BoundKind kind, const BoundParams& params) {
  switch (kind) {
    case BoundKind::combinatorial_concentration: {
      const double t = params.get("t");
      double sum_sq = 0.0;
      for (double d : params.increments()) sum_sq += d * d;
      if (t == 0.0) return 2.0;
      if (sum_sq == 0.0) return 0.0;
      return 2.0 * std::exp(-t * t / (8.0 * sum_sq));
    }
    case BoundKind::bernstein: {
      const double t = params.get("t");
      const double k = params.get("K");
      const double n = params.get("n");
      return 2.0 * std::exp(-params.get("c2") * std::min(t * t / (k * k * n), t / k));
    }
    case BoundKind::matrix_concentration: {
      const double t = params.get("t");
      const double r = params.get("r");
      const double n = params.get("n");
      const double s = r * r + 1.0;
      return 2.0 * std::exp(-params.get("c1") * std::min(t * t / (s * s * n), t / s));
    }
    case BoundKind::restricted_norm_tail: {
      const double t = params.get("t");
      return 2.0 * std::exp(-params.get("c3") * t * t * params.get("n"));
    }
    case BoundKind::tensorization:
      return std::pow(params.get("C") * params.get("B") * params.get("eps"), params.get("m"));
    case BoundKind::paley_zygmund: {
      const double m2 = params.get("m2");
      const double m4 = params.get("m4");
      const double lambda = params.get("lambda");
      if (!(lambda >= 0.0 && lambda * lambda < m2)) {
        throw DomainError("Paley-Zygmund needs 0 <= lambda < sqrt(E[X^2])");
      }
      if (!(m4 > 0.0)) throw DomainError("Paley-Zygmund needs E[X^4] > 0");
      const double gap = m2 - lambda * lambda;
      return gap * gap / m4;
    }
    case BoundKind::hypercontractive: {
      const double q = params.get("q");
      const double b = params.get("b");
      if (!(q >= 2.0)) throw DomainError("hypercontractive estimate needs q >= 2");
      if (!(b > 0.0 && b <= 0.5)) throw DomainError("hypercontractive estimate needs b in (0, 1/2]");
      const double factor = std::sqrt(q - 1.0) * std::pow(b, 1.0 / q - 0.5);
      return std::pow(factor, params.get("d")) * std::sqrt(params.get("m2"));
    }
    case BoundKind::row_anticoncentration:
      return std::exp(-params.get("n") / 3000.0);
  }
  throw DomainError("unknown bound kind");
}

double pawlowski_bound(int n) {
  if (n < 2) throw DomainError("pawlowski_bound needs n >= 2");
  return 2.0 * (n / 2) / (static_cast<double>(n) * (n - 1));
}

}  // namespace combilab
