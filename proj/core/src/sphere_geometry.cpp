#include "combilab/sphere_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "combilab/errors.hpp"

namespace combilab {
namespace {

void require_unit(std::span<const double> v, const char* who) {
  if (v.empty()) throw DomainError(std::string(who) + ": empty vector");
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9) {
    throw DomainError(std::string(who) + ": input must be a unit vector, norm is " +
                      std::to_string(std::sqrt(norm2)));
  }
}

}  // namespace

void PartitionParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0, 1)");
}

AlmostConstant is_almost_constant(std::span<const double> v, const PartitionParams& p) {
  p.validate();
  require_unit(v, "is_almost_constant");
  const auto n = v.size();
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  const double width = 2.0 * p.rho / std::sqrt(static_cast<double>(n));
  const auto needed = static_cast<std::size_t>(std::ceil((1.0 - p.delta) * n - 1e-9));

  std::size_t best_count = 0;
  double best_mid = 0.0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < n; ++lo) {
    hi = std::max(hi, lo);
    while (hi + 1 < n && sorted[hi + 1] - sorted[lo] <= width) ++hi;
    const std::size_t count = hi - lo + 1;
    const double mid = 0.5 * (sorted[lo] + sorted[hi]);
    if (count > best_count || (count == best_count && mid < best_mid)) {
      best_count = count;
      best_mid = mid;
    }
  }
  AlmostConstant out;
  out.almost_constant = best_count >= needed;
  if (out.almost_constant) out.lambda = best_mid;
  return out;
}

bool separated_sets_hold(std::span<const double> v, const SeparatedSets& sets,
                         const PartitionParams& p) {
  const double n = static_cast<double>(v.size());
  const double min_size = p.delta * n / 8.0;
  if (sets.first.size() < min_size || sets.second.size() < min_size) return false;
  std::vector<bool> seen(v.size(), false);
  for (const auto* s : {&sets.first, &sets.second}) {
    for (int i : *s) {
      if (i < 0 || static_cast<std::size_t>(i) >= v.size() || seen[static_cast<std::size_t>(i)]) {
        return false;
      }
      seen[static_cast<std::size_t>(i)] = true;
    }
  }
  const double lower = p.rho / std::sqrt(2.0 * n);
  const double upper = 6.0 / std::sqrt(p.delta * n);
  for (int i : sets.first) {
    for (int j : sets.second) {
      const double gap = std::abs(v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)]);
      if (gap < lower || gap > upper) return false;
    }
  }
  return true;
}

std::optional<SeparatedSets> find_separated_sets(std::span<const double> v,
                                                 const PartitionParams& p) {
  p.validate();
  const double n = static_cast<double>(v.size());
  const double bounded = 3.0 / std::sqrt(p.delta * n);
  const double min_gap = p.rho / std::sqrt(2.0 * n);
  const double min_side = p.delta * n / 8.0;

  std::vector<int> kept;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) <= bounded) kept.push_back(static_cast<int>(k));
  }
  std::stable_sort(kept.begin(), kept.end(), [&](int a, int b) {
    return v[static_cast<std::size_t>(a)] < v[static_cast<std::size_t>(b)];
  });

  std::optional<std::size_t> split;
  double widest = -1.0;
  for (std::size_t i = 1; i < kept.size(); ++i) {
    const double gap = v[static_cast<std::size_t>(kept[i])] - v[static_cast<std::size_t>(kept[i - 1])];
    const bool sides_ok = static_cast<double>(i) >= min_side &&
                          static_cast<double>(kept.size() - i) >= min_side;
    if (sides_ok && gap >= min_gap && gap > widest) {
      widest = gap;
      split = i;
    }
  }
  if (!split) return std::nullopt;

  SeparatedSets sets;
  sets.second.assign(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(*split));
  sets.first.assign(kept.begin() + static_cast<std::ptrdiff_t>(*split), kept.end());
  std::sort(sets.first.begin(), sets.first.end());
  std::sort(sets.second.begin(), sets.second.end());
  if (!separated_sets_hold(v, sets, p)) return std::nullopt;
  return sets;
}

double compressibility_distance(std::span<const double> x, double delta) {
  require_unit(x, "compressibility_distance");
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
  const auto keep = static_cast<std::size_t>(std::floor(delta * x.size() + 1e-9));
  if (keep == 0) return std::sqrt(2.0);
  std::vector<double> squares;
  squares.reserve(x.size());
  for (double e : x) squares.push_back(e * e);
  std::nth_element(squares.begin(), squares.begin() + static_cast<std::ptrdiff_t>(keep - 1),
                   squares.end(), std::greater<>());
  double top = 0.0;
  for (std::size_t i = 0; i < keep; ++i) top += squares[i];
  const double t = std::min(1.0, std::sqrt(top));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * t));
}

std::vector<double> round_to_net(std::span<const double> v, std::span<const double> x,
                                 double beta) {
  if (v.size() != x.size() || v.empty()) throw DomainError("round_to_net: length mismatch");
  if (!(beta > 0.0)) throw DomainError("round_to_net: beta must be positive");
  const std::size_t n = v.size();
  const double root_n = std::sqrt(static_cast<double>(n));
  double dist2 = 0.0;
  double inner = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dist2 += (v[i] - x[i]) * (v[i] - x[i]);
    inner += v[i] - x[i];
  }
  const double slack = 1e-12 * std::max(1.0, beta);
  if (std::sqrt(dist2) > beta + slack) {
    throw DomainError("round_to_net: precondition ||v - x|| <= beta violated");
  }
  const double k = std::abs(inner) * root_n / beta;
  const auto steps = std::min(n, static_cast<std::size_t>(std::floor(k)));
  const double step = (inner < 0.0 ? -beta : beta) / root_n;

  std::vector<double> w(x.begin(), x.end());
  for (std::size_t i = 0; i < steps; ++i) w[i] += step;

  double out_dist2 = 0.0;
  double out_inner = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out_dist2 += (v[i] - w[i]) * (v[i] - w[i]);
    out_inner += v[i] - w[i];
  }
  if (std::sqrt(out_dist2) > 2.0 * beta + slack || std::abs(out_inner) > beta / root_n + slack) {
    throw DomainError("round_to_net: rounding guarantees failed (numerical breakdown)");
  }
  return w;
}

std::vector<double> random_non_almost_constant(int n, const PartitionParams& p,
                                               RngSubstream& rng, int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    auto v = random_unit_vector(n, rng);
    if (!is_almost_constant(v, p).almost_constant) return v;
  }
  throw DomainError("no non-almost-constant vector found in " + std::to_string(max_attempts) +
                    " attempts (n=" + std::to_string(n) + ")");
}

}  // namespace combilab
