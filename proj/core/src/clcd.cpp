#include "combilab/clcd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "combilab/errors.hpp"

namespace combilab {
namespace {

double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double e : x) s += e * e;
  return std::sqrt(s);
}

std::vector<double> pair_differences(std::span<const double> v) {
  const auto n = v.size();
  std::vector<double> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(v[i] - v[j]);
  }
  return out;
}

// Squared distance of theta * target to Z^N. nearbyint rounds half to even
// under the default rounding mode.
double lattice_distance_sq(std::span<const double> target, double theta) {
  double s = 0.0;
  for (double t : target) {
    const double x = theta * t;
    const double r = x - std::nearbyint(x);
    s += r * r;
  }
  return s;
}

struct MarginEvaluator {
  std::span<const double> target;
  double norm;
  double slope;
  double cap;
  std::uint64_t evaluations = 0;

  double threshold(double theta) const { return std::min(slope * theta * norm, cap); }

  // Returns dist - threshold; negative means admissible.
  double margin(double theta) {
    ++evaluations;
    return std::sqrt(lattice_distance_sq(target, theta)) - threshold(theta);
  }
};

}  // namespace

double DifferenceVector::norm() const { return euclidean_norm(entries_); }

DifferenceVector difference_vector(std::span<const double> v) {
  if (v.size() < 2) throw DomainError("difference_vector needs n >= 2");
  return DifferenceVector(static_cast<int>(v.size()), pair_differences(v));
}

TensorDifference tensor_difference(std::span<const double> a, std::span<const double> v,
                                   int max_n) {
  if (a.size() != v.size()) throw DomainError("tensor_difference: a and v differ in length");
  if (v.size() < 2) throw DomainError("tensor_difference needs n >= 2");
  const int n = static_cast<int>(v.size());
  if (n > max_n) {
    const auto pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const auto cap_pairs = static_cast<std::uint64_t>(max_n) * (max_n - 1) / 2;
    throw ResourceError("tensor difference of dimension " + std::to_string(n) +
                            " exceeds cap n <= " + std::to_string(max_n),
                        pairs * pairs, cap_pairs * cap_pairs);
  }
  const auto da = pair_differences(a);
  const auto dv = pair_differences(v);
  std::vector<double> entries;
  entries.reserve(da.size() * dv.size());
  for (double x : da) {
    for (double y : dv) entries.push_back(x * y);
  }
  return TensorDifference(n, std::move(entries), euclidean_norm(da) * euclidean_norm(dv));
}

double round_half_even(double x) noexcept {
  const double r = std::round(x);
  if (std::abs(x - std::trunc(x)) == 0.5) return 2.0 * std::round(x / 2.0);
  return r;
}

double lattice_distance(std::span<const double> w) {
  double s = 0.0;
  for (double x : w) {
    const double r = x - round_half_even(x);
    s += r * r;
  }
  return std::sqrt(s);
}

void ClcdQuery::validate() const {
  if (!(cap > 0.0)) throw DomainError("CLCD cap must be positive");
  if (!(slope > 0.0 && slope < 1.0)) throw DomainError("CLCD slope must lie in (0, 1)");
  if (!(horizon > 0.0)) throw DomainError("CLCD horizon must be positive");
  if (!(bracket_tolerance > 0.0)) throw DomainError("CLCD bracket tolerance must be positive");
  if (!(slack >= 0.0)) throw DomainError("CLCD slack must be non-negative");
}

ClcdResult clcd_search(std::span<const double> target, const ClcdQuery& query) {
  query.validate();
  for (double t : target) {
    if (!std::isfinite(t)) throw DomainError("CLCD target must be finite");
  }
  ClcdResult result;
  result.slack = query.slack;

  const double norm = euclidean_norm(target);
  if (norm == 0.0) {
    result.searched_to = std::numeric_limits<double>::infinity();
    return result;
  }
  double sup_norm = 0.0;
  for (double t : target) sup_norm = std::max(sup_norm, std::abs(t));

  MarginEvaluator eval{target, norm, query.slope, query.cap};
  const double lipschitz = (1.0 + query.slope) * norm;
  const double tol = query.bracket_tolerance;

  double theta = 0.5 / sup_norm;
  if (theta >= query.horizon) {
    result.searched_to = query.horizon;
    return result;
  }
  double margin = eval.margin(theta);
  double gap = 0.0;

  auto finish_infinite = [&](double searched_to) {
    result.searched_to = searched_to;
    result.certified_gap = gap;
    result.evaluations = eval.evaluations;
    return result;
  };

  while (true) {
    if (eval.evaluations >= query.max_evaluations) return finish_infinite(theta);

    double step = margin / lipschitz;
    const bool uncertain = step < tol;
    if (uncertain) step = std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * theta);
    double next = theta + step;
    if (next >= query.horizon) {
      next = query.horizon;
      if (uncertain) gap = std::max(gap, next - theta);
      const double end_margin = eval.margin(next);
      if (end_margin >= 0.0) return finish_infinite(query.horizon);
      margin = end_margin;
    } else {
      margin = eval.margin(next);
      if (uncertain) gap = std::max(gap, step);
    }

    if (margin < 0.0) {
      // theta inadmissible, next admissible: shrink the bracket.
      double lo = theta;
      double hi = next;
      while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (eval.margin(mid) < 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      result.status = ClcdStatus::finite;
      result.value = hi;
      result.searched_to = lo;
      result.certified_gap = gap;
      result.witness.reserve(target.size());
      for (double t : target) {
        result.witness.push_back(static_cast<std::int64_t>(std::nearbyint(hi * t)));
      }
      result.evaluations = eval.evaluations;
      return result;
    }
    theta = next;
  }
}

double stability_floor(std::span<const double> v, std::span<const double> w,
                       const ClcdQuery& query) {
  if (v.size() != w.size()) throw DomainError("stability_floor: v and w differ in length");
  const auto dv = difference_vector(v);
  double diff2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) diff2 += (v[i] - w[i]) * (v[i] - w[i]);
  const double diff = std::sqrt(diff2);
  const double root_n = std::sqrt(static_cast<double>(v.size()));
  const double limit = query.slope * dv.norm() / (5.0 * root_n);
  if (!(diff < limit)) {
    throw DomainError("stability hypothesis ||v - w|| < gamma ||D(v)|| / (5 sqrt(n)) violated: " +
                      std::to_string(diff) + " >= " + std::to_string(limit));
  }
  const double clcd = clcd_search(dv.entries(), query).lower_bound();
  const double perturbation_term =
      diff == 0.0 ? std::numeric_limits<double>::infinity() : query.cap / (4.0 * root_n * diff);
  return std::min(clcd, perturbation_term);
}

}  // namespace combilab
