#include "combilab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "combilab/errors.hpp"

namespace combilab {

namespace {

// Drops the accumulated binary noise of lo + k * h (0.15000000000000002 -> 0.15).
double tidy(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::vector<double> ExperimentConfig::default_eps_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(tidy(k * 0.05));
  return grid;
}

void ExperimentConfig::validate() const {
  if (n < 2) throw DomainError("n must be at least 2");
  if (trials < 1) throw DomainError("trials must be at least 1");
  const int dd = resolved_d();
  if (dd < 0 || dd > n) throw DomainError("d must satisfy 0 <= d <= n");
  const int mm = resolved_m();
  if (mm < 1 || mm > n) throw DomainError("m must satisfy 1 <= m <= n");
  if (eps_grid.empty()) throw DomainError("eps grid must be non-empty");
  if (!std::is_sorted(eps_grid.begin(), eps_grid.end()) || eps_grid.front() < 0.0) {
    throw DomainError("eps grid must be non-negative and sorted ascending");
  }
  if (threads < 1) throw DomainError("threads must be at least 1");
  if (!(delta > 0.0 && delta < 1.0) || !(rho > 0.0 && rho < 1.0)) {
    throw DomainError("delta and rho must lie in (0, 1)");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (!(resolved_alpha() > 0.0)) throw DomainError("alpha must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  if (!vector.empty() && static_cast<int>(vector.size()) != n) {
    throw DomainError("explicit vector length must equal n");
  }
}

std::vector<double> parse_eps_grid(const std::string& spec) {
  std::vector<double> grid;
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double x = std::stod(s, &used);
      if (used != s.size()) throw DomainError("");
      return x;
    } catch (const std::exception&) {
      throw DomainError("malformed eps grid '" + spec + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::stringstream ss(spec);
    std::string a, b, step;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, step)) {
      throw DomainError("eps grid must look like a:b:step, got '" + spec + "'");
    }
    const double lo = to_double(a);
    const double hi = to_double(b);
    const double h = to_double(step);
    if (!(h > 0.0) || hi < lo) throw DomainError("eps grid needs step > 0 and a <= b");
    const auto count = static_cast<long>(std::floor((hi - lo) / h + 1e-9));
    for (long k = 0; k <= count; ++k) grid.push_back(tidy(lo + static_cast<double>(k) * h));
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(to_double(item));
  }
  if (grid.empty()) throw DomainError("eps grid is empty");
  return grid;
}

std::optional<double> ExperimentResult::metric(const std::string& name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  return std::nullopt;
}

bool ExperimentResult::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half),
          successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw DomainError("slope fit needs distinct x values");
  return sxy / sxx;
}

void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t)>& body) {
  const auto workers = static_cast<std::uint64_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  constexpr std::uint64_t kChunk = 64;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < std::min(workers, count); ++w) {
      pool.emplace_back([&] {
        try {
          while (true) {
            const std::uint64_t start = next.fetch_add(kChunk);
            if (start >= count) return;
            const std::uint64_t stop = std::min(count, start + kChunk);
            for (std::uint64_t i = start; i < stop; ++i) body(i);
          }
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace combilab
