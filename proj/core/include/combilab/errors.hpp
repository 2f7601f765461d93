#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace combilab {

// Invalid argument or violated precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured enumeration or size cap would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::uint64_t requested, std::uint64_t cap)
      : std::runtime_error(what), requested_(requested), cap_(cap) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

// An iterative method stopped before reaching its tolerance. The best
// bracket [lower, upper] known at that point is carried along.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lower, double upper)
      : std::runtime_error(what), lower_(lower), upper_(upper) {}

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

}  // namespace combilab
