#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyhardy {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested operator would exceed the configured dimension cap, or a
// truncation/window is too small for the request.
class SizingError : public Error {
 public:
  SizingError(const std::string& what, std::size_t offending_dimension)
      : Error(what), dimension_(offending_dimension) {}
  std::size_t dimension() const noexcept { return dimension_; }

 private:
  std::size_t dimension_;
};

// Floating point breakdown: non-finite data, failed factorization, singular solve.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, long iterations = -1)
      : Error(what), iterations_(iterations) {}
  // Iteration count at failure, or -1 when the backend does not expose it.
  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

// A precondition on the arguments does not hold.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Truncation degree too small for the requested model space.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double gram_deviation)
      : Error(what), gram_deviation_(gram_deviation) {}
  double gram_deviation() const noexcept { return gram_deviation_; }

 private:
  double gram_deviation_;
};

class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(const std::string& what, std::size_t detected_rank)
      : Error(what), detected_rank_(detected_rank) {}
  std::size_t detected_rank() const noexcept { return detected_rank_; }

 private:
  std::size_t detected_rank_;
};

// A structural identity that must hold numerically failed its tolerance.
class AssertionFailure : public Error {
 public:
  AssertionFailure(const std::string& check, const std::string& what)
      : Error(check + ": " + what), check_(check) {}
  const std::string& check() const noexcept { return check_; }

 private:
  std::string check_;
};

}  // namespace polyhardy
