#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsep {

// Invalid sizes, out-of-range parameters, malformed files or configs.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value outside the domain of a transform (log of a non-positive pixel).
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, std::size_t index)
      : std::domain_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Iterative solver failed to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double final_residual)
      : std::runtime_error(what), final_residual_(final_residual) {}
  double final_residual() const { return final_residual_; }

 private:
  double final_residual_;
};

// The gradient-determinant condition for diffusion recovery does not hold.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, std::vector<std::size_t> worst)
      : std::runtime_error(what), worst_pixels_(std::move(worst)) {}
  const std::vector<std::size_t>& worst_pixels() const { return worst_pixels_; }

 private:
  std::vector<std::size_t> worst_pixels_;
};

}  // namespace dsep
