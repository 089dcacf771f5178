#pragma once

#include <stdexcept>
#include <string>

namespace bb84 {

// Parameters that cannot correspond to any physical interaction: negative
// probabilities, non-PSD Gram matrices, impossible pyramid geometry.
class InfeasibilityError : public std::runtime_error {
 public:
  explicit InfeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

// A quantity failed a self-check that must hold by construction.
class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

// The constrained search terminated without a feasible candidate.
class OptimizationError : public std::runtime_error {
 public:
  explicit OptimizationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bb84
