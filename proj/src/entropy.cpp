#include "bb84/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bb84 {
namespace {

constexpr double kEdgeSlack = 1e-12;

double plogp(double p) {
  return p > 0.0 ? p * std::log2(p) : 0.0;
}

}  // namespace

double binary_entropy(double p) {
  if (p < -kEdgeSlack || p > 1.0 + kEdgeSlack) {
    throw std::domain_error("binary_entropy: p=" + std::to_string(p) + " outside [0,1]");
  }
  p = std::clamp(p, 0.0, 1.0);
  return -(plogp(p) + plogp(1.0 - p));
}

double signed_entropy(double p) {
  return -binary_entropy(p);
}

double shannon_entropy(std::span<const double> dist) {
  double sum = 0.0;
  double h = 0.0;
  for (double p : dist) {
    if (p < -kEdgeSlack) {
      throw std::domain_error("shannon_entropy: negative probability " + std::to_string(p));
    }
    p = std::max(p, 0.0);
    sum += p;
    h -= plogp(p);
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::domain_error("shannon_entropy: probabilities sum to " + std::to_string(sum));
  }
  return h;
}

}  // namespace bb84
