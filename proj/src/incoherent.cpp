#include "bb84/incoherent.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bb84/entropy.hpp"
#include "bb84/errors.hpp"

namespace bb84 {
namespace {

constexpr double kSlack = 1e-12;

double success_given_overlap(double c) {
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  return (1.0 + s) / 2.0;
}

}  // namespace

IncoherentParams new_params(double D, double D1) {
  if (D < -kSlack || D > 1.0 + kSlack) {
    throw std::domain_error("new_params: D=" + std::to_string(D) + " outside [0,1]");
  }
  D = std::clamp(D, 0.0, 1.0);

  IncoherentParams p;
  p.D = D;
  p.D1 = D1;
  p.F = 1.0 - D;
  p.F1 = p.F - p.D - p.D1;
  if (std::abs(D1) > D + kSlack) {
    throw InfeasibilityError("new_params: |D1| > D (" + std::to_string(D1) + " vs " +
                             std::to_string(D) + "), Gram not PSD");
  }
  if (std::abs(p.F1) > p.F + kSlack) {
    throw InfeasibilityError("new_params: |F1| > F (" + std::to_string(p.F1) + " vs " +
                             std::to_string(p.F) + "), Gram not PSD");
  }
  p.cos_alpha = p.F > kSlack ? std::clamp(p.F1 / p.F, -1.0, 1.0) : 0.0;
  p.cos_beta = p.D > kSlack ? std::clamp(p.D1 / p.D, -1.0, 1.0) : 0.0;
  return p;
}

IncoherentParams optimal_attack(double D) {
  if (D < -kSlack || D > 0.5 + kSlack) {
    throw std::domain_error("optimal_attack: D=" + std::to_string(D) + " outside [0,1/2]");
  }
  D = std::clamp(D, 0.0, 0.5);
  return new_params(D, D * (1.0 - 2.0 * D));
}

double eve_information(const IncoherentParams& p) {
  double info = 1.0;
  if (p.F > kSlack) info += p.F * signed_entropy(success_given_overlap(p.cos_alpha));
  if (p.D > kSlack) info += p.D * signed_entropy(success_given_overlap(p.cos_beta));
  return info;
}

double eve_success(const IncoherentParams& p) {
  double s = 0.0;
  if (p.F > kSlack) s += p.F * success_given_overlap(p.cos_alpha);
  if (p.D > kSlack) s += p.D * success_given_overlap(p.cos_beta);
  return s;
}

std::pair<double, double> bob_metrics(double D) {
  if (D < -kSlack || D > 1.0 + kSlack) {
    throw std::domain_error("bob_metrics: D=" + std::to_string(D) + " outside [0,1]");
  }
  D = std::clamp(D, 0.0, 1.0);
  return {1.0 - binary_entropy(D), 1.0 - D};
}

AttackMetrics attack_metrics(const IncoherentParams& p) {
  const auto [ib, pb] = bob_metrics(p.D);
  return AttackMetrics{p.D, eve_information(p), eve_success(p), ib, pb};
}

GramMatrix gram4(const IncoherentParams& p) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
  g(0, 0) = g(3, 3) = p.F;
  g(1, 1) = g(2, 2) = p.D;
  g(0, 3) = g(3, 0) = p.F1;
  g(1, 2) = g(2, 1) = p.D1;
  return GramMatrix(g);
}

double chsh_parameter(double cos_alpha) {
  if (std::abs(cos_alpha) > 1.0 + kSlack) {
    throw std::domain_error("chsh_parameter: |cos_alpha| > 1");
  }
  return 2.0 * std::sqrt(2.0) * cos_alpha;
}

double optimal_information_slope(double D) {
  if (D <= 0.0) throw std::domain_error("optimal_information_slope: D must be > 0");
  return eve_information(optimal_attack(D)) / D;
}

}  // namespace bb84
