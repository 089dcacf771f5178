#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bb84/coherent.hpp"

namespace bb84 {

struct OptimizationOptions {
  int restarts = 32;
  int max_iterations = 2000;
  std::uint64_t seed = 1;
  double feasibility_penalty = 1e3;
  double convergence_tol = 1e-8;
};

struct Optimum {
  CoherentParams params;
  double value;
};

/// One grid point of the disturbance sweep. P/I columns compare the best
/// incoherent product attack (1) with the best coherent attack (2).
struct CurvePoint {
  double D;
  double P1, P2;    // pair success
  double I1, I2;    // pair information, bits
  double Pb1, Pb2;  // Bob pair success
  double relative_gain;  // (P2 - P1) / P1
  std::string error;     // nonempty when a maximization failed or was flagged
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value;
  int iterations;
};

/// Nelder-Mead minimization with per-coordinate initial steps.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const Eigen::VectorXd& steps,
                          int max_iterations, double tol);

/// Maximize Eve's pair success over the 4-dimensional slice of the free chart
/// with B + C = D. Multi-start from the product attack plus seeded random
/// perturbations; infeasible points are penalized by the PSD violation.
/// Deterministic for a given seed.
Optimum maximize_pair_success(double D, const OptimizationOptions& opts = {});

/// Same search with Eve's pair information as the objective.
Optimum maximize_pair_information(double D, const OptimizationOptions& opts = {});

/// Evenly spaced disturbance grid running both maximizations plus the
/// incoherent baselines at every point. Failures annotate the point.
std::vector<CurvePoint> sweep_curves(double d_min, double d_max, int steps,
                                     const OptimizationOptions& opts = {});

}  // namespace bb84
