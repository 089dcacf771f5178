#include "bb84/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bb84/entropy.hpp"
#include "bb84/errors.hpp"
#include "bb84/incoherent.hpp"
#include "bb84/pyramid.hpp"
#include "bb84/rng.hpp"

namespace bb84 {
namespace {

enum class Objective { Success, Information };

CoherentParams ten_from_slice(double D, const Eigen::VectorXd& x) {
  return solve_free_chart(x(0), D - x(0), x(1), x(2), x(3));
}

double feasibility_violation(const CoherentParams& p) {
  double v = std::max(0.0, -p.A) + std::max(0.0, -p.B) + std::max(0.0, -p.C);
  for (double e : set_block_eigenvalues(p)) v += std::max(0.0, -e);
  return v;
}

// Objective value with negative radicands clipped to zero, so the search can
// cross slightly infeasible territory without throwing; the penalty term does
// the steering.
double clipped_objective(const CoherentParams& p, Objective obj) {
  const double w[4] = {std::max(0.0, p.A), std::max(0.0, p.B), std::max(0.0, p.B),
                       std::max(0.0, p.C)};
  const double t[4][3] = {{p.A1, p.A1, p.A2},
                          {p.B1, p.B3, p.B2},
                          {p.B3, p.B1, p.B2},
                          {p.C1, p.C1, p.C2}};
  double total = 0.0;
  for (int m = 0; m < 4; ++m) {
    if (w[m] <= 1e-12) continue;
    double g[4] = {1.0, t[m][0] / w[m], t[m][1] / w[m], t[m][2] / w[m]};
    walsh_hadamard(std::span<double>(g, 4));
    double u[4];
    for (int x = 0; x < 4; ++x) u[x] = std::sqrt(std::max(0.0, g[x]));
    walsh_hadamard(std::span<double>(u, 4));
    double dist[4];
    double norm = 0.0;
    for (int x = 0; x < 4; ++x) {
      const double c = u[x] / 4.0;
      dist[x] = c * c;
      norm += dist[x];
    }
    if (obj == Objective::Success) {
      total += w[m] * dist[0];
    } else if (norm > 0.0) {
      double h = 0.0;
      for (double q : dist) {
        const double pr = q / norm;
        if (pr > 0.0) h -= pr * std::log2(pr);
      }
      total += w[m] * (2.0 - h);
    }
  }
  return total;
}

Eigen::VectorXd product_start(double D) {
  const IncoherentParams q = optimal_attack(D);
  const CoherentParams p = product_embedding(q);
  Eigen::VectorXd x(4);
  x << p.B, p.A1, p.B2, p.C1;
  return x;
}

Optimum maximize(double D, Objective obj, const OptimizationOptions& opts) {
  if (D < -1e-12 || D > 0.5 + 1e-12) {
    throw std::domain_error("maximize: D=" + std::to_string(D) + " outside [0,1/2]");
  }
  D = std::clamp(D, 0.0, 0.5);
  if (opts.restarts < 1) throw std::domain_error("maximize: restarts must be >= 1");

  const auto penalized = [&](const Eigen::VectorXd& x) {
    const CoherentParams p = ten_from_slice(D, x);
    return -(clipped_objective(p, obj) - opts.feasibility_penalty * feasibility_violation(p));
  };
  const auto violation_at = [&](const Eigen::VectorXd& x) {
    return feasibility_violation(ten_from_slice(D, x));
  };

  // The product attack is strictly feasible and anchors both the multi-start
  // and the pull-back of endpoints that finish marginally outside the PSD
  // boundary.
  const Eigen::VectorXd x0 = product_start(D);
  Eigen::VectorXd steps(4);
  steps << std::max(D / 8.0, 1e-5), 0.05, 0.02, 0.02;

  double best_value = clipped_objective(ten_from_slice(D, x0), obj);
  Eigen::VectorXd best_x = x0;
  for (int r = 0; r < opts.restarts; ++r) {
    Eigen::VectorXd start = x0;
    if (r > 0) {
      Xoshiro256pp rng(opts.seed, static_cast<std::uint64_t>(r));
      const double sigma = 0.02 * (1.0 + static_cast<double>(r % 3));
      for (int i = 0; i < 4; ++i) start(i) += sigma * rng.next_normal();
      start(0) = std::clamp(start(0), 0.0, D);
    }
    const SimplexResult res =
        nelder_mead(penalized, start, steps, opts.max_iterations, opts.convergence_tol);
    Eigen::VectorXd candidate = res.x;
    if (violation_at(candidate) > 1e-12) {
      double lo = 0.0, hi = 1.0;  // x0 side stays feasible
      for (int it = 0; it < 60; ++it) {
        const double mid = (lo + hi) / 2.0;
        const Eigen::VectorXd x = res.x + mid * (x0 - res.x);
        (violation_at(x) > 1e-12 ? lo : hi) = mid;
      }
      candidate = res.x + hi * (x0 - res.x);
    }
    const double value = clipped_objective(ten_from_slice(D, candidate), obj);
    if (value > best_value) {
      best_value = value;
      best_x = candidate;
    }
  }
  const CoherentParams p = from_free(best_x(0), D - best_x(0), best_x(1), best_x(2), best_x(3));
  const double value =
      obj == Objective::Success ? eve_pair_success(p) : eve_pair_information(p);
  return Optimum{p, value};
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const Eigen::VectorXd& steps,
                          int max_iterations, double tol) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> simplex(n + 1, x0);
  std::vector<double> value(n + 1);
  for (int i = 0; i < n; ++i) simplex[i + 1](i) += steps(i);
  for (int i = 0; i <= n; ++i) value[i] = f(simplex[i]);

  std::vector<int> order(n + 1);
  int iterations = 0;
  for (; iterations < max_iterations; ++iterations) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return value[a] < value[b]; });
    const int lo = order[0];
    const int hi = order[n];
    const int next_hi = order[n - 1];

    const double spread = std::abs(value[hi] - value[lo]);
    double diameter = 0.0;
    for (int i = 1; i <= n; ++i) {
      diameter = std::max(diameter, (simplex[order[i]] - simplex[lo]).cwiseAbs().maxCoeff());
    }
    if (spread <= tol * (1.0 + std::abs(value[lo])) && diameter <= tol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != hi) centroid += simplex[i];
    }
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[hi]);
    const double f_reflected = f(reflected);
    if (f_reflected < value[lo]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[hi]);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        simplex[hi] = expanded;
        value[hi] = f_expanded;
      } else {
        simplex[hi] = reflected;
        value[hi] = f_reflected;
      }
      continue;
    }
    if (f_reflected < value[next_hi]) {
      simplex[hi] = reflected;
      value[hi] = f_reflected;
      continue;
    }
    const Eigen::VectorXd contracted =
        f_reflected < value[hi] ? centroid + 0.5 * (reflected - centroid)
                                : centroid + 0.5 * (simplex[hi] - centroid);
    const double f_contracted = f(contracted);
    if (f_contracted < std::min(value[hi], f_reflected)) {
      simplex[hi] = contracted;
      value[hi] = f_contracted;
      continue;
    }
    for (int i = 0; i <= n; ++i) {  // shrink toward the best vertex
      if (i == lo) continue;
      simplex[i] = simplex[lo] + 0.5 * (simplex[i] - simplex[lo]);
      value[i] = f(simplex[i]);
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i) {
    if (value[i] < value[best]) best = i;
  }
  return SimplexResult{simplex[best], value[best], iterations};
}

Optimum maximize_pair_success(double D, const OptimizationOptions& opts) {
  return maximize(D, Objective::Success, opts);
}

Optimum maximize_pair_information(double D, const OptimizationOptions& opts) {
  return maximize(D, Objective::Information, opts);
}

std::vector<CurvePoint> sweep_curves(double d_min, double d_max, int steps,
                                     const OptimizationOptions& opts) {
  if (d_min < 0.0 || d_min >= d_max || d_max > 0.5) {
    throw std::domain_error("sweep_curves: need 0 <= d_min < d_max <= 1/2");
  }
  if (steps < 2) throw std::domain_error("sweep_curves: need steps >= 2");

  std::vector<CurvePoint> out;
  out.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    const double D = d_min + t * (d_max - d_min);
    CurvePoint pt{};
    pt.D = D;
    const IncoherentParams q = optimal_attack(D);
    const double ps = eve_success(q);
    pt.P1 = ps * ps;
    pt.I1 = 2.0 * eve_information(q);
    pt.Pb1 = (1.0 - D) * (1.0 - D);
    try {
      const Optimum succ = maximize_pair_success(D, opts);
      pt.P2 = succ.value;
      pt.Pb2 = bob_pair_success(succ.params);
      pt.relative_gain = (pt.P2 - pt.P1) / pt.P1;
      const Optimum info = maximize_pair_information(D, opts);
      pt.I2 = info.value;
    } catch (const OptimizationError& e) {
      pt.P2 = pt.I2 = pt.Pb2 = pt.relative_gain = std::numeric_limits<double>::quiet_NaN();
      pt.error = e.what();
    } catch (const InfeasibilityError& e) {
      pt.P2 = pt.I2 = pt.Pb2 = pt.relative_gain = std::numeric_limits<double>::quiet_NaN();
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].error.empty() && out[i - 1].error.empty() &&
        out[i].P2 < out[i - 1].P2 - 1e-6) {
      out[i].error = "P2 not monotone non-decreasing at this point";
    }
  }
  return out;
}

}  // namespace bb84
