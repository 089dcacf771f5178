#pragma once

#include <utility>

#include "bb84/gram.hpp"

namespace bb84 {

/// Symmetric single-qubit attack. Two free parameters (D, D1) determine the
/// whole family: F = 1 - D and F - D = F1 + D1.
struct IncoherentParams {
  double D = 0.0;   // disturbance, <E01|E01>
  double D1 = 0.0;  // <E01|E10>
  double F = 1.0;   // fidelity, <E00|E00>
  double F1 = 1.0;  // <E00|E11>
  double cos_alpha = 1.0;  // F1/F, 0 when F = 0
  double cos_beta = 0.0;   // D1/D, 0 when D = 0
};

struct AttackMetrics {
  double disturbance;
  double eve_information;  // bits
  double eve_success;
  double bob_information;  // bits
  double bob_success;
};

/// Build and validate attack parameters; rejects pairs whose 4x4 Gram is not
/// PSD (|D1| > D or |F1| > F).
IncoherentParams new_params(double D, double D1);

/// The alpha = beta attack, D1 = D(1-2D); maximizes both Eve metrics at fixed
/// disturbance. Defined for D in [0, 1/2].
IncoherentParams optimal_attack(double D);

/// Eve's information gain in bits: 1 + F*h(P_alpha) + D*h(P_beta) with
/// h the signed binary entropy and P_gamma = (1 + sin gamma)/2.
double eve_information(const IncoherentParams& p);

/// Eve's probability of guessing Alice's bit: F*P_alpha + D*P_beta.
double eve_success(const IncoherentParams& p);

/// Bob's (information in bits, success probability) at disturbance D.
std::pair<double, double> bob_metrics(double D);

AttackMetrics attack_metrics(const IncoherentParams& p);

/// 4x4 Gram over (E00, E01, E10, E11).
GramMatrix gram4(const IncoherentParams& p);

/// Bell-CHSH statistic S = 2*sqrt(2)*cos(alpha); S = 2 at alpha = pi/4.
double chsh_parameter(double cos_alpha);

/// Diagnostic: eve_information(optimal_attack(D)) / D. Approaches 2/ln(2)
/// bits per unit disturbance as D -> 0.
double optimal_information_slope(double D);

}  // namespace bb84
