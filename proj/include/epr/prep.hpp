// prep.hpp — deterministic Bell-pair preparation from |00> using two
// conditional-rotation pulses, plus state/fidelity helpers.
#pragma once

#include "epr/gates.hpp"
#include "epr/numerics.hpp"

#include <string>
#include <vector>

namespace epr {

enum class BellLabel { psi_plus, psi_minus, phi_plus, phi_minus };

std::string to_string(BellLabel label);
BellLabel bell_label_from_string(const std::string& name);

// psi_pm = (|00> +- |11>)/sqrt(2),  phi_pm = (|01> +- |10>)/sqrt(2).
Vec4 bell_state(BellLabel label);
Vec4 ground_state();

Mat4 density(const Vec4& psi);

// tr(rho_a rho_b); equals |<a|b>|^2 when both are pure.  Inputs must be
// Hermitian with unit trace and eigenvalues >= -1e-8.
double state_fidelity(const Mat4& rho_a, const Mat4& rho_b);
double state_fidelity(const Vec4& a, const Vec4& b);

struct PulseStep {
  ConditionalGate gate;
};

struct PulseSequence {
  BellLabel target = BellLabel::psi_plus;
  std::vector<PulseStep> steps;
  Mat4 total() const;
};

struct BellPreparation {
  PulseSequence sequence;
  Vec4 state;          // the state actually produced from |00>
  double fidelity = 0.0;
};

// Two-pulse preparation at interbit coupling e12: a minus-rotation on qubit 1
// with sin(theta1) = 1/sqrt(2) creates (|00> +- i|10>)/sqrt(2); a pi/2
// conditional rotation on qubit 2 (minus for phi targets, plus for psi
// targets) completes the pair.  The theta1 branch is selected by simulating
// the candidates {pi/4, 3pi/4, 5pi/4, 7pi/4} and keeping the first that
// reaches the target with fidelity >= 1 - 1e-9.
BellPreparation prepare_bell(BellLabel target, double e12_uev);

}  // namespace epr
