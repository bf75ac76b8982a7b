// circuit.hpp — reduction of the physical two-box circuit (junction energies,
// capacitances, gate voltages, SQUID fluxes) to the effective two-qubit
// Hamiltonian parameters, plus the charge-regime validity checks.
#pragma once

#include "epr/numerics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace epr {

struct PhysicalCircuitParams {
  double eps_j1_uev = 27.5;   // single-junction Josephson energy, box 1
  double eps_j2_uev = 27.5;
  double c_sigma1_ff = 0.6;   // total box capacitances
  double c_sigma2_ff = 0.6;
  double c_m_ff = 0.03;       // coupling capacitance
  double c_g1_ff = 0.6e-3;    // gate capacitances
  double c_g2_ff = 0.6e-3;
  double v1_uv = 0.0;         // gate voltages
  double v2_uv = 0.0;
  double phi1_phi0 = 0.0;     // SQUID fluxes in units of the flux quantum
  double phi2_phi0 = 0.0;
  double temperature_k = 0.01;
  // When set, the offset charges are taken directly instead of C_g V / 2e.
  std::optional<double> ng1_override;
  std::optional<double> ng2_override;

  double ng1() const;
  double ng2() const;
  // Determinant-style denominator C_sigma1 C_sigma2 - C_m^2 (fF^2).
  double c_det_ff2() const;
};

// Effective parameters of H = sum_j (ec_j sz_j - ej_j sx_j)/2 + e12 sz_1 sz_2.
struct EffectiveParams {
  double ec1_uev = 0.0;
  double ec2_uev = 0.0;
  double ej1_uev = 0.0;
  double ej2_uev = 0.0;
  double e12_uev = 0.0;
};

// Box charging energies and the interbit coupling derived from the circuit,
// reported alongside the effective parameters.
struct DerivedEnergies {
  EffectiveParams effective;
  double ec_box1_uev = 0.0;  // E_C1 = 4 e^2 C_sigma2 / (C_sigma1 C_sigma2 - C_m^2)
  double ec_box2_uev = 0.0;
  double em_uev = 0.0;       // E_m = 4 e^2 C_m / (...)
};

// Circuit reduction.  Throws std::invalid_argument if the capacitance
// denominator is not positive.
DerivedEnergies derive_effective(const PhysicalCircuitParams& p);

// The 4x4 effective Hamiltonian in the |00>,|01>,|10>,|11> basis (ueV).
Mat4 build_hamiltonian(const EffectiveParams& ep);

// Charge-regime inequality chain k_B T << eps_J << E_C << Delta per box,
// with "<<" read as a factor of at least 5.  Returns human-readable warning
// strings; never throws for violations.
std::vector<std::string> validate_charge_regime(const PhysicalCircuitParams& p,
                                                double delta_gap_uev);

}  // namespace epr
