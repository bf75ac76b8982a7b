// circuit.cpp
#include "epr/circuit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epr {

double PhysicalCircuitParams::ng1() const {
  if (ng1_override) return *ng1_override;
  return c_g1_ff * v1_uv / (2.0 * e_per_fF_uV);
}

double PhysicalCircuitParams::ng2() const {
  if (ng2_override) return *ng2_override;
  return c_g2_ff * v2_uv / (2.0 * e_per_fF_uV);
}

double PhysicalCircuitParams::c_det_ff2() const {
  return c_sigma1_ff * c_sigma2_ff - c_m_ff * c_m_ff;
}

DerivedEnergies derive_effective(const PhysicalCircuitParams& p) {
  const double det = p.c_det_ff2();
  if (det <= 0.0)
    throw std::invalid_argument(
        "derive_effective: C_sigma1 C_sigma2 - C_m^2 must be positive");

  DerivedEnergies d;
  d.ec_box1_uev = 4.0 * e2_per_fF_uev * p.c_sigma2_ff / det;
  d.ec_box2_uev = 4.0 * e2_per_fF_uev * p.c_sigma1_ff / det;
  d.em_uev = 4.0 * e2_per_fF_uev * p.c_m_ff / det;

  const double ng1 = p.ng1();
  const double ng2 = p.ng2();

  EffectiveParams& ep = d.effective;
  ep.ej1_uev = 2.0 * p.eps_j1_uev * std::cos(std::numbers::pi * p.phi1_phi0);
  ep.ej2_uev = 2.0 * p.eps_j2_uev * std::cos(std::numbers::pi * p.phi2_phi0);
  ep.ec1_uev = d.ec_box1_uev * (ng1 - 0.5) + d.em_uev * (ng2 / 2.0 - 0.25);
  ep.ec2_uev = d.ec_box2_uev * (ng2 - 0.5) + d.em_uev * (ng1 / 2.0 - 0.25);
  ep.e12_uev = d.em_uev / 4.0;
  return d;
}

Mat4 build_hamiltonian(const EffectiveParams& ep) {
  const Mat4 sz1 = kron(pauli_z(), id2());
  const Mat4 sz2 = kron(id2(), pauli_z());
  const Mat4 sx1 = kron(pauli_x(), id2());
  const Mat4 sx2 = kron(id2(), pauli_x());
  const Mat4 szsz = kron(pauli_z(), pauli_z());
  return 0.5 * (ep.ec1_uev * sz1 - ep.ej1_uev * sx1) +
         0.5 * (ep.ec2_uev * sz2 - ep.ej2_uev * sx2) + ep.e12_uev * szsz;
}

namespace {

void check_much_less(double lhs, double rhs, const char* lhs_name,
                     const char* rhs_name, std::vector<std::string>& warnings) {
  if (!(5.0 * lhs <= rhs)) {
    warnings.push_back(std::string(lhs_name) + " = " + std::to_string(lhs) +
                       " ueV is not well below " + rhs_name + " = " +
                       std::to_string(rhs) + " ueV (need a factor of 5)");
  }
}

}  // namespace

std::vector<std::string> validate_charge_regime(const PhysicalCircuitParams& p,
                                                double delta_gap_uev) {
  std::vector<std::string> warnings;
  const double kt = kb_uev_per_K * p.temperature_k;
  const DerivedEnergies d = derive_effective(p);
  check_much_less(kt, p.eps_j1_uev, "k_B T", "eps_J1", warnings);
  check_much_less(kt, p.eps_j2_uev, "k_B T", "eps_J2", warnings);
  check_much_less(p.eps_j1_uev, d.ec_box1_uev, "eps_J1", "E_C1", warnings);
  check_much_less(p.eps_j2_uev, d.ec_box2_uev, "eps_J2", "E_C2", warnings);
  check_much_less(d.ec_box1_uev, delta_gap_uev, "E_C1", "Delta", warnings);
  check_much_less(d.ec_box2_uev, delta_gap_uev, "E_C2", "Delta", warnings);
  return warnings;
}

}  // namespace epr
