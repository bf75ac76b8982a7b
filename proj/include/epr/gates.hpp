// gates.hpp — analytic two-qubit propagators of the coupled charge-qubit pair
// and the duration/parameter solvers that realize the special operating points.
//
// All matrices act on the |00>,|01>,|10>,|11> basis (first label = qubit 1)
// and are exact closed forms of exp(-i H t / hbar) for the stated parameter
// regime; `expm_unitary` is the reference oracle in the tests.
#pragma once

#include "epr/circuit.hpp"
#include "epr/numerics.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace epr {

// A propagator together with the parameters and duration that produced it.
struct Propagator {
  Mat4 matrix = Mat4::Identity();
  std::string source;          // which closed form: "free", "co", "cj", ...
  EffectiveParams params;
  double duration_ns = 0.0;
};

// Solution of a simultaneous phase-matching problem: the chosen duration,
// the integer winding indices per condition, and the phase residuals (rad).
struct DurationSolution {
  double t_ns = 0.0;
  std::vector<long> indices;
  std::vector<double> residuals;
};

class NoCommensurateSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Smallest t > 0 with omega_i * t = target_i (mod 2pi) for every i, within
// `tol` radians, searched over up to `bound` periods of the fastest
// frequency.  omegas in rad/ns, targets in [0, 2pi).  Throws
// NoCommensurateSolution when the search bound is exhausted.
DurationSolution solve_commensurate(const std::vector<double>& omegas,
                                    const std::vector<double>& targets,
                                    long bound = 10000, double tol = 1e-9);

// ---------- diagonal (interaction-only) evolution ----------

// E_C = E_J = 0 on both qubits: diag(e^{-i a0}, e^{i a0}, e^{i a0}, e^{-i a0})
// with a0 = e12 * tau / hbar.
Propagator u_free(double e12_uev, double tau_ns);

// ---------- co-resonance (both qubits tunneling, E_C = 0) ----------

// Common Josephson energy ej on both qubits, charging energies zero.
Propagator u_co_general(double ej_uev, double e12_uev, double t_ns);

// Duration solved so that cos(t*Omega/hbar) = 1 and sin(t*E12/hbar) = 1,
// which turns the co-resonance evolution into the fixed entangling unitary
// returned by co_special_matrix().  Requires a commensurate Omega/E12 ratio.
std::pair<Propagator, DurationSolution> u_co_special(double ej_uev, double e12_uev,
                                                     long bound = 10000,
                                                     double tol = 1e-9);

// (1/2) [[1-i,0,0,1+i],[0,1+i,1-i,0],[0,1-i,1+i,0],[1+i,0,0,1-i]].
Mat4 co_special_matrix();

// ---------- one qubit driven, the other purely charge-like ----------

// General conditional evolution with qubit j driven (ec_j, ej_j free) and
// qubit k != j inert (requires ep.ec_k == ep.ej_k == 0): the inert qubit's
// charge state splits the driven qubit's rotation axis.
Propagator u_cj(const EffectiveParams& ep, int j, double t_ns);

// ---------- conditional rotations (controlled one-qubit gates) ----------

// Ideal conditional rotation on target qubit j: identity when the control
// qubit k is in state (sign>0 ? |0> : |1>), and cos(theta) I + i sin(theta)
// sigma_x on the target otherwise.  sign > 0 triggers on control = 1 and
// needs ec_j = +2 e12; sign < 0 triggers on control = 0 and needs
// ec_j = -2 e12.
Mat4 conditional_rotation_matrix(int j, int sign, double theta);

struct ConditionalGate {
  Propagator propagator;
  EffectiveParams params;      // solved operating point (ec_j, ej_j, e12)
  DurationSolution timing;
  int qubit = 1;
  int sign = +1;
  double theta = 0.0;
};

// Solves ej_j and t jointly so that theta = t*ej_j/(2 hbar) while the
// passive branch winds by an exact multiple of 2pi:
//   t = 2 pi m hbar / lambda_j,  lambda_j = sqrt((2 e12)^2 + (ej_j/2)^2),
//   ej_j = 2 e12 (theta/(pi m)) / sqrt(1 - (theta/(2 pi m))^2),  m = 1.
// theta must lie in (0, 2pi).
ConditionalGate u_conditional(int j, int sign, double theta, double e12_uev);

// ---------- single-qubit tunneling with pure interaction background ----------

// Qubit j tunneling (ej_j), everything else zero: conditional-phase/flip
// mixture, periodic in t with period 2 pi hbar / gamma_j,
// gamma_j = sqrt(e12^2 + (ej_j/2)^2).
Propagator u_j_bar(double ej_j_uev, double e12_uev, double t_ns, int j);

// Core of u_j_bar parameterized by the mixing angle alpha (cos alpha =
// e12/gamma) and the rotation angle psi = gamma*t/hbar.  Exposed because the
// Bell-test encoding is specified directly in terms of these angles.
Mat4 jbar_matrix(double alpha, double psi, int j);

// Operating point ej_j = 2 e12 with sin(gamma_j t / hbar) = 1: the evolution
// becomes (i/sqrt(2)) (-sz_j sz_k + sx_j), the tomography pre-rotation.
std::pair<Propagator, DurationSolution> u_j_bar_special(int j, double e12_uev);

Mat4 hadamard_like_matrix(int j);

}  // namespace epr
