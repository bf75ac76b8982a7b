// chsh.hpp — quasi-local encoding of measurement settings into a prepared
// Bell pair, correlation functions (closed form, exact matrix, counted),
// concurrence degradation of the encoding, and the CHSH test.
#pragma once

#include "epr/numerics.hpp"
#include "epr/prep.hpp"

#include <array>
#include <cstdint>

namespace epr {

// One choice of encoding phases at a fixed coupling ratio.  The mixing angle
// alpha obeys cos(alpha) = e12/gamma with gamma = sqrt(e12^2 + (ej/2)^2) and
// e12 = em/4, so em_over_ej alone fixes alpha.
struct EncodingSetting {
  double phi1_rad = 0.0;
  double phi2_rad = 0.0;
  double alpha_rad = 0.0;
  double em_over_ej = 0.0;

  static EncodingSetting make(double em_over_ej, double phi1_rad,
                              double phi2_rad);
};

// U = U2(phi2) U1(phi1), each pulse a single-qubit tunneling propagator with
// rotation angle psi_j = phi_j/2 (phi_j = 2 gamma_j t_j / hbar).  Negative
// phases reuse the same closed form — the unitary equals the one reached by
// adding a full period to the physical duration.
Mat4 encoding_unitary(const EncodingSetting& setting);

Mat4 encode(const Mat4& rho, const EncodingSetting& setting);

// Closed form cos^2(alpha) + sin^2(alpha) cos(phi1 + phi2); equals the exact
// matrix expectation tr(U rho U+ sz x sz) for a psi_+ input.
double correlation_theory(const EncodingSetting& setting);

// tr(rho sz x sz) of an encoded state.
double correlation_matrix(const Mat4& rho_encoded);

// Entanglement loss of the encoding, from the printed closed form
//   1 - sqrt(1 - [sin(2 alpha) (1 - cos(2 phi1 + 2 phi2)) / 2]^2)
// and from the direct definition 1 - C(encode(Bell)).  The two disagree for
// some phase choices (the closed form's own reference table is internally
// inconsistent); both are reported, neither is reconciled.
double delta_concurrence(const EncodingSetting& setting);
double delta_concurrence_direct(const EncodingSetting& setting,
                                BellLabel input = BellLabel::psi_plus);

struct CorrelationRecord {
  double phi1_rad = 0.0;
  double phi2_rad = 0.0;
  double e_theory = 0.0;
  bool counted = false;
  double e_counted = 0.0;
  long n_same = 0;
  long n_diff = 0;
};

// Samples `shots` projective outcomes from the encoded state's diagonal and
// counts same vs different logic states: E = (N_same - N_diff) / shots.
CorrelationRecord correlation_counted(const Mat4& rho_encoded, long shots,
                                      std::uint64_t seed);

struct AngleSet {
  double phi1_rad;
  double phi1_prime_rad;
  double phi2_rad;
  double phi2_prime_rad;
};

// The reference setting {phi, phi'} = {-pi/8, 3pi/8} on both sides.
AngleSet default_angles();

struct CHSHResult {
  // Order: (phi1,phi2), (phi1',phi2), (phi1,phi2'), (phi1',phi2').
  std::array<CorrelationRecord, 4> records;
  double f = 0.0;           // |E1 + E2 + E3 - E4| from e_theory
  bool violated = false;    // f > 2
  bool has_counted = false;
  double f_counted = 0.0;
};

// Prepares the Bell input analytically, encodes each of the four settings,
// and assembles f.  shots > 0 adds counted correlations with one split RNG
// stream per setting.
CHSHResult chsh_test(double em_over_ej, const AngleSet& angles,
                     BellLabel input = BellLabel::psi_plus, long shots = 0,
                     std::uint64_t seed = 0);

// Exhaustive maximum of f over the 16 deterministic local hidden-variable
// strategies (each side assigns +-1 to each of its two settings); always 2,
// independent of the angles.
double classical_bound();

}  // namespace epr
