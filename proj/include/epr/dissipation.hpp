// dissipation.hpp — spin-boson bath with capacitive crosstalk, Bloch-Redfield
// tensor in the system eigenbasis, deterministic master-equation propagation,
// Wootters concurrence, and exponential decay-rate extraction.
//
// Unit conventions: Hamiltonians in ueV, times at this interface in seconds,
// angular frequencies in rad/s, rates in 1/s.
#pragma once

#include "epr/numerics.hpp"

#include <array>
#include <utility>
#include <vector>

namespace epr {

struct BathSpec {
  double eta = 1.8e-3;              // dimensionless Ohmic strength
  double omega_c_rad_per_s = 1e13;  // Drude cutoff
  double temperature_k = 0.01;
  double gamma_phi_per_s = 1e7;     // zero-frequency (1/f) dephasing rate
  double beta_xt = 0.1;             // bath-2 crosstalk onto qubit 1
  double gamma_xt = 0.1;            // bath-1 crosstalk onto qubit 2
  bool lamb_shift = false;          // include principal-value level shifts

  // Throws std::invalid_argument on eta < 0, omega_c <= 0, T <= 0,
  // gamma_phi < 0.
  void validate() const;
};

// Bath coupling operators grouped per bath:
//   A1 = sz_1 + gamma_xt sz_2,  A2 = sz_2 + beta_xt sz_1.
std::pair<Mat4, Mat4> coupling_operators(const BathSpec& spec);

// Noise power in rate units (1/s) entering the Golden-Rule rates:
//   omega != 0: eta |omega| wc^2/(wc^2+omega^2) [coth(hbar|omega|/2kT) + sgn]
//   omega == 0: the Ohmic limit 2 eta kT/hbar plus the zero-frequency spike
//               gamma_phi/2, calibrated so an isolated qubit with unit sz
//               coupling dephases at exactly gamma_phi.
double spectral_function(const BathSpec& spec, double omega_rad_per_s);

struct RedfieldTensor {
  HermitianEig<4> eigen;                      // eigenbasis of H
  Eigen::Matrix<double, 4, 4> omega_rad_per_s;  // Bohr frequencies w_nm
  std::array<cd, 256> r{};                    // R_{nmkl}, 1/s

  cd at(int n, int m, int k, int l) const {
    return r[static_cast<std::size_t>(((n * 4 + m) * 4 + k) * 4 + l)];
  }
  cd& at(int n, int m, int k, int l) {
    return r[static_cast<std::size_t>(((n * 4 + m) * 4 + k) * 4 + l)];
  }

  // Generator of d vec(rho)/dt = L vec(rho) in the eigenbasis, row-major
  // vec index n*4 + m:  L = -i diag(w_nm) - R.
  Mat16 generator() const;
};

// Builds the tensor in the eigenbasis of h (ueV).  Real Golden-Rule parts are
// exact; imaginary (level-shift) parts come from a principal-value quadrature
// over the Ohmic spectrum when spec.lamb_shift is set, else are dropped.
RedfieldTensor build_redfield(const Mat4& h_uev, const BathSpec& spec);

struct Trajectory {
  std::vector<double> times_s;
  std::vector<Mat4> states;          // computational basis
  std::vector<double> concurrences;
};

// Integrates the master equation on the monotone grid (seconds) with a
// fixed-step classical 4th-order one-step transfer matrix, step bounded by
// 1/50 of the fastest timescale, binary-powered across each grid interval.
// Throws std::runtime_error if an interval would need more than 2^31 steps.
Trajectory evolve(const Mat4& rho0, const Mat4& h_uev, const BathSpec& spec,
                  const std::vector<double>& t_grid_s);

// Wootters concurrence max{0, l1 - l2 - l3 - l4} with the l_i the descending
// square-rooted eigenvalues of rho (sy x sy) rho* (sy x sy).
double concurrence(const Mat4& rho);

struct RateFit {
  double a_per_s = 0.0;       // C(t) ~ exp(-A t)
  double r_squared = 0.0;
  double window_t_min_s = 0.0;
  double window_t_max_s = 0.0;
  int points_used = 0;
  bool exponential = false;   // r_squared >= 0.99
};

// Least-squares fit of ln C versus t over the grid points with
// C in [0.05, 0.95].  Requires at least 10 points with C > 1e-6 and at
// least 3 points inside the fit window; throws std::invalid_argument
// otherwise.  A poor fit (r^2 < 0.99) is reported via `exponential`.
RateFit fit_decay(const Trajectory& traj);

}  // namespace epr
