// gates.cpp
#include "epr/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace epr {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Wrap an angle difference into (-pi, pi].
double wrap_pi(double x) {
  x = std::fmod(x, two_pi);
  if (x > std::numbers::pi) x -= two_pi;
  if (x <= -std::numbers::pi) x += two_pi;
  return x;
}

void check_qubit_index(int j) {
  if (j != 1 && j != 2) throw std::invalid_argument("qubit index must be 1 or 2");
}

// Place a single-qubit operator on qubit j.
Mat4 on_qubit(const Mat2& a, int j) {
  return j == 1 ? kron(a, id2()) : kron(id2(), a);
}

// a acting on qubit j tensored with the control projector |c><c| on qubit k.
Mat4 controlled_block(const Mat2& a, int j, int control_state) {
  Mat2 proj = Mat2::Zero();
  proj(control_state, control_state) = 1.0;
  return j == 1 ? kron(a, proj) : kron(proj, a);
}

}  // namespace

DurationSolution solve_commensurate(const std::vector<double>& omegas,
                                    const std::vector<double>& targets,
                                    long bound, double tol) {
  if (omegas.empty() || omegas.size() != targets.size())
    throw std::invalid_argument("solve_commensurate: need matching omega/target lists");
  std::size_t base = 0;
  for (std::size_t i = 1; i < omegas.size(); ++i)
    if (std::abs(omegas[i]) > std::abs(omegas[base])) base = i;
  if (omegas[base] <= 0.0)
    throw std::invalid_argument("solve_commensurate: need a positive frequency");

  double best_residual = std::numeric_limits<double>::infinity();
  const long k0 = targets[base] > 0.0 ? 0 : 1;
  for (long k = k0; k <= bound; ++k) {
    const double t = (targets[base] + two_pi * static_cast<double>(k)) / omegas[base];
    DurationSolution sol;
    sol.t_ns = t;
    double worst = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const double phase = omegas[i] * t;
      const double res = wrap_pi(phase - targets[i]);
      sol.residuals.push_back(std::abs(res));
      sol.indices.push_back(std::lround((phase - targets[i]) / two_pi));
      worst = std::max(worst, std::abs(res));
    }
    if (worst <= tol) return sol;
    best_residual = std::min(best_residual, worst);
  }
  throw NoCommensurateSolution(
      "solve_commensurate: no solution within " + std::to_string(bound) +
      " periods (best residual " + std::to_string(best_residual) + " rad)");
}

Propagator u_free(double e12_uev, double tau_ns) {
  const double a0 = e12_uev * tau_ns / hbar_uev_ns;
  const cd minus(std::cos(a0), -std::sin(a0));
  const cd plus = std::conj(minus);
  Propagator p;
  p.matrix = Mat4::Zero();
  p.matrix(0, 0) = minus;
  p.matrix(1, 1) = plus;
  p.matrix(2, 2) = plus;
  p.matrix(3, 3) = minus;
  p.source = "free";
  p.params.e12_uev = e12_uev;
  p.duration_ns = tau_ns;
  return p;
}

Propagator u_co_general(double ej_uev, double e12_uev, double t_ns) {
  const double omega = std::hypot(ej_uev, e12_uev);
  const double th = t_ns * omega / hbar_uev_ns;
  // sin(th)/omega with the omega -> 0 limit.
  const double sinc = omega > 0.0 ? std::sin(th) / omega : t_ns / hbar_uev_ns;
  const double phi = t_ns * e12_uev / hbar_uev_ns;
  const cd ephi(std::cos(phi), -std::sin(phi));  // e^{-i t E12 / hbar}

  const cd d = cd(std::cos(th), 0) - cd(0, 1) * e12_uev * sinc;
  const cd a = d + ephi;
  const cd b = cd(0, 1) * ej_uev * sinc;
  const cd c = d - ephi;

  Propagator p;
  p.matrix << a, b, b, c,
              b, std::conj(a), std::conj(c), b,
              b, std::conj(c), std::conj(a), b,
              c, b, b, a;
  p.matrix *= 0.5;
  p.source = "co";
  p.params.ej1_uev = ej_uev;
  p.params.ej2_uev = ej_uev;
  p.params.e12_uev = e12_uev;
  p.duration_ns = t_ns;
  return p;
}

Mat4 co_special_matrix() {
  const cd p(1, 1), m(1, -1);
  Mat4 u;
  u << m, 0, 0, p,
       0, p, m, 0,
       0, m, p, 0,
       p, 0, 0, m;
  return 0.5 * u;
}

std::pair<Propagator, DurationSolution> u_co_special(double ej_uev, double e12_uev,
                                                     long bound, double tol) {
  if (ej_uev <= 0.0 || e12_uev <= 0.0)
    throw std::invalid_argument("u_co_special: need positive ej and e12");
  const double omega = std::hypot(ej_uev, e12_uev);
  const DurationSolution sol = solve_commensurate(
      {omega / hbar_uev_ns, e12_uev / hbar_uev_ns},
      {0.0, std::numbers::pi / 2.0}, bound, tol);
  Propagator p = u_co_general(ej_uev, e12_uev, sol.t_ns);
  p.source = "co_special";
  return {p, sol};
}

Propagator u_cj(const EffectiveParams& ep, int j, double t_ns) {
  check_qubit_index(j);
  const double ec_k = j == 1 ? ep.ec2_uev : ep.ec1_uev;
  const double ej_k = j == 1 ? ep.ej2_uev : ep.ej1_uev;
  const double scale = std::max({1.0, std::abs(ep.ec1_uev), std::abs(ep.ec2_uev),
                                 std::abs(ep.ej1_uev), std::abs(ep.ej2_uev),
                                 std::abs(ep.e12_uev)});
  if (std::abs(ec_k) > 1e-12 * scale || std::abs(ej_k) > 1e-12 * scale)
    throw std::invalid_argument("u_cj: spectator qubit must have ec = ej = 0");

  const double ec_j = j == 1 ? ep.ec1_uev : ep.ec2_uev;
  const double ej_j = j == 1 ? ep.ej1_uev : ep.ej2_uev;

  Propagator p;
  p.matrix = Mat4::Zero();
  // Spectator state |c> shifts the driven qubit's z component by +-e12.
  for (int c = 0; c < 2; ++c) {
    const double sgn = c == 0 ? +1.0 : -1.0;
    const double hz = 0.5 * ec_j + sgn * ep.e12_uev;
    const double hx = 0.5 * ej_j;
    const double lambda = std::hypot(hz, hx);
    const double th = t_ns * lambda / hbar_uev_ns;
    const double cos_alpha = lambda > 0.0 ? hz / lambda : 1.0;
    const double sin_alpha = lambda > 0.0 ? hx / lambda : 0.0;
    const cd mu = cd(std::cos(th), 0) - cd(0, 1) * cos_alpha * std::sin(th);
    const cd nu = cd(0, 1) * sin_alpha * std::sin(th);
    Mat2 block;
    block << mu, nu, nu, std::conj(mu);
    p.matrix += controlled_block(block, j, c);
  }
  p.source = "cj";
  p.params = ep;
  p.duration_ns = t_ns;
  return p;
}

Mat4 conditional_rotation_matrix(int j, int sign, double theta) {
  check_qubit_index(j);
  if (sign == 0) throw std::invalid_argument("conditional rotation: sign must be nonzero");
  const int active_control = sign > 0 ? 1 : 0;
  Mat2 rot;
  rot << std::cos(theta), cd(0, 1) * std::sin(theta),
         cd(0, 1) * std::sin(theta), std::cos(theta);
  return controlled_block(Mat2::Identity(), j, 1 - active_control) +
         controlled_block(rot, j, active_control);
}

ConditionalGate u_conditional(int j, int sign, double theta, double e12_uev) {
  check_qubit_index(j);
  if (!(theta > 0.0 && theta < two_pi))
    throw std::invalid_argument("u_conditional: theta must lie in (0, 2pi)");
  if (e12_uev <= 0.0)
    throw std::invalid_argument("u_conditional: need positive e12");

  const long m = 1;
  const double frac = theta / (two_pi * static_cast<double>(m));
  const double ej = 2.0 * e12_uev * (theta / (std::numbers::pi * m)) /
                    std::sqrt(1.0 - frac * frac);
  const double lambda = std::hypot(2.0 * e12_uev, 0.5 * ej);
  const double t = two_pi * static_cast<double>(m) * hbar_uev_ns / lambda;

  ConditionalGate gate;
  gate.qubit = j;
  gate.sign = sign > 0 ? +1 : -1;
  gate.theta = theta;
  gate.params.e12_uev = e12_uev;
  if (j == 1) {
    gate.params.ej1_uev = ej;
    gate.params.ec1_uev = gate.sign * 2.0 * e12_uev;
  } else {
    gate.params.ej2_uev = ej;
    gate.params.ec2_uev = gate.sign * 2.0 * e12_uev;
  }
  gate.timing.t_ns = t;
  gate.timing.indices = {m};
  gate.timing.residuals = {std::abs(wrap_pi(t * lambda / hbar_uev_ns)),
                           std::abs(t * ej / (2.0 * hbar_uev_ns) - theta)};

  gate.propagator = u_cj(gate.params, j, t);
  gate.propagator.source = gate.sign > 0 ? "conditional_plus" : "conditional_minus";
  return gate;
}

Mat4 jbar_matrix(double alpha, double psi, int j) {
  check_qubit_index(j);
  const cd zeta = cd(std::cos(psi), 0) - cd(0, 1) * std::cos(alpha) * std::sin(psi);
  const cd xi = cd(0, 1) * std::sin(alpha) * std::sin(psi);
  Mat2 b;
  b << zeta, 0, 0, std::conj(zeta);
  Mat2 bstar;
  bstar << std::conj(zeta), 0, 0, zeta;
  Mat2 flip = Mat2::Zero();
  flip(0, 1) = xi;
  flip(1, 0) = xi;
  return controlled_block(b, j, 0) + controlled_block(bstar, j, 1) +
         on_qubit(flip, j);
}

Propagator u_j_bar(double ej_j_uev, double e12_uev, double t_ns, int j) {
  check_qubit_index(j);
  const double gamma = std::hypot(e12_uev, 0.5 * ej_j_uev);
  const double alpha = std::atan2(0.5 * ej_j_uev, e12_uev);
  const double psi = gamma * t_ns / hbar_uev_ns;
  Propagator p;
  p.matrix = jbar_matrix(alpha, psi, j);
  p.source = "jbar";
  p.params.e12_uev = e12_uev;
  if (j == 1)
    p.params.ej1_uev = ej_j_uev;
  else
    p.params.ej2_uev = ej_j_uev;
  p.duration_ns = t_ns;
  return p;
}

Mat4 hadamard_like_matrix(int j) {
  check_qubit_index(j);
  const Mat4 szsz = kron(pauli_z(), pauli_z());
  const Mat4 sxj = on_qubit(pauli_x(), j);
  return cd(0, 1) / std::sqrt(2.0) * (-szsz + sxj);
}

std::pair<Propagator, DurationSolution> u_j_bar_special(int j, double e12_uev) {
  if (e12_uev <= 0.0)
    throw std::invalid_argument("u_j_bar_special: need positive e12");
  const double ej = 2.0 * e12_uev;
  const double gamma = std::hypot(e12_uev, 0.5 * ej);  // sqrt(2) e12
  // sin(gamma t / hbar) = 1 at the first quarter period.
  const double t = 0.5 * std::numbers::pi * hbar_uev_ns / gamma;
  DurationSolution sol;
  sol.t_ns = t;
  sol.indices = {0};
  sol.residuals = {std::abs(gamma * t / hbar_uev_ns - 0.5 * std::numbers::pi)};
  Propagator p = u_j_bar(ej, e12_uev, t, j);
  p.source = "jbar_special";
  return {p, sol};
}

}  // namespace epr
