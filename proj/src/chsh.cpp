// chsh.cpp — encoding pulses, correlations, and the CHSH function.
#include "epr/chsh.hpp"

#include "epr/dissipation.hpp"
#include "epr/gates.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace epr {

EncodingSetting EncodingSetting::make(double em_over_ej, double phi1_rad,
                                      double phi2_rad) {
  if (em_over_ej <= 0.0)
    throw std::invalid_argument("encoding: em_over_ej must be positive");
  EncodingSetting s;
  s.em_over_ej = em_over_ej;
  s.phi1_rad = phi1_rad;
  s.phi2_rad = phi2_rad;
  // ej = 1, e12 = em/4 in arbitrary common units; only the ratio matters.
  s.alpha_rad = std::atan2(0.5, em_over_ej / 4.0);
  return s;
}

Mat4 encoding_unitary(const EncodingSetting& setting) {
  return jbar_matrix(setting.alpha_rad, 0.5 * setting.phi2_rad, 2) *
         jbar_matrix(setting.alpha_rad, 0.5 * setting.phi1_rad, 1);
}

Mat4 encode(const Mat4& rho, const EncodingSetting& setting) {
  const Mat4 u = encoding_unitary(setting);
  return u * rho * u.adjoint();
}

double correlation_theory(const EncodingSetting& setting) {
  const double c = std::cos(setting.alpha_rad);
  const double s = std::sin(setting.alpha_rad);
  return c * c + s * s * std::cos(setting.phi1_rad + setting.phi2_rad);
}

double correlation_matrix(const Mat4& rho_encoded) {
  const Mat4 szsz = kron(pauli_z(), pauli_z());
  return (rho_encoded * szsz).trace().real();
}

double delta_concurrence(const EncodingSetting& setting) {
  const double bracket =
      std::sin(2.0 * setting.alpha_rad) *
      (1.0 - std::cos(2.0 * setting.phi1_rad + 2.0 * setting.phi2_rad)) / 2.0;
  return 1.0 - std::sqrt(std::max(0.0, 1.0 - bracket * bracket));
}

double delta_concurrence_direct(const EncodingSetting& setting,
                                BellLabel input) {
  const Mat4 rho = encode(density(bell_state(input)), setting);
  return 1.0 - concurrence(rho);
}

CorrelationRecord correlation_counted(const Mat4& rho_encoded, long shots,
                                      std::uint64_t seed) {
  if (shots < 1)
    throw std::invalid_argument("correlation_counted: shots must be >= 1");
  double p[4];
  double total = 0.0;
  for (int b = 0; b < 4; ++b) {
    p[b] = std::max(0.0, rho_encoded(b, b).real());
    total += p[b];
  }
  if (total <= 0.0)
    throw std::invalid_argument("correlation_counted: invalid diagonal");

  std::mt19937_64 gen(seed);
  CorrelationRecord rec;
  rec.counted = true;
  for (long i = 0; i < shots; ++i) {
    const double u = canonical_uniform(gen()) * total;
    double acc = 0.0;
    int outcome = 3;
    for (int b = 0; b < 4; ++b) {
      acc += p[b];
      if (u < acc) {
        outcome = b;
        break;
      }
    }
    // |00> and |11> are the "same logic state" events.
    if (outcome == 0 || outcome == 3)
      ++rec.n_same;
    else
      ++rec.n_diff;
  }
  rec.e_counted = static_cast<double>(rec.n_same - rec.n_diff) /
                  static_cast<double>(shots);
  return rec;
}

AngleSet default_angles() {
  const double pi = std::numbers::pi;
  return {-pi / 8.0, 3.0 * pi / 8.0, -pi / 8.0, 3.0 * pi / 8.0};
}

CHSHResult chsh_test(double em_over_ej, const AngleSet& angles,
                     BellLabel input, long shots, std::uint64_t seed) {
  const Mat4 rho = density(bell_state(input));
  const double pairs[4][2] = {
      {angles.phi1_rad, angles.phi2_rad},
      {angles.phi1_prime_rad, angles.phi2_rad},
      {angles.phi1_rad, angles.phi2_prime_rad},
      {angles.phi1_prime_rad, angles.phi2_prime_rad}};

  CHSHResult result;
  result.has_counted = shots > 0;
  for (int i = 0; i < 4; ++i) {
    const EncodingSetting setting =
        EncodingSetting::make(em_over_ej, pairs[i][0], pairs[i][1]);
    CorrelationRecord rec;
    if (shots > 0)
      rec = correlation_counted(encode(rho, setting), shots,
                                split_seed(seed, static_cast<std::uint64_t>(i)));
    rec.phi1_rad = pairs[i][0];
    rec.phi2_rad = pairs[i][1];
    rec.e_theory = correlation_theory(setting);
    result.records[static_cast<std::size_t>(i)] = rec;
  }

  const auto& r = result.records;
  result.f = std::abs(r[0].e_theory + r[1].e_theory + r[2].e_theory -
                      r[3].e_theory);
  if (result.has_counted)
    result.f_counted = std::abs(r[0].e_counted + r[1].e_counted +
                                r[2].e_counted - r[3].e_counted);
  result.violated = result.f > 2.0;
  return result;
}

double classical_bound() {
  double best = 0.0;
  for (int a1 = -1; a1 <= 1; a1 += 2)
    for (int a2 = -1; a2 <= 1; a2 += 2)
      for (int b1 = -1; b1 <= 1; b1 += 2)
        for (int b2 = -1; b2 <= 1; b2 += 2) {
          const double f =
              std::abs(static_cast<double>(a1 * b1 + a2 * b1 + a1 * b2 -
                                           a2 * b2));
          best = std::max(best, f);
        }
  return best;
}

}  // namespace epr
