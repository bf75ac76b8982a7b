// test_dissipation.cpp — bath spectrum, coupling operators, relaxation-tensor
// structure, master-equation propagation against closed forms, Wootters
// concurrence, and decay-rate fitting.
#include <doctest.h>

#include "epr/circuit.hpp"
#include "epr/dissipation.hpp"
#include "epr/prep.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace epr;

namespace {

// Zero-frequency noise power 2 eta kT / hbar + gamma_phi / 2, in 1/s,
// computed from scratch so the library value has an independent oracle.
double s0_oracle(const BathSpec& b) {
  const double kt_over_hbar_per_s =
      kb_uev_per_K * b.temperature_k / hbar_uev_ns * ns_per_s;
  return 2.0 * b.eta * kt_over_hbar_per_s + 0.5 * b.gamma_phi_per_s;
}

Mat4 diag4(double a, double b, double c, double d) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  return m;
}

// Hamiltonian with tunneling off: ec terms and the zz coupling only.
Mat4 dephasing_hamiltonian(double ec1, double ec2, double e12) {
  EffectiveParams ep;
  ep.ec1_uev = ec1;
  ep.ec2_uev = ec2;
  ep.ej1_uev = 0.0;
  ep.ej2_uev = 0.0;
  ep.e12_uev = e12;
  return build_hamiltonian(ep);
}

Mat4 tunneling_hamiltonian(double ej, double e12) {
  EffectiveParams ep;
  ep.ej1_uev = ej;
  ep.ej2_uev = ej;
  ep.e12_uev = e12;
  return build_hamiltonian(ep);
}

std::vector<double> linspace_s(double t_max_s, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k)
    g[static_cast<std::size_t>(k)] = t_max_s * k / (points - 1);
  return g;
}

}  // namespace

TEST_SUITE("dissipation") {

TEST_CASE("bath spec validation rejects unphysical parameters") {
  BathSpec ok;
  CHECK_NOTHROW(ok.validate());

  BathSpec b = ok;
  b.eta = -1e-4;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = ok;
  b.omega_c_rad_per_s = 0.0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = ok;
  b.omega_c_rad_per_s = -1e12;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = ok;
  b.temperature_k = 0.0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = ok;
  b.temperature_k = -0.01;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = ok;
  b.gamma_phi_per_s = -1.0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  // eta = 0 is a valid (noise-free Ohmic) limit.
  b = ok;
  b.eta = 0.0;
  CHECK_NOTHROW(b.validate());
}

TEST_CASE("coupling operators carry the capacitive crosstalk admixture") {
  BathSpec b;  // beta_xt = gamma_xt = 0.1
  auto [a1, a2] = coupling_operators(b);
  CHECK(test::frob(a1, diag4(1.1, 0.9, -0.9, -1.1)) <= 1e-14);
  CHECK(test::frob(a2, diag4(1.1, -0.9, 0.9, -1.1)) <= 1e-14);

  b.beta_xt = 0.0;
  b.gamma_xt = 0.0;
  auto [b1, b2] = coupling_operators(b);
  CHECK(test::frob(b1, kron(pauli_z(), id2())) <= 1e-14);
  CHECK(test::frob(b2, kron(id2(), pauli_z())) <= 1e-14);

  b.beta_xt = 0.3;
  b.gamma_xt = 0.0;
  auto [c1, c2] = coupling_operators(b);
  CHECK(test::frob(c1, diag4(1.0, 1.0, -1.0, -1.0)) <= 1e-14);
  CHECK(test::frob(c2, diag4(1.3, -0.7, 0.7, -1.3)) <= 1e-14);
}

TEST_CASE("spectral function: zero-frequency value is pinned") {
  BathSpec b;  // eta 1.8e-3, T 0.01 K, gamma_phi 1e7
  const double s0 = spectral_function(b, 0.0);
  const double want = s0_oracle(b);
  CHECK(std::abs(s0 - want) <= 1e-6 * want);
  // And the two contributions separately: the dephasing spike alone ...
  b.eta = 0.0;
  CHECK(std::abs(spectral_function(b, 0.0) - 0.5e7) <= 1.0);
  // ... and the Ohmic thermal part alone.
  b.eta = 1.8e-3;
  b.gamma_phi_per_s = 0.0;
  CHECK(std::abs(spectral_function(b, 0.0) - (want - 0.5e7)) <=
        1e-9 * want);
}

TEST_CASE("spectral function: small-frequency limit has no dephasing spike") {
  BathSpec b;
  // omega well below kT/hbar (~1.3e9 rad/s) but nonzero: the Ohmic part
  // approaches 2 eta kT / hbar + eta omega and the 1/f spike must not
  // contribute (it would add gamma_phi/2 = 5e6, three orders above the
  // tolerance here).
  const double ohmic0 = s0_oracle(b) - 0.5 * b.gamma_phi_per_s;
  for (double w : {1e4, 1e5, 1e6}) {
    const double s = spectral_function(b, w);
    CHECK(std::abs(s - (ohmic0 + b.eta * w)) <= 1e-3 * ohmic0);
  }
}

TEST_CASE("spectral function: detailed balance between emission and absorption") {
  BathSpec b;
  const double kt_uev = kb_uev_per_K * b.temperature_k;
  for (double w : {1e9, 5e9, 2e10}) {
    const double ratio = spectral_function(b, w) / spectral_function(b, -w);
    const double boltzmann =
        std::exp(hbar_uev_ns * (w / ns_per_s) / kt_uev);
    CHECK(std::abs(ratio - boltzmann) <= 1e-9 * boltzmann);
  }
}

TEST_CASE("spectral function: absorption freezes out at low temperature") {
  BathSpec b;
  b.temperature_k = 0.001;
  const double emission = spectral_function(b, 1e10);
  const double absorption = spectral_function(b, -1e10);
  CHECK(emission > 0.0);
  CHECK(absorption >= 0.0);
  CHECK(absorption <= 1e-20 * emission);
}

TEST_CASE("spectral function: cutoff rolloff beyond the Drude frequency") {
  BathSpec b;
  // At these frequencies coth -> 1 exactly in double precision, so the
  // ratio isolates the |omega| wc^2/(wc^2+omega^2) envelope.
  const double wc = b.omega_c_rad_per_s;
  const double ratio = spectral_function(b, 10.0 * wc) / spectral_function(b, wc);
  CHECK(std::abs(ratio - 20.0 / 101.0) <= 1e-9);
}

TEST_CASE("relaxation tensor: trace preservation and Hermiticity structure") {
  const Mat4 h = tunneling_hamiltonian(55.0, 13.75);
  BathSpec b;
  const RedfieldTensor rt = build_redfield(h, b);

  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) {
      cd col_sum = 0.0;
      for (int n = 0; n < 4; ++n) col_sum += rt.at(n, n, k, l);
      CHECK(std::abs(col_sum) <= 1e-6);  // rates are ~1e7/s
    }
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          CHECK(std::abs(rt.at(n, m, k, l) - std::conj(rt.at(m, n, l, k))) <=
                1e-6);
}

TEST_CASE("relaxation tensor: generator matches -i diag(omega) - R") {
  const Mat4 h = tunneling_hamiltonian(30.0, 5.0);
  BathSpec b;
  const RedfieldTensor rt = build_redfield(h, b);
  const Mat16 gen = rt.generator();
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          cd want = -rt.at(n, m, k, l);
          if (n == k && m == l) want += cd(0.0, -rt.omega_rad_per_s(n, m));
          CHECK(std::abs(gen(n * 4 + m, k * 4 + l) - want) <= 1e-9 *
                (1.0 + std::abs(want)));
        }
}

TEST_CASE("relaxation tensor vanishes for a silent bath") {
  const Mat4 h = tunneling_hamiltonian(55.0, 13.75);
  BathSpec b;
  b.eta = 0.0;
  b.gamma_phi_per_s = 0.0;
  const RedfieldTensor rt = build_redfield(h, b);
  double max_abs = 0.0;
  for (const cd& v : rt.r) max_abs = std::max(max_abs, std::abs(v));
  CHECK(max_abs <= 1e-12);
}

TEST_CASE("generator preserves trace and Hermiticity of random states") {
  const Mat4 h = tunneling_hamiltonian(40.0, 10.0);
  BathSpec b;
  const Mat16 gen = build_redfield(h, b).generator();
  auto eng = test::engine(911);
  for (int rep = 0; rep < 20; ++rep) {
    const Mat4 rho = test::random_density(eng);
    Vec16 x;
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m) x(n * 4 + m) = rho(n, m);
    const Vec16 dx = gen * x;
    Mat4 drho;
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m) drho(n, m) = dx(n * 4 + m);
    CHECK(std::abs(drho.trace()) <= 1e-3);  // entries are rates ~1e7
    CHECK(test::frob(drho, Mat4(drho.adjoint())) <= 1e-3);
  }
}

TEST_CASE("pure dephasing: maximally mixed state is stationary") {
  // With tunneling off the Hamiltonian and both coupling operators are
  // diagonal, so uniform populations with no coherences do not move.
  const Mat4 h = dephasing_hamiltonian(10.0, 7.0, 3.0);
  BathSpec b;
  const Mat16 gen = build_redfield(h, b).generator();
  Vec16 x = Vec16::Zero();
  for (int n = 0; n < 4; ++n) x(n * 4 + n) = 0.25;
  CHECK((gen * x).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("pure dephasing matches the closed-form coherence decay") {
  // Diagonal Hamiltonian: rho_nm(t) = rho_nm(0) exp(-i w_nm t - L_nm t) with
  // L_nm = (1/2) sum_b s_b(0) (A_b,nn - A_b,mm)^2, populations frozen.
  const double ec1 = 10.0, ec2 = 7.0, e12 = 3.0;
  const Mat4 h = dephasing_hamiltonian(ec1, ec2, e12);
  BathSpec b;
  const double s0 = s0_oracle(b);

  const double a1[4] = {1.1, 0.9, -0.9, -1.1};
  const double a2[4] = {1.1, -0.9, 0.9, -1.1};
  double e_uev[4];
  for (int n = 0; n < 4; ++n) e_uev[n] = h(n, n).real();

  Vec4 chi;
  chi << 0.5, 0.5, 0.5, 0.5;
  const Mat4 rho0 = density(chi);

  const std::vector<double> grid = {0.0, 1e-9, 4e-9, 12e-9, 20e-9};
  const Trajectory traj = evolve(rho0, h, b, grid);
  REQUIRE(traj.states.size() == grid.size());

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t_s = grid[k];
    const Mat4& rho = traj.states[k];
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m) {
        const double w_rad_per_s =
            (e_uev[n] - e_uev[m]) / hbar_uev_ns * ns_per_s;
        const double lam =
            0.5 * s0 *
            ((a1[n] - a1[m]) * (a1[n] - a1[m]) +
             (a2[n] - a2[m]) * (a2[n] - a2[m]));
        const cd want = rho0(n, m) *
                        std::exp(cd(-lam * t_s, -w_rad_per_s * t_s));
        CHECK(std::abs(rho(n, m) - want) <= 1e-4 * std::abs(rho0(n, m)));
      }
    // Populations frozen exactly (diagonal generator block is zero).
    for (int n = 0; n < 4; ++n)
      CHECK(std::abs(rho(n, n).real() - 0.25) <= 1e-9);
  }
}

TEST_CASE("dephasing rates of the two pair families and their ratio") {
  // The (|00>,|11>) coherence sees dA = 2(1 + xt) on both baths; the
  // (|01>,|10>) coherence sees dA = 2(1 - xt).  Rates follow the closed
  // forms A = (1/2) s0 * 2 * dA^2 and their ratio is ((1+xt)/(1-xt))^2.
  const Mat4 h = dephasing_hamiltonian(0.0, 0.0, 13.75);
  BathSpec b;
  const double s0 = s0_oracle(b);
  const double a_psi_want = 4.84 * s0;  // 2 * (2.2)^2 / 2 * 2 baths
  const double a_phi_want = 3.24 * s0;  // 2 * (1.8)^2 / 2 * 2 baths

  const Trajectory tr_psi = evolve(density(bell_state(BellLabel::psi_plus)), h,
                                   b, linspace_s(80e-9, 41));
  const Trajectory tr_phi = evolve(density(bell_state(BellLabel::phi_minus)),
                                   h, b, linspace_s(120e-9, 41));
  const RateFit f_psi = fit_decay(tr_psi);
  const RateFit f_phi = fit_decay(tr_phi);

  CHECK(f_psi.exponential);
  CHECK(f_phi.exponential);
  CHECK(f_psi.r_squared >= 0.999);
  CHECK(f_phi.r_squared >= 0.999);
  CHECK(std::abs(f_psi.a_per_s - a_psi_want) <= 1e-3 * a_psi_want);
  CHECK(std::abs(f_phi.a_per_s - a_phi_want) <= 1e-3 * a_phi_want);
  const double ratio_want = (1.1 / 0.9) * (1.1 / 0.9);
  CHECK(std::abs(f_psi.a_per_s / f_phi.a_per_s - ratio_want) <=
        1e-3 * ratio_want);
}

TEST_CASE("dephasing rate is independent of the interbit coupling strength") {
  BathSpec b;
  const Trajectory t_small = evolve(density(bell_state(BellLabel::psi_minus)),
                                    dephasing_hamiltonian(0.0, 0.0, 1.375), b,
                                    linspace_s(80e-9, 41));
  const Trajectory t_big = evolve(density(bell_state(BellLabel::psi_minus)),
                                  dephasing_hamiltonian(0.0, 0.0, 13.75), b,
                                  linspace_s(80e-9, 41));
  const double a_small = fit_decay(t_small).a_per_s;
  const double a_big = fit_decay(t_big).a_per_s;
  CHECK(std::abs(a_small - a_big) <= 1e-3 * a_big);
}

TEST_CASE("evolution with a silent bath reproduces unitary dynamics") {
  const Mat4 h = tunneling_hamiltonian(55.0, 13.75);
  BathSpec b;
  b.eta = 0.0;
  b.gamma_phi_per_s = 0.0;
  const Mat4 rho0 = density(bell_state(BellLabel::psi_minus));
  const std::vector<double> grid = {0.0, 0.5e-9, 2e-9, 3.7e-9};
  const Trajectory traj = evolve(rho0, h, b, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t_ns = grid[k] * ns_per_s;
    const Mat4 u = expm_unitary(h, t_ns);
    const Mat4 want = u * rho0 * u.adjoint();
    CHECK(test::frob(traj.states[k], want) <= 1e-7);
    CHECK(std::abs(traj.concurrences[k] - concurrence(want)) <= 1e-7);
  }
}

TEST_CASE("evolution rejects bad grids, bad states, and absurd spans") {
  const Mat4 h = dephasing_hamiltonian(1.0, 1.0, 1.0);
  BathSpec b;
  const Mat4 rho0 = density(ground_state());

  CHECK_THROWS_AS(evolve(rho0, h, b, {}), std::invalid_argument);
  CHECK_THROWS_AS(evolve(rho0, h, b, {0.0, 2e-9, 1e-9}),
                  std::invalid_argument);

  Mat4 bad = rho0;
  bad(0, 0) = 1.5;
  CHECK_THROWS_AS(evolve(bad, h, b, {0.0, 1e-9}), std::invalid_argument);

  // One second of propagation against a ~1e10 rad/s generator needs more
  // than 2^31 fixed steps.
  const Mat4 h_fast = tunneling_hamiltonian(55.0, 13.75);
  CHECK_THROWS_AS(evolve(rho0, h_fast, b, {0.0, 1.0}), std::runtime_error);
}

TEST_CASE("repeated grid times reuse the state without drift") {
  const Mat4 h = dephasing_hamiltonian(5.0, 2.0, 1.0);
  BathSpec b;
  const Trajectory traj = evolve(density(bell_state(BellLabel::psi_plus)), h,
                                 b, {0.0, 1e-9, 1e-9, 2e-9});
  CHECK(test::frob(traj.states[1], traj.states[2]) <= 1e-15);
}

TEST_CASE("concurrence: Bell states, product states, Werner mixtures") {
  for (BellLabel l : {BellLabel::psi_plus, BellLabel::psi_minus,
                      BellLabel::phi_plus, BellLabel::phi_minus})
    CHECK(std::abs(concurrence(density(bell_state(l))) - 1.0) <= 1e-12);

  CHECK(concurrence(density(ground_state())) <= 1e-12);
  auto eng = test::engine(313);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::Vector2cd a, b2;
    a << test::random_complex(eng), test::random_complex(eng);
    b2 << test::random_complex(eng), test::random_complex(eng);
    a.normalize();
    b2.normalize();
    Vec4 prod;
    prod << a(0) * b2(0), a(0) * b2(1), a(1) * b2(0), a(1) * b2(1);
    CHECK(concurrence(density(prod)) <= 1e-7);
  }

  const Mat4 eye4 = Mat4::Identity();
  for (BellLabel l : {BellLabel::psi_plus, BellLabel::phi_minus}) {
    const Mat4 bell = density(bell_state(l));
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.4, 0.6, 0.8, 1.0}) {
      const Mat4 werner = p * bell + (1.0 - p) * 0.25 * eye4;
      const double want = std::max(0.0, (3.0 * p - 1.0) / 2.0);
      CHECK(std::abs(concurrence(werner) - want) <= 1e-9);
    }
  }
  // Separability crossover at p = 1/3.
  const Mat4 bell = density(bell_state(BellLabel::psi_plus));
  CHECK(concurrence(0.30 * bell + 0.70 * 0.25 * eye4) == 0.0);
  CHECK(concurrence(0.36 * bell + 0.64 * 0.25 * eye4) > 0.0);
}

TEST_CASE("concurrence tolerates small transient negativity, rejects worse") {
  // The non-secular tensor can dip an eigenvalue to ~ -1e-4 shortly after
  // t = 0; such states must be clamped, not rejected.
  CHECK_NOTHROW(concurrence(diag4(0.6, 0.4005, -5e-4, 0.0)));
  CHECK(concurrence(diag4(0.6, 0.4005, -5e-4, 0.0)) == 0.0);
  CHECK_THROWS_AS(concurrence(diag4(0.6, 0.402, -2e-3, 0.0)),
                  std::invalid_argument);
  // Hermiticity and trace are still enforced.
  Mat4 skew = Mat4::Zero();
  skew(0, 0) = 1.0;
  skew(0, 1) = cd(0.3, 0.1);
  CHECK_THROWS_AS(concurrence(skew), std::invalid_argument);
  CHECK_THROWS_AS(concurrence(Mat4(2.0 * Mat4::Identity())),
                  std::invalid_argument);
}

TEST_CASE("decay fit recovers a synthetic exponential rate exactly") {
  Trajectory traj;
  for (int k = 0; k <= 40; ++k) {
    const double t = 2.0 * k / 40.0;
    traj.times_s.push_back(t);
    traj.concurrences.push_back(std::exp(-2.0 * t));
  }
  const RateFit fit = fit_decay(traj);
  CHECK(std::abs(fit.a_per_s - 2.0) <= 1e-6);
  CHECK(fit.r_squared >= 1.0 - 1e-12);
  CHECK(fit.exponential);
  CHECK(fit.points_used >= 3);
  CHECK(fit.window_t_min_s >= 0.0);
  CHECK(fit.window_t_max_s <= 2.0);
  CHECK(fit.window_t_min_s < fit.window_t_max_s);
}

TEST_CASE("decay fit flags non-exponential curves instead of lying") {
  Trajectory traj;
  for (int k = 0; k <= 60; ++k) {
    const double t = 3.0 * k / 60.0;
    traj.times_s.push_back(t);
    traj.concurrences.push_back(0.5 + 0.4 * std::cos(8.0 * t));
  }
  const RateFit fit = fit_decay(traj);
  CHECK(!fit.exponential);
  CHECK(fit.r_squared < 0.99);
}

TEST_CASE("decay fit rejects unusable trajectories") {
  Trajectory dead;
  for (int k = 0; k < 20; ++k) {
    dead.times_s.push_back(0.1 * k);
    dead.concurrences.push_back(0.0);
  }
  CHECK_THROWS_AS(fit_decay(dead), std::invalid_argument);

  Trajectory high;  // alive but every point above the fit window
  for (int k = 0; k < 20; ++k) {
    high.times_s.push_back(0.1 * k);
    high.concurrences.push_back(0.99);
  }
  CHECK_THROWS_AS(fit_decay(high), std::invalid_argument);

  Trajectory stuck;  // all points at one time: degenerate window
  for (int k = 0; k < 12; ++k) {
    stuck.times_s.push_back(1.0);
    stuck.concurrences.push_back(0.5);
  }
  CHECK_THROWS_AS(fit_decay(stuck), std::invalid_argument);

  Trajectory malformed;
  malformed.times_s = {0.0, 1.0};
  malformed.concurrences = {0.5};
  CHECK_THROWS_AS(fit_decay(malformed), std::invalid_argument);
}

TEST_CASE("tunneling accelerates entanglement loss, ordered by coupling") {
  BathSpec b;
  const Mat4 rho0 = density(bell_state(BellLabel::psi_minus));
  const std::vector<double> grid = {0.0, 3e-9, 4e-9};

  const Trajectory off =
      evolve(rho0, dephasing_hamiltonian(0.0, 0.0, 13.75), b, grid);
  const Trajectory weak = evolve(rho0, tunneling_hamiltonian(55.0, 1.375), b,
                                 grid);
  const Trajectory strong = evolve(rho0, tunneling_hamiltonian(55.0, 13.75),
                                   b, grid);

  for (std::size_t k = 1; k < grid.size(); ++k) {
    CHECK(off.concurrences[k] > weak.concurrences[k] + 0.1);
    CHECK(weak.concurrences[k] > strong.concurrences[k] + 0.1);
  }
  // Pinned values from an independent scan of the same trajectories.
  CHECK(std::abs(off.concurrences[1] - 0.868) <= 0.01);
  CHECK(std::abs(weak.concurrences[1] - 0.318) <= 0.02);
  CHECK(std::abs(strong.concurrences[1] - 0.189) <= 0.02);
}

TEST_CASE("tunneling trajectories relax toward the coupled ground state") {
  // kT (~0.86 ueV) is far below the spectral gap, so the long-time state is
  // essentially the (entangled) ground state of the coupled Hamiltonian.
  const Mat4 h = tunneling_hamiltonian(55.0, 13.75);
  BathSpec b;
  const Trajectory traj = evolve(density(bell_state(BellLabel::psi_minus)), h,
                                 b, {0.0, 400e-9});
  const HermitianEig<4> eig = herm_eig<4>(h);
  const Vec4 g = eig.eigenvectors.col(0);
  const double pop_g = (g.adjoint() * traj.states.back() * g)(0).real();
  CHECK(pop_g >= 0.98);
  CHECK(traj.concurrences.back() >
        0.9 * concurrence(density(g)));
}

TEST_CASE("level-shift option keeps the generator physical") {
  const Mat4 h = tunneling_hamiltonian(40.0, 10.0);
  BathSpec b;
  b.lamb_shift = true;
  const Mat16 gen = build_redfield(h, b).generator();
  auto eng = test::engine(515);
  const Mat4 rho = test::random_density(eng);
  Vec16 x;
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m) x(n * 4 + m) = rho(n, m);
  const Vec16 dx = gen * x;
  Mat4 drho;
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m) drho(n, m) = dx(n * 4 + m);
  CHECK(std::abs(drho.trace()) <= 1e-3);
  CHECK(test::frob(drho, Mat4(drho.adjoint())) <= 1e-3);

  const Trajectory traj = evolve(density(bell_state(BellLabel::psi_plus)), h,
                                 b, {0.0, 1e-9});
  CHECK(std::abs(traj.states.back().trace().real() - 1.0) <= 1e-9);
}

}  // TEST_SUITE
