// numerics.hpp — dense complex linear algebra for the fixed 2-, 4- and
// 16-dimensional operators used throughout the simulator.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace epr {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Mat16 = Eigen::Matrix<cd, 16, 16>;
using Vec4 = Eigen::Vector4cd;
using Vec16 = Eigen::Matrix<cd, 16, 1>;

// Internal unit system: energies in ueV, times in ns, temperatures in K.
// Rates cross public interfaces in 1/s, angular frequencies in rad/s.
inline constexpr double hbar_uev_ns = 0.6582119569;    // hbar in ueV*ns
inline constexpr double kb_uev_per_K = 86.17333262;    // k_B in ueV/K
inline constexpr double e2_per_fF_uev = 160.2176634;   // e^2 / (1 fF) in ueV
inline constexpr double e_per_fF_uV = 160.2176634;     // e / (1 fF) in uV
inline constexpr double ns_per_s = 1e9;

inline Mat2 pauli_x() { Mat2 m; m << 0, 1, 1, 0; return m; }
inline Mat2 pauli_y() { Mat2 m; m << 0, cd(0, -1), cd(0, 1), 0; return m; }
// sigma_z = |0><0| - |1><1| in the charge basis (|0> first).
inline Mat2 pauli_z() { Mat2 m; m << 1, 0, 0, -1; return m; }
inline Mat2 id2() { return Mat2::Identity(); }

// kron(a, b): a acts on qubit 1, b on qubit 2.  Basis order
// |00>, |01>, |10>, |11| with the first label belonging to qubit 1,
// i.e. composite index 2*m + n for |m n>.
Mat4 kron(const Mat2& a, const Mat2& b);

// |m n> as a 4-vector, m and n in {0, 1}.
Vec4 basis_state(int m, int n);

template <typename Derived, typename Other>
bool approx_equal(const Eigen::MatrixBase<Derived>& a,
                  const Eigen::MatrixBase<Other>& b, double tol = 1e-12) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = 1e-10) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = 1e-10) {
  using Plain = typename Derived::PlainObject;
  return ((u.adjoint() * u) - Plain::Identity(u.rows(), u.cols())).norm() <= tol;
}

// Frobenius distance minimized over a global phase: min_phi ||a - e^{i phi} b||.
double phase_aligned_distance(const Mat4& a, const Mat4& b);
double phase_aligned_distance(const Vec4& a, const Vec4& b);

template <int N>
struct HermitianEig {
  Eigen::Matrix<double, N, 1> eigenvalues;   // ascending
  Eigen::Matrix<cd, N, N> eigenvectors;      // columns, phase-fixed
};

// Eigendecomposition of a Hermitian matrix with a deterministic phase
// convention: each eigenvector's largest-magnitude component is made real
// and positive (ties broken toward the lowest index).  Throws
// std::invalid_argument if h is not Hermitian to within 1e-10 (relative
// to max(1, max|h_ij|)).
template <int N>
HermitianEig<N> herm_eig(const Eigen::Matrix<cd, N, N>& h);

// exp(-i h t / hbar) for Hermitian h (ueV) and duration t (ns), computed by
// spectral decomposition.  This is the reference oracle for every analytic
// propagator in the gate layer.
template <int N>
Eigen::Matrix<cd, N, N> expm_unitary(const Eigen::Matrix<cd, N, N>& h, double t_ns);

// Square roots of the eigenvalues of rho * rho_tilde, sorted descending,
// computed through the Hermitian equivalent sqrt(rho) rho_tilde sqrt(rho)
// for numerical robustness.  Eigenvalues in [-1e-12, 0) are clamped to 0;
// anything below -1e-8 throws std::domain_error.
Eigen::Array4d psd_sqrt_eigvals(const Mat4& rho, const Mat4& rho_tilde);

// Canonical 53-bit uniform in [0, 1) from a 64-bit word; used instead of
// std::uniform_real_distribution so sampling is reproducible by contract.
inline double canonical_uniform(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// SplitMix64 stream splitter for deriving independent per-index seeds.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace epr
