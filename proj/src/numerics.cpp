// numerics.cpp
#include "epr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace epr {

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Vec4 basis_state(int m, int n) {
  if (m < 0 || m > 1 || n < 0 || n > 1)
    throw std::invalid_argument("basis_state: labels must be 0 or 1");
  Vec4 v = Vec4::Zero();
  v(2 * m + n) = 1.0;
  return v;
}

double phase_aligned_distance(const Mat4& a, const Mat4& b) {
  const cd overlap = (b.adjoint() * a).trace();
  const double mag = std::abs(overlap);
  const cd phase = mag > 0 ? overlap / mag : cd(1, 0);
  return (a - phase * b).norm();
}

double phase_aligned_distance(const Vec4& a, const Vec4& b) {
  const cd overlap = b.dot(a);
  const double mag = std::abs(overlap);
  const cd phase = mag > 0 ? overlap / mag : cd(1, 0);
  return (a - phase * b).norm();
}

namespace {

template <int N>
void fix_phases(Eigen::Matrix<cd, N, N>& vecs) {
  for (int j = 0; j < N; ++j) {
    int imax = 0;
    double vmax = 0.0;
    for (int i = 0; i < N; ++i) {
      const double v = std::abs(vecs(i, j));
      if (v > vmax) {
        vmax = v;
        imax = i;
      }
    }
    if (vmax > 0.0) {
      const cd phase = vecs(imax, j) / vmax;
      vecs.col(j) *= std::conj(phase);
    }
  }
}

}  // namespace

template <int N>
HermitianEig<N> herm_eig(const Eigen::Matrix<cd, N, N>& h) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("herm_eig: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cd, N, N>> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("herm_eig: eigensolver failed to converge");
  HermitianEig<N> out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  fix_phases<N>(out.eigenvectors);
  return out;
}

template <int N>
Eigen::Matrix<cd, N, N> expm_unitary(const Eigen::Matrix<cd, N, N>& h, double t_ns) {
  const HermitianEig<N> eig = herm_eig<N>(h);
  Eigen::Matrix<cd, N, 1> phases;
  for (int i = 0; i < N; ++i) {
    const double angle = -eig.eigenvalues(i) * t_ns / hbar_uev_ns;
    phases(i) = cd(std::cos(angle), std::sin(angle));
  }
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

template HermitianEig<2> herm_eig<2>(const Eigen::Matrix<cd, 2, 2>&);
template HermitianEig<4> herm_eig<4>(const Eigen::Matrix<cd, 4, 4>&);
template HermitianEig<16> herm_eig<16>(const Eigen::Matrix<cd, 16, 16>&);
template Eigen::Matrix<cd, 2, 2> expm_unitary<2>(const Eigen::Matrix<cd, 2, 2>&, double);
template Eigen::Matrix<cd, 4, 4> expm_unitary<4>(const Eigen::Matrix<cd, 4, 4>&, double);
template Eigen::Matrix<cd, 16, 16> expm_unitary<16>(const Eigen::Matrix<cd, 16, 16>&, double);

Eigen::Array4d psd_sqrt_eigvals(const Mat4& rho, const Mat4& rho_tilde) {
  const HermitianEig<4> re = herm_eig<4>(rho);
  Eigen::Vector4d lam = re.eigenvalues;
  for (int i = 0; i < 4; ++i) {
    if (lam(i) < -1e-8)
      throw std::domain_error("psd_sqrt_eigvals: rho has a significantly negative eigenvalue");
    if (lam(i) < 0) lam(i) = 0;
  }
  Mat4 sqrt_rho = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    sqrt_rho += std::sqrt(lam(i)) * re.eigenvectors.col(i) * re.eigenvectors.col(i).adjoint();

  Mat4 m = sqrt_rho * rho_tilde * sqrt_rho;
  m = 0.5 * (m + m.adjoint().eval());  // hermitize roundoff
  const HermitianEig<4> me = herm_eig<4>(m);

  Eigen::Array4d vals;
  for (int i = 0; i < 4; ++i) {
    double v = me.eigenvalues(i);
    if (v < -1e-8)
      throw std::domain_error("psd_sqrt_eigvals: product has a significantly negative eigenvalue");
    if (v < 0) v = 0;
    vals(i) = std::sqrt(v);
  }
  std::sort(vals.data(), vals.data() + 4, std::greater<double>());
  return vals;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace epr
