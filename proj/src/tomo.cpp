// tomo.cpp — measurement schedule, functional extraction, linear inversion.
#include "epr/tomo.hpp"

#include "epr/gates.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace epr {

namespace {

constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

constexpr double quarter_pi = std::numbers::pi / 4.0;
constexpr double half_pi = std::numbers::pi / 2.0;

void check_density(const Mat4& rho) {
  if (!is_hermitian(rho, 1e-8))
    throw std::invalid_argument("density matrix must be Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-6 ||
      std::abs(rho.trace().imag()) > 1e-6)
    throw std::invalid_argument("density matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (rho + rho.adjoint()),
                                         Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw std::invalid_argument("density matrix must be positive semidefinite");
}

}  // namespace

std::string to_string(ProjectiveKind kind) {
  switch (kind) {
    case ProjectiveKind::P1: return "P1";
    case ProjectiveKind::P2: return "P2";
    case ProjectiveKind::P12: return "P12";
  }
  throw std::invalid_argument("unknown projective kind");
}

ProjectiveKind projective_kind_from_string(const std::string& name) {
  if (name == "P1") return ProjectiveKind::P1;
  if (name == "P2") return ProjectiveKind::P2;
  if (name == "P12") return ProjectiveKind::P12;
  throw std::invalid_argument("unknown projective kind: " + name);
}

Mat4 projector(ProjectiveKind kind) {
  Mat2 p1 = Mat2::Zero();
  p1(1, 1) = 1.0;
  switch (kind) {
    case ProjectiveKind::P1: return kron(p1, id2());
    case ProjectiveKind::P2: return kron(id2(), p1);
    case ProjectiveKind::P12: return kron(p1, p1);
  }
  throw std::invalid_argument("unknown projective kind");
}

std::string to_string(PreOp op) {
  switch (op) {
    case PreOp::none: return "none";
    case PreOp::uj1: return "uj1";
    case PreOp::uj2: return "uj2";
    case PreOp::um1_up2: return "um1_up2";
    case PreOp::up1_up2: return "up1_up2";
    case PreOp::um1: return "um1";
    case PreOp::up1: return "up1";
    case PreOp::um2: return "um2";
    case PreOp::up2: return "up2";
    case PreOp::uco: return "uco";
  }
  throw std::invalid_argument("unknown pre-operation");
}

PreOp preop_from_string(const std::string& name) {
  if (name == "none") return PreOp::none;
  if (name == "uj1") return PreOp::uj1;
  if (name == "uj2") return PreOp::uj2;
  if (name == "um1_up2") return PreOp::um1_up2;
  if (name == "up1_up2") return PreOp::up1_up2;
  if (name == "um1") return PreOp::um1;
  if (name == "up1") return PreOp::up1;
  if (name == "um2") return PreOp::um2;
  if (name == "up2") return PreOp::up2;
  if (name == "uco") return PreOp::uco;
  throw std::invalid_argument("unknown pre-operation: " + name);
}

Mat4 preop_matrix(PreOp op) {
  switch (op) {
    case PreOp::none:
      return Mat4::Identity();
    case PreOp::uj1:
      return hadamard_like_matrix(1);
    case PreOp::uj2:
      return hadamard_like_matrix(2);
    case PreOp::um1_up2:
      return conditional_rotation_matrix(1, -1, quarter_pi) *
             conditional_rotation_matrix(2, +1, half_pi);
    case PreOp::up1_up2:
      return conditional_rotation_matrix(1, +1, quarter_pi) *
             conditional_rotation_matrix(2, +1, half_pi);
    case PreOp::um1:
      return conditional_rotation_matrix(1, -1, quarter_pi);
    case PreOp::up1:
      return conditional_rotation_matrix(1, +1, quarter_pi);
    case PreOp::um2:
      return conditional_rotation_matrix(2, -1, quarter_pi);
    case PreOp::up2:
      return conditional_rotation_matrix(2, +1, quarter_pi);
    case PreOp::uco:
      return co_special_matrix();
  }
  throw std::invalid_argument("unknown pre-operation");
}

std::vector<ScheduleRow> table_schedule_as_printed() {
  using K = ProjectiveKind;
  return {
      {PreOp::none, K::P12, "rho11,11"},
      {PreOp::none, K::P1, "rho10,10"},
      {PreOp::none, K::P2, "rho01,01"},
      {PreOp::uj1, K::P12, "Re rho01,11"},
      {PreOp::uj1, K::P1, "Re rho00,10"},
      {PreOp::uj2, K::P12, "Re rho10,11"},
      {PreOp::uj2, K::P2, "Re rho00,01"},
      {PreOp::um1_up2, K::P1, "Re rho00,11"},
      {PreOp::up1_up2, K::P12, "Re rho01,10"},
      {PreOp::um1, K::P2, "Im rho00,10"},
      {PreOp::up1, K::P2, "Im rho01,11"},
      {PreOp::um2, K::P2, "Im rho00,01"},
      {PreOp::up2, K::P2, "Im rho10,11"},
      {PreOp::uco, K::P12, "Im rho00,11"},
      {PreOp::uco, K::P2, "Im rho01,10"},
  };
}

std::vector<ScheduleRow> table_schedule() {
  std::vector<ScheduleRow> rows = table_schedule_as_printed();
  // A conditional rotation of qubit 1 commutes with the qubit-2 projector,
  // so the printed P2 rows repeat the bare measurement; P1 sees the rotation.
  rows[9].measurement = ProjectiveKind::P1;
  rows[10].measurement = ProjectiveKind::P1;
  return rows;
}

std::vector<std::string> param_labels() {
  static const char* basis[4] = {"00", "01", "10", "11"};
  std::vector<std::string> labels;
  for (int b = 0; b < 4; ++b)
    labels.push_back(std::string("rho") + basis[b] + "," + basis[b]);
  for (const char* part : {"Re", "Im"})
    for (const auto& pair : kPairs)
      labels.push_back(std::string(part) + " rho" + basis[pair[0]] + "," +
                       basis[pair[1]]);
  return labels;
}

std::vector<std::string> param_column_names() {
  static const char* basis[4] = {"00", "01", "10", "11"};
  std::vector<std::string> names;
  for (int b = 0; b < 4; ++b)
    names.push_back(std::string("rho") + basis[b] + "_" + basis[b]);
  for (const char* part : {"re", "im"})
    for (const auto& pair : kPairs)
      names.push_back(std::string(part) + "_rho" + basis[pair[0]] + "_" +
                      basis[pair[1]]);
  return names;
}

Eigen::Matrix<double, 16, 1> pack_params(const Mat4& rho) {
  Eigen::Matrix<double, 16, 1> x;
  for (int b = 0; b < 4; ++b) x(b) = rho(b, b).real();
  for (int p = 0; p < 6; ++p) {
    const cd v = rho(kPairs[p][0], kPairs[p][1]);
    x(4 + p) = v.real();
    x(10 + p) = v.imag();
  }
  return x;
}

Mat4 unpack_params(const Eigen::Matrix<double, 16, 1>& x) {
  Mat4 rho = Mat4::Zero();
  for (int b = 0; b < 4; ++b) rho(b, b) = x(b);
  for (int p = 0; p < 6; ++p) {
    const cd v(x(4 + p), x(10 + p));
    rho(kPairs[p][0], kPairs[p][1]) = v;
    rho(kPairs[p][1], kPairs[p][0]) = std::conj(v);
  }
  return rho;
}

Eigen::Matrix<double, 16, 1> row_functional(const Mat4& preop,
                                            ProjectiveKind kind) {
  const Mat4 m = preop.adjoint() * projector(kind) * preop;
  Eigen::Matrix<double, 16, 1> w;
  for (int b = 0; b < 4; ++b) w(b) = m(b, b).real();
  for (int p = 0; p < 6; ++p) {
    const cd v = m(kPairs[p][0], kPairs[p][1]);
    w(4 + p) = 2.0 * v.real();
    w(10 + p) = 2.0 * v.imag();
  }
  return w;
}

namespace {

Eigen::MatrixXd stacked_map(const std::vector<ScheduleRow>& schedule) {
  Eigen::MatrixXd t(schedule.size() + 1, 16);
  for (std::size_t r = 0; r < schedule.size(); ++r)
    t.row(r) =
        row_functional(preop_matrix(schedule[r].preop), schedule[r].measurement)
            .transpose();
  t.row(schedule.size()).setZero();
  t.row(schedule.size()).head<4>().setOnes();  // trace constraint
  return t;
}

int svd_rank(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd) {
  const auto& s = svd.singularValues();
  const double cut = s(0) * 1e-10;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return rank;
}

}  // namespace

int schedule_rank(const std::vector<ScheduleRow>& schedule) {
  const Eigen::MatrixXd t = stacked_map(schedule);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
  return svd_rank(svd);
}

InversionMap build_inversion_map(const std::vector<ScheduleRow>& schedule) {
  InversionMap im;
  im.map = stacked_map(schedule);
  for (const ScheduleRow& row : schedule) im.labels.push_back(row.determines);
  im.labels.push_back("trace");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(im.map);
  im.rank = svd_rank(svd);
  const auto& s = svd.singularValues();
  if (im.rank < 16)
    throw RankDeficient("inversion map rank " + std::to_string(im.rank) +
                        " < 16: schedule does not determine the state");
  im.condition_number = s(0) / s(15);
  return im;
}

double measure_probability(const Mat4& rho, ProjectiveKind kind) {
  check_density(rho);
  return (rho * projector(kind)).trace().real();
}

long sample_counts(double prob, long shots, std::uint64_t seed) {
  if (prob < 0.0 && prob > -1e-12) prob = 0.0;
  if (prob > 1.0 && prob < 1.0 + 1e-12) prob = 1.0;
  if (prob < 0.0 || prob > 1.0)
    throw std::invalid_argument("sample_counts: prob must lie in [0, 1]");
  if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
  std::mt19937_64 gen(seed);
  long count = 0;
  for (long i = 0; i < shots; ++i)
    if (canonical_uniform(gen()) < prob) ++count;
  return count;
}

ReconstructionResult reconstruct(const std::function<Mat4()>& source,
                                 const std::vector<ScheduleRow>& schedule,
                                 long shots, std::uint64_t seed) {
  const InversionMap im = build_inversion_map(schedule);
  const Eigen::Index n = im.map.rows();

  Eigen::VectorXd p(n);
  for (std::size_t r = 0; r < schedule.size(); ++r) {
    const Mat4 rho = source();
    const Mat4 w = preop_matrix(schedule[r].preop);
    const double exact =
        measure_probability(w * rho * w.adjoint(), schedule[r].measurement);
    p(static_cast<Eigen::Index>(r)) =
        shots > 0
            ? static_cast<double>(sample_counts(exact, shots,
                                                split_seed(seed, r))) /
                  static_cast<double>(shots)
            : exact;
  }
  p(n - 1) = 1.0;  // trace row

  const Eigen::Matrix<double, 16, 1> x =
      im.map.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(p);

  ReconstructionResult result;
  result.condition_number = im.condition_number;
  result.shots = shots;
  Mat4 rho_hat = unpack_params(x);

  const double tr = rho_hat.trace().real();
  result.trace_before_renorm = tr;
  if (std::abs(tr) < 1e-6)
    throw std::runtime_error("reconstruct: estimate has near-zero trace");
  rho_hat /= tr;
  result.rho_hat = rho_hat;

  const Eigen::VectorXd res = im.map * x - p;
  result.residuals.assign(res.data(), res.data() + res.size());
  for (double& v : result.residuals) v = std::abs(v);

  Eigen::SelfAdjointEigenSolver<Mat4> es(rho_hat, Eigen::EigenvaluesOnly);
  result.min_eigenvalue = es.eigenvalues().minCoeff();
  return result;
}

ReconstructionResult reconstruct(const Mat4& rho,
                                 const std::vector<ScheduleRow>& schedule,
                                 long shots, std::uint64_t seed) {
  return reconstruct([&rho]() { return rho; }, schedule, shots, seed);
}

}  // namespace epr
