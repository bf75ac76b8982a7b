// tomo.hpp — projective measurement model (P1, P2, P12), the fixed
// pre-rotation schedule that moves every density-matrix element onto a
// measurable diagonal, and linear inversion of the full 4x4 state with
// optional binomial shot noise.
#pragma once

#include "epr/numerics.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace epr {

// P1 = |1><1| on qubit 1, P2 = |1><1| on qubit 2, P12 = their product.
enum class ProjectiveKind { P1, P2, P12 };

std::string to_string(ProjectiveKind kind);
ProjectiveKind projective_kind_from_string(const std::string& name);

Mat4 projector(ProjectiveKind kind);

// Pre-measurement operation applied to the state; angles are fixed by the
// schedule (pi/4 single conditional rotations, pi/2 for the second pulse of
// the two-pulse products, Hadamard-like and entangling specials).
enum class PreOp {
  none,
  uj1,       // Hadamard-like on qubit 1
  uj2,       // Hadamard-like on qubit 2
  um1_up2,   // U-(1)(pi/4) U+(2)(pi/2), rightmost applied first
  up1_up2,   // U+(1)(pi/4) U+(2)(pi/2)
  um1,       // U-(1)(pi/4)
  up1,       // U+(1)(pi/4)
  um2,       // U-(2)(pi/4)
  up2,       // U+(2)(pi/4)
  uco        // co-resonance special
};

std::string to_string(PreOp op);
PreOp preop_from_string(const std::string& name);

Mat4 preop_matrix(PreOp op);

struct ScheduleRow {
  PreOp preop = PreOp::none;
  ProjectiveKind measurement = ProjectiveKind::P12;
  std::string determines;  // element label, e.g. "Re rho01,11"
};

// The 15-row reconstruction schedule.  As printed, the two Im rows that
// rotate qubit 1 and then measure P2 are blind to the rotation (the
// conditional gate commutes with the qubit-2 projector) and duplicate the
// bare P2 row; the default schedule measures P1 there instead, which makes
// the stacked map full rank.  table_schedule_as_printed() keeps the
// original rows for rank diagnostics.
std::vector<ScheduleRow> table_schedule();
std::vector<ScheduleRow> table_schedule_as_printed();

// Real parameterization of a Hermitian rho: x[0..3] diagonals, then
// Re(rho_ij) and Im(rho_ij) for (i,j) in
// (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
Eigen::Matrix<double, 16, 1> pack_params(const Mat4& rho);
Mat4 unpack_params(const Eigen::Matrix<double, 16, 1>& x);

// Element labels in pack order ("rho00,00", ..., "Im rho10,11") and the
// CSV-safe variants ("rho00_00", ..., "im_rho10_11").
std::vector<std::string> param_labels();
std::vector<std::string> param_column_names();

// tr(W rho W+ P) as a linear functional of the 16 real parameters.
Eigen::Matrix<double, 16, 1> row_functional(const Mat4& preop,
                                            ProjectiveKind kind);

class RankDeficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InversionMap {
  Eigen::MatrixXd map;               // one row per schedule row, then trace
  std::vector<std::string> labels;   // row labels ("trace" last)
  int rank = 0;
  double condition_number = 0.0;
};

// Stacks the schedule functionals with the trace constraint and verifies the
// numerical rank is 16.  Throws RankDeficient otherwise.
InversionMap build_inversion_map(const std::vector<ScheduleRow>& schedule);

// Rank of the stacked map (including the trace row) without the full-rank
// requirement; 14 for the schedule as printed, 16 for the default.
int schedule_rank(const std::vector<ScheduleRow>& schedule);

// tr(rho P).  Throws std::invalid_argument unless rho is Hermitian with
// unit trace (1e-6) and eigenvalues >= -1e-8.
double measure_probability(const Mat4& rho, ProjectiveKind kind);

// Deterministic binomial draw: `shots` Bernoulli trials at `prob`.
long sample_counts(double prob, long shots, std::uint64_t seed);

struct ReconstructionResult {
  Mat4 rho_hat = Mat4::Zero();
  std::vector<double> residuals;     // |T x - p| per equation, trace row last
  double condition_number = 0.0;
  long shots = 0;                    // 0 = exact probabilities
  double min_eigenvalue = 0.0;       // reported, never repaired
  double trace_before_renorm = 1.0;
};

// Measures one identically prepared copy stream per schedule row and inverts
// the stacked linear system.  shots == 0 uses exact probabilities; shots > 0
// draws binomial counts with a per-row seed split from `seed`.  The estimate
// is Hermitian by construction and trace-renormalized.
ReconstructionResult reconstruct(const std::function<Mat4()>& source,
                                 const std::vector<ScheduleRow>& schedule,
                                 long shots = 0, std::uint64_t seed = 0);
ReconstructionResult reconstruct(const Mat4& rho,
                                 const std::vector<ScheduleRow>& schedule,
                                 long shots = 0, std::uint64_t seed = 0);

}  // namespace epr
