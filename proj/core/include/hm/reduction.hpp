#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hm/analysis.hpp"
#include "hm/expr.hpp"
#include "hm/hermitian.hpp"
#include "hm/report.hpp"
#include "hm/solver.hpp"

namespace hm {

enum class ReductionKind { Hyperplane, Sphere, ComplexProjective, Custom };

const char* to_string(ReductionKind kind);
ReductionKind reduction_from_string(const std::string& text);

struct ReductionTarget {
  ReductionKind kind = ReductionKind::Sphere;
  /// Constant field for Custom.
  std::vector<cplx> alpha;
};

struct InvarianceValue {
  cplx value{};
  /// |value| divided by the natural scale of its terms (column norms for the
  /// determinant); 0 means invariant.
  double normalized = 0.0;
};

/// Whether z1 is invariant under the field α^j ∂/∂q^j + conj(α^j) ∂/∂conj(q^j).
///
/// Explicit-h: the determinant whose first column is w(α, z) = α - M(z)conj(α)
/// and whose remaining columns are ∂_j F for j = 2..m, normalized by the
/// product of column norms. Ψ/Φ forms: the derivative of the residual along
/// the field, Σ_I ∂R/∂q^I α^I + ∂R/∂conj(q)^I conj(α^I), normalized by the
/// sum of the magnitudes of its terms.
InvarianceValue invariance_residual(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z,
                                    std::span<const cplx> alpha, double det_floor = 1e-10);

/// The field(s) whose invariance a reduction target asks for at p: e_1 for
/// the hyperplane, q for the sphere, q and i·q for complex projective space.
std::vector<std::vector<cplx>> reduction_fields(const ReductionTarget& target, const PointQ& p);

struct ReductionConfig {
  double tol_det = 1e-8;
  double tol_directional = 1e-8;
  double det_floor = 1e-10;
};

/// Per-point invariance checks over solved grid points. Records
/// "<target>_reduction" (normalized invariance residual) and
/// "<target>_directional" (|dz1(v)|/sqrt(scale) from the implicit gradient),
/// plus "<target>_agreement", which fails wherever the two disagree in
/// verdict. For complex projective space the determinant with first column q
/// itself is recorded as well ("cp_column_q").
Report reduction_check(const ImplicitSystem& sys, std::span<const PointQ> grid,
                       std::span<const SolveResult> solutions, const ReductionTarget& target,
                       const ReductionConfig& cfg = {});

/// Σ_i w^i ∂Ψ/∂w^i - kΨ. `values` binds Ψ's declared variables in order;
/// the leading `arity` of them are the w's (the rest, e.g. z1, are passive).
cplx euler_defect(const Expr& psi, std::span<const cplx> values, std::size_t arity, cplx k);

/// Number of leading variables of psi other than z1.
std::size_t euler_arity(const Expr& psi);

struct HomogeneityVerdict {
  /// Max |Σ w^i ∂Ψ/∂w^i| over variety samples (Ψ = 0).
  double max_defect_on_variety = 0.0;
  /// Max |Σ w^i ∂Ψ/∂w^i| / (1 + Σ |w^i ∂Ψ/∂w^i|) over the same samples.
  double max_relative_defect = 0.0;
  /// Condition (H): the defect vanishes relative to its terms on the variety.
  bool condition_h = false;
  /// Least-squares k for Σ w^i ∂Ψ/∂w^i = kΨ on off-variety samples.
  cplx k{};
  /// ‖E - kΨ‖/‖E‖ for that fit (0 for an exact Euler eigenfunction).
  double fit_residual = 0.0;
  bool is_euler = false;
};

/// Checks condition (H) on the variety samples and fits the Euler eigenvalue
/// on the off-variety samples. Throws InsufficientSamples with fewer than 10
/// variety samples or 10 off-variety samples.
HomogeneityVerdict variety_condition_H(const Expr& psi, std::span<const std::vector<cplx>> variety,
                                       std::span<const std::vector<cplx>> off_variety, double tol = 1e-9);

/// Random points of {Ψ = 0}: the other variables uniform in the unit box,
/// the first variable Ψ depends on solved by Newton. Points that do not
/// converge to |Ψ| <= 1e-12 are dropped.
std::vector<std::vector<cplx>> sample_variety(const Expr& psi, std::size_t count, std::mt19937_64& rng);

/// Random points uniform in the unit box of every declared variable.
std::vector<std::vector<cplx>> sample_box(const Expr& psi, std::size_t count, std::mt19937_64& rng);

/// True iff every μ has a symbolically zero derivative in z2..zm.
bool superminimality_check(const HermitianData& data);

struct FullnessResult {
  int rank = 0;
  bool full = false;
};

/// Numerical rank of the stacked rows [Re ∂z1/∂x; Im ∂z1/∂x] by column
/// pivoted QR with threshold 1e-8·(largest pivot). Full iff rank = dim.
/// Throws InsufficientSamples with fewer than dim records.
FullnessResult fullness_rank_test(std::span<const GradientRecord> gradients, int dim);

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline cplx unit_box_complex(std::mt19937_64& rng) {
  const double re = 2.0 * unit_uniform(rng) - 1.0;
  const double im = 2.0 * unit_uniform(rng) - 1.0;
  return {re, im};
}

}  // namespace hm
