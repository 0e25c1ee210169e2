#pragma once

#include <span>
#include <vector>

#include "hm/hermitian.hpp"
#include "hm/report.hpp"
#include "hm/solver.hpp"

namespace hm {

/// First derivatives of the implicit solution z1(q) at one point.
struct GradientRecord {
  PointQ point;
  std::vector<cplx> z;
  /// ∂z1/∂q^1..∂q^m followed by ∂z1/∂conj(q)^1..∂conj(q)^m.
  std::vector<cplx> dz1_dq;
  /// ∂z1/∂x^1..∂x^{2m}.
  std::vector<cplx> dz1_dx;
  /// First real axis that belongs to the ambient domain (1 for Φ-form).
  int offset = 0;

  /// The ambient part of dz1_dx.
  std::span<const cplx> ambient() const {
    return std::span<const cplx>(dz1_dx).subspan(static_cast<std::size_t>(offset));
  }
};

struct ResidualRecord {
  cplx conformality{};
  cplx laplacian_formula{};
  cplx laplacian_fd{};
  double scale = 0.0;
};

/// ∂z1/∂q^I = -(K⁻¹)^1_b ∂F^b/∂q^I in all 2m Wirtinger directions. Throws
/// SingularJacobian when |det K| <= det_floor.
GradientRecord implicit_gradient(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z,
                                 double det_floor = 1e-10);

/// Σ (∂z1/∂x^i)² over the ambient axes.
cplx conformality_residual(const GradientRecord& g);

/// Σ |∂z1/∂x^i|² over the ambient axes.
double gradient_scale(const GradientRecord& g);

/// dz1(v) for the real vector field v = α^j ∂/∂q^j + conj(α^j) ∂/∂conj(q^j).
cplx directional_derivative(const GradientRecord& g, std::span<const cplx> alpha);

/// Closed-form Laplacian of z1 for explicit-h systems:
///   Δz1 = (4/det K) Σ_{i<j} (-1)^{i+j} det[ ∂_k M^i_j ; ∂_k F^l (l ∉ {i,j}) ]_{k=2..m}.
cplx laplacian_formula(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z,
                       double det_floor = 1e-10);

/// Σ_i second central differences of z1 along each ambient axis, built from
/// the analytic first derivatives at x ± step·e_i (Newton re-solves warm
/// started from z).
cplx fd_laplacian(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z, double step = 1e-4,
                  const SolverConfig& cfg = {});

/// Central finite-difference gradient ∂z1/∂x^i from Newton re-solves, used
/// as an independent check of implicit_gradient.
std::vector<cplx> fd_gradient(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z,
                              double step = 1e-5, const SolverConfig& cfg = {});

ResidualRecord residuals_at(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z,
                            const SolverConfig& cfg = {});

struct VerifyConfig {
  SolverConfig solver;
  double tol_conf = 1e-8;
  double tol_harm = 1e-6;
  double tol_formula = 1e-5;
  double fd_step = 1e-4;
};

/// Solves along the grid and records, at every non-degenerate point,
/// |Σ(∂z1/∂x^i)²|/scale ("conformality") and |Δz1|/scale from finite
/// differences ("harmonicity"); for explicit-h systems also the difference
/// between the closed-form and finite-difference Laplacians
/// ("laplacian_formula"). Points where the solve fails or |det K| is at the
/// floor are counted as degenerate and skipped.
Report verify_grid(const ImplicitSystem& sys, std::span<const PointQ> grid, std::span<const cplx> seed,
                   const VerifyConfig& cfg = {});

/// As verify_grid, for solutions that are already available.
Report verify_solutions(const ImplicitSystem& sys, std::span<const PointQ> grid,
                        std::span<const SolveResult> solutions, const VerifyConfig& cfg = {});

}  // namespace hm
