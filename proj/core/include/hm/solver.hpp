#pragma once

#include <span>
#include <string>
#include <vector>

#include "hm/hermitian.hpp"

namespace hm {

struct SolverConfig {
  double newton_tol = 1e-12;
  int max_iter = 50;
  double det_floor = 1e-10;
  int max_halvings = 20;
  double branch_jump_factor = 10.0;
};

enum class SolveStatus { Converged, SingularJacobian, NoConvergence, Degenerate, NoRoot, EvalError };

const char* to_string(SolveStatus status);

struct SolveResult {
  std::vector<cplx> z;
  double residual_norm = 0.0;  // infinity norm at z
  cplx detK{};
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::NoConvergence;
  bool branch_jump = false;
  std::string message;
  /// Residual norms after each accepted step (first entry: at the seed).
  std::vector<double> history;
};

/// Damped Newton iteration on F(q, ·) = 0 with a halving line search on the
/// residual 2-norm. Converged when ‖F‖∞ <= newton_tol·(1 + ‖F(seed)‖∞) and
/// |det K| > det_floor at the solution. Never throws on numerical failure;
/// the outcome is in status.
SolveResult newton_solve(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> seed,
                         const SolverConfig& cfg = {});

/// All roots of the polynomial with the given coefficients (highest degree
/// first) by Aberth–Ehrlich simultaneous iteration followed by Newton
/// polishing. Leading coefficients below 1e-14·max|c| are dropped; exact
/// zero trailing coefficients yield exact zero roots. Throws
/// DegenerateAllZero when every coefficient is at most zero_tol in modulus.
std::vector<cplx> poly_roots(std::span<const cplx> coeffs, double zero_tol = 0.0);

/// Coefficients (highest degree first) of the residual of a scalar system, or
/// of an explicit-h system's z1 equation, as a polynomial in z1 at p.
/// Expanded symbolically, then cross-checked against samples of the residual
/// on a circle (a Vandermonde solve at roots of unity). Leading zeros are
/// kept up to the degree the equation has at generic q.
std::vector<cplx> univariate_coeffs(const ImplicitSystem& sys, const PointQ& p);

/// Coefficients recovered purely from samples of eval_F at degree+1 points
/// z1 = radius·exp(2πik/(degree+1)).
std::vector<cplx> sampled_coeffs(const ImplicitSystem& sys, const PointQ& p, int degree, double radius = 1.0);

/// Index of the candidate nearest to target; ties (relative 1e-12) go to the
/// smaller |Im|, then to the smaller |Re|.
std::size_t nearest_root(std::span<const cplx> candidates, cplx target);

/// Solve at one point, continuing from `previous` (a full z vector). In
/// polynomial mode the root nearest previous[0] is taken and polished.
SolveResult solve_at(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> previous,
                     const SolverConfig& cfg = {});

/// True when the system (or its z1 equation) is polynomial in z1 at p.
bool polynomial_mode(const ImplicitSystem& sys, const PointQ& p);

/// Solve along an ordered list of nearby points, warm starting each from the
/// previous solution. Steps with |Δz| > branch_jump_factor × median step, and
/// revisits of an earlier point whose solution differs by more than that, are
/// flagged as branch jumps.
std::vector<SolveResult> continue_grid(const ImplicitSystem& sys, std::span<const PointQ> grid,
                                       std::span<const cplx> seed, const SolverConfig& cfg = {});

}  // namespace hm
