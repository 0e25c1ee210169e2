#include "hm/analysis.hpp"

#include <cmath>

namespace hm {

namespace {

cplx determinant(const CMatrix& A) {
  if (A.rows() == 0) return 1.0;
  if (A.rows() == 1) return A(0, 0);
  return A.partialPivLu().determinant();
}

Error solve_error(const SolveResult& r) {
  if (r.status == SolveStatus::SingularJacobian)
    return Error(ErrorKind::SingularJacobian, "stencil point: " + r.message);
  return Error(ErrorKind::NoConvergence, std::string("stencil point: ") + to_string(r.status) + " " + r.message);
}

// Solutions at x ± step·e_axis, warm started from z.
std::pair<SolveResult, SolveResult> stencil(const ImplicitSystem& sys, const std::vector<double>& x, std::size_t axis,
                                            double step, std::span<const cplx> z, double jump_bound,
                                            const SolverConfig& cfg) {
  std::vector<double> xp = x, xm = x;
  xp[axis] += step;
  xm[axis] -= step;
  SolveResult rp = newton_solve(sys, point_from_ambient(sys, xp), z, cfg);
  SolveResult rm = newton_solve(sys, point_from_ambient(sys, xm), z, cfg);
  for (const auto* r : {&rp, &rm}) {
    if (!r->converged) throw solve_error(*r);
    if (std::abs(r->z[0] - z[0]) > jump_bound)
      throw Error(ErrorKind::BranchJump, "stencil re-solve left the branch");
  }
  return {std::move(rp), std::move(rm)};
}

double jump_bound(const GradientRecord& g, double step) {
  double s = 0.0;
  for (const auto& v : g.ambient()) s += std::abs(v);
  return 10.0 * step * (1.0 + s);
}

}  // namespace

GradientRecord implicit_gradient(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z,
                                 double det_floor) {
  const ResidualDerivatives rd = residual_derivatives(sys, p, z);
  const cplx det = determinant(rd.dz);
  if (std::abs(det) <= det_floor)
    throw Error(ErrorKind::SingularJacobian, "|det K| = " + std::to_string(std::abs(det)) + " at or below det_floor");
  const CMatrix G = rd.dz.rows() == 1 ? CMatrix(-rd.dq / rd.dz(0, 0)) : CMatrix(-rd.dz.partialPivLu().solve(rd.dq));

  const std::size_t m = p.q.size();
  GradientRecord g;
  g.point = p;
  g.z.assign(z.begin(), z.end());
  g.offset = sys.ambient_offset();
  for (Eigen::Index k = 0; k < G.cols(); ++k) g.dz1_dq.push_back(G(0, k));
  const cplx I{0.0, 1.0};
  for (std::size_t j = 0; j < m; ++j) {
    const cplx a = g.dz1_dq[j], b = g.dz1_dq[m + j];
    g.dz1_dx.push_back(a + b);
    g.dz1_dx.push_back(I * (a - b));
  }
  return g;
}

cplx conformality_residual(const GradientRecord& g) {
  cplx s{};
  for (const auto& v : g.ambient()) s += v * v;
  return s;
}

double gradient_scale(const GradientRecord& g) {
  double s = 0.0;
  for (const auto& v : g.ambient()) s += std::norm(v);
  return s;
}

cplx directional_derivative(const GradientRecord& g, std::span<const cplx> alpha) {
  const std::size_t m = g.point.q.size();
  if (alpha.size() != m) throw Error(ErrorKind::ModeMismatch, "direction has the wrong length");
  cplx s{};
  for (std::size_t j = 0; j < m; ++j) s += alpha[j] * g.dz1_dq[j] + std::conj(alpha[j]) * g.dz1_dq[m + j];
  return s;
}

cplx laplacian_formula(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z, double det_floor) {
  if (sys.mode != Mode::ExplicitH)
    throw Error(ErrorKind::ModeMismatch, "the closed-form Laplacian is defined for explicit-h systems");
  const JacobianEval JK = eval_K(sys, p, z);
  if (std::abs(JK.det) <= det_floor)
    throw Error(ErrorKind::SingularJacobian, "|det K| at or below det_floor");
  const int m = sys.m();

  // ∂_k μ for k = 2..m, in μ order.
  std::vector<std::vector<cplx>> dmu;
  for (const auto& e : sys.data.mu) {
    const std::size_t nv = e.vars().size();
    const Jet J = e.eval_jet(z.first(nv), 1);
    std::vector<cplx> row;
    for (int k = 1; k < m; ++k) row.push_back(static_cast<std::size_t>(k) < nv ? J.first(static_cast<std::size_t>(k)) : 0.0);
    dmu.push_back(std::move(row));
  }

  cplx sum{};
  for (int i = 1; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      const auto& top = dmu[mu_index(i, j, m) - 1];
      bool zero = true;
      for (const auto& v : top) zero = zero && v == cplx{};
      if (zero) continue;
      CMatrix S(m - 1, m - 1);
      for (int k = 0; k < m - 1; ++k) S(0, k) = top[static_cast<std::size_t>(k)];
      int row = 1;
      for (int l = 1; l <= m; ++l) {
        if (l == i || l == j) continue;
        for (int k = 0; k < m - 1; ++k) S(row, k) = JK.K(l - 1, k + 1);
        ++row;
      }
      const double sign = (i + j) % 2 == 0 ? 1.0 : -1.0;
      sum += sign * determinant(S);
    }
  }
  if (sum == cplx{}) return 0.0;
  return 4.0 / JK.det * sum;
}

cplx fd_laplacian(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z, double step,
                  const SolverConfig& cfg) {
  const GradientRecord g0 = implicit_gradient(sys, p, z, cfg.det_floor);
  const double bound = jump_bound(g0, step);
  const std::vector<double> x = ambient_coordinates(sys, p);
  const auto off = static_cast<std::size_t>(sys.ambient_offset());
  cplx lap{};
  for (std::size_t a = 0; a < x.size(); ++a) {
    const auto [rp, rm] = stencil(sys, x, a, step, z, bound, cfg);
    std::vector<double> xp = x, xm = x;
    xp[a] += step;
    xm[a] -= step;
    const GradientRecord gp = implicit_gradient(sys, point_from_ambient(sys, xp), rp.z, cfg.det_floor);
    const GradientRecord gm = implicit_gradient(sys, point_from_ambient(sys, xm), rm.z, cfg.det_floor);
    lap += (gp.dz1_dx[off + a] - gm.dz1_dx[off + a]) / (2.0 * step);
  }
  return lap;
}

std::vector<cplx> fd_gradient(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z, double step,
                              const SolverConfig& cfg) {
  const GradientRecord g0 = implicit_gradient(sys, p, z, cfg.det_floor);
  const double bound = jump_bound(g0, step);
  const std::vector<double> x = ambient_coordinates(sys, p);
  std::vector<cplx> out;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const auto [rp, rm] = stencil(sys, x, a, step, z, bound, cfg);
    out.push_back((rp.z[0] - rm.z[0]) / (2.0 * step));
  }
  return out;
}

ResidualRecord residuals_at(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z,
                            const SolverConfig& cfg) {
  const GradientRecord g = implicit_gradient(sys, p, z, cfg.det_floor);
  ResidualRecord r;
  r.conformality = conformality_residual(g);
  r.scale = gradient_scale(g);
  r.laplacian_fd = fd_laplacian(sys, p, z, 1e-4, cfg);
  if (sys.mode == Mode::ExplicitH) r.laplacian_formula = laplacian_formula(sys, p, z, cfg.det_floor);
  return r;
}

Report verify_solutions(const ImplicitSystem& sys, std::span<const PointQ> grid,
                        std::span<const SolveResult> solutions, const VerifyConfig& cfg) {
  Report rep;
  rep.points_total = grid.size();
  rep.declare("conformality", cfg.tol_conf);
  rep.declare("harmonicity", cfg.tol_harm);
  if (sys.mode == Mode::ExplicitH) rep.declare("laplacian_formula", cfg.tol_formula);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    PointRecord pr;
    pr.x = ambient_coordinates(sys, grid[i]);
    const SolveResult& s = solutions[i];
    pr.det_abs = std::abs(s.detK);
    pr.degenerate = !s.converged;
    if (s.converged) {
      pr.z1 = s.z[0];
      try {
        const GradientRecord g = implicit_gradient(sys, grid[i], s.z, cfg.solver.det_floor);
        const double scale = gradient_scale(g);
        if (!(scale > 0.0)) {
          pr.degenerate = true;
        } else {
          const cplx lap = fd_laplacian(sys, grid[i], s.z, cfg.fd_step, cfg.solver);
          pr.conf_res = std::abs(conformality_residual(g)) / scale;
          pr.lap_res = std::abs(lap) / scale;
          rep.add("conformality", pr.conf_res, cfg.tol_conf, i);
          rep.add("harmonicity", pr.lap_res, cfg.tol_harm, i);
          if (sys.mode == Mode::ExplicitH) {
            const cplx formula = laplacian_formula(sys, grid[i], s.z, cfg.solver.det_floor);
            rep.add("laplacian_formula", std::abs(formula - lap) / scale, cfg.tol_formula, i);
          }
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularJacobian || e.kind() == ErrorKind::NoConvergence) {
          pr.degenerate = true;
        } else {
          rep.fail("harmonicity", i, e.what());
        }
      }
    }
    if (pr.degenerate) ++rep.points_degenerate;
    rep.points.push_back(std::move(pr));
  }
  return rep;
}

Report verify_grid(const ImplicitSystem& sys, std::span<const PointQ> grid, std::span<const cplx> seed,
                   const VerifyConfig& cfg) {
  const auto solutions = continue_grid(sys, grid, seed, cfg.solver);
  return verify_solutions(sys, grid, solutions, cfg);
}

}  // namespace hm
