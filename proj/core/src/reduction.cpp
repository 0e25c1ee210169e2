#include "hm/reduction.hpp"

#include <cmath>

namespace hm {

const char* to_string(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::Hyperplane:
      return "hyperplane";
    case ReductionKind::Sphere:
      return "sphere";
    case ReductionKind::ComplexProjective:
      return "cp";
    case ReductionKind::Custom:
      return "custom";
  }
  return "?";
}

ReductionKind reduction_from_string(const std::string& text) {
  if (text == "hyperplane") return ReductionKind::Hyperplane;
  if (text == "sphere") return ReductionKind::Sphere;
  if (text == "cp") return ReductionKind::ComplexProjective;
  if (text == "custom") return ReductionKind::Custom;
  throw Error(ErrorKind::Validation, "unknown reduction target '" + text + "'");
}

InvarianceValue invariance_residual(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z,
                                    std::span<const cplx> alpha, double det_floor) {
  const int m = sys.m();
  if (alpha.size() != static_cast<std::size_t>(m)) throw Error(ErrorKind::ModeMismatch, "field has the wrong length");
  InvarianceValue out;
  if (sys.mode == Mode::ExplicitH) {
    const JacobianEval JK = eval_K(sys, p, z);
    if (std::abs(JK.det) <= det_floor) throw Error(ErrorKind::SingularJacobian, "|det K| at or below det_floor");
    CMatrix D = JK.K;
    D.col(0) = eval_w(sys.data, alpha, z);
    out.value = D.partialPivLu().determinant();
    double norms = 1.0;
    for (Eigen::Index k = 0; k < D.cols(); ++k) norms *= D.col(k).norm();
    out.normalized = norms > 0.0 ? std::abs(out.value) / norms : 0.0;
    return out;
  }
  const ResidualDerivatives rd = residual_derivatives(sys, p, z);
  if (std::abs(rd.dz(0, 0)) <= det_floor)
    throw Error(ErrorKind::SingularJacobian, "|dR/dz1| at or below det_floor");
  double terms = 0.0;
  for (int j = 0; j < m; ++j) {
    const cplx a = rd.dq(0, j) * alpha[static_cast<std::size_t>(j)];
    const cplx b = rd.dq(0, m + j) * std::conj(alpha[static_cast<std::size_t>(j)]);
    out.value += a + b;
    terms += std::abs(a) + std::abs(b);
  }
  out.normalized = terms > 0.0 ? std::abs(out.value) / terms : 0.0;
  return out;
}

std::vector<std::vector<cplx>> reduction_fields(const ReductionTarget& target, const PointQ& p) {
  const std::size_t m = p.q.size();
  switch (target.kind) {
    case ReductionKind::Hyperplane: {
      std::vector<cplx> e(m);
      e[0] = 1.0;
      return {e};
    }
    case ReductionKind::Sphere:
      return {p.q};
    case ReductionKind::ComplexProjective: {
      std::vector<cplx> iq;
      for (const auto& v : p.q) iq.push_back(cplx{0.0, 1.0} * v);
      return {p.q, iq};
    }
    case ReductionKind::Custom:
      if (target.alpha.size() != m) throw Error(ErrorKind::Validation, "custom field needs m components");
      return {target.alpha};
  }
  return {};
}

Report reduction_check(const ImplicitSystem& sys, std::span<const PointQ> grid,
                       std::span<const SolveResult> solutions, const ReductionTarget& target,
                       const ReductionConfig& cfg) {
  if (target.kind == ReductionKind::Custom && target.alpha.size() != static_cast<std::size_t>(sys.m()))
    throw Error(ErrorKind::Validation, "custom field needs m components");
  const std::string name = to_string(target.kind);
  Report rep;
  rep.points_total = grid.size();
  rep.declare(name + "_reduction", cfg.tol_det);
  rep.declare(name + "_directional", cfg.tol_directional);
  rep.declare(name + "_agreement", 0.5);
  const bool cp_column = target.kind == ReductionKind::ComplexProjective && sys.mode == Mode::ExplicitH;
  if (cp_column) rep.declare("cp_column_q", cfg.tol_det);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SolveResult& s = solutions[i];
    if (!s.converged) {
      ++rep.points_degenerate;
      continue;
    }
    try {
      const GradientRecord g = implicit_gradient(sys, grid[i], s.z, cfg.det_floor);
      const double root_scale = std::sqrt(gradient_scale(g));
      if (!(root_scale > 0.0)) {
        ++rep.points_degenerate;
        continue;
      }
      double det_worst = 0.0, dir_worst = 0.0;
      for (const auto& alpha : reduction_fields(target, grid[i])) {
        det_worst = std::max(det_worst, invariance_residual(sys, grid[i], s.z, alpha, cfg.det_floor).normalized);
        dir_worst = std::max(dir_worst, std::abs(directional_derivative(g, alpha)) / root_scale);
      }
      rep.add(name + "_reduction", det_worst, cfg.tol_det, i);
      rep.add(name + "_directional", dir_worst, cfg.tol_directional, i);
      const bool agree = (det_worst <= cfg.tol_det) == (dir_worst <= cfg.tol_directional);
      rep.add(name + "_agreement", agree ? 0.0 : 1.0, 0.5, i);
      if (cp_column) {
        const JacobianEval JK = eval_K(sys, grid[i], s.z);
        CMatrix D = JK.K;
        for (Eigen::Index k = 0; k < D.rows(); ++k) D(k, 0) = grid[i].q[static_cast<std::size_t>(k)];
        double norms = 1.0;
        for (Eigen::Index k = 0; k < D.cols(); ++k) norms *= D.col(k).norm();
        rep.add("cp_column_q", std::abs(D.partialPivLu().determinant()) / norms, cfg.tol_det, i);
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SingularJacobian) {
        ++rep.points_degenerate;
      } else {
        rep.fail(name + "_reduction", i, e.what());
      }
    }
  }
  return rep;
}

std::size_t euler_arity(const Expr& psi) {
  std::size_t n = psi.vars().size();
  if (psi.declares("z1") && n > 0) --n;
  return n;
}

cplx euler_defect(const Expr& psi, std::span<const cplx> values, std::size_t arity, cplx k) {
  const Jet J = psi.eval_jet(values, 1);
  cplx s{};
  for (std::size_t i = 0; i < arity; ++i) s += values[i] * J.first(i);
  return s - k * J.value();
}

HomogeneityVerdict variety_condition_H(const Expr& psi, std::span<const std::vector<cplx>> variety,
                                       std::span<const std::vector<cplx>> off_variety, double tol) {
  if (variety.size() < 10)
    throw Error(ErrorKind::InsufficientSamples, "condition (H) needs at least 10 variety samples");
  if (off_variety.size() < 10)
    throw Error(ErrorKind::InsufficientSamples, "the Euler fit needs at least 10 off-variety samples");
  const std::size_t arity = euler_arity(psi);
  HomogeneityVerdict v;
  v.condition_h = true;
  for (const auto& x : variety) {
    const Jet J = psi.eval_jet(x, 1);
    cplx e{};
    double terms = 0.0;
    for (std::size_t i = 0; i < arity; ++i) {
      e += x[i] * J.first(i);
      terms += std::abs(x[i] * J.first(i));
    }
    v.max_defect_on_variety = std::max(v.max_defect_on_variety, std::abs(e));
    v.max_relative_defect = std::max(v.max_relative_defect, std::abs(e) / (1.0 + terms));
    if (!(std::abs(e) <= tol * (1.0 + terms))) v.condition_h = false;
  }

  std::vector<cplx> E, P;
  for (const auto& x : off_variety) {
    P.push_back(psi.eval(x));
    E.push_back(euler_defect(psi, x, arity, 0.0));
  }
  double pp = 0.0, ee = 0.0;
  cplx pe{};
  for (std::size_t i = 0; i < E.size(); ++i) {
    pp += std::norm(P[i]);
    ee += std::norm(E[i]);
    pe += std::conj(P[i]) * E[i];
  }
  v.k = pp > 0.0 ? pe / pp : cplx{};
  double rr = 0.0;
  for (std::size_t i = 0; i < E.size(); ++i) rr += std::norm(E[i] - v.k * P[i]);
  v.fit_residual = ee > 0.0 ? std::sqrt(rr / ee) : 0.0;
  v.is_euler = v.fit_residual <= tol;
  return v;
}

std::vector<std::vector<cplx>> sample_box(const Expr& psi, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::vector<cplx>> out;
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<cplx> x;
    for (std::size_t k = 0; k < psi.vars().size(); ++k) x.push_back(unit_box_complex(rng));
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<std::vector<cplx>> sample_variety(const Expr& psi, std::size_t count, std::mt19937_64& rng) {
  const std::size_t arity = euler_arity(psi);
  std::size_t var = 0;
  while (var < arity && !psi.depends_on(var)) ++var;
  if (var == arity) throw Error(ErrorKind::Validation, "psi does not depend on any w variable");

  std::vector<std::vector<cplx>> out;
  for (std::size_t attempt = 0; out.size() < count && attempt < 20 * count + 100; ++attempt) {
    std::vector<cplx> x;
    for (std::size_t k = 0; k < psi.vars().size(); ++k) x.push_back(unit_box_complex(rng));
    bool ok = false;
    try {
      for (int it = 0; it < 60; ++it) {
        const Jet J = psi.eval_jet(x, 1);
        if (std::abs(J.value()) <= 1e-14) {
          ok = true;
          break;
        }
        if (J.first(var) == cplx{}) break;
        x[var] -= J.value() / J.first(var);
        if (!std::isfinite(std::abs(x[var]))) break;
      }
      ok = ok || std::abs(psi.eval(x)) <= 1e-12;
    } catch (const Error&) {
      ok = false;
    }
    if (ok) out.push_back(std::move(x));
  }
  return out;
}

bool superminimality_check(const HermitianData& data) {
  for (const auto& mu : data.mu)
    for (std::size_t k = 1; k < mu.vars().size(); ++k)
      if (!mu.diff(k).is_zero()) return false;
  return true;
}

FullnessResult fullness_rank_test(std::span<const GradientRecord> gradients, int dim) {
  if (gradients.size() < static_cast<std::size_t>(dim))
    throw Error(ErrorKind::InsufficientSamples, "fullness needs at least " + std::to_string(dim) + " gradients");
  Eigen::MatrixXd A(2 * static_cast<Eigen::Index>(gradients.size()), dim);
  for (std::size_t r = 0; r < gradients.size(); ++r) {
    const auto row = gradients[r].ambient();
    if (row.size() != static_cast<std::size_t>(dim))
      throw Error(ErrorKind::ModeMismatch, "gradient dimension does not match");
    for (int c = 0; c < dim; ++c) {
      A(2 * static_cast<Eigen::Index>(r), c) = row[static_cast<std::size_t>(c)].real();
      A(2 * static_cast<Eigen::Index>(r) + 1, c) = row[static_cast<std::size_t>(c)].imag();
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-8);
  FullnessResult out;
  out.rank = static_cast<int>(qr.rank());
  out.full = out.rank == dim;
  return out;
}

}  // namespace hm
