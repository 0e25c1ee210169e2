#include "hm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace hm {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::SingularJacobian:
      return "SingularJacobian";
    case SolveStatus::NoConvergence:
      return "NoConvergence";
    case SolveStatus::Degenerate:
      return "DegenerateAllZero";
    case SolveStatus::NoRoot:
      return "NoRoot";
    case SolveStatus::EvalError:
      return "EvalError";
  }
  return "?";
}

namespace {

double inf_norm(const CVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

bool finite(std::span<const cplx> z) {
  return std::all_of(z.begin(), z.end(), [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

CVector newton_step(const CMatrix& K, const CVector& F) {
  if (K.rows() == 1) return CVector::Constant(1, -F(0) / K(0, 0));
  return -K.partialPivLu().solve(F);
}

// Horner evaluation of p and p' for coefficients highest first.
void horner(std::span<const cplx> a, cplx x, cplx& p, cplx& dp) {
  p = a[0];
  dp = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    dp = dp * x + p;
    p = p * x + a[k];
  }
}

// Recovers z2..zm of an explicit-h system with z1 held fixed, by Gauss-Newton
// on the (consistent) overdetermined system.
void complete_tail(const ImplicitSystem& sys, const PointQ& p, std::vector<cplx>& z) {
  const int m = sys.m();
  for (int it = 0; it < 30; ++it) {
    const CVector F = eval_F(sys, p, z);
    if (inf_norm(F) <= 1e-14) return;
    const CMatrix K = eval_K(sys, p, z).K;
    const CMatrix J = K.rightCols(m - 1);
    const CVector dz = J.colPivHouseholderQr().solve(-F);
    double step = 0.0;
    for (int k = 1; k < m; ++k) {
      z[static_cast<std::size_t>(k)] += dz(k - 1);
      step = std::max(step, std::abs(dz(k - 1)));
    }
    if (step <= 1e-15) return;
  }
}

const ImplicitSystem* scalar_equation(const ImplicitSystem& sys) {
  if (sys.mode != Mode::ExplicitH) return &sys;
  return sys.z1_equation.get();
}

}  // namespace

SolveResult newton_solve(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> seed,
                         const SolverConfig& cfg) {
  SolveResult r;
  r.z.assign(seed.begin(), seed.end());
  if (!finite(seed)) {
    r.status = SolveStatus::EvalError;
    r.message = "seed is not finite";
    return r;
  }
  try {
    CVector F = eval_F(sys, p, r.z);
    const double target = cfg.newton_tol * (1.0 + inf_norm(F));
    r.history.push_back(F.norm());
    for (int it = 0;; ++it) {
      const JacobianEval JK = eval_K(sys, p, r.z);
      r.detK = JK.det;
      r.residual_norm = inf_norm(F);
      if (r.residual_norm <= target) {
        if (std::abs(JK.det) <= cfg.det_floor) {
          r.status = SolveStatus::SingularJacobian;
          r.message = "|det K| at or below det_floor at the solution";
        } else {
          r.status = SolveStatus::Converged;
          r.converged = true;
        }
        return r;
      }
      if (it >= cfg.max_iter) {
        r.status = SolveStatus::NoConvergence;
        r.message = "iteration limit reached";
        return r;
      }
      if (std::abs(JK.det) <= cfg.det_floor) {
        r.status = SolveStatus::SingularJacobian;
        r.message = "|det K| at or below det_floor during iteration";
        return r;
      }
      const CVector delta = newton_step(JK.K, F);
      const double current = F.norm();
      double t = 1.0;
      bool accepted = false;
      std::vector<cplx> trial(r.z.size());
      for (int h = 0; h <= cfg.max_halvings; ++h, t *= 0.5) {
        for (std::size_t k = 0; k < trial.size(); ++k) trial[k] = r.z[k] + t * delta(static_cast<Eigen::Index>(k));
        try {
          CVector Ft = eval_F(sys, p, trial);
          if (Ft.norm() < current) {
            F = std::move(Ft);
            accepted = true;
            break;
          }
        } catch (const Error&) {
          // Trial point outside the domain of the data: shorten the step.
        }
      }
      if (!accepted) {
        r.status = SolveStatus::NoConvergence;
        r.message = "line search could not reduce the residual";
        return r;
      }
      r.z = trial;
      r.iterations = it + 1;
      r.history.push_back(F.norm());
    }
  } catch (const Error& e) {
    r.status = SolveStatus::EvalError;
    r.message = e.what();
  }
  return r;
}

std::vector<cplx> poly_roots(std::span<const cplx> coeffs, double zero_tol) {
  double maxc = 0.0;
  for (const auto& c : coeffs) maxc = std::max(maxc, std::abs(c));
  if (coeffs.empty() || maxc <= zero_tol)
    throw Error(ErrorKind::DegenerateAllZero, "all coefficients vanish; the equation holds identically");

  std::size_t lead = 0;
  while (lead < coeffs.size() && std::abs(coeffs[lead]) < 1e-14 * maxc) ++lead;
  std::vector<cplx> a(coeffs.begin() + static_cast<std::ptrdiff_t>(lead), coeffs.end());

  std::vector<cplx> roots;
  while (a.size() > 1 && a.back() == cplx{}) {
    a.pop_back();
    roots.emplace_back(0.0);
  }
  const std::size_t n = a.size() - 1;
  if (n == 0) return roots;

  std::vector<cplx> b(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) b[k] = a[k] / a[0];
  if (n == 1) {
    roots.push_back(-b[1]);
    return roots;
  }

  // Initial guesses on the circle of the geometric-mean root modulus, rotated
  // off the real axis.
  const double radius = std::pow(std::abs(b[n]), 1.0 / static_cast<double>(n));
  const double r0 = radius > 0 ? radius : 1.0;
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(r0, theta);
  }

  for (int iter = 0; iter < 1000; ++iter) {
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      cplx pv, dp;
      horner(b, z[k], pv, dp);
      if (pv == cplx{}) continue;
      cplx sum{};
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const cplx ratio = dp == cplx{} ? cplx{1e-3 * (1.0 + std::abs(z[k]))} : pv / dp;
      const cplx w = ratio / (1.0 - ratio * sum);
      z[k] -= w;
      worst = std::max(worst, std::abs(w) / std::max(std::abs(z[k]), 1e-300));
    }
    if (worst < 1e-15) break;
  }

  // Newton polish on the undeflated polynomial; keep a step only if it helps.
  for (auto& x : z) {
    for (int it = 0; it < 4; ++it) {
      cplx pv, dp;
      horner(b, x, pv, dp);
      if (pv == cplx{} || dp == cplx{}) break;
      const cplx next = x - pv / dp;
      cplx pn, dn;
      horner(b, next, pn, dn);
      if (std::abs(pn) >= std::abs(pv)) break;
      x = next;
    }
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

std::vector<cplx> sampled_coeffs(const ImplicitSystem& sys, const PointQ& p, int degree, double radius) {
  const ImplicitSystem* eq = scalar_equation(sys);
  if (!eq) throw Error(ErrorKind::ModeMismatch, "explicit-h system has no z1 equation");
  const int N = degree + 1;
  std::vector<cplx> samples(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    const cplx zk = std::polar(radius, 2.0 * std::numbers::pi * k / N);
    samples[static_cast<std::size_t>(k)] = eval_F(*eq, p, std::vector<cplx>{zk})(0);
  }
  std::vector<cplx> c(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    cplx acc{};
    for (int k = 0; k < N; ++k) acc += samples[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / N);
    c[static_cast<std::size_t>(N - 1 - j)] = acc / (static_cast<double>(N) * std::pow(radius, j));
  }
  return c;
}

// Degree in z1 with q and conj(q) treated as independent generic values.
static int generic_degree(const ImplicitSystem& eq) {
  const std::size_t m = static_cast<std::size_t>(eq.m());
  std::vector<cplx> q, qbar;
  for (std::size_t k = 0; k < m; ++k) {
    q.emplace_back(0.731 + 0.113 * static_cast<double>(k), 0.419 - 0.271 * static_cast<double>(k));
    qbar.emplace_back(-0.283 + 0.157 * static_cast<double>(k), 0.611 + 0.089 * static_cast<double>(k));
  }
  return residual_poly(eq, q, qbar).degree();
}

std::vector<cplx> univariate_coeffs(const ImplicitSystem& sys, const PointQ& p) {
  const ImplicitSystem* eq = scalar_equation(sys);
  if (!eq) throw Error(ErrorKind::NotPolynomial, "explicit-h system has no z1 equation");
  const Poly P = residual_poly(*eq, p);
  if (P.degree() < 0) throw Error(ErrorKind::DegenerateAllZero, "the equation in z1 vanishes identically at this point");
  std::vector<cplx> c = P.highest_first();

  const auto s = sampled_coeffs(*eq, p, P.degree());
  double total = 0.0, diff = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    total += std::abs(c[k]);
    diff = std::max(diff, std::abs(c[k] - s[k]));
  }
  if (diff > 1e-9 * total)
    throw Error(ErrorKind::Eval, "expanded coefficients disagree with sampled residual (" + std::to_string(diff) + ")");
  const int generic = generic_degree(*eq);
  if (generic > P.degree()) c.insert(c.begin(), static_cast<std::size_t>(generic - P.degree()), cplx{});
  return c;
}

std::size_t nearest_root(std::span<const cplx> candidates, cplx target) {
  if (candidates.empty()) throw Error(ErrorKind::Eval, "no candidates");
  std::size_t best = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const double dk = std::abs(candidates[k] - target);
    const double db = std::abs(candidates[best] - target);
    const double tie = 1e-12 * std::max({1.0, dk, db});
    if (dk < db - tie) {
      best = k;
    } else if (std::abs(dk - db) <= tie) {
      const cplx a = candidates[k], b = candidates[best];
      if (std::abs(a.imag()) < std::abs(b.imag()) ||
          (std::abs(a.imag()) == std::abs(b.imag()) && std::abs(a.real()) < std::abs(b.real())))
        best = k;
    }
  }
  return best;
}

bool polynomial_mode(const ImplicitSystem& sys, const PointQ& p) {
  const ImplicitSystem* eq = scalar_equation(sys);
  if (!eq) return false;
  try {
    (void)residual_poly(*eq, p);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotPolynomial) return false;
    return true;
  }
}

SolveResult solve_at(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> previous,
                     const SolverConfig& cfg) {
  if (previous.size() != static_cast<std::size_t>(sys.unknowns()))
    throw Error(ErrorKind::ModeMismatch, "seed has the wrong number of unknowns");
  const ImplicitSystem* eq = scalar_equation(sys);
  if (eq) {
    std::vector<cplx> coeffs;
    bool poly = true;
    SolveResult failed;
    failed.z.assign(previous.begin(), previous.end());
    try {
      coeffs = univariate_coeffs(sys, p);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotPolynomial) {
        poly = false;
      } else {
        failed.status = e.kind() == ErrorKind::DegenerateAllZero ? SolveStatus::Degenerate : SolveStatus::EvalError;
        failed.message = e.what();
        return failed;
      }
    }
    if (poly) {
      std::vector<cplx> roots;
      try {
        roots = poly_roots(coeffs);
      } catch (const Error& e) {
        failed.status = SolveStatus::Degenerate;
        failed.message = e.what();
        return failed;
      }
      if (roots.empty()) {
        failed.status = SolveStatus::NoRoot;
        failed.message = "the equation in z1 has no root at this point";
        return failed;
      }
      const cplx root = roots[nearest_root(roots, previous[0])];
      std::vector<cplx> z(previous.begin(), previous.end());
      z[0] = root;
      if (sys.mode == Mode::ExplicitH) {
        try {
          complete_tail(sys, p, z);
        } catch (const Error& e) {
          failed.status = SolveStatus::EvalError;
          failed.message = e.what();
          return failed;
        }
      }
      return newton_solve(sys, p, z, cfg);
    }
  }
  return newton_solve(sys, p, previous, cfg);
}

std::vector<SolveResult> continue_grid(const ImplicitSystem& sys, std::span<const PointQ> grid,
                                       std::span<const cplx> seed, const SolverConfig& cfg) {
  std::vector<SolveResult> out;
  out.reserve(grid.size());
  std::vector<cplx> prev(seed.begin(), seed.end());
  for (const auto& p : grid) {
    SolveResult r = solve_at(sys, p, prev, cfg);
    if (r.converged) prev = r.z;
    out.push_back(std::move(r));
  }

  auto distance = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
  };

  // Steps between consecutive converged solutions.
  std::vector<std::pair<std::size_t, double>> steps;
  std::ptrdiff_t last = -1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].converged) continue;
    if (last >= 0) steps.emplace_back(i, distance(out[i].z, out[static_cast<std::size_t>(last)].z));
    last = static_cast<std::ptrdiff_t>(i);
  }
  if (steps.empty()) return out;
  std::vector<double> sizes;
  for (const auto& s : steps) sizes.push_back(s.second);
  std::nth_element(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(sizes.size() / 2), sizes.end());
  const double median = sizes[sizes.size() / 2];
  const double threshold = cfg.branch_jump_factor * median + 1e-12;
  for (const auto& [i, size] : steps) {
    if (size > threshold) {
      out[i].branch_jump = true;
      out[i].message = "branch jump: step exceeds branch_jump_factor x median step";
    }
  }

  // A point visited twice must carry the same solution on a single branch.
  std::map<std::vector<long long>, std::size_t> seen;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<long long> key;
    for (const auto& c : grid[i].q) {
      key.push_back(std::llround(c.real() * 1e10));
      key.push_back(std::llround(c.imag() * 1e10));
    }
    auto [it, inserted] = seen.emplace(std::move(key), i);
    if (inserted) continue;
    const std::size_t j = it->second;
    if (out[i].converged && out[j].converged && distance(out[i].z, out[j].z) > threshold) {
      out[i].branch_jump = true;
      out[i].message = "branch jump: revisited point carries a different solution";
    }
  }
  return out;
}

}  // namespace hm
