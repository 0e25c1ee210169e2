#include "hm/hermitian.hpp"

#include <cmath>

namespace hm {

std::size_t mu_count(int m) { return m < 2 ? 0 : static_cast<std::size_t>(m * (m - 1) / 2); }

std::size_t mu_index(int i, int j, int m) {
  if (m < 2 || i < 1 || j <= i || j > m)
    throw Error(ErrorKind::IndexOutOfRange, "mu_index(" + std::to_string(i) + ", " + std::to_string(j) +
                                                ") outside 1 <= i < j <= " + std::to_string(m));
  return static_cast<std::size_t>((i - 1) * m - i * (i - 1) / 2 + (j - i));
}

HermitianData HermitianData::parse(int m, const std::vector<std::string>& mu_text, bool z1_only) {
  if (m < 2) throw Error(ErrorKind::Validation, "dimension m must be at least 2");
  if (mu_text.size() != mu_count(m))
    throw Error(ErrorKind::Validation, "expected " + std::to_string(mu_count(m)) + " mu expressions, got " +
                                           std::to_string(mu_text.size()));
  const auto vars = z1_only ? std::vector<std::string>{"z1"} : numbered_vars("z", static_cast<std::size_t>(m));
  HermitianData d;
  d.m = m;
  for (const auto& t : mu_text) d.mu.push_back(Expr::parse(t, vars));
  return d;
}

HermitianData HermitianData::zero(int m, bool z1_only) {
  return parse(m, std::vector<std::string>(mu_count(m), "0"), z1_only);
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::ExplicitH:
      return "explicit-h";
    case Mode::Psi:
      return "psi";
    case Mode::Phi:
      return "phi";
  }
  return "?";
}

Mode mode_from_string(const std::string& text) {
  if (text == "explicit-h") return Mode::ExplicitH;
  if (text == "psi") return Mode::Psi;
  if (text == "phi") return Mode::Phi;
  throw Error(ErrorKind::Validation, "unknown mode '" + text + "'");
}

PointQ PointQ::from_reduced(double x2, std::span<const cplx> rest) {
  PointQ p;
  p.q.push_back(cplx{0.0, x2});
  p.q.insert(p.q.end(), rest.begin(), rest.end());
  return p;
}

ImplicitSystem ImplicitSystem::explicit_h(HermitianData data, const std::vector<std::string>& h_text) {
  if (h_text.size() != static_cast<std::size_t>(data.m))
    throw Error(ErrorKind::Validation, "explicit-h needs exactly m = " + std::to_string(data.m) + " h expressions");
  ImplicitSystem s;
  const auto vars = numbered_vars("z", static_cast<std::size_t>(data.m));
  for (const auto& t : h_text) s.h.push_back(Expr::parse(t, vars));
  s.data = std::move(data);
  s.mode = Mode::ExplicitH;
  return s;
}

ImplicitSystem ImplicitSystem::psi_form(HermitianData data, const std::string& psi_text) {
  if (!data.z1_only()) throw Error(ErrorKind::Validation, "psi form needs mu depending on z1 only");
  auto vars = numbered_vars("w", static_cast<std::size_t>(data.m));
  vars.push_back("z1");
  ImplicitSystem s;
  s.payload = Expr::parse(psi_text, vars);
  s.data = std::move(data);
  s.mode = Mode::Psi;
  return s;
}

ImplicitSystem ImplicitSystem::phi_form(HermitianData data, const std::string& phi_text) {
  if (!data.z1_only()) throw Error(ErrorKind::Validation, "phi form needs mu depending on z1 only");
  auto vars = numbered_vars("u", static_cast<std::size_t>(data.m - 1));
  vars.push_back("z1");
  ImplicitSystem s;
  s.payload = Expr::parse(phi_text, vars);
  s.data = std::move(data);
  s.mode = Mode::Phi;
  return s;
}

std::size_t ImplicitSystem::payload_arity() const {
  switch (mode) {
    case Mode::Psi:
      return static_cast<std::size_t>(data.m);
    case Mode::Phi:
      return static_cast<std::size_t>(data.m - 1);
    case Mode::ExplicitH:
      break;
  }
  return 0;
}

std::vector<double> ambient_coordinates(const ImplicitSystem& sys, const PointQ& p) {
  std::vector<double> x;
  for (const auto& qj : p.q) {
    x.push_back(qj.real());
    x.push_back(qj.imag());
  }
  if (sys.mode == Mode::Phi) x.erase(x.begin());
  return x;
}

PointQ point_from_ambient(const ImplicitSystem& sys, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(sys.ambient_dim()))
    throw Error(ErrorKind::Validation, "point has " + std::to_string(x.size()) + " coordinates, expected " +
                                           std::to_string(sys.ambient_dim()));
  std::vector<double> full(x.begin(), x.end());
  if (sys.mode == Mode::Phi) full.insert(full.begin(), 0.0);
  PointQ p;
  for (std::size_t j = 0; j + 1 < full.size(); j += 2) p.q.emplace_back(full[j], full[j + 1]);
  return p;
}

namespace {

// Shared residual construction over any evaluation algebra T.
template <class T, class Lift>
std::vector<T> residual_impl(const ImplicitSystem& sys, const std::vector<T>& q, const std::vector<T>& qbar,
                             const std::vector<T>& z, const Lift& lift) {
  const int m = sys.m();
  const HermitianData& d = sys.data;
  std::vector<T> mu;
  mu.reserve(d.mu.size());
  for (const auto& e : d.mu) {
    const std::span<const T> in(z.data(), e.vars().size());
    mu.push_back(e.evaluate<T>(in, lift));
  }
  // w^i = q^i - sum_j M^i_j conj(q^j), M skew with upper triangle mu.
  std::vector<T> w;
  w.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    T acc = q[static_cast<std::size_t>(i - 1)];
    for (int j = 1; j <= m; ++j) {
      if (j == i) continue;
      const auto& qb = qbar[static_cast<std::size_t>(j - 1)];
      if (i < j)
        acc = acc - mu[mu_index(i, j, m) - 1] * qb;
      else
        acc = acc + mu[mu_index(j, i, m) - 1] * qb;
    }
    w.push_back(std::move(acc));
  }

  switch (sys.mode) {
    case Mode::ExplicitH: {
      std::vector<T> F;
      for (int i = 0; i < m; ++i) {
        const std::span<const T> in(z.data(), sys.h[static_cast<std::size_t>(i)].vars().size());
        F.push_back(w[static_cast<std::size_t>(i)] - sys.h[static_cast<std::size_t>(i)].evaluate<T>(in, lift));
      }
      return F;
    }
    case Mode::Psi: {
      std::vector<T> in = w;
      in.push_back(z[0]);
      return {sys.payload.evaluate<T>(std::span<const T>(in), lift)};
    }
    case Mode::Phi: {
      std::vector<T> in;
      for (int k = 1; k < m; ++k)
        in.push_back(w[static_cast<std::size_t>(k)] - mu[static_cast<std::size_t>(k - 1)] * w[0]);
      in.push_back(z[0]);
      return {sys.payload.evaluate<T>(std::span<const T>(in), lift)};
    }
  }
  return {};
}

void check_sizes(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z) {
  if (p.q.size() != static_cast<std::size_t>(sys.m()))
    throw Error(ErrorKind::ModeMismatch, "point has " + std::to_string(p.q.size()) + " complex coordinates, expected " +
                                             std::to_string(sys.m()));
  if (z.size() != static_cast<std::size_t>(sys.unknowns()))
    throw Error(ErrorKind::ModeMismatch, std::string(to_string(sys.mode)) + " system takes " +
                                             std::to_string(sys.unknowns()) + " unknowns, got " +
                                             std::to_string(z.size()));
}

// Jets over (z, q, conj q) when with_q, otherwise over z only.
std::vector<Jet> jets(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z, int order, bool with_q) {
  check_sizes(sys, p, z);
  const std::size_t nz = z.size();
  const std::size_t m = p.q.size();
  const std::size_t n = with_q ? nz + 2 * m : nz;
  std::vector<Jet> zj, qj, qbj;
  for (std::size_t k = 0; k < nz; ++k) zj.push_back(Jet::variable(z[k], k, n, order));
  for (std::size_t j = 0; j < m; ++j) {
    if (with_q) {
      qj.push_back(Jet::variable(p.q[j], nz + j, n, order));
      qbj.push_back(Jet::variable(std::conj(p.q[j]), nz + m + j, n, order));
    } else {
      qj.emplace_back(p.q[j], n, order);
      qbj.emplace_back(std::conj(p.q[j]), n, order);
    }
  }
  // Ψ/Φ μ expressions read only z1; explicit-h data may be declared over z1 only too.
  return residual_impl<Jet>(sys, qj, qbj, zj, [n, order](cplx c) { return Jet(c, n, order); });
}

}  // namespace

CMatrix eval_M(const HermitianData& data, std::span<const cplx> z) {
  const int m = data.m;
  CMatrix M = CMatrix::Zero(m, m);
  for (int i = 1; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      const Expr& e = data.entry(i, j);
      if (z.size() < e.vars().size()) throw Error(ErrorKind::Eval, "too few z values for mu");
      const cplx v = e.eval(z.first(e.vars().size()));
      M(i - 1, j - 1) = v;
      M(j - 1, i - 1) = -v;
    }
  }
  return M;
}

CVector eval_w(const HermitianData& data, std::span<const cplx> q, std::span<const cplx> z) {
  const CMatrix M = eval_M(data, z);
  CVector w(data.m);
  for (int i = 0; i < data.m; ++i) {
    cplx acc = q[static_cast<std::size_t>(i)];
    for (int j = 0; j < data.m; ++j) acc -= M(i, j) * std::conj(q[static_cast<std::size_t>(j)]);
    w(i) = acc;
  }
  return w;
}

CVector eval_F(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z) {
  check_sizes(sys, p, z);
  std::vector<cplx> q = p.q, qb, zz(z.begin(), z.end());
  for (const auto& v : q) qb.push_back(std::conj(v));
  const auto r = residual_impl<cplx>(sys, q, qb, zz, [](cplx c) { return c; });
  CVector F(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) F(static_cast<Eigen::Index>(i)) = r[i];
  return F;
}

JacobianEval eval_K(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z) {
  const auto r = jets(sys, p, z, 1, false);
  const auto n = static_cast<Eigen::Index>(r.size());
  CMatrix K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = r[static_cast<std::size_t>(i)].first(static_cast<std::size_t>(j));
  const cplx det = n == 1 ? K(0, 0) : K.partialPivLu().determinant();
  return {K, det};
}

ResidualDerivatives residual_derivatives(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z) {
  const auto r = jets(sys, p, z, 1, true);
  const auto nz = static_cast<Eigen::Index>(z.size());
  const auto nq = static_cast<Eigen::Index>(2 * p.q.size());
  ResidualDerivatives out{CVector(nz), CMatrix(nz, nz), CMatrix(nz, nq)};
  for (Eigen::Index i = 0; i < nz; ++i) {
    const Jet& J = r[static_cast<std::size_t>(i)];
    out.F(i) = J.value();
    for (Eigen::Index k = 0; k < nz; ++k) out.dz(i, k) = J.first(static_cast<std::size_t>(k));
    for (Eigen::Index k = 0; k < nq; ++k) out.dq(i, k) = J.first(static_cast<std::size_t>(nz + k));
  }
  return out;
}

std::vector<Jet> residual_jets(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z, int order) {
  return jets(sys, p, z, order, true);
}

Poly residual_poly(const ImplicitSystem& sys, const PointQ& p) {
  if (sys.mode == Mode::ExplicitH) throw Error(ErrorKind::ModeMismatch, "explicit-h residual is not scalar");
  check_sizes(sys, p, std::vector<cplx>(1));
  std::vector<Poly> q, qb;
  for (const auto& v : p.q) {
    q.emplace_back(v);
    qb.emplace_back(std::conj(v));
  }
  const std::vector<Poly> z{Poly::monomial(1)};
  return residual_impl<Poly>(sys, q, qb, z, [](cplx c) { return Poly(c); }).front();
}

Poly residual_poly(const ImplicitSystem& sys, std::span<const cplx> q, std::span<const cplx> qbar) {
  if (sys.mode == Mode::ExplicitH) throw Error(ErrorKind::ModeMismatch, "explicit-h residual is not scalar");
  if (q.size() != static_cast<std::size_t>(sys.m()) || qbar.size() != q.size())
    throw Error(ErrorKind::ModeMismatch, "q and conj(q) need m entries each");
  std::vector<Poly> qp, qbp;
  for (std::size_t j = 0; j < q.size(); ++j) {
    qp.emplace_back(q[j]);
    qbp.emplace_back(qbar[j]);
  }
  const std::vector<Poly> z{Poly::monomial(1)};
  return residual_impl<Poly>(sys, qp, qbp, z, [](cplx c) { return Poly(c); }).front();
}

std::vector<cplx> payload_arguments(const ImplicitSystem& sys, const PointQ& p, cplx z1) {
  if (sys.mode == Mode::ExplicitH) throw Error(ErrorKind::ModeMismatch, "explicit-h systems have no payload");
  const std::vector<cplx> z{z1};
  const CVector w = eval_w(sys.data, p.q, z);
  std::vector<cplx> out;
  if (sys.mode == Mode::Psi) {
    for (Eigen::Index i = 0; i < w.size(); ++i) out.push_back(w(i));
  } else {
    const CMatrix M = eval_M(sys.data, z);
    for (Eigen::Index k = 1; k < w.size(); ++k) out.push_back(w(k) - M(0, k) * w(0));
  }
  out.push_back(z1);
  return out;
}

PointQ point_for_solution(const ImplicitSystem& sys, std::span<const cplx> z) {
  if (sys.mode != Mode::ExplicitH) throw Error(ErrorKind::ModeMismatch, "point_for_solution needs an explicit-h system");
  const int m = sys.m();
  const CMatrix M = eval_M(sys.data, z);
  const Eigen::MatrixXd A = M.real();
  const Eigen::MatrixXd B = M.imag();
  // q = a + ib:  (I - A) a - B b = Re h,  -B a + (I + A) b = Im h.
  Eigen::MatrixXd L(2 * m, 2 * m);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
  L << I - A, -B, -B, I + A;
  Eigen::VectorXd rhs(2 * m);
  for (int i = 0; i < m; ++i) {
    const auto& e = sys.h[static_cast<std::size_t>(i)];
    const cplx hv = e.eval(z.first(e.vars().size()));
    rhs(i) = hv.real();
    rhs(m + i) = hv.imag();
  }
  const Eigen::VectorXd ab = L.fullPivLu().solve(rhs);
  PointQ p;
  for (int i = 0; i < m; ++i) p.q.emplace_back(ab(i), ab(m + i));
  return p;
}

}  // namespace hm
