#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hm/expr.hpp"
#include "hm/jet.hpp"
#include "hm/poly.hpp"

namespace hm {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Position (1-based) of μ for the strictly-upper entry (i, j), 1 <= i < j <= m,
/// in the row-major layout of the skew matrix M: row 1 holds μ1..μ(m-1), row 2
/// continues with μm.., and so on.
std::size_t mu_index(int i, int j, int m);
std::size_t mu_count(int m);

/// The m(m-1)/2 holomorphic functions μ that fix a Hermitian structure on a
/// domain of R^{2m}. In the superminimal case every μ is a function of z1
/// alone and the expressions are declared over {z1} only.
struct HermitianData {
  int m = 0;
  std::vector<Expr> mu;

  static HermitianData parse(int m, const std::vector<std::string>& mu_text, bool z1_only);
  static HermitianData zero(int m, bool z1_only);

  bool z1_only() const { return mu.empty() || mu.front().vars().size() == 1; }
  /// mu expression for the entry (i, j), i < j.
  const Expr& entry(int i, int j) const { return mu[mu_index(i, j, m) - 1]; }
};

enum class Mode { ExplicitH, Psi, Phi };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& text);

/// A point of the domain, stored as the m complex coordinates
/// q^j = x^{2j-1} + i x^{2j}. Points of a Φ-form system live in the
/// hyperplane x^1 = 0, i.e. q^1 = i x^2.
struct PointQ {
  std::vector<cplx> q;

  static PointQ from_reduced(double x2, std::span<const cplx> rest);
};

/// The implicit equations whose local solutions z(q) are studied:
///   ExplicitH: F^i = w^i(q, z) - h^i(z), unknowns z1..zm;
///   Psi:       Ψ(w^1..w^m, z1), one unknown;
///   Phi:       Φ(u^1..u^{m-1}, z1) with u^k = w^{k+1} - μk w^1 on x^1 = 0.
/// An explicit-h system may carry an auxiliary scalar equation in z1 alone
/// (a Ψ-form system) used to seed and track z1.
struct ImplicitSystem {
  HermitianData data;
  Mode mode = Mode::ExplicitH;
  std::vector<Expr> h;  // ExplicitH: m expressions in z1..zm
  Expr payload;         // Psi: in w1..wm,z1; Phi: in u1..u(m-1),z1
  std::shared_ptr<const ImplicitSystem> z1_equation;

  static ImplicitSystem explicit_h(HermitianData data, const std::vector<std::string>& h_text);
  static ImplicitSystem psi_form(HermitianData data, const std::string& psi_text);
  static ImplicitSystem phi_form(HermitianData data, const std::string& phi_text);

  int m() const { return data.m; }
  /// Number of unknowns: m for explicit-h, 1 otherwise.
  int unknowns() const { return mode == Mode::ExplicitH ? data.m : 1; }
  /// Dimension of the real domain: 2m, or 2m-1 for Φ-form.
  int ambient_dim() const { return mode == Mode::Phi ? 2 * data.m - 1 : 2 * data.m; }
  /// Index of the first ambient real axis among x^1..x^{2m} (0-based).
  int ambient_offset() const { return mode == Mode::Phi ? 1 : 0; }
  /// Number of the payload's leading arguments (w or u).
  std::size_t payload_arity() const;
};

/// Real coordinates of the ambient domain (x^1..x^{2m}, or x^2..x^{2m} for Φ-form).
std::vector<double> ambient_coordinates(const ImplicitSystem& sys, const PointQ& p);
PointQ point_from_ambient(const ImplicitSystem& sys, std::span<const double> x);

CMatrix eval_M(const HermitianData& data, std::span<const cplx> z);

/// w^i = q^i - M^i_j(z) conj(q^j). Also the real-linear map α -> α - M conj(α).
CVector eval_w(const HermitianData& data, std::span<const cplx> q, std::span<const cplx> z);

/// Residual of the system; length unknowns().
CVector eval_F(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z);

struct JacobianEval {
  CMatrix K;
  cplx det;
};

/// K = (∂F^i/∂z^j) by jet propagation; det via partially pivoted LU.
JacobianEval eval_K(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z);

/// First derivatives of the residual at (q, z) with respect to the unknowns
/// and to the 2m Wirtinger directions q^1..q^m, conj(q)^1..conj(q)^m.
struct ResidualDerivatives {
  CVector F;
  CMatrix dz;  // unknowns() x unknowns()
  CMatrix dq;  // unknowns() x 2m
};

ResidualDerivatives residual_derivatives(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z);

/// Residual jets of the given order with respect to (z_1..z_n, q, conj q).
std::vector<Jet> residual_jets(const ImplicitSystem& sys, const PointQ& p, std::span<const cplx> z, int order);

/// Residual of a scalar system as a polynomial in z1 (lowest degree first).
/// Throws NotPolynomial when the residual is not polynomial in z1.
Poly residual_poly(const ImplicitSystem& sys, const PointQ& p);

/// As residual_poly with q and conj(q) supplied as independent inputs.
Poly residual_poly(const ImplicitSystem& sys, std::span<const cplx> q, std::span<const cplx> qbar);

/// Values bound to the payload's variables at (q, z1): (w^1..w^m, z1) for
/// Ψ-form, (u^1..u^{m-1}, z1) for Φ-form.
std::vector<cplx> payload_arguments(const ImplicitSystem& sys, const PointQ& p, cplx z1);

/// For explicit-h systems: the unique q with F(q, z) = 0 for given z, from the
/// real-linear equation q - M(z) conj(q) = h(z).
PointQ point_for_solution(const ImplicitSystem& sys, std::span<const cplx> z);

}  // namespace hm
