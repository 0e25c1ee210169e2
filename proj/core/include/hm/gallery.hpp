#pragma once

#include <map>
#include <string>
#include <vector>

#include "hm/poly.hpp"
#include "hm/spec_file.hpp"

namespace hm {

struct GalleryItem {
  std::string name;
  std::map<std::string, std::string> params;
  ProblemSpec spec;
  std::vector<std::string> notes;
};

/// Names accepted by build_gallery.
std::vector<std::string> gallery_names();

/// Builds a named example with its recommended region, grid and seed (a
/// regular solution at the first grid point). Parameters override the
/// defaults; unknown names throw UnknownItem, invalid parameters BadParams.
///
///   identity     m; explicit-h with μ ≡ 0, h = z
///   ex4d         mu1, psi; m = 2 Ψ-form
///   tgeven       m, alpha, mu; Ψ = Σ α_i w^i - 1
///   ex6d         m = 3, μ = (z1, z1, 0), Ψ = w1 w2 - w3
///   exR3         mu1, phi; m = 2 Φ-form
///   tgodd        m, alpha, mu; Φ = Σ α_k u^k - 1
///   exR5         m = 3, μ = (z1, z1, 0), Φ = u1 u2 - 1
///   tgoddsphere  m, alpha, mu; Ψ = Σ α_i w^i
///   exS5         mu; Ψ = w1² - z1²(w2² + w3²)
///   exS6         m = 4, μ = (z1, z1, z1, z1², z1², z1²), Φ = u1² + u2 u3
///   exS7         r, p, q, mu1; explicit-h, m = 4
///   nonsuper2    mu1, h1, h2; explicit-h, m = 2, μ1 depending on z2
///
/// List-valued parameters (alpha, mu) are comma separated.
GalleryItem build_gallery(const std::string& name, const std::map<std::string, std::string>& params = {});

/// For a linear Ψ or Φ: Σ a_j b_j as a polynomial in z1, where a_j, b_j are
/// the coefficients of q^j and conj(q^j). The sum of the squares of the real
/// coefficients of x^1..x^{2m} equals 4 Σ a_j b_j.
Poly linear_coefficient_square_sum(const ImplicitSystem& sys);

/// The fullness condition of the S7 family: whether
///   z^{r+q} conj(α3) + z^{r+p} conj(α2) + z^r α4 + z^q conj(α4) - z conj(α1) - α3 = 0
/// for all z forces α = 0.
bool s7_only_trivial_solution(int r, int p, int q);

}  // namespace hm
