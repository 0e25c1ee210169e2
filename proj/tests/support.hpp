#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hm/gallery.hpp"
#include "hm/hermitian.hpp"
#include "hm/reduction.hpp"
#include "hm/solver.hpp"
#include "hm/spec_file.hpp"

namespace hm::test {

inline std::mt19937_64 rng(std::uint64_t seed = 0x5EED) { return std::mt19937_64(seed); }

inline std::vector<cplx> random_vec(std::mt19937_64& g, std::size_t n, double radius = 1.0) {
  std::vector<cplx> v;
  for (std::size_t k = 0; k < n; ++k) v.push_back(radius * unit_box_complex(g));
  return v;
}

inline double rel_diff(cplx a, cplx b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

inline ImplicitSystem system_of(const std::string& name, const std::map<std::string, std::string>& params = {}) {
  return build_system(build_gallery(name, params).spec);
}

inline ImplicitSystem identity_system(int m) {
  std::vector<std::string> h;
  for (int k = 1; k <= m; ++k) h.push_back("z" + std::to_string(k));
  return ImplicitSystem::explicit_h(HermitianData::zero(m, false), h);
}

inline ImplicitSystem ex6d() {
  return ImplicitSystem::psi_form(HermitianData::parse(3, {"z1", "z1", "0"}, true), "w1*w2 - w3");
}

inline PointQ pq(std::vector<cplx> q) { return PointQ{std::move(q)}; }

/// Evaluates a highest-first coefficient list at x.
inline cplx horner(const std::vector<cplx>& c, cplx x) {
  cplx v{};
  for (const auto& a : c) v = v * x + a;
  return v;
}

}  // namespace hm::test
