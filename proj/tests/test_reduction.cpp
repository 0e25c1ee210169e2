#include <doctest.h>

#include "hm/analysis.hpp"
#include "hm/pipeline.hpp"
#include "hm/reduction.hpp"
#include "support.hpp"

using namespace hm;
using test::pq;

namespace {

struct Solved {
  ImplicitSystem sys;
  std::vector<PointQ> grid;
  std::vector<SolveResult> sols;
};

Solved solve_item(const std::string& name, std::optional<int> res = {}) {
  const auto item = build_gallery(name);
  Solved s{build_system(item.spec), {}, {}};
  s.grid = make_point_grid(s.sys, item.spec.region, res.value_or(item.spec.grid));
  s.sols = continue_grid(s.sys, s.grid, item.spec.seed_z);
  return s;
}

}  // namespace

TEST_CASE("invariance residual of the zero field vanishes") {
  const auto s7 = solve_item("exS7", 2);
  const auto six = solve_item("ex6d", 2);
  const std::vector<cplx> zero4(4), zero3(3);
  CHECK(invariance_residual(s7.sys, s7.grid[0], s7.sols[0].z, zero4).value == cplx{0.0});
  CHECK(invariance_residual(six.sys, six.grid[0], six.sols[0].z, zero3).value == cplx{0.0});
  CHECK_THROWS_AS(invariance_residual(six.sys, six.grid[0], six.sols[0].z, zero4), Error);
}

TEST_CASE("sphere reduction of S5 passes") {
  const auto s = solve_item("exS5");
  const Report r = reduction_check(s.sys, s.grid, s.sols, {ReductionKind::Sphere, {}});
  CHECK(r.passed());
  CHECK(r.checks.at("sphere_reduction").samples == s.grid.size());
  CHECK(r.checks.at("sphere_reduction").max_rel <= 1e-10);
}

TEST_CASE("6d does not reduce along a constant direction") {
  const auto s = solve_item("ex6d", 3);
  const Report r = reduction_check(s.sys, s.grid, s.sols, {ReductionKind::Hyperplane, {}});
  CHECK_FALSE(r.passed());
  CHECK(r.checks.at("hyperplane_reduction").violations == s.grid.size());
  CHECK(r.checks.at("hyperplane_agreement").passed());
}

TEST_CASE("identity is not radially invariant") {
  const auto id = test::identity_system(2);
  const auto grid = make_point_grid(id, Region{RegionKind::Sphere, {0.3, 0.2, -0.4, 0.5}, {0.2}, 1.0}, 3);
  std::vector<SolveResult> sols;
  for (const auto& p : grid) sols.push_back(newton_solve(id, p, p.q));
  const Report r = reduction_check(id, grid, sols, {ReductionKind::Sphere, {}});
  CHECK_FALSE(r.passed());
  CHECK(r.checks.at("sphere_agreement").passed());
  // dz1(q·∂) = q1.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const GradientRecord g = implicit_gradient(id, grid[i], sols[i].z);
    CHECK(std::abs(directional_derivative(g, grid[i].q) - grid[i].q[0]) < 1e-15);
  }
}

TEST_CASE("hyperplane reduction of odd-dimensional items") {
  // Φ-form solutions do not depend on x1: invariance along e1.
  for (const char* name : {"exR3", "exR5", "tgodd"}) {
    const auto s = solve_item(name, 3);
    const Report r = reduction_check(s.sys, s.grid, s.sols, {ReductionKind::Hyperplane, {}});
    CHECK_MESSAGE(r.passed(), name);
  }
}

TEST_CASE("custom fields") {
  const auto s = solve_item("exR5", 2);
  const Report e1 = reduction_check(s.sys, s.grid, s.sols, {ReductionKind::Custom, {1.0, 0.0, 0.0}});
  CHECK(e1.passed());
  CHECK(e1.checks.count("custom_reduction") == 1);
  const Report e2 = reduction_check(s.sys, s.grid, s.sols, {ReductionKind::Custom, {0.0, 1.0, 0.0}});
  CHECK_FALSE(e2.passed());
  CHECK(e2.checks.at("custom_agreement").passed());
  CHECK_THROWS_AS(reduction_check(s.sys, s.grid, s.sols, {ReductionKind::Custom, {1.0}}), Error);
}

TEST_CASE("complex projective reduction") {
  // z1 = q1/q2 is invariant under both q·∂ and iq·∂.
  const auto sys = ImplicitSystem::psi_form(HermitianData::zero(2, true), "w1 - z1*w2");
  const auto grid = make_point_grid(sys, Region{RegionKind::Sphere, {0.4, 0.1, 0.5, -0.3}, {0.2}, 1.0}, 3);
  const auto sols = continue_grid(sys, grid, std::vector<cplx>{grid[0].q[0] / grid[0].q[1]});
  CHECK(reduction_check(sys, grid, sols, {ReductionKind::ComplexProjective, {}}).passed());

  // tgoddsphere reduces to the sphere, not to complex projective space.
  const auto t = solve_item("tgoddsphere", 3);
  CHECK(reduction_check(t.sys, t.grid, t.sols, {ReductionKind::Sphere, {}}).passed());
  const Report cp = reduction_check(t.sys, t.grid, t.sols, {ReductionKind::ComplexProjective, {}});
  CHECK_FALSE(cp.passed());
  CHECK(cp.checks.at("cp_agreement").passed());
}

TEST_CASE("reduction targets by name") {
  for (auto k : {ReductionKind::Hyperplane, ReductionKind::Sphere, ReductionKind::ComplexProjective,
                 ReductionKind::Custom})
    CHECK(reduction_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(reduction_from_string("torus"), Error);
}

TEST_CASE("Euler defect") {
  auto g = test::rng(41);
  const Expr quad = Expr::parse("w1*w2 - w3^2", numbered_vars("w", 3));
  const Expr s5 = Expr::parse("w1^2 - z1^2*(w2^2 + w3^2)", {"w1", "w2", "w3", "z1"});
  const Expr ex = Expr::parse("exp(w1)*w1", {"w1"});
  CHECK(euler_arity(s5) == 3);
  CHECK(euler_arity(quad) == 3);
  for (int n = 0; n < 1000; ++n) {
    const auto w = test::random_vec(g, 4);
    CHECK(std::abs(euler_defect(quad, w, 3, 2.0)) <= 1e-14);
    CHECK(std::abs(euler_defect(s5, w, 3, 2.0)) <= 1e-14);
    const cplx k = unit_box_complex(g);
    const cplx expect = (1.0 + w[0] - k) * ex.eval(std::vector<cplx>{w[0]});
    CHECK(std::abs(euler_defect(ex, std::vector<cplx>{w[0]}, 1, k) - expect) <= 1e-14 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("condition (H) and the Euler fit") {
  auto g = test::rng(42);
  const Expr s5 = Expr::parse("w1^2 - z1^2*(w2^2 + w3^2)", {"w1", "w2", "w3", "z1"});
  auto v = variety_condition_H(s5, sample_variety(s5, 100, g), sample_box(s5, 100, g));
  CHECK(v.condition_h);
  CHECK(v.max_defect_on_variety <= 1e-9);
  CHECK(v.is_euler);
  CHECK(std::abs(v.k - 2.0) < 1e-9);

  const Expr ex = Expr::parse("exp(w1)*w1", {"w1"});
  v = variety_condition_H(ex, sample_variety(ex, 100, g), sample_box(ex, 100, g));
  CHECK(v.condition_h);
  CHECK_FALSE(v.is_euler);
  CHECK(v.fit_residual >= 0.1);

  const Expr lin = Expr::parse("w1 + w2 + 1", {"w1", "w2"});
  const auto variety = sample_variety(lin, 100, g);
  v = variety_condition_H(lin, variety, sample_box(lin, 100, g));
  CHECK_FALSE(v.condition_h);
  for (const auto& x : variety) CHECK(std::abs(euler_defect(lin, x, 2, 0.0) + 1.0) < 1e-12);

  CHECK_THROWS_AS(variety_condition_H(s5, sample_variety(s5, 5, g), sample_box(s5, 100, g)), Error);
}

TEST_CASE("variety samples lie on the variety") {
  auto g = test::rng(43);
  const Expr psi = Expr::parse("w1*w2 - w3^2 + z1", {"w1", "w2", "w3", "z1"});
  const auto pts = sample_variety(psi, 50, g);
  CHECK(pts.size() == 50);
  for (const auto& x : pts) CHECK(std::abs(psi.eval(x)) <= 1e-12);
}

TEST_CASE("superminimality") {
  CHECK(superminimality_check(HermitianData::parse(3, {"z1", "z1", "0"}, true)));
  CHECK(superminimality_check(HermitianData::parse(3, {"z1", "z1", "0"}, false)));
  CHECK(superminimality_check(HermitianData::parse(3, {"1", "2*i", "0"}, false)));
  CHECK_FALSE(superminimality_check(HermitianData::parse(4, {"z1*z2", "z1", "0", "0", "z1", "z1^3"}, false)));
  CHECK_FALSE(superminimality_check(build_system(build_gallery("exS7").spec).data));
}

TEST_CASE("fullness") {
  auto g = test::rng(44);
  const auto id = test::identity_system(2);
  std::vector<GradientRecord> grads;
  for (int n = 0; n < 32; ++n) {
    const auto q = test::random_vec(g, 2);
    grads.push_back(implicit_gradient(id, pq(q), q));
  }
  FullnessResult f = fullness_rank_test(grads, 4);
  CHECK(f.rank == 2);
  CHECK_FALSE(f.full);

  const auto six = solve_item("ex6d");
  std::vector<GradientRecord> sg;
  for (std::size_t i = 0; i < six.grid.size(); i += 128)
    sg.push_back(implicit_gradient(six.sys, six.grid[i], six.sols[i].z));
  f = fullness_rank_test(sg, 6);
  CHECK(f.full);

  // Rescaling every gradient by one complex constant keeps the verdict.
  for (auto& r : sg)
    for (auto& d : r.dz1_dx) d *= cplx{-3.0, 2.5};
  CHECK(fullness_rank_test(sg, 6).full);
  for (auto& r : grads)
    for (auto& d : r.dz1_dx) d *= cplx{0.0, 7.0};
  CHECK(fullness_rank_test(grads, 4).rank == 2);

  CHECK_THROWS_AS(fullness_rank_test(std::span<const GradientRecord>(sg).first(3), 6), Error);
}

TEST_CASE("S7 algebraic fullness condition") {
  CHECK(s7_only_trivial_solution(1, 1, 3));
  CHECK(s7_only_trivial_solution(1, 2, 4));
  CHECK(s7_only_trivial_solution(1, 1, 5));
  CHECK_FALSE(s7_only_trivial_solution(1, 1, 2));
  CHECK_FALSE(s7_only_trivial_solution(1, 1, 1));
}

TEST_CASE("pipeline homogeneity on S5 and S6") {
  for (const char* name : {"exS5", "exS6", "tgoddsphere"}) {
    PipelineOptions opt;
    opt.checks = {"homogeneity"};
    const auto r = run_pipeline(build_gallery(name).spec, opt).report;
    CHECK_MESSAGE(r.passed(), name);
    CHECK(r.info.contains("homogeneity"));
  }
}
