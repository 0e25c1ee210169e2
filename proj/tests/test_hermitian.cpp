#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace hm;
using test::pq;

TEST_CASE("mu_index layout") {
  CHECK(mu_index(1, 2, 3) == 1);
  CHECK(mu_index(2, 3, 3) == 3);
  CHECK(mu_index(3, 4, 4) == 6);
  CHECK(mu_index(1, 4, 4) == 3);
  for (int m = 2; m <= 6; ++m) {
    std::set<std::size_t> seen;
    std::size_t expect = 1;
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j) {
        CHECK(mu_index(i, j, m) == expect++);
        seen.insert(mu_index(i, j, m));
      }
    CHECK(seen.size() == mu_count(m));
  }
  CHECK_THROWS_AS(mu_index(2, 2, 3), Error);
  CHECK_THROWS_AS(mu_index(1, 4, 3), Error);
}

TEST_CASE("eval_M examples") {
  const auto zero = HermitianData::zero(3, true);
  CHECK(eval_M(zero, std::vector<cplx>{0.7}).isZero(0.0));

  const auto two = HermitianData::parse(2, {"z1"}, true);
  const CMatrix M2 = eval_M(two, std::vector<cplx>{2.0});
  CHECK(M2(0, 1) == cplx{2.0});
  CHECK(M2(1, 0) == cplx{-2.0});
  CHECK(M2(0, 0) == cplx{0.0});

  const auto six = HermitianData::parse(3, {"z1", "z1", "0"}, true);
  const CMatrix M = eval_M(six, std::vector<cplx>{cplx{0.0, 1.0}});
  CHECK(M(0, 1) == cplx{0.0, 1.0});
  CHECK(M(0, 2) == cplx{0.0, 1.0});
  CHECK(M(1, 2) == cplx{0.0});
  CHECK((M + M.transpose()).isZero(0.0));
}

TEST_CASE("M is antisymmetric and its quadratic form vanishes") {
  const auto data = HermitianData::parse(4, {"z1*z2", "z1^2 - 1", "exp(z3)", "z4/(2 + z1)", "3*i", "z2 - z3"}, false);
  auto g = test::rng(11);
  for (int n = 0; n < 1000; ++n) {
    const auto z = test::random_vec(g, 4);
    const CMatrix M = eval_M(data, z);
    CHECK((M + M.transpose()).isZero(0.0));
    const auto a = test::random_vec(g, 4);
    const CVector alpha = Eigen::Map<const CVector>(a.data(), 4);
    CHECK(std::abs(cplx((alpha.transpose() * M * alpha)(0, 0))) <= 1e-14 * (1.0 + M.norm()) * alpha.squaredNorm());
  }
}

TEST_CASE("eval_w") {
  const auto zero = HermitianData::zero(3, true);
  const std::vector<cplx> q{{1, 2}, {3, -1}, {0.5, 0.5}};
  const CVector w0 = eval_w(zero, q, std::vector<cplx>{0.3});
  for (int k = 0; k < 3; ++k) CHECK(w0(k) == q[static_cast<std::size_t>(k)]);

  const auto two = HermitianData::parse(2, {"z1"}, true);
  const CVector w = eval_w(two, std::vector<cplx>{1.0, cplx{0, 1}}, std::vector<cplx>{1.0});
  CHECK(w(0) == cplx{1.0, 1.0});
  CHECK(w(1) == cplx{1.0, 1.0});
}

TEST_CASE("w is additive and real-homogeneous in its first argument") {
  const auto data = HermitianData::parse(3, {"z1", "z1^2", "1 - z1"}, true);
  auto g = test::rng(5);
  for (int n = 0; n < 200; ++n) {
    const auto z = test::random_vec(g, 1);
    const auto a = test::random_vec(g, 3);
    const auto b = test::random_vec(g, 3);
    std::vector<cplx> sum(3), scaled(3);
    const double t = 3.0 * unit_uniform(g) - 1.5;
    for (int k = 0; k < 3; ++k) {
      sum[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)] + b[static_cast<std::size_t>(k)];
      scaled[static_cast<std::size_t>(k)] = t * a[static_cast<std::size_t>(k)];
    }
    CHECK((eval_w(data, sum, z) - eval_w(data, a, z) - eval_w(data, b, z)).norm() < 1e-14);
    CHECK((eval_w(data, scaled, z) - t * eval_w(data, a, z)).norm() < 1e-14);
  }
}

TEST_CASE("eval_F examples") {
  const auto id = test::identity_system(3);
  const std::vector<cplx> q{{0.2, 0.1}, {-0.3, 0.4}, {1.0, 0.0}};
  CHECK(eval_F(id, pq(q), q).norm() == 0.0);

  const auto six = test::ex6d();
  CHECK(std::abs(eval_F(six, pq({0.0, 1.0, 1.0}), std::vector<cplx>{-0.5})(0)) < 1e-15);

  const auto r3 = ImplicitSystem::phi_form(HermitianData::parse(2, {"0"}, true), "u1 - 1");
  auto g = test::rng(2);
  for (int n = 0; n < 20; ++n) {
    const cplx q2 = unit_box_complex(g);
    const double x2 = unit_uniform(g);
    const PointQ p = PointQ::from_reduced(x2, std::vector<cplx>{q2});
    CHECK(std::abs(eval_F(r3, p, std::vector<cplx>{unit_box_complex(g)})(0) - (q2 - 1.0)) < 1e-15);
  }
}

TEST_CASE("eval_K examples") {
  const auto id = test::identity_system(3);
  const std::vector<cplx> q{{0.2, 0.1}, {-0.3, 0.4}, {1.0, 0.0}};
  const JacobianEval JK = eval_K(id, pq(q), q);
  CHECK((JK.K + CMatrix::Identity(3, 3)).isZero(0.0));
  CHECK(std::abs(JK.det - cplx{-1.0}) == 0.0);

  // The residual is Ψ itself, the negative of the printed quadratic.
  const JacobianEval K6 = eval_K(test::ex6d(), pq({0.0, 1.0, 1.0}), std::vector<cplx>{-0.5});
  CHECK(std::abs(K6.K(0, 0) - cplx{-2.0}) < 1e-14);
}

TEST_CASE("eval_K agrees with central differences") {
  const std::vector<ImplicitSystem> systems{
      test::system_of("nonsuper2"), test::system_of("exS7"), test::ex6d(), test::system_of("exR5"),
      ImplicitSystem::explicit_h(HermitianData::parse(3, {"z1*z3", "z2^2", "exp(z1)"}, false),
                                 {"z2 + z3^2", "z1*z2", "1 + z3 - z1"})};
  auto g = test::rng(8);
  for (const auto& sys : systems) {
    for (int n = 0; n < 20; ++n) {
      std::vector<double> x;
      for (int k = 0; k < sys.ambient_dim(); ++k) x.push_back(2.0 * unit_uniform(g) - 1.0);
      const PointQ p = point_from_ambient(sys, x);
      const auto z = test::random_vec(g, static_cast<std::size_t>(sys.unknowns()), 0.7);
      const JacobianEval JK = eval_K(sys, p, z);
      for (int j = 0; j < sys.unknowns(); ++j) {
        const double h = 1e-6;
        auto zp = z, zm = z;
        zp[static_cast<std::size_t>(j)] += h;
        zm[static_cast<std::size_t>(j)] -= h;
        const CVector fd = (eval_F(sys, p, zp) - eval_F(sys, p, zm)) / (2.0 * h);
        CHECK((fd - JK.K.col(j)).norm() <= 1e-6 * (1.0 + JK.K.col(j).norm()));
      }
      CHECK(test::rel_diff(JK.det, JK.K.determinant()) < 1e-10);
    }
  }
}

TEST_CASE("ambient coordinates round-trip") {
  const auto phi = test::system_of("exR5");
  const std::vector<double> x{0.2, 0.6, 0.1, 0.5, -0.3};
  const PointQ p = point_from_ambient(phi, x);
  CHECK(p.q[0] == cplx{0.0, 0.2});
  CHECK(p.q[1] == cplx{0.6, 0.1});
  CHECK(ambient_coordinates(phi, p) == x);

  const auto id = test::identity_system(2);
  const std::vector<double> y{1, 2, 3, 4};
  CHECK(point_from_ambient(id, y).q == std::vector<cplx>{{1, 2}, {3, 4}});
  CHECK_THROWS_AS(point_from_ambient(id, x), Error);
}

TEST_CASE("phi form collapses to the psi-form arguments") {
  const auto sys = test::system_of("exR3");
  auto g = test::rng(9);
  for (int n = 0; n < 20; ++n) {
    const PointQ p = PointQ::from_reduced(unit_uniform(g), test::random_vec(g, 1));
    const cplx z = unit_box_complex(g);
    const auto args = payload_arguments(sys, p, z);
    const CVector w = eval_w(sys.data, p.q, std::vector<cplx>{z});
    CHECK(std::abs(args[0] - (w(1) - z * w(0))) < 1e-15);
    CHECK(args[1] == z);
  }
}

TEST_CASE("mode validation") {
  CHECK_THROWS_AS(ImplicitSystem::psi_form(HermitianData::parse(2, {"z2"}, false), "w1"), Error);
  CHECK_THROWS_AS(ImplicitSystem::explicit_h(HermitianData::zero(2, false), {"z1"}), Error);
  CHECK(mode_from_string("explicit-h") == Mode::ExplicitH);
  CHECK(std::string(to_string(Mode::Phi)) == "phi");
  CHECK_THROWS_AS(mode_from_string("implicit"), Error);
}
