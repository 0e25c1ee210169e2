#include <doctest.h>

#include <random>
#include <string>

#include "hm/expr.hpp"
#include "support.hpp"

using namespace hm;

TEST_CASE("parse and evaluate") {
  const Expr e = Expr::parse("z1^2 - 1", {"z1"});
  CHECK(e.eval(std::vector<cplx>{2.0}) == cplx{3.0, 0.0});

  const Expr psi = Expr::parse("w1*w2 - w3", {"w1", "w2", "w3"});
  CHECK(psi.eval(std::vector<cplx>{2.0, 3.0, 1.0}) == cplx{5.0, 0.0});

  const Expr x = Expr::parse("exp(w1)*w1", {"w1"});
  CHECK(std::abs(x.eval(std::vector<cplx>{1.0}) - std::exp(1.0)) < 1e-15);
}

TEST_CASE("precedence and unary minus") {
  const std::vector<std::string> v{"z1", "z2"};
  const std::vector<cplx> at{3.0, 2.0};
  CHECK(Expr::parse("-z1^2", v).eval(at) == cplx{-9.0});
  CHECK(Expr::parse("z1 - z2 - 1", v).eval(at) == cplx{0.0});
  CHECK(Expr::parse("z1/z2/2", v).eval(at) == cplx{0.75});
  CHECK(Expr::parse("2*z1^2*z2", v).eval(at) == cplx{36.0});
  CHECK(Expr::parse("(z1+z2)^2", v).eval(at) == cplx{25.0});
  CHECK(Expr::parse("i*i", v).eval(at) == cplx{-1.0});
  CHECK(Expr::parse("1.5e1", v).eval(at) == cplx{15.0});
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(Expr::parse("z1 +", {"z1"}), SyntaxError);
  CHECK_THROWS_AS(Expr::parse("z1^-1", {"z1"}), SyntaxError);
  CHECK_THROWS_AS(Expr::parse("z1^1.5", {"z1"}), SyntaxError);
  CHECK_THROWS_AS(Expr::parse("sin(z1)", {"z1"}), Error);
  try {
    Expr::parse("z1 + q7", {"z1"});
    FAIL("expected UnknownVariable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownVariable);
  }
  try {
    Expr::parse("1/(z1-1)", {"z1"}).eval(std::vector<cplx>{1.0});
    FAIL("expected DivisionByZero");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZero);
  }
}

TEST_CASE("symbolic derivatives") {
  CHECK(Expr::parse("z1^2", {"z1"}).diff("z1").eval(std::vector<cplx>{3.0}) == cplx{6.0});
  CHECK(Expr::parse("5 + 2*i", {"z1"}).diff("z1").is_zero());

  // w ∂Ψ/∂w = (1 + w)Ψ for Ψ = exp(w)w.
  const Expr psi = Expr::parse("exp(w1)*w1", {"w1"});
  const Expr d = psi.diff("w1");
  for (cplx w : {cplx{0.3, -0.2}, cplx{-1.1, 0.7}, cplx{2.0, 0.0}}) {
    const std::vector<cplx> at{w};
    CHECK(std::abs(d.eval(at) - (1.0 + w) * std::exp(w)) < 1e-13 * std::abs(std::exp(w)) * 4);
    CHECK(std::abs(w * d.eval(at) - (1.0 + w) * psi.eval(at)) < 1e-12);
  }
}

TEST_CASE("jets") {
  const Expr e = Expr::parse("z1*z2", {"z1", "z2"});
  const Jet j = e.eval_jet(std::map<std::string, cplx>{{"z1", 2.0}, {"z2", 3.0}}, 1);
  CHECK(j.value() == cplx{6.0});
  CHECK(j.first(0) == cplx{3.0});
  CHECK(j.first(1) == cplx{2.0});

  const Expr s5 = Expr::parse("w1^2 - z1^2*(w2^2 + w3^2)", {"w1", "w2", "w3", "z1"});
  const Jet k = s5.eval_jet(std::vector<cplx>{1.0, 1.0, 0.0, 1.0}, 1);
  CHECK(k.value() == cplx{0.0});
  CHECK(k.first(0) == cplx{2.0});
  CHECK(k.first(1) == cplx{-2.0});
  CHECK(k.first(2) == cplx{0.0});
  CHECK(k.first(3) == cplx{-2.0});

  const Jet c = Expr::parse("z1^3", {"z1"}).eval_jet(std::vector<cplx>{1.0}, 2);
  CHECK(c.second(0, 0) == cplx{6.0});
}

namespace {

// Random expression text over z1..z3 from the supported grammar.
std::string random_expr(std::mt19937_64& g, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  std::uniform_int_distribution<int> var(1, 3);
  std::uniform_int_distribution<int> small(1, 4);
  switch (pick(g)) {
    case 0:
      return "z" + std::to_string(var(g));
    case 1:
      return std::to_string(small(g)) + ".5";
    case 2:
      return "(" + random_expr(g, depth - 1) + " + " + random_expr(g, depth - 1) + ")";
    case 3:
      return "(" + random_expr(g, depth - 1) + " - " + random_expr(g, depth - 1) + ")";
    case 4:
    case 5:
      return random_expr(g, depth - 1) + "*" + random_expr(g, depth - 1);
    case 6:
      return "(" + random_expr(g, depth - 1) + ")^" + std::to_string(small(g) - 1);
    default:
      return random_expr(g, depth - 1) + "/(3 + z" + std::to_string(var(g)) + "^2)";
  }
}

}  // namespace

TEST_CASE("random expressions: jets against differences and symbolic derivatives") {
  auto g = test::rng(17);
  const std::vector<std::string> vars{"z1", "z2", "z3"};
  int tested = 0;
  for (int n = 0; n < 1000; ++n) {
    std::string text = random_expr(g, 4);
    if (n % 10 == 0) text = "exp(" + text + "/8)";
    const Expr e = Expr::parse(text, vars);
    const auto at = test::random_vec(g, 3, 0.8);
    Jet j;
    try {
      j = e.eval_jet(at, 2);
    } catch (const Error& err) {
      REQUIRE(err.kind() == ErrorKind::DivisionByZero);
      continue;
    }
    ++tested;
    for (std::size_t a = 0; a < 3; ++a) {
      const double h = 1e-5;
      auto plus = at, minus = at;
      plus[a] += h;
      minus[a] -= h;
      const cplx fd = (e.eval(plus) - e.eval(minus)) / (2.0 * h);
      const double scale = 1.0 + std::abs(j.first(a)) + std::abs(j.value());
      CHECK_MESSAGE(std::abs(fd - j.first(a)) <= 1e-6 * scale, text);
      const cplx sym = e.diff(a).eval(at);
      CHECK_MESSAGE(std::abs(sym - j.first(a)) <= 1e-12 * scale, text);
      for (std::size_t b = 0; b < 3; ++b) CHECK(j.second(a, b) == j.second(b, a));
      const cplx sym2 = e.diff(a).diff(a).eval(at);
      CHECK_MESSAGE(std::abs(sym2 - j.second(a, a)) <= 1e-10 * (1.0 + std::abs(sym2)), text);
    }
  }
  CHECK(tested > 900);
}

TEST_CASE("printing round-trips") {
  auto g = test::rng(3);
  const std::vector<std::string> vars{"z1", "z2", "z3"};
  for (int n = 0; n < 200; ++n) {
    const Expr e = Expr::parse(random_expr(g, 3), vars);
    const Expr back = Expr::parse(e.to_string(), vars);
    const auto at = test::random_vec(g, 3, 0.8);
    try {
      CHECK(test::rel_diff(e.eval(at), back.eval(at)) < 1e-13);
    } catch (const Error&) {
    }
  }
}
