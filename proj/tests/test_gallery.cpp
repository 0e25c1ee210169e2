#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hm/pipeline.hpp"
#include "support.hpp"

using namespace hm;
using nlohmann::json;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Eval;
}

json valid_spec() {
  return json::parse(R"({
    "m": 2, "mu": ["0"], "mode": "explicit-h", "h": ["z1", "z2"],
    "region": {"box": {"center": [0.1, 0.2, 0.3, 0.4], "half_widths": [0.5]}},
    "grid": 3, "seed_z": [[0.1, 0.2], [0.3, 0.4]]
  })");
}

}  // namespace

TEST_CASE("every gallery item builds and round-trips") {
  for (const auto& name : gallery_names()) {
    const GalleryItem item = build_gallery(name);
    CHECK(item.spec.name == name);
    const json j = spec_to_json(item.spec);
    const ProblemSpec back = spec_from_json(j);
    CHECK_MESSAGE(spec_to_json(back) == j, name);
    CHECK(spec_digest(back) == spec_digest(item.spec));
    const ImplicitSystem sys = build_system(back);
    CHECK(static_cast<int>(back.seed_z.size()) == sys.unknowns());
    CHECK(newton_solve(sys, make_point_grid(sys, back.region, back.grid).front(), back.seed_z).converged);
  }
}

TEST_CASE("gallery contents") {
  const auto six = build_gallery("ex6d").spec;
  CHECK(six.mode == Mode::Psi);
  CHECK(six.m == 3);
  CHECK(six.mu == std::vector<std::string>{"z1", "z1", "0"});
  CHECK(six.psi == "w1*w2 - w3");

  const auto s5 = build_gallery("exS5", {{"mu", "z1,2,z1+1"}}).spec;
  CHECK(s5.psi == "w1^2 - z1^2*(w2^2 + w3^2)");
  CHECK(s5.mu == std::vector<std::string>{"z1", "2", "z1+1"});
  CHECK(s5.params.at("mu") == "z1,2,z1+1");

  const auto tg = build_gallery("tgeven", {{"m", "2"}, {"alpha", "1,1"}, {"mu", "z1"}});
  CHECK(tg.spec.psi == "(1)*w1 + (1)*w2 - 1");
  CHECK(linear_coefficient_square_sum(build_system(tg.spec)).degree() < 0);

  const auto tgo = build_gallery("tgodd");
  CHECK(tgo.spec.mode == Mode::Phi);
  CHECK(linear_coefficient_square_sum(build_system(tgo.spec)).degree() < 0);

  const auto s7 = build_gallery("exS7", {{"q", "2"}});
  CHECK(s7.notes.size() == 2);
  CHECK(build_gallery("exS7").notes.size() == 1);
  CHECK(s7.spec.params.at("q") == "2");
}

TEST_CASE("gallery errors") {
  CHECK(kind_of([] { build_gallery("ex9d"); }) == ErrorKind::UnknownItem);
  CHECK(kind_of([] { build_gallery("exS7", {{"r", "0"}}); }) == ErrorKind::BadParams);
  CHECK(kind_of([] { build_gallery("exS7", {{"r", "one"}}); }) == ErrorKind::BadParams);
  CHECK(kind_of([] { build_gallery("ex6d", {{"colour", "red"}}); }) == ErrorKind::BadParams);
  CHECK(kind_of([] { build_gallery("tgeven", {{"m", "3"}, {"alpha", "1,1"}}); }) == ErrorKind::BadParams);
  CHECK(kind_of([] { build_gallery("exS5", {{"half_width", "wide"}}); }) == ErrorKind::BadParams);
}

TEST_CASE("gallery region overrides") {
  const auto s = build_gallery("exS6", {{"half_width", "0.05"}, {"grid", "2"}}).spec;
  CHECK(s.region.half_widths == std::vector<double>{0.05});
  CHECK(s.grid == 2);
  const auto b = build_gallery("exR3", {{"center", "0.3,0.4,0.1"}}).spec;
  CHECK(b.region.center == std::vector<double>{0.3, 0.4, 0.1});
}

TEST_CASE("spec validation") {
  CHECK_NOTHROW(spec_from_json(valid_spec()));
  auto j = valid_spec();
  j["colour"] = "red";
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::Validation);
  j = valid_spec();
  j["mode"] = "implicit";
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::Validation);
  j = valid_spec();
  j["mu"] = json::array({"0", "1"});
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::Validation);
  j = valid_spec();
  j["h"] = json::array({"z1 +", "z2"});
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::Syntax);
  j = valid_spec();
  j["h"] = json::array({"z1", "z7"});
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::UnknownVariable);
  j = valid_spec();
  j["seed_z"] = json::array({json::array({0.1, 0.2})});
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::Validation);
  j = valid_spec();
  j["grid"] = 1;
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::Validation);
  j = valid_spec();
  j["region"]["box"]["half_widths"] = json::array({-0.5});
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::BadRegion);
  j = valid_spec();
  j["region"]["box"]["center"] = json::array({0.1, 0.2});
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::BadRegion);
  j = valid_spec();
  j.erase("m");
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::Validation);
  j = valid_spec();
  j["mode"] = "psi";
  CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::Validation);
}

TEST_CASE("spec file save and load") {
  const auto path = std::filesystem::temp_directory_path() / "hm_spec_roundtrip.json";
  const auto spec = build_gallery("exR5").spec;
  save_spec(spec, path);
  const auto back = load_spec(path);
  PipelineOptions opt;
  CHECK(run_pipeline(spec, opt).report.to_json().dump() == run_pipeline(back, opt).report.to_json().dump());
  std::filesystem::remove(path);
  CHECK(kind_of([&] { load_spec(path); }) == ErrorKind::Validation);
  std::ofstream(path) << "{ not json";
  CHECK(kind_of([&] { load_spec(path); }) == ErrorKind::Validation);
  std::filesystem::remove(path);
}

TEST_CASE("spec digest") {
  const auto a = build_gallery("ex4d").spec;
  auto b = a;
  CHECK(spec_digest(a) == spec_digest(b));
  CHECK(spec_digest(a).size() == 16);
  b.grid = 5;
  CHECK(spec_digest(a) != spec_digest(b));
}

TEST_CASE("make_grid examples") {
  const auto box = make_grid(Region{RegionKind::Box, {0.0, 0.0}, {1.0}, 1.0}, 3);
  REQUIRE(box.size() == 9);
  for (std::size_t i = 1; i < box.size(); ++i) {
    const double dx = std::abs(box[i][0] - box[i - 1][0]);
    const double dy = std::abs(box[i][1] - box[i - 1][1]);
    CHECK(dx + dy == doctest::Approx(1.0));
    CHECK((dx == 0.0 || dy == 0.0));
  }
  CHECK(box.front() == std::vector<double>{-1.0, -1.0});

  const auto sph = make_grid(Region{RegionKind::Sphere, {0.3, -0.2, 0.5, 0.1, 0.4, -0.6}, {0.3}, 1.0}, 4);
  CHECK(sph.size() == 1024);
  for (const auto& x : sph) {
    double r = 0.0;
    for (double c : x) r += c * c;
    CHECK(std::abs(std::sqrt(r) - 1.0) <= 1e-12);
  }

  CHECK(make_grid(Region{RegionKind::Box, {0.5, 0.5}, {0.0}, 1.0}, 4).size() == 1);
  CHECK(make_grid(Region{RegionKind::Box, {0.5, 0.5}, {0.0, 1.0}, 1.0}, 4).size() == 4);

  CHECK(kind_of([] { make_grid(Region{RegionKind::Box, {0.0}, {1.0}, 1.0}, 1); }) == ErrorKind::BadRegion);
  CHECK(kind_of([] { make_grid(Region{RegionKind::Box, {0.0}, {-1.0}, 1.0}, 3); }) == ErrorKind::BadRegion);
  CHECK(kind_of([] { make_grid(Region{RegionKind::Sphere, {0.0, 0.0}, {0.1}, 1.0}, 3); }) == ErrorKind::BadRegion);
  CHECK(kind_of([] { make_grid(Region{RegionKind::Sphere, {1.0, 0.0}, {0.1}, -1.0}, 3); }) == ErrorKind::BadRegion);
}

TEST_CASE("serpentine grids are connected in every dimension") {
  const auto g = make_grid(Region{RegionKind::Box, {0.0, 0.0, 0.0, 0.0}, {1.0}, 1.0}, 3);
  REQUIRE(g.size() == 81);
  for (std::size_t i = 1; i < g.size(); ++i) {
    int moved = 0;
    for (std::size_t d = 0; d < 4; ++d) moved += g[i][d] != g[i - 1][d] ? 1 : 0;
    CHECK(moved == 1);
  }
}

TEST_CASE("report accounting") {
  Report r;
  r.declare("a", 1e-3);
  r.add("a", 1e-4, 1e-3, 0);
  r.add("a", 3e-4, 1e-3, 1);
  CHECK(r.checks.at("a").max_rel == doctest::Approx(3e-4));
  CHECK(r.checks.at("a").mean_rel == doctest::Approx(2e-4));
  CHECK(r.passed());
  r.add("a", std::nan(""), 1e-3, 2);
  CHECK_FALSE(r.passed());
  CHECK(r.failures.size() == 1);

  Report empty;
  empty.declare("b", 1.0);
  CHECK_FALSE(empty.passed());

  Report many;
  for (std::size_t i = 0; i < 80; ++i) many.add("c", 1.0, 0.5, i);
  CHECK(many.checks.at("c").violations == 80);
  CHECK(many.failures.size() == 50);

  const json j = r.to_json();
  for (const char* key : {"spec_digest", "points_total", "points_degenerate", "checks", "failures", "pass"})
    CHECK(j.contains(key));
  CHECK(j["checks"]["a"].contains("max_rel"));
  CHECK(j["checks"]["a"].contains("mean_rel"));
  CHECK(j["checks"]["a"]["pass"] == false);
}

TEST_CASE("report CSV") {
  PipelineOptions opt;
  opt.grid = 2;
  const auto res = run_pipeline(build_gallery("exR3").spec, opt);
  const std::string csv = res.report.to_csv();
  CHECK(csv.rfind("x1,x2,x3,re_z1,im_z1,conf_res,lap_res,detK_abs\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_CASE("pipeline examples") {
  PipelineOptions opt;
  opt.checks = {"verify"};
  auto id = build_gallery("identity");
  const auto r1 = run_pipeline(id.spec, opt).report;
  CHECK(r1.passed());
  CHECK(r1.spec_digest == spec_digest(id.spec));

  const auto r2 = run_pipeline(build_gallery("ex6d").spec, PipelineOptions{.checks = {"verify", "fullness", "superminimal"}}).report;
  CHECK(r2.passed());
  CHECK(r2.info["fullness"]["rank"] == 6);

  const auto r3 = run_pipeline(build_gallery("exS6").spec, PipelineOptions{.checks = {"verify", "sphere-reduction"}}).report;
  CHECK(r3.passed());
  CHECK(r3.checks.count("sphere_reduction") == 1);

  CHECK(kind_of([] { run_pipeline(build_gallery("ex6d").spec, PipelineOptions{.checks = {"warp"}}); }) == ErrorKind::Validation);
}

TEST_CASE("pipeline default checks and failures") {
  const auto all = run_pipeline(build_gallery("exS7").spec).report;
  CHECK(all.passed());
  for (const char* c : {"conformality", "harmonicity", "laplacian_formula", "sphere_reduction", "fullness",
                        "s7_algebraic_fullness"})
    CHECK_MESSAGE(all.checks.count(c) == 1, c);

  const auto not_super = run_pipeline(build_gallery("exS7").spec, PipelineOptions{.checks = {"superminimal"}}).report;
  CHECK_FALSE(not_super.passed());

  const auto s7_2 = run_pipeline(build_gallery("exS7", {{"q", "2"}}).spec, PipelineOptions{.checks = {"fullness"}}).report;
  CHECK_FALSE(s7_2.checks.at("s7_algebraic_fullness").passed());

  const auto homog = run_pipeline(build_gallery("identity").spec, PipelineOptions{.checks = {"homogeneity"}}).report;
  CHECK_FALSE(homog.passed());
}

TEST_CASE("report determinism") {
  const auto spec = build_gallery("exS5").spec;
  PipelineOptions opt;
  opt.checks = {"verify", "homogeneity", "sphere-reduction"};
  const std::string a = run_pipeline(spec, opt).report.to_json().dump(2);
  const std::string b = run_pipeline(spec, opt).report.to_json().dump(2);
  CHECK(a == b);
  opt.seed = 0x1234;
  const std::string c = run_pipeline(spec, opt).report.to_json().dump(2);
  CHECK(json::parse(c)["pass"] == true);
}
