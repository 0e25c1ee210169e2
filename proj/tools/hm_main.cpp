// hm: build, solve and verify harmonic morphisms given by implicit
// holomorphic data.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hm/analysis.hpp"
#include "hm/gallery.hpp"
#include "hm/pipeline.hpp"
#include "hm/reduction.hpp"
#include "hm/solver.hpp"
#include "hm/spec_file.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitValidation = 2;

struct Global {
  std::string seed_hex = "0x5EED";
  double tol_conf = 1e-8;
  double tol_harm = 1e-6;
  int grid = 0;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw hm::Error(hm::ErrorKind::Validation, "cannot write " + path);
  out << text;
}

hm::PipelineOptions options(const Global& g, CLI::App& app) {
  hm::PipelineOptions opt;
  std::size_t pos = 0;
  try {
    opt.seed = std::stoull(g.seed_hex, &pos, 16);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != g.seed_hex.size())
    throw hm::Error(hm::ErrorKind::Validation, "--seed expects a hexadecimal integer");
  if (app.get_option("--tol-conf")->count()) opt.tol_conf = g.tol_conf;
  if (app.get_option("--tol-harm")->count()) opt.tol_harm = g.tol_harm;
  if (g.grid > 0) opt.grid = g.grid;
  return opt;
}

int emit(const hm::Report& rep, const std::string& json_out, const std::string& csv_out) {
  const std::string text = rep.to_json().dump(2) + "\n";
  if (json_out.empty())
    std::cout << text;
  else
    write_text(json_out, text);
  if (!csv_out.empty()) write_text(csv_out, rep.to_csv());
  return rep.passed() ? kExitPass : kExitCheckFailure;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0) throw hm::Error(hm::ErrorKind::Validation, "--at expects comma separated reals");
    x.push_back(v);
  }
  return x;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct and verify complex-valued harmonic morphisms from holomorphic data"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed_hex, "pseudo-random seed (hex)")->capture_default_str();
  app.add_option("--tol-conf", g.tol_conf, "relative conformality tolerance")->capture_default_str();
  app.add_option("--tol-harm", g.tol_harm, "relative harmonicity tolerance")->capture_default_str();
  app.add_option("--grid", g.grid, "grid resolution per axis (overrides the spec)");

  std::string spec_path, json_out, csv_out, target, name, emit_path, at, checks_text;
  std::vector<std::string> params;
  std::size_t samples = 32;
  bool list = false;

  auto* solve = app.add_subcommand("solve", "solve along the spec's grid");
  solve->add_option("--spec", spec_path)->required();
  solve->add_option("--out", csv_out, "CSV of points, solutions and residuals");

  auto* verify = app.add_subcommand("verify", "check conformality and harmonicity on the grid");
  verify->add_option("--spec", spec_path)->required();
  verify->add_option("--json", json_out);
  verify->add_option("--csv", csv_out);

  auto* reduce = app.add_subcommand("reduce", "check reduction to a hyperplane, sphere or CP^{m-1}");
  reduce->add_option("--spec", spec_path)->required();
  reduce->add_option("--target", target)->required()->check(CLI::IsMember({"hyperplane", "sphere", "cp"}));
  reduce->add_option("--json", json_out);

  auto* homog = app.add_subcommand("homog", "condition (H) and Euler eigenvalue fit of the payload");
  homog->add_option("--spec", spec_path)->required();
  homog->add_option("--json", json_out);

  auto* fullness = app.add_subcommand("fullness", "numerical rank of the differential over samples");
  fullness->add_option("--spec", spec_path)->required();
  fullness->add_option("--samples", samples)->capture_default_str();
  fullness->add_option("--json", json_out);

  auto* gallery = app.add_subcommand("gallery", "build a named example");
  gallery->add_option("--name", name);
  gallery->add_option("--param", params, "k=v");
  gallery->add_option("--emit-spec", emit_path);
  gallery->add_flag("--list", list);

  auto* roots = app.add_subcommand("roots", "all roots of the equation in z1 at a point");
  roots->add_option("--spec", spec_path)->required();
  roots->add_option("--at", at, "ambient coordinates, comma separated")->required();

  auto* run = app.add_subcommand("run", "run a set of checks");
  run->add_option("--spec", spec_path)->required();
  run->add_option("--checks", checks_text, "comma separated; default: the spec's checks");
  run->add_option("--json", json_out);
  run->add_option("--csv", csv_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (gallery->parsed()) {
      if (list) {
        for (const auto& n : hm::gallery_names()) std::cout << n << '\n';
        return kExitPass;
      }
      if (name.empty()) throw hm::Error(hm::ErrorKind::Validation, "--name is required");
      std::map<std::string, std::string> kv;
      for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw hm::Error(hm::ErrorKind::BadParams, "--param expects k=v");
        kv[p.substr(0, eq)] = p.substr(eq + 1);
      }
      const hm::GalleryItem item = hm::build_gallery(name, kv);
      for (const auto& n : item.notes) std::cerr << "note: " << n << '\n';
      if (emit_path.empty())
        std::cout << hm::spec_to_json(item.spec).dump(2) << '\n';
      else
        hm::save_spec(item.spec, emit_path);
      return kExitPass;
    }

    const hm::ProblemSpec spec = hm::load_spec(spec_path);
    hm::PipelineOptions opt = options(g, app);

    if (roots->parsed()) {
      const hm::ImplicitSystem sys = hm::build_system(spec);
      const hm::PointQ p = hm::point_from_ambient(sys, parse_point(at));
      const auto coeffs = hm::univariate_coeffs(sys, p);
      std::printf("degree %zu\n", coeffs.size() - 1);
      for (const auto& r : hm::poly_roots(coeffs)) {
        std::vector<hm::cplx> seed = spec.seed_z;
        seed[0] = r;
        const hm::SolveResult s = hm::solve_at(sys, p, seed);
        std::printf("% .15e % .15e  residual %.3e  |detK| %.3e  %s\n", r.real(), r.imag(), s.residual_norm,
                    std::abs(s.detK), hm::to_string(s.status));
      }
      return kExitPass;
    }
    if (solve->parsed()) {
      opt.checks = {"verify"};
      const hm::PipelineResult res = hm::run_pipeline(spec, opt);
      const auto jumps = res.report.info.value("branch_jumps", std::size_t{0});
      std::printf("points %zu  degenerate %zu  branch_jumps %zu\n", res.report.points_total,
                  res.report.points_degenerate, jumps);
      if (!csv_out.empty()) write_text(csv_out, res.report.to_csv());
      return res.report.points_degenerate < res.report.points_total ? kExitPass : kExitCheckFailure;
    }
    if (verify->parsed()) opt.checks = {"verify"};
    if (reduce->parsed()) opt.checks = {target + "-reduction"};
    if (homog->parsed()) opt.checks = {"homogeneity"};
    if (fullness->parsed()) {
      opt.checks = {"fullness"};
      opt.fullness_samples = samples;
    }
    if (run->parsed() && !checks_text.empty()) {
      std::stringstream ss(checks_text);
      std::string c;
      while (std::getline(ss, c, ',')) opt.checks.insert(c);
    }
    return emit(hm::run_pipeline(spec, opt).report, json_out, csv_out);
  } catch (const hm::Error& e) {
    std::cerr << "hm: " << e.what() << '\n';
    switch (e.kind()) {
      case hm::ErrorKind::Validation:
      case hm::ErrorKind::Syntax:
      case hm::ErrorKind::UnknownVariable:
      case hm::ErrorKind::BadRegion:
      case hm::ErrorKind::BadParams:
      case hm::ErrorKind::UnknownItem:
      case hm::ErrorKind::ModeMismatch:
        return kExitValidation;
      default:
        return kExitCheckFailure;
    }
  }
}
