#include "hm/pipeline.hpp"

#include <cmath>
#include <random>

#include "hm/analysis.hpp"
#include "hm/gallery.hpp"
#include "hm/reduction.hpp"

namespace hm {

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"verify",      "hyperplane-reduction", "sphere-reduction", "cp-reduction",
                                              "homogeneity", "superminimal",         "fullness"};
  return names;
}

namespace {

// Indices of `count` distinct elements of `pool`, chosen by a Fisher-Yates
// pass driven by the portable uniform mapping.
std::vector<std::size_t> pick(std::vector<std::size_t> pool, std::size_t count, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < pool.size() && i < count; ++i) {
    const auto span = static_cast<double>(pool.size() - i);
    const std::size_t j = i + std::min(pool.size() - i - 1, static_cast<std::size_t>(unit_uniform(rng) * span));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(std::min(count, pool.size()));
  return pool;
}

void check_fullness(const ImplicitSystem& sys, const PipelineResult& run, const ProblemSpec& spec,
                    const PipelineOptions& opt, std::mt19937_64& rng, Report& rep) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < run.solutions.size(); ++i)
    if (run.solutions[i].converged) pool.push_back(i);
  std::vector<GradientRecord> grads;
  for (std::size_t i : pick(pool, opt.fullness_samples, rng)) {
    try {
      grads.push_back(implicit_gradient(sys, run.grid[i], run.solutions[i].z, spec.tolerances.det_floor));
    } catch (const Error&) {
    }
  }
  try {
    const FullnessResult f = fullness_rank_test(grads, sys.ambient_dim());
    rep.add("fullness", f.full ? 0.0 : 1.0, 0.5, 0);
    rep.info["fullness"] = {{"rank", f.rank}, {"dim", sys.ambient_dim()}, {"samples", grads.size()}};
  } catch (const Error& e) {
    rep.fail("fullness", 0, e.what());
  }
  if (spec.name == "exS7") {
    const bool ok = s7_only_trivial_solution(std::stoi(spec.params.at("r")), std::stoi(spec.params.at("p")),
                                             std::stoi(spec.params.at("q")));
    rep.add("s7_algebraic_fullness", ok ? 0.0 : 1.0, 0.5, 0);
  }
}

void check_homogeneity(const ImplicitSystem& sys, const PipelineResult& run, const ProblemSpec& spec,
                       const PipelineOptions& opt, std::mt19937_64& rng, Report& rep) {
  if (sys.mode == Mode::ExplicitH) {
    rep.fail("condition_h", 0, "homogeneity applies to psi and phi forms");
    return;
  }
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < run.solutions.size(); ++i)
    if (run.solutions[i].converged) pool.push_back(i);
  std::vector<std::vector<cplx>> variety;
  for (std::size_t i : pick(pool, opt.homogeneity_samples, rng))
    variety.push_back(payload_arguments(sys, run.grid[i], run.solutions[i].z[0]));
  const auto off = sample_box(sys.payload, opt.homogeneity_samples, rng);
  try {
    const HomogeneityVerdict v = variety_condition_H(sys.payload, variety, off, spec.tolerances.homogeneity);
    rep.add("condition_h", v.max_relative_defect, spec.tolerances.homogeneity, 0);
    rep.add("euler_fit", v.fit_residual, spec.tolerances.homogeneity, 0);
    rep.info["homogeneity"] = {{"k", {v.k.real(), v.k.imag()}},
                               {"fit_residual", v.fit_residual},
                               {"max_defect_on_variety", v.max_defect_on_variety}};
  } catch (const Error& e) {
    rep.fail("condition_h", 0, e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const ProblemSpec& spec, const PipelineOptions& opt) {
  std::set<std::string> checks = opt.checks;
  if (checks.empty()) checks.insert(spec.checks.begin(), spec.checks.end());
  if (checks.empty()) checks.insert("verify");
  for (const auto& c : checks)
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
      throw Error(ErrorKind::Validation, "unknown check '" + c + "'");

  const ImplicitSystem sys = build_system(spec);
  SolverConfig scfg;
  scfg.newton_tol = spec.tolerances.newton;
  scfg.det_floor = spec.tolerances.det_floor;
  VerifyConfig vcfg;
  vcfg.solver = scfg;
  vcfg.tol_conf = opt.tol_conf.value_or(spec.tolerances.conformality);
  vcfg.tol_harm = opt.tol_harm.value_or(spec.tolerances.harmonicity);
  vcfg.tol_formula = spec.tolerances.formula;

  PipelineResult run;
  run.grid = make_point_grid(sys, spec.region, opt.grid.value_or(spec.grid));
  run.solutions = continue_grid(sys, run.grid, spec.seed_z, scfg);

  Report& rep = run.report;
  if (checks.count("verify")) {
    rep = verify_solutions(sys, run.grid, run.solutions, vcfg);
  } else {
    rep.points_total = run.grid.size();
    for (std::size_t i = 0; i < run.grid.size(); ++i) {
      PointRecord pr;
      pr.x = ambient_coordinates(sys, run.grid[i]);
      pr.degenerate = !run.solutions[i].converged;
      pr.det_abs = std::abs(run.solutions[i].detK);
      if (!pr.degenerate) pr.z1 = run.solutions[i].z[0];
      pr.conf_res = pr.lap_res = std::nan("");
      if (pr.degenerate) ++rep.points_degenerate;
      rep.points.push_back(std::move(pr));
    }
  }
  rep.spec_digest = spec_digest(spec);
  std::size_t jumps = 0;
  for (const auto& s : run.solutions) jumps += s.branch_jump ? 1 : 0;
  rep.info["branch_jumps"] = jumps;

  ReductionConfig rcfg;
  rcfg.tol_det = spec.tolerances.reduction;
  rcfg.tol_directional = spec.tolerances.reduction;
  rcfg.det_floor = spec.tolerances.det_floor;
  for (const auto& [check, kind] : {std::pair{"hyperplane-reduction", ReductionKind::Hyperplane},
                                    std::pair{"sphere-reduction", ReductionKind::Sphere},
                                    std::pair{"cp-reduction", ReductionKind::ComplexProjective}}) {
    if (!checks.count(check)) continue;
    Report r = reduction_check(sys, run.grid, run.solutions, ReductionTarget{kind, {}}, rcfg);
    rep.merge(r);
  }

  std::mt19937_64 rng(opt.seed);
  if (checks.count("superminimal")) rep.add("superminimal", superminimality_check(sys.data) ? 0.0 : 1.0, 0.5, 0);
  if (checks.count("fullness")) check_fullness(sys, run, spec, opt, rng, rep);
  if (checks.count("homogeneity")) check_homogeneity(sys, run, spec, opt, rng, rep);
  return run;
}

}  // namespace hm
