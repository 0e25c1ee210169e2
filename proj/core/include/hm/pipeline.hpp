#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hm/report.hpp"
#include "hm/solver.hpp"
#include "hm/spec_file.hpp"

namespace hm {

struct PipelineOptions {
  /// Empty: the spec's own checks, or {"verify"}.
  std::set<std::string> checks = {};
  std::uint64_t seed = 0x5EED;
  std::optional<int> grid = {};
  std::optional<double> tol_conf = {};
  std::optional<double> tol_harm = {};
  std::size_t fullness_samples = 32;
  std::size_t homogeneity_samples = 100;
};

struct PipelineResult {
  Report report;
  std::vector<PointQ> grid;
  std::vector<SolveResult> solutions;
};

/// verify, hyperplane-reduction, sphere-reduction, cp-reduction,
/// homogeneity, superminimal, fullness.
const std::vector<std::string>& known_checks();

/// Solves the spec's grid by continuation, then runs the requested checks
/// into one report. Throws Error(Validation) for unknown checks.
PipelineResult run_pipeline(const ProblemSpec& spec, const PipelineOptions& options = {});

}  // namespace hm
