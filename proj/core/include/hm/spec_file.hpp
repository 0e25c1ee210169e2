#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hm/grid.hpp"
#include "hm/hermitian.hpp"

namespace hm {

struct Tolerances {
  double conformality = 1e-8;
  double harmonicity = 1e-6;
  double formula = 1e-5;
  double reduction = 1e-8;
  double homogeneity = 1e-9;
  double newton = 1e-12;
  double det_floor = 1e-10;
};

/// Auxiliary scalar equation in z1 attached to an explicit-h system.
struct Z1Equation {
  std::vector<std::string> mu;
  std::string psi;
};

/// Everything needed to build, solve and verify one system.
struct ProblemSpec {
  std::string name;
  std::map<std::string, std::string> params;
  int m = 2;
  std::vector<std::string> mu;
  Mode mode = Mode::ExplicitH;
  std::vector<std::string> h;
  std::string psi;
  std::string phi;
  std::optional<Z1Equation> z1_equation;
  Region region;
  int grid = 4;
  std::vector<cplx> seed_z;
  Tolerances tolerances;
  std::vector<std::string> checks;
};

/// Builds the implicit system; expression errors propagate as thrown.
ImplicitSystem build_system(const ProblemSpec& spec);

/// Schema validation plus a trial build. Throws Error(Validation) naming the
/// offending key.
ProblemSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const ProblemSpec& spec);

ProblemSpec load_spec(const std::filesystem::path& path);
void save_spec(const ProblemSpec& spec, const std::filesystem::path& path);

/// FNV-1a 64-bit hash of the canonical JSON text, as 16 hex digits.
std::string spec_digest(const ProblemSpec& spec);

}  // namespace hm
