#include "hm/spec_file.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hm {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::Validation, what); }

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) invalid(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::vector<std::string> string_list(const json& j, const char* key) {
  if (!j.is_array()) invalid(std::string("'") + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) invalid(std::string("'") + key + "' must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> number_list(const json& j, const char* key) {
  if (!j.is_array()) invalid(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) invalid(std::string("'") + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

double number(const json& j, const char* key) {
  if (!j.is_number()) invalid(std::string("'") + key + "' must be a number");
  return j.get<double>();
}

Region region_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1 || !(j.contains("box") || j.contains("sphere")))
    invalid("'region' must be {\"box\": {...}} or {\"sphere\": {...}}");
  Region r;
  const bool box = j.contains("box");
  const json& b = box ? j.at("box") : j.at("sphere");
  if (!b.is_object()) invalid("region body must be an object");
  r.kind = box ? RegionKind::Box : RegionKind::Sphere;
  r.center = number_list(require(b, "center"), "center");
  r.half_widths = number_list(require(b, "half_widths"), "half_widths");
  if (!box) r.radius = b.contains("radius") ? number(b.at("radius"), "radius") : 1.0;
  return r;
}

json region_to_json(const Region& r) {
  json b = {{"center", r.center}, {"half_widths", r.half_widths}};
  if (r.kind == RegionKind::Sphere) {
    b["radius"] = r.radius;
    return {{"sphere", b}};
  }
  return {{"box", b}};
}

}  // namespace

ImplicitSystem build_system(const ProblemSpec& spec) {
  switch (spec.mode) {
    case Mode::ExplicitH: {
      ImplicitSystem s = ImplicitSystem::explicit_h(HermitianData::parse(spec.m, spec.mu, false), spec.h);
      if (spec.z1_equation) {
        s.z1_equation = std::make_shared<const ImplicitSystem>(ImplicitSystem::psi_form(
            HermitianData::parse(spec.m, spec.z1_equation->mu, true), spec.z1_equation->psi));
      }
      return s;
    }
    case Mode::Psi:
      return ImplicitSystem::psi_form(HermitianData::parse(spec.m, spec.mu, true), spec.psi);
    case Mode::Phi:
      return ImplicitSystem::phi_form(HermitianData::parse(spec.m, spec.mu, true), spec.phi);
  }
  invalid("unknown mode");
}

ProblemSpec spec_from_json(const json& j) {
  if (!j.is_object()) invalid("spec must be a JSON object");
  static const std::set<std::string> known{"name", "params", "m", "mu", "mode", "h", "psi", "phi", "z1_equation",
                                           "region", "grid", "seed_z", "tolerances", "checks"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) invalid("unknown key '" + key + "'");

  ProblemSpec s;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) invalid("'name' must be a string");
    s.name = j.at("name").get<std::string>();
  }
  if (j.contains("params")) {
    if (!j.at("params").is_object()) invalid("'params' must be an object of strings");
    for (const auto& [k, v] : j.at("params").items()) {
      if (!v.is_string()) invalid("'params' must be an object of strings");
      s.params[k] = v.get<std::string>();
    }
  }
  const json& m = require(j, "m");
  if (!m.is_number_integer() || m.get<int>() < 2) invalid("'m' must be an integer >= 2");
  s.m = m.get<int>();
  s.mu = string_list(require(j, "mu"), "mu");

  const json& mode = require(j, "mode");
  if (!mode.is_string()) invalid("'mode' must be a string");
  s.mode = mode_from_string(mode.get<std::string>());
  switch (s.mode) {
    case Mode::ExplicitH:
      s.h = string_list(require(j, "h"), "h");
      if (j.contains("psi") || j.contains("phi")) invalid("explicit-h spec must not carry 'psi' or 'phi'");
      break;
    case Mode::Psi:
      if (!require(j, "psi").is_string()) invalid("'psi' must be a string");
      s.psi = j.at("psi").get<std::string>();
      if (j.contains("h") || j.contains("phi")) invalid("psi spec must not carry 'h' or 'phi'");
      break;
    case Mode::Phi:
      if (!require(j, "phi").is_string()) invalid("'phi' must be a string");
      s.phi = j.at("phi").get<std::string>();
      if (j.contains("h") || j.contains("psi")) invalid("phi spec must not carry 'h' or 'psi'");
      break;
  }
  if (j.contains("z1_equation")) {
    if (s.mode != Mode::ExplicitH) invalid("'z1_equation' applies to explicit-h specs only");
    const json& e = j.at("z1_equation");
    if (!e.is_object()) invalid("'z1_equation' must be an object");
    Z1Equation z;
    z.mu = string_list(require(e, "mu"), "z1_equation.mu");
    if (!require(e, "psi").is_string()) invalid("'z1_equation.psi' must be a string");
    z.psi = e.at("psi").get<std::string>();
    s.z1_equation = z;
  }

  s.region = region_from_json(require(j, "region"));
  const json& g = require(j, "grid");
  if (!g.is_number_integer() || g.get<int>() < 2) invalid("'grid' must be an integer >= 2");
  s.grid = g.get<int>();

  const json& seed = require(j, "seed_z");
  if (!seed.is_array()) invalid("'seed_z' must be an array of [re, im] pairs");
  for (const auto& e : seed) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      invalid("'seed_z' must be an array of [re, im] pairs");
    s.seed_z.emplace_back(e[0].get<double>(), e[1].get<double>());
  }

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) invalid("'tolerances' must be an object");
    static const std::map<std::string, double Tolerances::*> fields{
        {"conformality", &Tolerances::conformality}, {"harmonicity", &Tolerances::harmonicity},
        {"formula", &Tolerances::formula},           {"reduction", &Tolerances::reduction},
        {"homogeneity", &Tolerances::homogeneity},   {"newton", &Tolerances::newton},
        {"det_floor", &Tolerances::det_floor}};
    for (const auto& [k, v] : t.items()) {
      const auto it = fields.find(k);
      if (it == fields.end()) invalid("unknown tolerance '" + k + "'");
      const double x = number(v, "tolerances");
      if (!(x > 0.0)) invalid("tolerance '" + k + "' must be positive");
      s.tolerances.*(it->second) = x;
    }
  }
  if (j.contains("checks")) s.checks = string_list(j.at("checks"), "checks");

  ImplicitSystem sys;
  try {
    sys = build_system(s);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("cannot build system: ") + e.what());
  }
  if (s.seed_z.size() != static_cast<std::size_t>(sys.unknowns()))
    invalid("'seed_z' needs " + std::to_string(sys.unknowns()) + " entries for mode " + to_string(s.mode));
  if (s.region.center.size() != static_cast<std::size_t>(sys.ambient_dim()))
    throw Error(ErrorKind::BadRegion, "region center needs " + std::to_string(sys.ambient_dim()) + " coordinates");
  try {
    (void)make_grid(s.region, s.grid);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("bad region: ") + e.what());
  }
  return s;
}

json spec_to_json(const ProblemSpec& s) {
  json j;
  if (!s.name.empty()) j["name"] = s.name;
  if (!s.params.empty()) j["params"] = s.params;
  j["m"] = s.m;
  j["mu"] = s.mu;
  j["mode"] = to_string(s.mode);
  switch (s.mode) {
    case Mode::ExplicitH:
      j["h"] = s.h;
      break;
    case Mode::Psi:
      j["psi"] = s.psi;
      break;
    case Mode::Phi:
      j["phi"] = s.phi;
      break;
  }
  if (s.z1_equation) j["z1_equation"] = {{"mu", s.z1_equation->mu}, {"psi", s.z1_equation->psi}};
  j["region"] = region_to_json(s.region);
  j["grid"] = s.grid;
  json seed = json::array();
  for (const auto& z : s.seed_z) seed.push_back({z.real(), z.imag()});
  j["seed_z"] = seed;
  const Tolerances& t = s.tolerances;
  j["tolerances"] = {{"conformality", t.conformality}, {"harmonicity", t.harmonicity}, {"formula", t.formula},
                     {"reduction", t.reduction},       {"homogeneity", t.homogeneity}, {"newton", t.newton},
                     {"det_floor", t.det_floor}};
  if (!s.checks.empty()) j["checks"] = s.checks;
  return j;
}

ProblemSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open spec file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    invalid(std::string("spec file is not valid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

void save_spec(const ProblemSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Validation, "cannot write " + path.string());
  out << spec_to_json(spec).dump(2) << '\n';
}

std::string spec_digest(const ProblemSpec& spec) {
  const std::string text = spec_to_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hm
