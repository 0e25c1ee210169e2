#include "hm/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hm {

CheckSummary& Report::declare(const std::string& check, double tolerance) {
  auto [it, inserted] = checks.try_emplace(check);
  if (inserted) it->second.tolerance = tolerance;
  return it->second;
}

void Report::add(const std::string& check, double value, double tolerance, std::size_t point) {
  CheckSummary& s = declare(check, tolerance);
  ++s.samples;
  if (std::isnan(value) || value > tolerance) {
    ++s.violations;
    push_failure({check, point, value, "exceeds tolerance"});
  }
  if (!std::isnan(value)) {
    s.max_rel = std::max(s.max_rel, value);
    s.sum += value;
  }
  s.mean_rel = s.sum / static_cast<double>(s.samples);
}

void Report::fail(const std::string& check, std::size_t point, const std::string& message) {
  CheckSummary& s = declare(check, 0.0);
  ++s.samples;
  ++s.violations;
  s.mean_rel = s.sum / static_cast<double>(s.samples);
  push_failure({check, point, std::nan(""), message});
}

void Report::push_failure(Failure f) {
  std::size_t same = 0;
  for (const auto& g : failures)
    if (g.check == f.check) ++same;
  if (same < kMaxFailuresPerCheck) failures.push_back(std::move(f));
}

void Report::merge(const Report& other) {
  for (const auto& [name, s] : other.checks) {
    CheckSummary& t = declare(name, s.tolerance);
    t.samples += s.samples;
    t.violations += s.violations;
    t.sum += s.sum;
    t.max_rel = std::max(t.max_rel, s.max_rel);
    t.mean_rel = t.samples ? t.sum / static_cast<double>(t.samples) : 0.0;
  }
  for (const auto& f : other.failures) push_failure(f);
  for (const auto& [key, value] : other.info.items()) info[key] = value;
}

bool Report::passed() const {
  for (const auto& [name, s] : checks)
    if (!s.passed()) return false;
  return !checks.empty();
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["spec_digest"] = spec_digest;
  j["points_total"] = points_total;
  j["points_degenerate"] = points_degenerate;
  nlohmann::json cj = nlohmann::json::object();
  for (const auto& [name, s] : checks) {
    cj[name] = {{"max_rel", s.max_rel},     {"mean_rel", s.mean_rel},     {"pass", s.passed()},
                {"tolerance", s.tolerance}, {"samples", s.samples}, {"violations", s.violations}};
  }
  j["checks"] = cj;
  nlohmann::json fj = nlohmann::json::array();
  for (const auto& f : failures) {
    nlohmann::json e = {{"check", f.check}, {"point", f.point}, {"message", f.message}};
    e["value"] = std::isnan(f.value) ? nlohmann::json(nullptr) : nlohmann::json(f.value);
    fj.push_back(e);
  }
  j["failures"] = fj;
  j["info"] = info;
  j["pass"] = passed();
  return j;
}

std::string Report::to_csv() const {
  std::ostringstream out;
  const std::size_t n = points.empty() ? 0 : points.front().x.size();
  for (std::size_t k = 0; k < n; ++k) out << 'x' << (k + 1) << ',';
  out << "re_z1,im_z1,conf_res,lap_res,detK_abs\n";
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& p : points) {
    for (double v : p.x) out << num(v) << ',';
    if (p.degenerate) {
      out << "nan,nan,nan,nan," << num(p.det_abs) << '\n';
      continue;
    }
    out << num(p.z1.real()) << ',' << num(p.z1.imag()) << ',' << num(p.conf_res) << ',' << num(p.lap_res) << ','
        << num(p.det_abs) << '\n';
  }
  return out.str();
}

}  // namespace hm
