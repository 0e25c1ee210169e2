#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hm/jet.hpp"

namespace hm {

struct CheckSummary {
  double max_rel = 0.0;
  double mean_rel = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double sum = 0.0;

  /// A check with no samples has not been demonstrated and does not pass.
  bool passed() const { return samples > 0 && violations == 0; }
};

struct Failure {
  std::string check;
  std::size_t point = 0;
  double value = 0.0;
  std::string message;
};

struct PointRecord {
  std::vector<double> x;
  cplx z1{};
  double conf_res = 0.0;
  double lap_res = 0.0;
  double det_abs = 0.0;
  bool degenerate = false;
};

/// Per-point and aggregate results of the checks run over one grid.
class Report {
 public:
  static constexpr std::size_t kMaxFailuresPerCheck = 50;

  std::string spec_digest;
  std::size_t points_total = 0;
  std::size_t points_degenerate = 0;
  std::map<std::string, CheckSummary> checks;
  std::vector<Failure> failures;
  std::vector<PointRecord> points;
  /// Auxiliary results (ranks, fitted degrees, ...) keyed by check.
  nlohmann::json info = nlohmann::json::object();

  /// Registers a check so that it is reported even when no sample reaches it.
  CheckSummary& declare(const std::string& check, double tolerance);

  /// Records one relative value; NaN and values above the tolerance count as
  /// violations.
  void add(const std::string& check, double value, double tolerance, std::size_t point);

  /// Records a violation that has no numeric value (e.g. an error at a point).
  void fail(const std::string& check, std::size_t point, const std::string& message);

  void merge(const Report& other);

  bool passed() const;

  nlohmann::json to_json() const;
  std::string to_csv() const;

 private:
  void push_failure(Failure f);
};

}  // namespace hm
