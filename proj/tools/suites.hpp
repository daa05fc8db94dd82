#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlh/neighborhoods.hpp"
#include "nlh/space.hpp"

namespace nlh::suites {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;      ///< measured quantity (error, ratio, ...)
  double threshold = 0.0;  ///< what it was compared with
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  bool pass() const;
  Json to_json() const;
};

/// Optional user space; bundled generator spaces otherwise.
struct SuiteInput {
  std::optional<MetricMeasureSpace> space;
  double eps = 0.5;
  std::uint64_t seed = 20240607;
};

/// Coboundary and antisymmetrization identities, adjointness.
SuiteResult identity_suite(const SuiteInput& in);
/// Adjoint, PSD, Hodge decomposition and quadratic form checks at n = 64, p_max = 2.
SuiteResult hodge_suite(const SuiteInput& in);
/// Partition of unity and homotopy identity on the default covers.
SuiteResult poincare_suite(const SuiteInput& in);
/// Mayer-Vietoris rank certificates and reconstruction on the default covers.
SuiteResult mv_suite(const SuiteInput& in);
/// Capacity invariants and the removability ladder.
SuiteResult capacity_suite(const SuiteInput& in);

std::vector<std::string> suite_names();
/// "all" expands to every suite.  Throws std::invalid_argument on an unknown name.
std::vector<SuiteResult> run_suites(const std::string& which, const SuiteInput& in);

}  // namespace nlh::suites
