#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kcas/scene_io.hpp"

namespace kcas::cli {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

const std::vector<std::string>& suite_names();

// Runs one suite (or "all"). Scene-dependent suites use `scene` when given
// and the canonical two-disk scene otherwise.
std::vector<CheckResult> run_suite(const std::string& suite, const std::optional<SceneFile>& scene);

std::string format_report(const std::vector<CheckResult>& results);

}  // namespace kcas::cli
