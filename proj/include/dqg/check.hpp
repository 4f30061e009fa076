#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace dqg {

/// One residual-based verification outcome.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// An ordered list of checks; passes iff every entry passes.
struct CheckReport {
  std::vector<Check> checks;

  const Check& add(std::string name, double residual, double tolerance) {
    const bool ok = std::isfinite(residual) && residual <= tolerance;
    checks.push_back({std::move(name), residual, tolerance, ok});
    return checks.back();
  }
  void add_flag(std::string name, bool ok) {
    checks.push_back({std::move(name), ok ? 0.0 : 1.0, 0.0, ok});
  }
  void append(const CheckReport& other, const std::string& prefix = {}) {
    for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.residual, c.tolerance, c.pass});
  }

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  /// First failing check, or nullptr.
  const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

}  // namespace dqg
