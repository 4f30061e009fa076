#pragma once

// Verification reports: named checks with residuals and tolerances, computed
// results, and the inputs needed to reproduce a run. JSON output is stable
// apart from the "timing" member.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dqg/assembly.hpp"

namespace dqg {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kReportSchema = "dqg-report/1";

/// FNV-1a 64 over the inputs, each preceded by its length, as 16 hex digits.
std::string input_digest(const std::vector<std::string>& inputs);

std::string_view mode_name(HaarNormalization mode);

Json to_json(const Check& c);
Json to_json(const CheckReport& r);
Json to_json(cplx z);
/// [[re, im], ...]
Json to_json(const CVector& v);
/// Rows of [re, im] pairs.
Json to_json(const CMatrix& m);
Json to_json(const K0Class& k);

struct Report {
  std::string command;
  std::string digest;
  Config cfg;
  CheckReport checks;
  Json results = Json::object();
  /// Message of an error that stopped the command.
  std::string error;
  double seconds = 0.0;

  bool pass() const { return error.empty() && checks.pass(); }
  Json to_json() const;
  /// One line per check, then one line per result member.
  std::string to_text() const;
};

}  // namespace dqg
