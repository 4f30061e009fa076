#include "dqg/report.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

#include "dqg/io.hpp"

namespace dqg {

std::string input_digest(const std::vector<std::string>& inputs) {
  std::uint64_t h = 14695981039346656037ull;
  auto feed = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const auto& s : inputs) {
    std::uint64_t n = s.size();
    for (int i = 0; i < 8; ++i) feed(static_cast<unsigned char>(n >> (8 * i)));
    for (const char c : s) feed(static_cast<unsigned char>(c));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string_view mode_name(HaarNormalization mode) {
  return mode == HaarNormalization::State ? "state" : "h0";
}

Json to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["residual"] = std::isfinite(c.residual) ? Json(c.residual) : Json(nullptr);
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  return j;
}

Json to_json(const CheckReport& r) {
  Json j = Json::array();
  for (const auto& c : r.checks) j.push_back(to_json(c));
  return j;
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CVector& v) {
  Json j = Json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back(to_json(v(i)));
  return j;
}

Json to_json(const CMatrix& m) {
  Json j = Json::array();
  for (Index r = 0; r < m.rows(); ++r) j.push_back(to_json(CVector(m.row(r).transpose())));
  return j;
}

Json to_json(const K0Class& k) { return Json(k.v); }

Json Report::to_json() const {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["input_digest"] = digest;
  j["tol"] = cfg.tol;
  j["seed"] = cfg.seed;
  j["mode"] = mode_name(cfg.mode);
  j["pass"] = pass();
  if (!error.empty()) j["error"] = error;
  j["checks"] = dqg::to_json(checks);
  j["results"] = results;
  j["timing"] = {{"seconds", seconds}};
  return j;
}

std::string Report::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks.checks)
    os << (c.pass ? "PASS " : "FAIL ") << c.name << "  residual=" << format_double(c.residual)
       << "  tol=" << format_double(c.tolerance) << '\n';
  for (const auto& [key, value] : results.items()) os << key << ": " << value.dump() << '\n';
  if (const Check* bad = checks.first_failure()) os << "first failure: " << bad->name << '\n';
  if (!error.empty()) os << "error: " << error << '\n';
  os << (pass() ? "result: PASS" : "result: FAIL") << '\n';
  return os.str();
}

}  // namespace dqg
