#pragma once

// Shared fixture loading for the unit tests.

#include <string>
#include <vector>

#include "dqg/assembly.hpp"
#include "dqg/groups.hpp"
#include "dqg/io.hpp"

namespace dqg::test {

inline std::string data_path(const std::string& file) { return std::string(DQG_DATA_DIR) + "/" + file; }

inline Group load_group(const std::string& name) { return parse_cayley(read_text_file(data_path(name + ".txt"))); }

/// Verified quantum group from a .qg file in data/.
inline QuantumGroup load_qg(const std::string& file, const Config& cfg = {}) {
  QuantumGroup qg = to_quantum_group(parse_qg(read_text_file(data_path(file))));
  const AxiomReport ax = check_axioms(qg, cfg);
  if (!ax.verified()) throw Error(Errc::Unverified, file + ": " + ax.report.first_failure()->name);
  return qg;
}

inline const std::vector<std::string>& group_names() {
  static const std::vector<std::string> names{"z2", "z3", "z4", "s3", "q8", "d4"};
  return names;
}

struct Bundle {
  QuantumGroup qg;
  HaarData haar;
  DualAlgebra dual;
};

inline Bundle bundle(QuantumGroup qg, const Config& cfg = {}) {
  HaarData h = compute_haar(qg, cfg);
  DualAlgebra d = make_dual(qg, h, cfg);
  return {std::move(qg), std::move(h), std::move(d)};
}

inline QuantumGroup group_qg(const std::string& name, const Config& cfg = {}) {
  return build_function_algebra(load_group(name), "C(" + name + ")", cfg);
}

inline QuantumGroup dual_qg(const QuantumGroup& qg, const Config& cfg = {}) {
  const HaarData h = compute_haar(qg, cfg);
  const DualAlgebra d = make_dual(qg, h, cfg);
  return dualize(qg, h, d, cfg);
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace dqg::test
