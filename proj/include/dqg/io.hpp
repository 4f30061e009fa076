#pragma once

// Text formats for quantum groups (.qg) and cycles (.cyc). Doubles are written
// in shortest round-trip form, so emit followed by parse is exact.
//
// .qg, version 1:
//   dqg-qg 1
//   name <token>                       optional
//   provenance <rest of line>          optional
//   blocks n_1 ... n_B
//   delta <count>
//   g k l  a i j  b p q  re im         coefficient of e^a_ij (x) e^b_pq in Delta(e^g_kl)
//   epsilon <count>                    optional
//   g k l  re im
//   antipode <count>                   optional
//   g k l  a i j  re im                coefficient of e^a_ij in S(e^g_kl)
//
// .cyc, version 1:
//   dqg-cycle 1
//   hdim <n>
//   gamma s_1 ... s_n                  each +1 or -1
//   U                                  then one matrix per block of A
//   F                                  then one hdim x hdim matrix
//   pi scalar | pi self                self: one matrix per basis element of A
// A matrix is "matrix <rows> <cols>" followed by rows of re im pairs.
// '#' starts a comment.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqg/assembly.hpp"

namespace dqg {

inline constexpr int kFormatVersion = 1;

struct QGFile {
  int version = kFormatVersion;
  std::string name;
  std::string provenance;
  std::vector<int> blocks;
  std::vector<StructureMap::Entry> delta;  // source k, target index in A (x) A
  std::optional<std::vector<StructureMap::Entry>> epsilon;
  std::optional<std::vector<StructureMap::Entry>> antipode;
};

/// Throws Parse with the offending line number.
QGFile parse_qg(std::string_view text);
std::string emit_qg(const QGFile& f);

/// Unverified quantum group carrying the file's counit/antipode as candidates.
QuantumGroup to_quantum_group(const QGFile& f);
/// With `structure`, also writes the solved counit and antipode.
QGFile to_qg_file(const QuantumGroup& qg, bool structure = true);

struct CycleFile {
  int version = kFormatVersion;
  Index hdim = 0;
  std::vector<int> gamma;
  std::vector<CMatrix> u_blocks;
  CMatrix f;
  bool pi_scalar = true;
  std::vector<CMatrix> pi;
};

CycleFile parse_cycle(std::string_view text);
std::string emit_cycle(const CycleFile& f);

struct LoadedCycle {
  ActionDatum action;
  Cycle cycle;
};
/// Builds the action (trivial for scalar pi, self otherwise) and the cycle,
/// and checks every cycle condition; throws InvalidInput naming the first
/// failure.
LoadedCycle to_cycle(const CycleFile& f, const QuantumGroup& qg, const HaarData& haar, double tol);
/// gamma must be diagonal with +-1 entries.
CycleFile to_cycle_file(const Cycle& c, bool pi_scalar);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace dqg
