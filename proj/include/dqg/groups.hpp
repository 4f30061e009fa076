#pragma once

// Finite groups given by Cayley tables, a few standard families, and the
// function algebra C(G) as a quantum group.

#include <string>
#include <string_view>
#include <vector>

#include "dqg/config.hpp"
#include "dqg/hopf.hpp"

namespace dqg {

struct Group {
  int order = 0;
  std::vector<int> table;  // row-major, table[a * order + b] = a b
  int identity = 0;
  std::vector<int> inverse;

  int mul(int a, int b) const { return table[static_cast<std::size_t>(a * order + b)]; }
};

/// Validates a Cayley table: closure, associativity, identity, inverses.
/// Throws NotAGroup naming the first violation.
Group make_group(int order, std::vector<int> table);

/// "n" on the first line, then n rows of n indices in 0..n-1.
Group parse_cayley(std::string_view text);
std::string emit_cayley(const Group& g);

Group cyclic_group(int n);
/// Permutations of {0..n-1} in lexicographic order; (p q)(i) = p(q(i)).
Group symmetric_group(int n);
/// Elements r^k s^e stored at k + n e.
Group dihedral_group(int n);
/// {1, i, j, k, -1, -i, -j, -k} in that order.
Group quaternion_group();

/// C(G): shape (1,...,1) with Delta(delta_g) = sum_{st=g} delta_s (x) delta_t.
/// The result is unverified; run check_axioms before use.
QuantumGroup function_algebra(const Group& g, std::string name);

/// function_algebra followed by check_axioms; throws Unverified on failure.
QuantumGroup build_function_algebra(const Group& g, std::string name, const Config& cfg = {});

}  // namespace dqg
