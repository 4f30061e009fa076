#include "dqg/groups.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

#include "dqg/error.hpp"

namespace dqg {

namespace {

std::string triple(int a, int b, int c) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

}  // namespace

Group make_group(int n, std::vector<int> table) {
  if (n <= 0) throw Error(Errc::NotAGroup, "order must be positive");
  if (table.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw Error(Errc::NotAGroup, "table must have n*n entries");
  for (int v : table)
    if (v < 0 || v >= n) throw Error(Errc::NotAGroup, "entry " + std::to_string(v) + " outside 0..n-1");

  Group g;
  g.order = n;
  g.table = std::move(table);

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          throw Error(Errc::NotAGroup, "associativity fails at " + triple(a, b, c));

  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = g.mul(a, b) == b && g.mul(b, a) == b;
    if (ok) e = a;
  }
  if (e < 0) throw Error(Errc::NotAGroup, "no identity element");
  g.identity = e;

  g.inverse.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (g.mul(a, b) == e && g.mul(b, a) == e) {
        g.inverse[static_cast<std::size_t>(a)] = b;
        break;
      }
    if (g.inverse[static_cast<std::size_t>(a)] < 0)
      throw Error(Errc::NotAGroup, "element " + std::to_string(a) + " has no inverse");
  }
  return g;
}

Group parse_cayley(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long n = 0;
  if (!(in >> n)) throw Error(Errc::Parse, "cayley table: missing order on the first line");
  if (n <= 0 || n > 4096) throw Error(Errc::Parse, "cayley table: order out of range");
  std::vector<int> t;
  t.reserve(static_cast<std::size_t>(n * n));
  for (long long i = 0; i < n * n; ++i) {
    long long v = 0;
    if (!(in >> v)) throw Error(Errc::Parse, "cayley table: expected " + std::to_string(n * n) + " entries");
    if (v < 0 || v >= n) throw Error(Errc::NotAGroup, "entry " + std::to_string(v) + " outside 0..n-1");
    t.push_back(static_cast<int>(v));
  }
  std::string extra;
  if (in >> extra) throw Error(Errc::Parse, "cayley table: trailing data '" + extra + "'");
  return make_group(static_cast<int>(n), std::move(t));
}

std::string emit_cayley(const Group& g) {
  std::ostringstream os;
  os << g.order << '\n';
  for (int a = 0; a < g.order; ++a) {
    for (int b = 0; b < g.order; ++b) os << (b ? " " : "") << g.mul(a, b);
    os << '\n';
  }
  return os.str();
}

Group cyclic_group(int n) {
  std::vector<int> t;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t.push_back((a + b) % n);
  return make_group(n, std::move(t));
}

Group symmetric_group(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const int m = static_cast<int>(perms.size());
  std::vector<int> t;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      std::vector<int> c(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        c[static_cast<std::size_t>(i)] = perms[a][static_cast<std::size_t>(perms[b][static_cast<std::size_t>(i)])];
      t.push_back(static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin()));
    }
  return make_group(m, std::move(t));
}

Group dihedral_group(int n) {
  // r^k s^e r^l s^f = r^{k + (-1)^e l} s^{e+f}
  std::vector<int> t;
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b) {
      const int k = a % n, e = a / n, l = b % n, f = b / n;
      const int r = ((k + (e ? -l : l)) % n + n) % n;
      t.push_back(r + n * ((e + f) % 2));
    }
  return make_group(2 * n, std::move(t));
}

Group quaternion_group() {
  // Units 1, i, j, k with sign; products of imaginary units from the usual table.
  static constexpr std::array<std::array<int, 4>, 4> unit{{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}};
  static constexpr std::array<std::array<int, 4>, 4> sign{{{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}}};
  std::vector<int> t;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const int ua = a % 4, ub = b % 4;
      int s = sign[ua][ub] * (a < 4 ? 1 : -1) * (b < 4 ? 1 : -1);
      t.push_back(unit[ua][ub] + (s < 0 ? 4 : 0));
    }
  return make_group(8, std::move(t));
}

QuantumGroup function_algebra(const Group& g, std::string name) {
  const int n = g.order;
  BlockShape shape(std::vector<int>(static_cast<std::size_t>(n), 1));
  std::vector<StructureMap::Entry> entries;
  entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) entries.push_back({Index(s) * n + t, g.mul(s, t), 1.0});
  auto delta = StructureMap::from_entries(Space::algebra(shape), Space::tensor(shape, shape), entries);
  return QuantumGroup(std::move(name), shape, std::move(delta));
}

QuantumGroup build_function_algebra(const Group& g, std::string name, const Config& cfg) {
  QuantumGroup qg = function_algebra(g, std::move(name));
  const AxiomReport r = check_axioms(qg, cfg);
  if (!r.verified()) throw Error(Errc::Unverified, "C(G) failed " + r.report.first_failure()->name);
  return qg;
}

}  // namespace dqg
