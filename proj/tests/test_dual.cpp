#include <algorithm>
#include <numeric>
#include <random>
#include <map>
#include <set>

#include "doctest.h"
#include "dqg/dual.hpp"
#include "dqg/kernel.hpp"
#include "fixtures.hpp"

using namespace dqg;
using namespace dqg::test;

namespace {

int conjugacy_class_count(const Group& g) {
  std::vector<int> cls(static_cast<std::size_t>(g.order), -1);
  int count = 0;
  for (int x = 0; x < g.order; ++x) {
    if (cls[static_cast<std::size_t>(x)] >= 0) continue;
    for (int y = 0; y < g.order; ++y)
      cls[static_cast<std::size_t>(g.mul(g.mul(y, x), g.inverse[static_cast<std::size_t>(y)]))] = count;
    ++count;
  }
  return count;
}

// |G / [G, G]|, the number of one-dimensional representations.
int abelianization_order(const Group& g) {
  std::set<int> sub{g.identity};
  for (int x = 0; x < g.order; ++x)
    for (int y = 0; y < g.order; ++y)
      sub.insert(g.mul(g.mul(x, y), g.mul(g.inverse[static_cast<std::size_t>(x)], g.inverse[static_cast<std::size_t>(y)])));
  bool grew = true;
  while (grew) {
    grew = false;
    const std::set<int> cur = sub;
    for (int a : cur)
      for (int b : cur) grew = sub.insert(g.mul(a, b)).second || grew;
  }
  return g.order / static_cast<int>(sub.size());
}

}  // namespace

TEST_CASE("Wedderburn dimensions of the dual of C(G) match the representation theory of G") {
  const std::map<std::string, std::vector<int>> expected{{"z2", {1, 1}},       {"z3", {1, 1, 1}},
                                                         {"z4", {1, 1, 1, 1}}, {"s3", {1, 1, 2}},
                                                         {"q8", {1, 1, 1, 1, 2}}, {"d4", {1, 1, 1, 1, 2}}};
  for (const auto& name : group_names()) {
    CAPTURE(name);
    const Group g = load_group(name);
    const Bundle b = bundle(group_qg(name));
    std::vector<int> dims = b.dual.dims;
    std::sort(dims.begin(), dims.end());
    CHECK(dims == expected.at(name));
    CHECK(static_cast<int>(dims.size()) == conjugacy_class_count(g));
    CHECK(std::count(dims.begin(), dims.end(), 1) == abelianization_order(g));
    CHECK(std::accumulate(dims.begin(), dims.end(), 0, [](int s, int d) { return s + d * d; }) == g.order);
    CHECK(b.dual.checks.pass());
    CHECK(b.dual.formula_residual <= 1e-12);
  }
}

TEST_CASE("convolution on C(G) is the group algebra product") {
  const Group g = load_group("s3");
  const Bundle b = bundle(group_qg("s3"));
  // With counting measure, delta_x * delta_y = delta_{xy}.
  for (int x = 0; x < g.order; ++x)
    for (int y = 0; y < g.order; ++y) {
      const CVector c = convolve(b.dual, b.qg.shape().unit_vector(x), b.qg.shape().unit_vector(y));
      CHECK(max_abs(c - b.qg.shape().unit_vector(g.mul(x, y))) <= 1e-12);
    }
  CHECK(max_abs(b.dual.unit - b.qg.shape().unit_vector(g.identity)) <= 1e-12);
  for (int x = 0; x < g.order; ++x)
    CHECK(max_abs(sharp(b.dual, b.qg.shape().unit_vector(x)) -
                  b.qg.shape().unit_vector(g.inverse[static_cast<std::size_t>(x)])) <= 1e-12);
}

TEST_CASE("convolution algebra properties on every fixture") {
  std::vector<QuantumGroup> all;
  for (const auto& name : group_names()) all.push_back(dual_qg(group_qg(name)));
  all.push_back(load_qg("kac_paljutkin.qg"));
  std::mt19937_64 rng(17);
  for (auto& qg : all) {
    CAPTURE(qg.name());
    const Bundle b = bundle(std::move(qg));
    const DualAlgebra& d = b.dual;
    const Index n = d.dim();
    const CVector x = random_cvector(n, rng), y = random_cvector(n, rng), z = random_cvector(n, rng);
    CHECK(max_abs(convolve(d, convolve(d, x, y), z) - convolve(d, x, convolve(d, y, z))) <= 1e-10);
    CHECK(max_abs(convolve(d, d.unit, x) - x) <= 1e-11);
    CHECK(max_abs(convolve(d, x, d.unit) - x) <= 1e-11);
    CHECK(max_abs(sharp(d, sharp(d, x)) - x) <= 1e-11);
    CHECK(max_abs(sharp(d, convolve(d, x, y)) - convolve(d, sharp(d, y), sharp(d, x))) <= 1e-10);
    // The GNS representation is a *-representation.
    CHECK(max_abs(gns_operator(d, sharp(d, x)) - gns_operator(d, x).adjoint()) <= 1e-10);
    CHECK(max_abs(gns_operator(d, convolve(d, x, y)) - gns_operator(d, x) * gns_operator(d, y)) <= 1e-10);
    // Matrix units multiply like matrix units.
    const BlockShape ds = d.dual_shape();
    for (int i = 0; i < d.block_count(); ++i)
      for (int k = 0; k < ds.block_dim(i); ++k)
        for (int l = 0; l < ds.block_dim(i); ++l)
          for (int m = 0; m < ds.block_dim(i); ++m)
            CHECK(max_abs(convolve(d, d.unit_element(i, k, l), d.unit_element(i, l, m)) - d.unit_element(i, k, m)) <=
                  1e-10);
    // to_blocks is an algebra isomorphism onto (+) M_{d_i}.
    const CVector bx = to_blocks(d, x), by = to_blocks(d, y);
    CHECK(max_abs(to_blocks(d, convolve(d, x, y)) - multiply(ds, bx, by)) <= 1e-10);
    CHECK(max_abs(from_blocks(d, bx) - x) <= 1e-11);
    CVector ones = CVector::Zero(n);
    for (const auto& c : d.central) ones += c;
    CHECK(max_abs(ones - d.unit) <= 1e-10);
  }
}

TEST_CASE("the two convolution formulas agree") {
  const QuantumGroup qg = load_qg("kac_paljutkin.qg");
  const HaarData h = compute_haar(qg);
  const ConvolutionTables t = convolution_tables(qg, h);
  CHECK(max_abs(t.psi_form - t.phi_form) <= 1e-12);
}

TEST_CASE("Wedderburn decomposition is reproducible and seed independent in its dimensions") {
  const QuantumGroup qg = dual_qg(group_qg("d4"));
  const HaarData h = compute_haar(qg);
  std::vector<int> first;
  for (std::uint64_t seed : {1ull, 2ull, 99ull, 123456ull}) {
    Config cfg;
    cfg.seed = seed;
    const DualAlgebra a = make_dual(qg, h, cfg), b = make_dual(qg, h, cfg);
    CHECK(max_abs(a.units - b.units) == 0.0);
    CHECK(a.checks.pass());
    if (first.empty()) first = a.dims;
    CHECK(a.dims == first);
  }
}

TEST_CASE("biduality on the fixtures") {
  for (const std::string name : {"z3", "s3", "q8"}) {
    CAPTURE(name);
    const BidualityReport r = check_biduality(group_qg(name), Config{});
    CHECK(r.report.pass());
    for (const auto& c : r.report.checks) CHECK_MESSAGE(c.residual <= 1e-8, c.name);
  }
  const BidualityReport kp = check_biduality(load_qg("kac_paljutkin.qg"), Config{});
  CHECK(kp.report.pass());
}

TEST_CASE("dual of C(Z/n) has n one-dimensional blocks") {
  for (int n : {1, 2, 3, 4, 5, 7}) {
    const Bundle b = bundle(build_function_algebra(cyclic_group(n), "zn"));
    CHECK(b.dual.dims == std::vector<int>(static_cast<std::size_t>(n), 1));
  }
}
