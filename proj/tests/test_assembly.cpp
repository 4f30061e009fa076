#include <random>

#include "doctest.h"
#include "dqg/assembly.hpp"
#include "dqg/kernel.hpp"
#include "fixtures.hpp"

using namespace dqg;
using namespace dqg::test;

namespace {

struct Setup {
  Bundle b;
  std::vector<IrrepData> irreps;
  ActionDatum trivial;
  ActionDatum self;
};

Setup setup(QuantumGroup qg, const Config& cfg = {}) {
  Bundle b = bundle(std::move(qg), cfg);
  std::vector<IrrepData> irreps;
  for (int i = 0; i < b.dual.block_count(); ++i) irreps.push_back(irrep_matrix_elements(b.qg, b.haar, b.dual, i, cfg.tol));
  ActionDatum t = trivial_action(b.qg, b.haar), s = self_action(b.qg, b.haar);
  return {std::move(b), std::move(irreps), std::move(t), std::move(s)};
}

std::vector<QuantumGroup> all_fixtures() {
  std::vector<QuantumGroup> all;
  for (const std::string name : {"z2", "s3", "d4"}) {
    all.push_back(group_qg(name));
    all.push_back(dual_qg(all.back()));
  }
  all.push_back(load_qg("kac_paljutkin.qg"));
  return all;
}

K0Class unit_class(std::size_t n, std::size_t i) {
  K0Class k{std::vector<long>(n, 0)};
  k.v[i] = 1;
  return k;
}

}  // namespace

TEST_CASE("graded index of explicit operators") {
  // H+ = C^2, H- = C: F+ = [1 0] has a one-dimensional kernel and no cokernel.
  CMatrix f = CMatrix::Zero(3, 3);
  f(2, 0) = 1.0;
  f(0, 2) = 1.0;
  CHECK(index_even_cycle(2, 1, f) == 1);
  CHECK(index_even_cycle(2, 1, CMatrix::Zero(3, 3)) == 1);
  CHECK(index_even_cycle(1, 3, CMatrix::Zero(4, 4)) == -2);
  // An invertible odd operator has index zero.
  CMatrix g = CMatrix::Zero(4, 4);
  g.topRightCorner(2, 2) = CMatrix::Identity(2, 2);
  g.bottomLeftCorner(2, 2) = CMatrix::Identity(2, 2);
  CHECK(index_even_cycle(2, 2, g) == 0);
}

TEST_CASE("K_0 of a multi-matrix algebra") {
  const K0Group k = k0_of_algebra({1, 1, 2});
  CHECK(k.rank() == 3);
  CHECK(k.to_string() == "Z^3");
  const K0Class a{{1, -2, 0}}, b{{0, 3, 4}};
  CHECK((a + b) == K0Class{{1, 1, 4}});
  CHECK(a.to_string() == "(1,-2,0)");

  const BlockShape s({1, 3});
  AlgebraElement p(s);
  p.block(0)(0, 0) = 1.0;
  p.block(1)(0, 0) = 1.0;
  p.block(1)(2, 2) = 1.0;
  CHECK(class_of_projection(p, 1e-9) == K0Class{{1, 2}});
  AlgebraElement q(s);
  q.block(1)(0, 1) = 1.0;
  CHECK_THROWS_AS(class_of_projection(q, 1e-9), Error);
}

TEST_CASE("action data satisfy their standing assumptions") {
  for (auto& qg : all_fixtures()) {
    CAPTURE(qg.name());
    for (const HaarNormalization mode : {HaarNormalization::CounitBlock, HaarNormalization::State}) {
      Config cfg;
      cfg.mode = mode;
      const Setup s = setup(QuantumGroup(qg), cfg);
      CHECK(verify_action_assumptions(s.b.qg, s.b.haar, s.trivial, cfg.tol).pass());
      CHECK(verify_action_assumptions(s.b.qg, s.b.haar, s.self, cfg.tol).pass());
      CHECK(verify_regular_module(s.b.qg, s.b.haar, s.b.dual, cfg.tol).pass());
    }
  }
}

TEST_CASE("generator cycles map to the standard basis and odd classes vanish") {
  for (auto& qg : all_fixtures()) {
    CAPTURE(qg.name());
    const Setup s = setup(std::move(qg));
    const std::size_t n = s.irreps.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Cycle c = generator_cycle(s.irreps[i]);
      const AssemblyResult r = assembly_mu0(s.b.qg, s.b.haar, s.b.dual, s.trivial, c, 1e-9);
      CHECK(r.report.pass());
      CHECK(r.route_a == unit_class(n, i));
      CHECK(r.route_b == unit_class(n, i));
      const OddAssemblyResult o = assembly_mu1(s.b.qg, s.b.haar, s.b.dual, s.trivial, c, 1e-9);
      CHECK(o.cls == K0Class{std::vector<long>(n, 0)});
    }
  }
}

TEST_CASE("regular cycle assembles to the dimension vector") {
  for (auto& qg : all_fixtures()) {
    CAPTURE(qg.name());
    const Setup s = setup(std::move(qg));
    const AssemblyResult r =
        assembly_mu0(s.b.qg, s.b.haar, s.b.dual, s.self, regular_cycle(s.b.qg, s.b.haar, 1e-9), 1e-9);
    std::vector<long> dims(s.b.dual.dims.begin(), s.b.dual.dims.end());
    CHECK(r.route_a.v == dims);
    CHECK(r.route_b.v == dims);
  }
}

TEST_CASE("random isotypic cycles assemble to m+ - m-") {
  std::mt19937_64 rng(77);
  for (auto& qg : all_fixtures()) {
    CAPTURE(qg.name());
    const Setup s = setup(std::move(qg));
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<int> plus, minus;
      K0Class expect;
      for (std::size_t i = 0; i < s.irreps.size(); ++i) {
        plus.push_back(static_cast<int>(rng() % 3));
        minus.push_back(static_cast<int>(rng() % 3));
        expect.v.push_back(plus.back() - minus.back());
      }
      plus[0] += 1;
      expect.v[0] += 1;
      const Cycle c = random_trivial_cycle(s.irreps, plus, minus, rng);
      CHECK(check_cycle(s.b.qg, s.trivial, c, 1e-9).pass());
      const AssemblyResult r = assembly_mu0(s.b.qg, s.b.haar, s.b.dual, s.trivial, c, 1e-9);
      CHECK(r.route_a == expect);
      CHECK(r.route_b == expect);
    }
  }
}

TEST_CASE("random regular cycles assemble to (p - q) d") {
  std::mt19937_64 rng(78);
  for (auto& qg : all_fixtures()) {
    CAPTURE(qg.name());
    const Setup s = setup(std::move(qg));
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {2, 1}, {1, 2}}) {
      const Cycle c = random_regular_cycle(s.b.qg, s.b.haar, p, q, rng, 1e-9);
      const AssemblyResult r = assembly_mu0(s.b.qg, s.b.haar, s.b.dual, s.self, c, 1e-9);
      K0Class expect;
      for (const int d : s.b.dual.dims) expect.v.push_back(long(d) * (p - q));
      CHECK(r.route_a == expect);
      CHECK(r.route_b == expect);
      CHECK(check_equivariance(c.u, r.f_prime, 1e-9).pass());
    }
  }
}

TEST_CASE("averaging fixes an already equivariant F when U is trivial") {
  const Setup s = setup(group_qg("s3"));
  std::mt19937_64 rng(5);
  const Index n = 4;
  const CMatrix gamma = CVector((CVector(n) << 1, 1, -1, -1).finished()).asDiagonal();
  Cycle c{trivial_representation(s.b.qg.shape(), n), {CMatrix::Identity(n, n)}, random_odd_operator(gamma, rng), gamma};
  CHECK(check_cycle(s.b.qg, s.trivial, c, 1e-9).pass());
  const CMatrix fp = average_operator(s.b.haar, s.trivial, c);
  CHECK(max_abs(fp - c.f) == 0.0);
}

TEST_CASE("averaging is unital and linear") {
  std::mt19937_64 rng(17);
  for (const std::string name : {"z3", "s3", "q8"}) {
    CAPTURE(name);
    const Setup s = setup(group_qg(name));
    Cycle c = random_regular_cycle(s.b.qg, s.b.haar, 1, 1, rng, 1e-9);
    const Index n = c.hdim();
    const CMatrix f = c.f;
    c.f = CMatrix::Identity(n, n);
    CHECK(max_abs(average_operator(s.b.haar, s.self, c) - CMatrix::Identity(n, n)) <= 1e-12);
    c.f = CMatrix::Zero(n, n);
    CHECK(max_abs(average_operator(s.b.haar, s.self, c)) == 0.0);
    c.f = f;
    const CMatrix once = average_operator(s.b.haar, s.self, c);
    c.f = once;
    CHECK(max_abs(average_operator(s.b.haar, s.self, c) - once) <= 1e-12);
  }
}

TEST_CASE("averaged operator is equivariant, Hermitian and odd") {
  std::mt19937_64 rng(81);
  const Setup s = setup(group_qg("d4"));
  const Cycle c = random_regular_cycle(s.b.qg, s.b.haar, 1, 1, rng, 1e-9);
  // F itself is generically not equivariant.
  CHECK_FALSE(check_equivariance(c.u, c.f, 1e-6).pass());
  const CMatrix fp = average_operator(s.b.haar, s.self, c);
  CHECK(check_equivariance(c.u, fp, 1e-9).pass());
  CHECK(hermitian_defect(fp) <= 1e-10);
  CHECK(max_abs(c.gamma * fp + fp * c.gamma) <= 1e-10);
}

TEST_CASE("assembly is additive, conjugation invariant and normalization independent") {
  std::mt19937_64 rng(90);
  const QuantumGroup base = group_qg("s3");
  const Setup s = setup(QuantumGroup(base));
  Config state;
  state.mode = HaarNormalization::State;
  const Setup t = setup(QuantumGroup(base), state);
  for (int trial = 0; trial < 3; ++trial) {
    const Cycle a = random_trivial_cycle(s.irreps, {1, 0, 2}, {0, 1, 1}, rng);
    const Cycle b = random_trivial_cycle(s.irreps, {0, 2, 0}, {1, 0, 1}, rng);
    const K0Class ka = assembly_mu0(s.b.qg, s.b.haar, s.b.dual, s.trivial, a, 1e-9).route_a;
    const K0Class kb = assembly_mu0(s.b.qg, s.b.haar, s.b.dual, s.trivial, b, 1e-9).route_a;
    const AssemblyResult sum = assembly_mu0(s.b.qg, s.b.haar, s.b.dual, s.trivial, direct_sum_cycle(a, b), 1e-9);
    CHECK(sum.route_a == ka + kb);
    CHECK(sum.route_b == ka + kb);
    const Cycle w = conjugate_cycle(a, random_unitary(a.hdim(), rng));
    CHECK(assembly_mu0(s.b.qg, s.b.haar, s.b.dual, s.trivial, w, 1e-9).route_a == ka);
    // Same cycle, other normalization: h changes, the class does not.
    CHECK(assembly_mu0(t.b.qg, t.b.haar, t.b.dual, t.trivial, a, 1e-9).route_a == ka);
  }
}

TEST_CASE("module structure: Sigma is an isometric module map") {
  for (auto& qg : all_fixtures()) {
    CAPTURE(qg.name());
    const Setup s = setup(std::move(qg));
    const CheckReport r = verify_sigma(s.b.qg, s.b.haar, s.b.dual, s.self, regular_cycle(s.b.qg, s.b.haar, 1e-9), 1e-9);
    CHECK(r.pass());
    CHECK(r.find("sigma_isometry")->residual <= 1e-9);
  }
}

TEST_CASE("regular module: inner product is sharp convolution") {
  // Independent of the library's module code: <xi, eta> on L^2 of C(G)
  // should be xi^# * eta, which for point masses is delta_{x^-1 y}.
  const Group g = load_group("s3");
  const Setup s = setup(group_qg("s3"));
  const Cycle reg = regular_cycle(s.b.qg, s.b.haar, 1e-9);
  const BlockShape& sh = s.b.qg.shape();
  for (int x = 0; x < g.order; ++x)
    for (int y = 0; y < g.order; ++y) {
      const CVector xi = s.b.dual.gram_sqrt * sh.unit_vector(x);
      const CVector eta = s.b.dual.gram_sqrt * sh.unit_vector(y);
      const CVector ip = module_inner_product(s.b.qg, s.b.haar, reg.u, xi, eta);
      const CVector expect = convolve(s.b.dual, sharp(s.b.dual, sh.unit_vector(x)), sh.unit_vector(y));
      CHECK(max_abs(ip - expect) <= 1e-10);
      CHECK(max_abs(expect - sh.unit_vector(g.mul(g.inverse[static_cast<std::size_t>(x)], y))) <= 1e-12);
    }
}

TEST_CASE("invalid cycles are rejected before assembly") {
  const Setup s = setup(group_qg("s3"));
  Cycle c = generator_cycle(s.irreps[2]);
  c.f = CMatrix::Zero(2, 2);
  c.f(0, 1) = 1.0;  // not Hermitian
  CHECK_FALSE(check_cycle(s.b.qg, s.trivial, c, 1e-9).pass());
  CHECK_THROWS_AS(assembly_mu0(s.b.qg, s.b.haar, s.b.dual, s.trivial, c, 1e-9), Error);

  // pi not covariant for the self action: pi(c) = c_0 (scalar) ignores the action.
  Cycle d = regular_cycle(s.b.qg, s.b.haar, 1e-9);
  for (auto& m : d.pi) m = CMatrix::Identity(d.hdim(), d.hdim()) * (m.trace() / double(d.hdim()));
  CHECK_FALSE(check_cycle(s.b.qg, s.self, d, 1e-9).pass());
}

TEST_CASE("random odd operators anticommute with the grading") {
  std::mt19937_64 rng(4);
  const CMatrix gamma = CVector((CVector(5) << 1, -1, 1, -1, -1).finished()).asDiagonal();
  const CMatrix f = random_odd_operator(gamma, rng);
  CHECK(hermitian_defect(f) <= 1e-15);
  CHECK(max_abs(gamma * f + f * gamma) <= 1e-15);
  CHECK(max_abs(f) > 0.1);
}
