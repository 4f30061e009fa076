// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed here
// and do not follow --tol or any environment setting.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "dqg/assembly.hpp"
#include "dqg/groups.hpp"
#include "dqg/io.hpp"
#include "dqg/kernel.hpp"

namespace {

using namespace dqg;

constexpr double kAxiomTol = 1e-9;
constexpr double kModularTol = 1e-9;
constexpr double kModuleTol = 1e-9;
constexpr double kEquivarianceTol = 1e-9;
constexpr double kBidualTol = 1e-8;
constexpr double kRuntimeLimitSeconds = 30.0;
constexpr int kCyclesPerFixture = 10;
constexpr int kPropertyCycles = 20;
constexpr std::uint64_t kSeed = 20240917;

std::string data_path(const std::string& f) { return std::string(DQG_DATA_DIR) + "/" + f; }

QuantumGroup group_qg(const std::string& name) {
  return build_function_algebra(parse_cayley(read_text_file(data_path(name + ".txt"))), "C(" + name + ")");
}

struct Fixture {
  QuantumGroup qg;
  HaarData haar;
  DualAlgebra dual;
  std::vector<IrrepData> irreps;
};

Fixture prepare(QuantumGroup qg, const Config& cfg = {}) {
  HaarData h = compute_haar(qg, cfg);
  DualAlgebra d = make_dual(qg, h, cfg);
  std::vector<IrrepData> irreps;
  for (int i = 0; i < d.block_count(); ++i) irreps.push_back(irrep_matrix_elements(qg, h, d, i, cfg.tol));
  return {std::move(qg), std::move(h), std::move(d), std::move(irreps)};
}

QuantumGroup dual_of(const QuantumGroup& qg) {
  const Config cfg;
  const HaarData h = compute_haar(qg, cfg);
  const DualAlgebra d = make_dual(qg, h, cfg);
  QuantumGroup out = dualize(qg, h, d, cfg);
  out.set_name("dual " + qg.name());
  return out;
}

const std::vector<std::string> kGroups{"z2", "z3", "z4", "s3", "q8", "d4"};

// Group fixtures followed by their dualizations.
std::vector<QuantumGroup> fixtures() {
  std::vector<QuantumGroup> out;
  for (const auto& g : kGroups) out.push_back(group_qg(g));
  for (std::size_t i = 0; i < kGroups.size(); ++i) out.push_back(dual_of(out[i]));
  return out;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s; %s\n", o.pass ? "PASS" : "FAIL", n, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string vec(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

K0Class unit_class(std::size_t n, std::size_t i) {
  K0Class k{std::vector<long>(n, 0)};
  k.v[i] = 1;
  return k;
}

Outcome criterion_axioms() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int count = 0;
  std::string bad;
  for (auto& qg : fixtures()) {
    const AxiomReport ax = check_axioms(qg);
    const HaarData h = compute_haar(qg);
    CheckReport all = ax.report;
    all.append(h.identities, "haar.");
    for (const auto& c : all.checks) {
      worst = std::max(worst, c.residual);
      if (!c.pass || !(c.residual <= kAxiomTol)) bad = qg.name() + ":" + c.name;
    }
    ++count;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = bad.empty() && secs <= kRuntimeLimitSeconds;
  return {ok, std::to_string(count) + " fixtures, max residual " + sci(worst) + " (tol " + sci(kAxiomTol) + "), " +
                  sci(secs) + " s (limit " + sci(kRuntimeLimitSeconds) + " s)" + (bad.empty() ? "" : ", failed " + bad)};
}

Outcome criterion_modular() {
  double worst_theta = 0.0, worst_phi = 0.0;
  int count = 0;
  std::vector<QuantumGroup> all = fixtures();
  all.push_back(to_quantum_group(parse_qg(read_text_file(data_path("kac_paljutkin.qg")))));
  for (auto& qg : all) {
    check_axioms(qg);
    for (const auto mode : {HaarNormalization::CounitBlock, HaarNormalization::State}) {
      Config cfg;
      cfg.mode = mode;
      const HaarData h = compute_haar(qg, cfg);
      const AlgebraElement diff = h.theta - AlgebraElement::identity(qg.shape());
      worst_theta = std::max(worst_theta, operator_norm(diff));
      worst_phi = std::max(worst_phi, (h.phi - h.psi).cwiseAbs().maxCoeff());
      ++count;
    }
  }
  return {worst_theta <= kModularTol && worst_phi <= kModularTol,
          std::to_string(count) + " fixture/mode pairs, max ||theta - 1|| " + sci(worst_theta) + ", max |phi - psi| " +
              sci(worst_phi) + " (tol " + sci(kModularTol) + ")"};
}

Outcome criterion_dual() {
  bool ok = true;
  std::string detail;
  for (const auto& g : kGroups) {
    const Group grp = parse_cayley(read_text_file(data_path(g + ".txt")));
    const Fixture f = prepare(group_qg(g));
    std::vector<int> dims = f.dual.dims;
    std::sort(dims.begin(), dims.end());
    const int sum = std::accumulate(dims.begin(), dims.end(), 0, [](int s, int d) { return s + d * d; });
    ok = ok && sum == grp.order;
    if (g == "s3") ok = ok && dims == std::vector<int>{1, 1, 2};
    if (g[0] == 'z') ok = ok && dims == std::vector<int>(static_cast<std::size_t>(grp.order), 1);
    detail += g + " " + vec(dims) + " ";
  }
  return {ok, "sorted dims " + detail + "with sum d_i^2 = |G|"};
}

Outcome criterion_generators() {
  bool ok = true;
  int cycles = 0;
  std::vector<QuantumGroup> all = fixtures();
  for (auto& qg : all) {
    const Fixture f = prepare(std::move(qg));
    const ActionDatum tr = trivial_action(f.qg, f.haar);
    const std::size_t n = f.irreps.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Cycle c = generator_cycle(f.irreps[i]);
      const AssemblyResult r = assembly_mu0(f.qg, f.haar, f.dual, tr, c, kAxiomTol);
      const OddAssemblyResult o = assembly_mu1(f.qg, f.haar, f.dual, tr, c, kAxiomTol);
      ok = ok && r.route_a == unit_class(n, i) && r.route_b == unit_class(n, i) &&
           o.cls == K0Class{std::vector<long>(n, 0)};
      ++cycles;
    }
  }
  return {ok, std::to_string(cycles) + " generator cycles give standard basis vectors by both routes, odd class 0"};
}

Outcome criterion_regular() {
  bool ok = true;
  std::string detail;
  for (const auto& [g, expect] : std::vector<std::pair<std::string, std::vector<long>>>{{"s3", {1, 1, 2}},
                                                                                          {"z4", {1, 1, 1, 1}}}) {
    const Fixture f = prepare(group_qg(g));
    const AssemblyResult r =
        assembly_mu0(f.qg, f.haar, f.dual, self_action(f.qg, f.haar), regular_cycle(f.qg, f.haar, kAxiomTol), kAxiomTol);
    ok = ok && r.route_a.v == expect && r.route_b.v == expect;
    detail += g + " A=" + r.route_a.to_string() + " B=" + r.route_b.to_string() + " ";
  }
  return {ok, detail};
}

Outcome criterion_module() {
  const Fixture f = prepare(group_qg("s3"));
  const CheckReport reg = verify_regular_module(f.qg, f.haar, f.dual, kModuleTol);
  const double ip = reg.find("inner_product_is_sharp_convolution")->residual;
  const double act = reg.find("action_is_convolution")->residual;
  const double iso = reg.find("sigma.sigma_isometry")->residual;
  const bool ok = reg.pass() && ip <= kModuleTol && act <= kModuleTol && iso <= kModuleTol;
  return {ok, "inner product vs sharp convolution " + sci(ip) + ", action vs convolution " + sci(act) +
                  ", Sigma isometry " + sci(iso) + " (tol " + sci(kModuleTol) + ")"};
}

Outcome criterion_averaging() {
  std::mt19937_64 rng(kSeed);
  double worst = 0.0, worst_fixed = 0.0;
  int cycles = 0;
  bool ok = true;
  for (auto& qg : fixtures()) {
    const Fixture f = prepare(std::move(qg));
    const ActionDatum tr = trivial_action(f.qg, f.haar), self = self_action(f.qg, f.haar);
    for (int k = 0; k < kCyclesPerFixture; ++k) {
      const bool regular = k % 2 == 0;
      Cycle c = regular ? random_regular_cycle(f.qg, f.haar, 1 + k % 3, 1 + (k / 2) % 2, rng, kAxiomTol)
                        : random_trivial_cycle(f.irreps, std::vector<int>(f.irreps.size(), 1),
                                               std::vector<int>(f.irreps.size(), k % 3 == 0 ? 0 : 1), rng);
      const ActionDatum& ad = regular ? self : tr;
      ok = ok && check_cycle(f.qg, ad, c, kAxiomTol).pass();
      const CMatrix fp = average_operator(f.haar, ad, c);
      const CheckReport eq = check_equivariance(c.u, fp, kEquivarianceTol);
      worst = std::max(worst, eq.checks[0].residual / (1.0 + operator_norm(fp)));
      ok = ok && eq.pass();
      ++cycles;
    }
    // U trivial, F already equivariant: averaging must return F itself.
    const Index n = 4;
    CMatrix gamma = CMatrix::Identity(n, n);
    gamma(2, 2) = gamma(3, 3) = -1.0;
    const Cycle c{trivial_representation(f.qg.shape(), n), {CMatrix::Identity(n, n)}, random_odd_operator(gamma, rng),
                  gamma};
    worst_fixed = std::max(worst_fixed, max_abs(average_operator(f.haar, tr, c) - c.f));
  }
  ok = ok && worst_fixed == 0.0;
  return {ok, std::to_string(cycles) + " random covariant cycles, max relative equivariance defect " + sci(worst) +
                  " (tol " + sci(kEquivarianceTol) + "); trivial U: max |F' - F| = " + sci(worst_fixed)};
}

Outcome criterion_properties() {
  std::mt19937_64 rng(kSeed + 1);
  Config state;
  state.mode = HaarNormalization::State;
  std::vector<std::pair<Fixture, Fixture>> pairs;
  for (const auto& g : {"s3", "d4"}) {
    pairs.emplace_back(prepare(group_qg(g)), prepare(group_qg(g), state));
    pairs.emplace_back(prepare(dual_of(group_qg(g))), prepare(dual_of(group_qg(g)), state));
  }
  int mode_ok = 0, conj_ok = 0, add_ok = 0;
  for (int k = 0; k < kPropertyCycles; ++k) {
    const auto& [f, fs] = pairs[static_cast<std::size_t>(k) % pairs.size()];
    const std::size_t n = f.irreps.size();
    std::vector<int> p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<int>(rng() % 3);
      q[i] = static_cast<int>(rng() % 2);
    }
    p[0] += 1;
    const bool regular = k % 2 == 1;
    const ActionDatum ad = regular ? self_action(f.qg, f.haar) : trivial_action(f.qg, f.haar);
    const ActionDatum ads = regular ? self_action(fs.qg, fs.haar) : trivial_action(fs.qg, fs.haar);
    const Cycle a = regular ? random_regular_cycle(f.qg, f.haar, 1 + k % 2, k % 3, rng, kAxiomTol)
                            : random_trivial_cycle(f.irreps, p, q, rng);
    const Cycle b = regular ? random_regular_cycle(f.qg, f.haar, k % 2, 1, rng, kAxiomTol)
                            : random_trivial_cycle(f.irreps, q, p, rng);
    const K0Class ka = assembly_mu0(f.qg, f.haar, f.dual, ad, a, kAxiomTol).route_a;
    const K0Class kb = assembly_mu0(f.qg, f.haar, f.dual, ad, b, kAxiomTol).route_a;
    // The state-mode pair has its own h and matrix units but the same dual block order.
    const AssemblyResult other = assembly_mu0(fs.qg, fs.haar, fs.dual, ads, a, kAxiomTol);
    mode_ok += other.route_a == ka && other.route_b == ka && fs.dual.dims == f.dual.dims;
    const Cycle w = conjugate_cycle(a, random_unitary(a.hdim(), rng));
    const AssemblyResult rw = assembly_mu0(f.qg, f.haar, f.dual, ad, w, kAxiomTol);
    conj_ok += rw.route_a == ka && rw.route_b == ka;
    const AssemblyResult sum = assembly_mu0(f.qg, f.haar, f.dual, ad, direct_sum_cycle(a, b), kAxiomTol);
    add_ok += sum.route_a == ka + kb && sum.route_b == ka + kb;
  }
  const bool ok = mode_ok == kPropertyCycles && conj_ok == kPropertyCycles && add_ok == kPropertyCycles;
  return {ok, "over " + std::to_string(kPropertyCycles) + " cycles: mode invariance " + std::to_string(mode_ok) +
                  ", conjugation invariance " + std::to_string(conj_ok) + ", additivity " + std::to_string(add_ok)};
}

Outcome criterion_biduality() {
  bool ok = true;
  std::string detail;
  for (const auto& g : {"z3", "s3"}) {
    const BidualityReport r = check_biduality(group_qg(g), Config{});
    double worst = 0.0;
    for (const auto& c : r.report.checks) {
      worst = std::max(worst, c.residual);
      ok = ok && c.pass && c.residual <= kBidualTol;
    }
    detail += std::string(g) + " max residual " + sci(worst) + " ";
  }
  return {ok, detail + "(tol " + sci(kBidualTol) + ")"};
}

}  // namespace

int main() {
  report(1, "Hopf axiom suite", criterion_axioms);
  report(2, "modular degeneracy", criterion_modular);
  report(3, "dual structure", criterion_dual);
  report(4, "generator cycles", criterion_generators);
  report(5, "regular cycles", criterion_regular);
  report(6, "regular module identification", criterion_module);
  report(7, "averaging", criterion_averaging);
  report(8, "property suite", criterion_properties);
  report(9, "biduality", criterion_biduality);
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
