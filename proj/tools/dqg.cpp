// dqg: command-line front end for the quantum group engine.
//
// Exit codes: 0 when every check passes, 1 on a verification failure,
// 2 on usage or parse errors.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dqg/assembly.hpp"
#include "dqg/groups.hpp"
#include "dqg/io.hpp"
#include "dqg/report.hpp"

namespace {

using namespace dqg;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  double tol = kDefaultTol;
  std::uint64_t seed = kDefaultSeed;
  bool json = false;
  std::string mode = "h0";
  std::string qg_path;
  std::string cycle_path;
  std::string input_path;
  std::string output_path;
  std::string name;
  int block = 0;
  bool odd = false;
};

Config config_of(const Options& o) {
  Config cfg;
  cfg.tol = o.tol;
  cfg.seed = o.seed;
  cfg.mode = o.mode == "state" ? HaarNormalization::State : HaarNormalization::CounitBlock;
  return cfg;
}

// Thrown to stop a command after a failed verification stage; the report
// already holds the failing checks.
struct StageFailed {};

struct Loaded {
  QuantumGroup qg;
  std::optional<HaarData> haar;
  std::optional<DualAlgebra> dual;
};

Loaded load_qg(const std::string& path, const Config& cfg, Report& rep, std::vector<std::string>& inputs,
               bool need_haar, bool need_dual) {
  const std::string text = read_text_file(path);
  inputs.push_back(text);
  Loaded l{to_quantum_group(parse_qg(text)), std::nullopt, std::nullopt};
  const AxiomReport ax = check_axioms(l.qg, cfg);
  rep.checks.append(ax.report, "hopf.");
  if (!ax.verified()) {
    if (!ax.detail.empty()) rep.error = ax.detail;
    throw StageFailed{};
  }
  if (need_haar || need_dual) {
    l.haar = compute_haar(l.qg, cfg);
    rep.checks.append(l.haar->identities, "haar.");
    if (!l.haar->identities.pass()) throw StageFailed{};
  }
  if (need_dual) {
    l.dual = make_dual(l.qg, *l.haar, cfg);
    rep.checks.append(l.dual->checks, "dual.");
    if (!l.dual->checks.pass()) throw StageFailed{};
  }
  return l;
}

Json shape_json(const BlockShape& s) { return Json(s.dims()); }

void cmd_verify(const Options& o, const Config& cfg, Report& rep, std::vector<std::string>& inputs) {
  Loaded l = load_qg(o.qg_path, cfg, rep, inputs, false, false);
  rep.results["name"] = l.qg.name();
  rep.results["blocks"] = shape_json(l.qg.shape());
  rep.results["dim"] = l.qg.dim();
  rep.results["antipode_block_bijection"] = l.qg.block_bijection();
}

void cmd_haar(const Options& o, const Config& cfg, Report& rep, std::vector<std::string>& inputs) {
  Loaded l = load_qg(o.qg_path, cfg, rep, inputs, true, false);
  const HaarData& h = *l.haar;
  rep.results["blocks"] = shape_json(l.qg.shape());
  rep.results["phi"] = to_json(h.phi);
  rep.results["psi"] = to_json(h.psi);
  rep.results["theta"] = to_json(h.theta.coefficients());
  rep.results["counit_block"] = h.alpha0;
  rep.results["h0"] = to_json(h.h0.coefficients());
}

void cmd_dual(const Options& o, const Config& cfg, Report& rep, std::vector<std::string>& inputs) {
  Loaded l = load_qg(o.qg_path, cfg, rep, inputs, true, true);
  const DualAlgebra& d = *l.dual;
  const Index n = d.dim();
  const double floor = 1e-14 * std::max(1.0, d.table.cwiseAbs().maxCoeff());
  Json table = Json::array();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        const cplx v = d.table(k, i * n + j);
        if (std::abs(v) > floor) table.push_back({i, j, k, v.real(), v.imag()});
      }
  rep.results["carrier_blocks"] = shape_json(d.carrier);
  rep.results["convolution_table"] = std::move(table);
  rep.results["unit"] = to_json(d.unit);
  rep.results["dims"] = d.dims;
  rep.results["decomposition_attempts"] = d.attempts;
}

void cmd_dualize(const Options& o, const Config& cfg, Report& rep, std::vector<std::string>& inputs) {
  Loaded l = load_qg(o.qg_path, cfg, rep, inputs, true, true);
  QuantumGroup dq = dualize(l.qg, *l.haar, *l.dual, cfg);
  dq.set_name("dual_" + l.qg.name());
  const std::string text = emit_qg(to_qg_file(dq));
  // Re-read what is written so the file itself is what gets verified.
  QuantumGroup back = to_quantum_group(parse_qg(text));
  const AxiomReport ax = check_axioms(back, cfg);
  rep.checks.append(ax.report, "output.hopf.");
  if (!ax.verified()) throw StageFailed{};
  write_text_file(o.output_path, text);
  rep.results["output"] = o.output_path;
  rep.results["blocks"] = shape_json(dq.shape());
}

LoadedCycle load_cycle(const Options& o, const Loaded& l, const Config& cfg, std::vector<std::string>& inputs) {
  const std::string text = read_text_file(o.cycle_path);
  inputs.push_back(text);
  return to_cycle(parse_cycle(text), l.qg, *l.haar, cfg.tol);
}

void cmd_corep(const Options& o, const Config& cfg, Report& rep, std::vector<std::string>& inputs) {
  Loaded l = load_qg(o.qg_path, cfg, rep, inputs, true, true);
  const LoadedCycle lc = load_cycle(o, l, cfg, inputs);
  const Representation& r = lc.cycle.u;
  rep.checks.append(check_representation(l.qg, r, cfg.tol), "rep.");
  rep.checks.append(check_induced_action(l.qg, *l.haar, *l.dual, r, cfg.tol), "action.");
  const IsotypicData iso = isotypic_decomposition(l.qg, *l.haar, *l.dual, r, cfg.tol);
  rep.checks.append(iso.report, "isotypic.");
  rep.results["hdim"] = r.hdim();
  rep.results["dims"] = iso.dims;
  rep.results["multiplicities"] = iso.multiplicities;
}

void cmd_assemble(const Options& o, const Config& cfg, Report& rep, std::vector<std::string>& inputs) {
  Loaded l = load_qg(o.qg_path, cfg, rep, inputs, true, true);
  const LoadedCycle lc = load_cycle(o, l, cfg, inputs);
  rep.results["dims"] = l.dual->dims;
  if (o.odd) {
    const OddAssemblyResult r = assembly_mu1(l.qg, *l.haar, *l.dual, lc.action, lc.cycle, cfg.tol);
    rep.checks.append(r.report);
    rep.results["degree"] = 1;
    rep.results["class"] = to_json(r.cls);
    return;
  }
  const AssemblyResult r = assembly_mu0(l.qg, *l.haar, *l.dual, lc.action, lc.cycle, cfg.tol);
  rep.checks.append(r.report);
  rep.results["degree"] = 0;
  rep.results["class"] = to_json(r.route_a);
  rep.results["route_a"] = to_json(r.route_a);
  rep.results["route_b"] = to_json(r.route_b);
  rep.results["plus"] = r.plus;
  rep.results["minus"] = r.minus;
}

void cmd_ktheory(const Options& o, const Config& cfg, Report& rep, std::vector<std::string>& inputs) {
  Loaded l = load_qg(o.qg_path, cfg, rep, inputs, true, true);
  const DualAlgebra& d = *l.dual;
  const K0Group k = k0_of_algebra(d.dims);
  Json gens = Json::array();
  for (int i = 0; i < d.block_count(); ++i) {
    const K0Class c = class_of_projection(d, d.unit_element(i, 0, 0), cfg.tol);
    K0Class expected{std::vector<long>(d.dims.size(), 0)};
    expected.v[static_cast<std::size_t>(i)] = 1;
    rep.checks.add_flag("generator_" + std::to_string(i), c == expected);
    gens.push_back(to_json(c));
  }
  rep.results["k0"] = k.to_string();
  rep.results["rank"] = k.rank();
  rep.results["dims"] = d.dims;
  rep.results["generators"] = std::move(gens);
}

void cmd_build_cayley(const Options& o, const Config& cfg, Report& rep, std::vector<std::string>& inputs) {
  const std::string text = read_text_file(o.input_path);
  inputs.push_back(text);
  const Group g = parse_cayley(text);
  QuantumGroup qg = function_algebra(g, o.name.empty() ? "C(G)" : o.name);
  const AxiomReport ax = check_axioms(qg, cfg);
  rep.checks.append(ax.report, "hopf.");
  if (!ax.verified()) throw StageFailed{};
  write_text_file(o.output_path, emit_qg(to_qg_file(qg)));
  rep.results["order"] = g.order;
  rep.results["output"] = o.output_path;
}

void cmd_build_regular(const Options& o, const Config& cfg, Report& rep, std::vector<std::string>& inputs) {
  Loaded l = load_qg(o.qg_path, cfg, rep, inputs, true, false);
  const Cycle c = regular_cycle(l.qg, *l.haar, cfg.tol);
  rep.checks.append(check_cycle(l.qg, self_action(l.qg, *l.haar), c, cfg.tol), "cycle.");
  if (!rep.checks.pass()) throw StageFailed{};
  write_text_file(o.output_path, emit_cycle(to_cycle_file(c, false)));
  rep.results["hdim"] = c.hdim();
  rep.results["output"] = o.output_path;
}

void cmd_build_isotypic(const Options& o, const Config& cfg, Report& rep, std::vector<std::string>& inputs) {
  Loaded l = load_qg(o.qg_path, cfg, rep, inputs, true, true);
  if (o.block < 0 || o.block >= l.dual->block_count())
    throw Error(Errc::InvalidInput, "block " + std::to_string(o.block) + " outside 0.." +
                                        std::to_string(l.dual->block_count() - 1));
  const IrrepData irrep = irrep_matrix_elements(l.qg, *l.haar, *l.dual, o.block, cfg.tol);
  rep.checks.append(irrep.report, "irrep.");
  const Cycle c = generator_cycle(irrep);
  rep.checks.append(check_cycle(l.qg, trivial_action(l.qg, *l.haar), c, cfg.tol), "cycle.");
  if (!rep.checks.pass()) throw StageFailed{};
  write_text_file(o.output_path, emit_cycle(to_cycle_file(c, true)));
  rep.results["block"] = o.block;
  rep.results["hdim"] = c.hdim();
  rep.results["output"] = o.output_path;
}

using Command = void (*)(const Options&, const Config&, Report&, std::vector<std::string>&);

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Finite-dimensional discrete quantum groups: axioms, Haar weights, duals, corepresentations and assembly"};
  app.require_subcommand(1);
  app.add_option("--tol", o.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Seed for randomized steps");
  app.add_flag("--json", o.json, "Print a JSON report");
  app.add_option("--mode", o.mode, "Haar normalization: h0 or state")->check(CLI::IsMember({"h0", "state"}));

  Command cmd = nullptr;
  std::string label;
  auto with_qg = [&](const char* name, const char* help, Command c) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("qg", o.qg_path, "Quantum group file")->required();
    sub->callback([&cmd, &label, c, name] {
      cmd = c;
      label = name;
    });
    return sub;
  };
  with_qg("verify", "Run the Hopf axiom suite", cmd_verify);
  with_qg("haar", "Haar weights, modular element and counit block", cmd_haar);
  with_qg("dual", "Convolution algebra and its Wedderburn dimensions", cmd_dual);
  with_qg("dualize", "Write the dual quantum group", cmd_dualize)
      ->add_option("-o,--output", o.output_path, "Output .qg file")
      ->required();
  with_qg("corep", "Representation checks and multiplicities", cmd_corep)
      ->add_option("cycle", o.cycle_path, "Cycle file")
      ->required();
  auto* assemble = with_qg("assemble", "K_0 class of a cycle by both routes", cmd_assemble);
  assemble->add_option("cycle", o.cycle_path, "Cycle file")->required();
  assemble->add_flag("--odd", o.odd, "Treat the cycle as odd and compute mu_1");
  with_qg("ktheory", "K_0 of the dual", cmd_ktheory);

  auto* build = app.add_subcommand("build", "Fixture builders");
  build->require_subcommand(1);
  auto* cayley = build->add_subcommand("cayley", "C(G) from a Cayley table");
  cayley->add_option("table", o.input_path, "Cayley table")->required();
  cayley->add_option("-o,--output", o.output_path, "Output .qg file")->required();
  cayley->add_option("--name", o.name, "Name written to the file");
  cayley->callback([&] {
    cmd = cmd_build_cayley;
    label = "build cayley";
  });
  auto* regular = build->add_subcommand("regular", "Regular cycle on L^2(phi) over the self action");
  regular->add_option("qg", o.qg_path, "Quantum group file")->required();
  regular->add_option("-o,--output", o.output_path, "Output .cyc file")->required();
  regular->callback([&] {
    cmd = cmd_build_regular;
    label = "build regular";
  });
  auto* isotypic = build->add_subcommand("isotypic", "Generator cycle of one dual block");
  isotypic->add_option("qg", o.qg_path, "Quantum group file")->required();
  isotypic->add_option("--block", o.block, "Dual block index")->required();
  isotypic->add_option("-o,--output", o.output_path, "Output .cyc file")->required();
  isotypic->callback([&] {
    cmd = cmd_build_isotypic;
    label = "build isotypic";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  const Config cfg = config_of(o);
  Report rep;
  rep.command = label;
  rep.cfg = cfg;
  std::vector<std::string> inputs{label};
  int rc = kExitPass;
  const auto start = std::chrono::steady_clock::now();
  try {
    cmd(o, cfg, rep, inputs);
  } catch (const StageFailed&) {
  } catch (const Error& e) {
    rep.error = e.what();
    if (e.code() == Errc::Parse || e.code() == Errc::InvalidInput || e.code() == Errc::TooLarge) rc = kExitUsage;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.digest = input_digest(inputs);
  if (rc == kExitPass && !rep.pass()) rc = kExitFail;

  if (o.json)
    std::cout << rep.to_json().dump(2) << '\n';
  else
    std::cout << rep.to_text();
  return rc;
}
