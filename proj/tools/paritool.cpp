// Copyright 2026 The parityq developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// paritool: parity code layouts, label derivation, parity-controlled-NOT
// construction, rotation protocols, and fault injection from the command
// line. JSON reports go to stdout, human summaries and the run manifest to
// stderr. Exit codes: 0 success, 1 verification failure, 2 usage or parse
// error, 3 guard exceeded, 4 protocol violation.

#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "parityq/code.hpp"
#include "parityq/deform.hpp"
#include "parityq/errors.hpp"
#include "parityq/faults.hpp"
#include "parityq/gates.hpp"
#include "parityq/serialize.hpp"
#include "parityq/statevector.hpp"
#include "parityq/tableau.hpp"

namespace {

using namespace parityq;

/// Options shared by every subcommand. Only one subcommand parses per run,
/// so a single instance serves them all.
struct CommonOpts {
  uint32_t label_base = kDefaultLabelBase;
  std::optional<uint64_t> seed;
  std::string manifest_path;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--label-base", c.label_base,
                  "display base for logical indices in files and reports")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed,
                  "random seed; when omitted one is drawn from entropy and recorded");
  cmd->add_option("--manifest", c.manifest_path, "also write the run manifest to this file");
}

void resolve_seed(const CommonOpts& c, RunManifest& m) {
  if (c.seed.has_value()) {
    m.seed = *c.seed;
    m.seed_given = true;
  } else {
    std::random_device rd;
    m.seed = (static_cast<uint64_t>(rd()) << 32) ^ static_cast<uint64_t>(rd());
    m.seed_given = false;
  }
}

void emit_report(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

void emit_manifest(const RunManifest& m, const CommonOpts& c) {
  ordered_json j = manifest_to_json(m);
  std::cerr << "manifest: " << j.dump() << "\n";
  if (!c.manifest_path.empty()) write_text_file(c.manifest_path, j.dump(2) + "\n");
}

std::vector<uint32_t> split_unsigned(const std::string& text, char sep) {
  std::vector<uint32_t> out;
  size_t at = 0;
  while (at <= text.size()) {
    size_t end = text.find(sep, at);
    if (end == std::string::npos) end = text.size();
    std::string token = text.substr(at, end - at);
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("expected a comma-separated list of nonnegative integers, got \"" +
                       text + "\"");
    }
    out.push_back(static_cast<uint32_t>(std::stoul(token)));
    at = end + 1;
  }
  return out;
}

ParityLabel parse_label_arg(const std::string& text, uint32_t base) {
  std::vector<uint32_t> idx;
  for (uint32_t raw : split_unsigned(text, ',')) {
    if (raw < base) throw ParseError("logical index below the display base");
    idx.push_back(raw - base);
  }
  try {
    return ParityLabel(std::move(idx));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

/// "qubit:logical,qubit:logical,..."; qubits zero-based, logicals in the
/// display base.
std::vector<std::pair<uint32_t, uint32_t>> parse_seed_args(const std::string& text,
                                                           uint32_t base) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  size_t at = 0;
  while (at <= text.size()) {
    size_t end = text.find(',', at);
    if (end == std::string::npos) end = text.size();
    std::string token = text.substr(at, end - at);
    size_t colon = token.find(':');
    if (colon == std::string::npos) {
      throw ParseError("seed entries look like qubit:logical, got \"" + token + "\"");
    }
    std::vector<uint32_t> q = split_unsigned(token.substr(0, colon), ',');
    std::vector<uint32_t> l = split_unsigned(token.substr(colon + 1), ',');
    if (q.size() != 1 || l.size() != 1) {
      throw ParseError("seed entries look like qubit:logical, got \"" + token + "\"");
    }
    if (l[0] < base) throw ParseError("logical index below the display base");
    out.emplace_back(q[0], l[0] - base);
    at = end + 1;
  }
  return out;
}

int run_layout(uint32_t k, const std::string& out_path, const CommonOpts& c, RunManifest& m) {
  ClassicalParityCode code = lhz_layout(k);
  ordered_json j = code_to_json(code, c.label_base);
  if (!out_path.empty()) write_text_file(out_path, j.dump(2) + "\n");
  emit_report(j);
  std::cerr << "layout: k=" << k << " -> " << code.n << " qubits, " << code.stabilizers.size()
            << " stabilizers" << (out_path.empty() ? "" : " -> " + out_path) << "\n";
  emit_manifest(m, c);
  return 0;
}

int run_labels(const std::string& code_path, const std::string& seeds_arg, const CommonOpts& c,
               RunManifest& m) {
  std::string bytes = read_text_file(code_path);
  m.add_input(code_path, bytes);
  ClassicalParityCode code = code_from_json(parse_json_text(bytes), c.label_base);
  std::vector<std::pair<uint32_t, uint32_t>> seeds;
  if (!seeds_arg.empty()) {
    seeds = parse_seed_args(seeds_arg, c.label_base);
  } else {
    for (uint32_t i = 0; i < code.k; ++i) seeds.emplace_back(i, i);
  }
  try {
    LabelDerivation d = derive_labels(code, seeds);
    LabelValidation v = validate_labels(code, d.assignment.labels);
    ordered_json j;
    ordered_json labels = ordered_json::array();
    for (const ParityLabel& l : d.assignment.labels) labels.push_back(label_to_json(l, c.label_base));
    j["labels"] = std::move(labels);
    if (d.assignment.seeds.has_value()) {
      ordered_json sj = ordered_json::array();
      for (uint32_t i = 0; i < code.k; ++i) {
        sj.push_back(ordered_json::array({(*d.assignment.seeds)[i], i + c.label_base}));
      }
      j["seeds"] = std::move(sj);
    } else {
      j["seeds"] = nullptr;
    }
    j["empty_label_qubits"] = d.empty_label_qubits;
    j["validation"] = validation_to_json(v);
    emit_report(j);
    std::cerr << "labels: " << (v.pass ? "pass" : "FAIL") << "\n";
    emit_manifest(m, c);
    return v.pass ? 0 : 1;
  } catch (const InconsistentSeeds& e) {
    ordered_json j;
    j["error"] = e.what();
    j["offending_stabilizers"] = e.offending_stabilizers;
    emit_report(j);
    std::cerr << "labels: FAIL (" << e.what() << ")\n";
    emit_manifest(m, c);
    return 1;
  } catch (const UnderdeterminedLabels& e) {
    ordered_json j;
    j["error"] = e.what();
    j["undetermined_qubits"] = e.undetermined_qubits;
    emit_report(j);
    std::cerr << "labels: FAIL (" << e.what() << ")\n";
    emit_manifest(m, c);
    return 1;
  }
}

struct PcnotArgs {
  std::string blocks_path;
  std::string control_label;
  uint32_t target_display = 0;
  bool transversal = false;
  bool single = false;
};

struct PcnotSetup {
  BlockPair blocks;
  ParityLabel control_label;
  uint32_t target_logical;
  PcnotBuild build;
};

PcnotSetup load_pcnot(const PcnotArgs& a, uint32_t base, RunManifest& m) {
  std::string bytes = read_text_file(a.blocks_path);
  m.add_input(a.blocks_path, bytes);
  auto pair = block_pair_from_json(parse_json_text(bytes), base);
  BlockPair blocks(std::move(pair.first), std::move(pair.second));
  ParityLabel clabel = parse_label_arg(a.control_label, base);
  if (a.target_display < base) throw ParseError("logical index below the display base");
  uint32_t target = a.target_display - base;
  PcnotLayout layout = PcnotLayout::Auto;
  if (a.transversal) layout = PcnotLayout::Transversal;
  if (a.single) layout = PcnotLayout::Single;
  PcnotBuild build = pcnot_circuit(blocks, clabel, target, layout);
  return {std::move(blocks), std::move(clabel), target, std::move(build)};
}

ordered_json circuit_to_json(const Circuit& circuit) {
  ordered_json gates = ordered_json::array();
  for (const GateRecord& g : circuit.gates) gates.push_back(detail::gate_to_json(g));
  ordered_json j;
  j["num_qubits"] = circuit.num_qubits;
  j["gates"] = std::move(gates);
  return j;
}

int run_pcnot(const PcnotArgs& a, const std::string& check, const CommonOpts& c,
              RunManifest& m) {
  PcnotSetup s = load_pcnot(a, c.label_base, m);
  ordered_json j;
  j["transversal"] = s.build.transversal;
  j["control_label"] = label_to_json(s.control_label, c.label_base);
  j["target"] = s.target_logical + c.label_base;
  j["control_qubits"] = s.build.control_qubits;
  j["target_qubits"] = s.build.target_qubits;
  j["circuit"] = circuit_to_json(s.build.circuit);
  bool ok = true;
  double fidelity = -1.0;
  bool want_oracle = check == "oracle" || check == "both";
  bool want_faults = check == "faults" || check == "both";
  if (want_oracle) {
    ClassicalParityCode joint = s.blocks.joint();
    if (joint.n > 14) throw GuardExceeded("oracle check limited to 14 qubits");
    LogicalActionReport act = logical_action(joint, *joint.labels, s.build.circuit);
    Eigen::MatrixXcd ref = pcnot_reference_unitary(
        s.control_label, s.blocks.control.k + s.target_logical, joint.k);
    fidelity = fidelity_up_to_phase(act.logical, ref);
    bool pass = act.block_preserving && fidelity >= 1.0 - 1e-10;
    ordered_json oj;
    oj["fidelity"] = fidelity;
    oj["leakage"] = act.leakage;
    oj["pass"] = pass;
    j["oracle"] = std::move(oj);
    ok = ok && pass;
  } else {
    j["oracle"] = nullptr;
  }
  if (want_faults) {
    BlockLayout layout({s.blocks.control, s.blocks.target});
    FtCheckResult res = exhaustive_ft_check(s.build.circuit, layout);
    j["faults"] = fault_report_to_json(res, c.label_base);
    j["ft"] = res.pass;
    ok = ok && res.pass;
  } else {
    j["faults"] = nullptr;
    j["ft"] = nullptr;
  }
  emit_report(j);
  std::cerr << "pcnot: " << (s.build.transversal ? "transversal" : "single-control") << ", "
            << s.build.circuit.gates.size() << " gates";
  if (want_oracle) std::cerr << ", oracle fidelity " << fidelity;
  if (want_faults) std::cerr << ", ft " << (j["ft"].get<bool>() ? "true" : "false");
  std::cerr << (ok ? "" : " FAIL") << "\n";
  emit_manifest(m, c);
  return ok ? 0 : 1;
}

int run_rotate(const std::string& code_path, const std::string& label_arg, double alpha,
               const std::string& backend, uint32_t rounds, const std::string& mode_name,
               bool keep_copy, bool no_exclude, const CommonOpts& c, RunManifest& m) {
  std::string bytes = read_text_file(code_path);
  m.add_input(code_path, bytes);
  ClassicalParityCode code = code_from_json(parse_json_text(bytes), c.label_base);
  if (!code.labels.has_value()) throw InvalidArgument("rotation needs a labelled code");
  ParityLabel label = parse_label_arg(label_arg, c.label_base);
  CorrectionMode mode =
      mode_name == "frame" ? CorrectionMode::Frame : CorrectionMode::Physical;
  RotationOptions opt;
  opt.syndrome_rounds = rounds;
  opt.exclude_connecting = !no_exclude;
  opt.finalize = keep_copy ? RotationFinalize::KeepCopy : RotationFinalize::RemoveCopy;
  ordered_json j;
  j["backend"] = backend;
  j["label"] = label_to_json(label, c.label_base);
  j["alpha"] = alpha;
  int rc = 0;
  if (backend == "statevector") {
    ProtocolActionReport rep = protocol_logical_action(
        code, mode,
        [&](ProtocolRun<StateVector>& run) { rotation_protocol(run, label, alpha, opt); },
        std::nullopt, m.seed);
    Eigen::MatrixXcd want = diagonal_rotation_unitary(label, alpha, code.k);
    double fid = fidelity_up_to_phase(rep.logical, want);
    bool pass = rep.block_preserving && fid >= 1.0 - 1e-9;
    j["fidelity"] = fid;
    j["leakage"] = rep.leakage;
    j["pass"] = pass;
    j["trace"] = trace_to_json(rep.trace, c.label_base);
    j["final_code"] = code_to_json(rep.final_code, c.label_base);
    rc = pass ? 0 : 1;
    std::cerr << "rotate: alpha " << alpha << ", fidelity " << fid << (pass ? "" : " FAIL")
              << "\n";
  } else {
    ProtocolRun<StabilizerTableau> run(code, 0, mode, OutcomeSource(m.seed));
    rotation_protocol(run, label, alpha, opt);
    run.finish();
    j["fidelity"] = nullptr;
    j["leakage"] = nullptr;
    j["pass"] = true;
    j["trace"] = trace_to_json(run.trace(), c.label_base);
    j["final_code"] = code_to_json(run.code(), c.label_base);
    std::cerr << "rotate: alpha " << alpha << " completed on the tableau backend\n";
  }
  emit_report(j);
  emit_manifest(m, c);
  return rc;
}

int run_inject(const PcnotArgs& a, const std::string& mode, double p, uint64_t trials,
               const CommonOpts& c, RunManifest& m) {
  PcnotSetup s = load_pcnot(a, c.label_base, m);
  BlockLayout layout({s.blocks.control, s.blocks.target});
  ordered_json j;
  int rc = 0;
  if (mode == "exhaustive") {
    FtCheckResult res = exhaustive_ft_check(s.build.circuit, layout);
    j = fault_report_to_json(res, c.label_base);
    rc = res.pass ? 0 : 1;
    if (res.pass) {
      std::cerr << "inject: exhaustive pass\n";
    } else {
      std::cerr << "inject: exhaustive FAIL at position " << res.counterexample->location.position
                << " qubit " << res.counterexample->location.qubit << "\n";
    }
  } else {
    MonteCarloReport rep = monte_carlo(s.build.circuit, layout, p, trials, m.seed);
    j = fault_report_to_json(rep);
    std::cerr << "inject: mc p=" << rep.p << " rate " << rep.rate << " ci95 [" << rep.ci_low
              << ", " << rep.ci_high << "]\n";
  }
  emit_report(j);
  emit_manifest(m, c);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parity code layouts, labels, gates, and fault checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  CommonOpts common;

  CLI::App* layout = app.add_subcommand("layout", "emit the triangular parity layout for k logicals");
  uint32_t layout_k = 0;
  std::string layout_out;
  layout->add_option("--k", layout_k, "number of logical qubits")->required();
  layout->add_option("--out", layout_out, "also write the code JSON to this file");
  add_common(layout, common);

  CLI::App* labels = app.add_subcommand("labels", "derive and validate qubit labels from seeds");
  std::string labels_path, labels_seeds;
  labels->add_option("code-file", labels_path, "code JSON file")->required();
  labels->add_option("--seeds", labels_seeds,
                     "seed assignments qubit:logical,... (default: qubit i carries logical i)");
  add_common(labels, common);

  PcnotArgs pargs;
  std::string pcnot_check = "both";
  CLI::App* pcnot = app.add_subcommand("pcnot", "build and check a parity-controlled-NOT");
  pcnot->add_option("blocks-file", pargs.blocks_path, "JSON file with control and target codes")
      ->required();
  pcnot->add_option("--control-label", pargs.control_label, "control label, e.g. 1,2")->required();
  pcnot->add_option("--target", pargs.target_display, "target logical index")->required();
  CLI::Option* popt_t = pcnot->add_flag("--transversal", pargs.transversal,
                                        "require one control copy per target qubit");
  pcnot->add_flag("--single", pargs.single, "use one fanned-out control copy")->excludes(popt_t);
  pcnot->add_option("--check", pcnot_check, "which checks to run")
      ->check(CLI::IsMember({"oracle", "faults", "both"}))
      ->capture_default_str();
  add_common(pcnot, common);

  CLI::App* rotate = app.add_subcommand("rotate", "run the measurement-based rotation protocol");
  std::string rotate_path, rotate_label, rotate_backend = "statevector", rotate_mode = "physical";
  double rotate_alpha = 0.0;
  uint32_t rotate_rounds = 1;
  bool rotate_keep = false, rotate_no_exclude = false;
  rotate->add_option("code-file", rotate_path, "code JSON file")->required();
  rotate->add_option("--label", rotate_label, "rotated label, e.g. 1,3")->required();
  rotate->add_option("--alpha", rotate_alpha, "rotation angle in radians")->required();
  rotate->add_option("--backend", rotate_backend, "simulation backend")
      ->check(CLI::IsMember({"statevector", "tableau"}))
      ->capture_default_str();
  rotate->add_option("--rounds", rotate_rounds, "syndrome rounds while the copy is attached")
      ->capture_default_str();
  rotate->add_option("--mode", rotate_mode, "correction mode")
      ->check(CLI::IsMember({"physical", "frame"}))
      ->capture_default_str();
  rotate->add_flag("--keep-copy", rotate_keep, "leave the rotated copy in the code");
  rotate->add_flag("--no-exclude", rotate_no_exclude,
                   "keep the connecting stabilizer active during the rotation");
  add_common(rotate, common);

  CLI::App* inject = app.add_subcommand("inject", "fault-inject a parity-controlled-NOT");
  PcnotArgs iargs;
  std::string inject_mode;
  double inject_p = 0.001;
  uint64_t inject_trials = 10000;
  inject->add_option("blocks-file", iargs.blocks_path, "JSON file with control and target codes")
      ->required();
  inject->add_option("--control-label", iargs.control_label, "control label, e.g. 1,2")
      ->required();
  inject->add_option("--target", iargs.target_display, "target logical index")->required();
  CLI::Option* iopt_t = inject->add_flag("--transversal", iargs.transversal,
                                         "require one control copy per target qubit");
  inject->add_flag("--single", iargs.single, "use one fanned-out control copy")->excludes(iopt_t);
  inject->add_option("--mode", inject_mode, "exhaustive sweep or Monte Carlo sampling")
      ->check(CLI::IsMember({"exhaustive", "mc"}))
      ->required();
  inject->add_option("--p", inject_p, "per-slot fault probability (mc)")->capture_default_str();
  inject->add_option("--trials", inject_trials, "Monte Carlo trials")->capture_default_str();
  add_common(inject, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  RunManifest manifest;
  manifest.arguments.assign(argv + 1, argv + argc);
  try {
    resolve_seed(common, manifest);
    if (layout->parsed()) {
      manifest.command = "layout";
      return run_layout(layout_k, layout_out, common, manifest);
    }
    if (labels->parsed()) {
      manifest.command = "labels";
      return run_labels(labels_path, labels_seeds, common, manifest);
    }
    if (pcnot->parsed()) {
      manifest.command = "pcnot";
      return run_pcnot(pargs, pcnot_check, common, manifest);
    }
    if (rotate->parsed()) {
      manifest.command = "rotate";
      return run_rotate(rotate_path, rotate_label, rotate_alpha, rotate_backend, rotate_rounds,
                        rotate_mode, rotate_keep, rotate_no_exclude, common, manifest);
    }
    if (inject->parsed()) {
      manifest.command = "inject";
      return run_inject(iargs, inject_mode, inject_p, inject_trials, common, manifest);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GuardExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ProtocolViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
