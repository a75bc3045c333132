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

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "parityq/circuit.hpp"
#include "parityq/code.hpp"
#include "parityq/deform.hpp"
#include "parityq/errors.hpp"
#include "parityq/faults.hpp"

namespace parityq {

using ordered_json = nlohmann::ordered_json;

inline constexpr char kToolVersion[] = "parityq 0.1.0";

/// Logical indices are zero-based in memory. Files and reports add a display
/// base (1 by default, matching the usual hand-labelled figures); parsers
/// subtract the same base. Qubit and stabilizer indices stay zero-based
/// everywhere.
inline constexpr uint32_t kDefaultLabelBase = 1;

inline ordered_json label_to_json(const ParityLabel& label, uint32_t base) {
  ordered_json arr = ordered_json::array();
  for (uint32_t i : label.indices()) arr.push_back(i + base);
  return arr;
}

inline ParityLabel label_from_json(const ordered_json& j, uint32_t base) {
  if (!j.is_array()) throw ParseError("label must be an array of logical indices");
  std::vector<uint32_t> idx;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) throw ParseError("logical index must be a nonnegative integer");
    uint64_t raw = v.get<uint64_t>();
    if (raw < base) throw ParseError("logical index below the display base");
    idx.push_back(static_cast<uint32_t>(raw - base));
  }
  try {
    return ParityLabel(std::move(idx));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

/// Fixed field order: n, k, stabilizers, labels, coords. Absent labels or
/// coordinates serialize as null.
inline ordered_json code_to_json(const ClassicalParityCode& code,
                                 uint32_t label_base = kDefaultLabelBase) {
  ordered_json j;
  j["n"] = code.n;
  j["k"] = code.k;
  ordered_json stabs = ordered_json::array();
  for (const auto& s : code.stabilizers) stabs.push_back(s);
  j["stabilizers"] = std::move(stabs);
  if (code.labels.has_value()) {
    ordered_json labels = ordered_json::array();
    for (const ParityLabel& l : *code.labels) labels.push_back(label_to_json(l, label_base));
    j["labels"] = std::move(labels);
  } else {
    j["labels"] = nullptr;
  }
  if (code.coords.has_value()) {
    ordered_json coords = ordered_json::array();
    for (const auto& c : *code.coords) coords.push_back(ordered_json::array({c[0], c[1]}));
    j["coords"] = std::move(coords);
  } else {
    j["coords"] = nullptr;
  }
  return j;
}

inline ClassicalParityCode code_from_json(const ordered_json& j,
                                          uint32_t label_base = kDefaultLabelBase) {
  if (!j.is_object()) throw ParseError("code document must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_unsigned()) {
    throw ParseError("code needs an unsigned field n");
  }
  if (!j.contains("k") || !j["k"].is_number_unsigned()) {
    throw ParseError("code needs an unsigned field k");
  }
  ClassicalParityCode code;
  code.n = j["n"].get<uint32_t>();
  code.k = j["k"].get<uint32_t>();
  if (!j.contains("stabilizers") || !j["stabilizers"].is_array()) {
    throw ParseError("code needs a stabilizers array");
  }
  for (const auto& s : j["stabilizers"]) {
    if (!s.is_array()) throw ParseError("each stabilizer must be an array of qubits");
    std::vector<uint32_t> support;
    for (const auto& q : s) {
      if (!q.is_number_unsigned()) throw ParseError("stabilizer qubit must be a nonnegative integer");
      support.push_back(q.get<uint32_t>());
    }
    code.stabilizers.push_back(std::move(support));
  }
  if (j.contains("labels") && !j["labels"].is_null()) {
    if (!j["labels"].is_array()) throw ParseError("labels must be an array or null");
    std::vector<ParityLabel> labels;
    for (const auto& l : j["labels"]) labels.push_back(label_from_json(l, label_base));
    code.labels = std::move(labels);
    if (code.labels->size() != code.n) throw ParseError("labels array must have n entries");
  }
  if (j.contains("coords") && !j["coords"].is_null()) {
    if (!j["coords"].is_array()) throw ParseError("coords must be an array or null");
    std::vector<std::array<int, 2>> coords;
    for (const auto& c : j["coords"]) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() ||
          !c[1].is_number_integer()) {
        throw ParseError("each coordinate must be a pair of integers");
      }
      coords.push_back({c[0].get<int>(), c[1].get<int>()});
    }
    code.coords = std::move(coords);
    if (code.coords->size() != code.n) throw ParseError("coords array must have n entries");
  }
  try {
    code.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("invalid code: ") + e.what());
  }
  return code;
}

inline ordered_json parse_json_text(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON");
  return j;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline ClassicalParityCode read_code_file(const std::string& path,
                                          uint32_t label_base = kDefaultLabelBase) {
  return code_from_json(parse_json_text(read_text_file(path)), label_base);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

/// Two labelled blocks on one register: {"control": code, "target": code}.
inline ordered_json block_pair_to_json(const ClassicalParityCode& control,
                                       const ClassicalParityCode& target,
                                       uint32_t label_base = kDefaultLabelBase) {
  ordered_json j;
  j["control"] = code_to_json(control, label_base);
  j["target"] = code_to_json(target, label_base);
  return j;
}

inline std::pair<ClassicalParityCode, ClassicalParityCode> block_pair_from_json(
    const ordered_json& j, uint32_t label_base = kDefaultLabelBase) {
  if (!j.is_object() || !j.contains("control") || !j.contains("target")) {
    throw ParseError("block file needs control and target codes");
  }
  return {code_from_json(j["control"], label_base), code_from_json(j["target"], label_base)};
}

namespace detail {

inline const char* correction_mode_name(CorrectionMode mode) {
  return mode == CorrectionMode::Physical ? "physical" : "frame";
}

inline ordered_json gate_to_json(const GateRecord& g) {
  ordered_json j;
  j["gate"] = gate_name(g.kind);
  j["qubits"] = g.touched();
  if (g.kind == GateKind::RZ) j["angle"] = g.angle;
  if (g.kind == GateKind::MPP) j["pauli"] = g.pauli->str();
  return j;
}

}  // namespace detail

/// One event per protocol log entry. The outcome fields alone are enough to
/// replay the run bit-for-bit through a scripted outcome source.
inline ordered_json trace_to_json(const ProtocolTrace& trace,
                                  uint32_t label_base = kDefaultLabelBase) {
  ordered_json events = ordered_json::array();
  for (const TraceEvent& e : trace.events) {
    ordered_json j;
    switch (e.kind) {
      case TraceEvent::Kind::Deform: {
        const DeformationStep& s = *e.step;
        j["event"] = "deform";
        j["action"] = s.kind == DeformationStep::Kind::Add ? "add" : "remove";
        j["qubit"] = s.qubit;
        j["label"] = label_to_json(s.label, label_base);
        j["connecting_stabilizer"] = s.connecting_stabilizer;
        j["outcome"] = s.outcome;
        j["deterministic"] = s.deterministic;
        j["correction"] = s.correction.str();
        j["mode"] = detail::correction_mode_name(s.mode);
        break;
      }
      case TraceEvent::Kind::Gate:
        j["event"] = "gate";
        j.update(detail::gate_to_json(*e.gate));
        break;
      case TraceEvent::Kind::Measure:
        j["event"] = "measure";
        j["pauli"] = e.pauli->str();
        j["outcome"] = e.outcome;
        j["deterministic"] = e.deterministic;
        break;
      case TraceEvent::Kind::Correction:
        j["event"] = "correction";
        j["pauli"] = e.pauli->str();
        j["mode"] = detail::correction_mode_name(e.mode);
        break;
      case TraceEvent::Kind::Exclude:
        j["event"] = "exclude";
        j["stabilizer"] = e.index;
        break;
      case TraceEvent::Kind::Reactivate:
        j["event"] = "reactivate";
        j["stabilizer"] = e.index;
        break;
      case TraceEvent::Kind::Append:
        j["event"] = "append";
        j["wire"] = e.index;
        break;
      case TraceEvent::Kind::Discard:
        j["event"] = "discard";
        j["wire"] = e.index;
        j["eigensign"] = e.outcome;
        break;
    }
    if (!e.context.empty()) j["context"] = e.context;
    events.push_back(std::move(j));
  }
  return events;
}

namespace detail {

inline std::vector<uint32_t> mask_to_qubits(uint32_t mask) {
  std::vector<uint32_t> out;
  for (uint32_t q = 0; q < 32; ++q) {
    if ((mask >> q) & 1) out.push_back(q);
  }
  return out;
}

}  // namespace detail

/// {"mode","p","trials","rate","ci95","counterexample"}; fields that do not
/// apply to the mode are null.
inline ordered_json fault_report_to_json(const FtCheckResult& result,
                                         uint32_t label_base = kDefaultLabelBase) {
  ordered_json j;
  j["mode"] = "exhaustive";
  j["p"] = nullptr;
  j["trials"] = nullptr;
  j["rate"] = nullptr;
  j["ci95"] = nullptr;
  if (result.counterexample.has_value()) {
    const FaultCounterexample& c = *result.counterexample;
    ordered_json ce;
    ce["position"] = c.location.position;
    ce["qubit"] = c.location.qubit;
    ce["block"] = c.block;
    ce["residual"] = c.residual.str();
    ce["syndrome"] = c.verdict.syndrome;
    ce["correction"] = detail::mask_to_qubits(c.verdict.correction);
    ordered_json flips = ordered_json::array();
    for (uint32_t i : c.verdict.flipped_logicals) flips.push_back(i + label_base);
    ce["logical_flips"] = std::move(flips);
    j["counterexample"] = std::move(ce);
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

inline ordered_json fault_report_to_json(const MonteCarloReport& report) {
  ordered_json j;
  j["mode"] = "mc";
  j["p"] = report.p;
  j["trials"] = report.trials;
  j["rate"] = report.rate;
  j["ci95"] = ordered_json::array({report.ci_low, report.ci_high});
  j["counterexample"] = nullptr;
  return j;
}

inline ordered_json validation_to_json(const LabelValidation& v) {
  ordered_json j;
  j["pass"] = v.pass;
  j["offending_stabilizers"] = v.offending_stabilizers;
  j["rank_ok"] = v.rank_ok;
  return j;
}

/// FNV-1a 64-bit content digest, rendered as "fnv1a64:<16 hex digits>".
inline uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest_string(const std::string& bytes) {
  static const char* hex = "0123456789abcdef";
  uint64_t h = fnv1a64(bytes);
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) out.push_back(hex[(h >> shift) & 0xf]);
  return out;
}

/// What a command ran with: replaying an identical manifest reproduces the
/// report byte for byte.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  uint64_t seed = 0;
  /// Whether the seed came from the flag or was drawn from entropy.
  bool seed_given = false;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest

  void add_input(const std::string& path, const std::string& bytes) {
    inputs.emplace_back(path, digest_string(bytes));
  }
};

inline ordered_json manifest_to_json(const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["arguments"] = m.arguments;
  j["seed"] = m.seed;
  j["seed_source"] = m.seed_given ? "flag" : "entropy";
  ordered_json inputs = ordered_json::object();
  for (const auto& [path, digest] : m.inputs) inputs[path] = digest;
  j["inputs"] = std::move(inputs);
  j["version"] = kToolVersion;
  return j;
}

}  // namespace parityq
