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

// End-to-end checks of the paritool binary: report shapes, display bases,
// seeded determinism, and the exit code contract (0 success, 1 verification
// failure, 2 usage or parse error, 3 guard exceeded, 4 protocol violation).

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "catch2/catch_amalgamated.hpp"
#include "parityq/code.hpp"
#include "parityq/serialize.hpp"

using namespace parityq;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
  ordered_json report;    // parsed stdout when it is JSON
  ordered_json manifest;  // parsed "manifest: " stderr line when present
};

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "paritool_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliRun run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out_path = work_dir() / ("stdout" + std::to_string(counter) + ".txt");
  fs::path err_path = work_dir() / ("stderr" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd = std::string(PARITOOL_PATH) + " " + args + " >" + out_path.string() + " 2>" +
                    err_path.string();
  int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text_file(out_path.string());
  r.err = read_text_file(err_path.string());
  ordered_json parsed = ordered_json::parse(r.out, nullptr, false);
  if (!parsed.is_discarded()) r.report = std::move(parsed);
  size_t at = r.err.find("manifest: ");
  if (at != std::string::npos) {
    size_t start = at + std::string("manifest: ").size();
    size_t eol = r.err.find('\n', start);
    parsed = ordered_json::parse(r.err.substr(start, eol - start), nullptr, false);
    if (!parsed.is_discarded()) r.manifest = std::move(parsed);
  }
  return r;
}

std::string write_file(const std::string& name, const std::string& text) {
  fs::path p = work_dir() / name;
  write_text_file(p.string(), text);
  return p.string();
}

std::string write_code(const std::string& name, const ClassicalParityCode& code) {
  return write_file(name, code_to_json(code).dump(2) + "\n");
}

std::string write_blocks(const std::string& name, const ClassicalParityCode& control,
                         const ClassicalParityCode& target) {
  return write_file(name, block_pair_to_json(control, target).dump(2) + "\n");
}

}  // namespace

TEST_CASE("layout emits the triangular code with one-based labels") {
  CliRun r = run_cli("layout --k 3");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.report.is_object());
  CHECK(r.report["n"] == 6);
  CHECK(r.report["k"] == 3);
  CHECK(r.report["stabilizers"] ==
        ordered_json::parse("[[0,1,3],[1,2,4],[3,4,5]]"));
  CHECK(r.report["labels"] ==
        ordered_json::parse("[[1],[2],[3],[1,2],[2,3],[1,3]]"));
  CHECK(r.report["coords"].size() == 6);
  REQUIRE(r.manifest.is_object());
  CHECK(r.manifest["command"] == "layout");
  CHECK(r.manifest["seed_source"] == "entropy");
  CHECK(r.manifest["version"] == kToolVersion);
}

TEST_CASE("layout writes the same code to the output file") {
  std::string out = (work_dir() / "layout_k2.json").string();
  CliRun r = run_cli("layout --k 2 --out " + out);
  REQUIRE(r.exit_code == 0);
  CHECK(read_text_file(out) == r.out);
  ClassicalParityCode code = read_code_file(out);
  CHECK(code.n == 3);
  CHECK(code.k == 2);
}

TEST_CASE("layout honors the display base") {
  CliRun r = run_cli("layout --k 2 --label-base 0");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["labels"] == ordered_json::parse("[[0],[1],[0,1]]"));
}

TEST_CASE("layout usage errors exit two") {
  CHECK(run_cli("layout --k 1").exit_code == 2);
  CHECK(run_cli("layout").exit_code == 2);
  CHECK(run_cli("layout --k nope").exit_code == 2);
}

TEST_CASE("labels derives the smallest example from explicit seeds") {
  std::string path = write_code("fig_small.json", lhz_layout(2));
  CliRun r = run_cli("labels " + path + " --seeds 0:1,1:2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["labels"] == ordered_json::parse("[[1],[2],[1,2]]"));
  CHECK(r.report["seeds"] == ordered_json::parse("[[0,1],[1,2]]"));
  CHECK(r.report["validation"]["pass"] == true);
  CHECK(r.report["empty_label_qubits"].empty());
}

TEST_CASE("labels auto-seeds the base row") {
  std::string path = write_code("lhz3.json", lhz_layout(3));
  CliRun r = run_cli("labels " + path);
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["validation"]["pass"] == true);
  CHECK(r.report["labels"][3] == ordered_json::parse("[1,2]"));
  REQUIRE(r.manifest.is_object());
  std::string digest = r.manifest["inputs"][path].get<std::string>();
  CHECK(digest.rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("labels reports contradictory seeds with the offending stabilizer") {
  std::string path = write_code("lhz3_bad.json", lhz_layout(3));
  CliRun r = run_cli("labels " + path + " --seeds 0:1,1:2,3:3");
  REQUIRE(r.exit_code == 1);
  CHECK(r.report.contains("error"));
  CHECK(r.report["offending_stabilizers"] == ordered_json::parse("[0]"));
}

TEST_CASE("labels exits two on unreadable or malformed input") {
  CHECK(run_cli("labels " + (work_dir() / "missing.json").string()).exit_code == 2);
  std::string garbage = write_file("garbage.json", "not json at all\n");
  CHECK(run_cli("labels " + garbage).exit_code == 2);
  std::string wrong = write_file("wrong.json", "{\"n\": 3}\n");
  CHECK(run_cli("labels " + wrong).exit_code == 2);
}

TEST_CASE("pcnot verifies the transversal gate") {
  std::string path = write_blocks("rep3_pair.json", repetition_code(3), repetition_code(3));
  CliRun r = run_cli("pcnot " + path + " --control-label 1 --target 1 --check both");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["transversal"] == true);
  CHECK(r.report["control_qubits"] == ordered_json::parse("[0,1,2]"));
  CHECK(r.report["target_qubits"] == ordered_json::parse("[3,4,5]"));
  REQUIRE(r.report["circuit"]["gates"].size() == 3);
  for (const auto& g : r.report["circuit"]["gates"]) CHECK(g["gate"] == "CNOT");
  CHECK(r.report["oracle"]["pass"] == true);
  CHECK(r.report["oracle"]["fidelity"].get<double>() >= 1.0 - 1e-10);
  CHECK(r.report["ft"] == true);
  CHECK(r.report["faults"]["counterexample"].is_null());
}

TEST_CASE("pcnot leaves unchecked sections null") {
  std::string path = write_blocks("rep3_pair_b.json", repetition_code(3), repetition_code(3));
  CliRun r = run_cli("pcnot " + path + " --control-label 1 --target 1 --check oracle");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["faults"].is_null());
  CHECK(r.report["ft"].is_null());
}

TEST_CASE("pcnot flags the fanned-out control") {
  std::string path = write_blocks("lhz3_pair.json", lhz_layout(3), lhz_layout(3));
  CliRun r = run_cli("pcnot " + path + " --control-label 1,2 --target 1 --single --check both");
  REQUIRE(r.exit_code == 1);
  CHECK(r.report["transversal"] == false);
  CHECK(r.report["oracle"]["pass"] == true);
  CHECK(r.report["ft"] == false);
  const ordered_json& ce = r.report["faults"]["counterexample"];
  REQUIRE(ce.is_object());
  CHECK(ce["position"] == 0);
  CHECK(ce["qubit"] == 3);
  CHECK(ce["block"] == 1);
  CHECK(ce["logical_flips"] == ordered_json::parse("[1]"));
}

TEST_CASE("pcnot guards the oracle dimension") {
  std::string path = write_blocks("lhz4_pair.json", lhz_layout(4), lhz_layout(4));
  CliRun r = run_cli("pcnot " + path + " --control-label 1,2 --target 1 --single --check oracle");
  CHECK(r.exit_code == 3);
}

TEST_CASE("pcnot rejects contradictory layout flags") {
  std::string path = write_blocks("rep3_pair_c.json", repetition_code(3), repetition_code(3));
  CliRun r =
      run_cli("pcnot " + path + " --control-label 1 --target 1 --transversal --single");
  CHECK(r.exit_code == 2);
}

TEST_CASE("rotate matches the diagonal rotation") {
  std::string path = write_code("lhz3_rot.json", lhz_layout(3));
  CliRun r = run_cli("rotate " + path + " --label 1,3 --alpha 0.3 --seed 9");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["pass"] == true);
  CHECK(r.report["fidelity"].get<double>() >= 1.0 - 1e-9);
  CHECK(r.report["final_code"]["n"] == 6);
  CHECK(!r.report["trace"].empty());
  CHECK(r.manifest["seed"] == 9);
  CHECK(r.manifest["seed_source"] == "flag");
}

TEST_CASE("rotate needs quarter angles on the tableau backend") {
  std::string path = write_code("lhz3_tab.json", lhz_layout(3));
  CliRun bad = run_cli("rotate " + path + " --label 1,3 --alpha 0.3 --backend tableau");
  CHECK(bad.exit_code == 4);
  CliRun good =
      run_cli("rotate " + path + " --label 1,3 --alpha 1.5707963267948966 --backend tableau");
  REQUIRE(good.exit_code == 0);
  CHECK(good.report["fidelity"].is_null());
  CHECK(good.report["pass"] == true);
}

TEST_CASE("rotate applies no gate at angle zero") {
  std::string path = write_code("lhz3_zero.json", lhz_layout(3));
  CliRun r = run_cli("rotate " + path + " --label 1,3 --alpha 0 --seed 2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["fidelity"].get<double>() == Catch::Approx(1.0).margin(1e-12));
  for (const auto& e : r.report["trace"]) CHECK(e["event"] != "gate");
}

TEST_CASE("inject passes the transversal sweep") {
  std::string path = write_blocks("rep3_inj.json", repetition_code(3), repetition_code(3));
  CliRun r = run_cli("inject " + path + " --control-label 1 --target 1 --mode exhaustive");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["mode"] == "exhaustive");
  CHECK(r.report["p"].is_null());
  CHECK(r.report["counterexample"].is_null());
}

TEST_CASE("inject pins the fan-out counterexample") {
  std::string path = write_blocks("lhz3_inj.json", lhz_layout(3), lhz_layout(3));
  CliRun r = run_cli("inject " + path +
                     " --control-label 1,2 --target 1 --single --mode exhaustive");
  REQUIRE(r.exit_code == 1);
  REQUIRE(r.report["counterexample"].is_object());
  CHECK(r.report["counterexample"]["block"] == 1);
}

TEST_CASE("inject repeats byte for byte under a fixed seed") {
  std::string path = write_blocks("rep3_mc.json", repetition_code(3), repetition_code(3));
  std::string args =
      "inject " + path + " --control-label 1 --target 1 --mode mc --p 0.01 --trials 5000 --seed 7";
  CliRun a = run_cli(args);
  CliRun b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.report["mode"] == "mc");
  CHECK(a.report["trials"] == 5000);
  CHECK(a.report["ci95"].size() == 2);
  CHECK(a.manifest["seed"] == 7);
  CHECK(a.manifest["seed_source"] == "flag");
}

TEST_CASE("inject rejects probabilities above one") {
  std::string path = write_blocks("rep3_badp.json", repetition_code(3), repetition_code(3));
  CliRun r = run_cli("inject " + path + " --control-label 1 --target 1 --mode mc --p 1.5");
  CHECK(r.exit_code == 2);
}

TEST_CASE("manifest file matches the stderr line") {
  std::string manifest_path = (work_dir() / "layout_manifest.json").string();
  CliRun r = run_cli("layout --k 2 --seed 123 --manifest " + manifest_path);
  REQUIRE(r.exit_code == 0);
  ordered_json from_file = parse_json_text(read_text_file(manifest_path));
  CHECK(from_file == r.manifest);
  CHECK(from_file["seed"] == 123);
  CHECK(from_file["seed_source"] == "flag");
}

TEST_CASE("top-level usage errors exit two and version exits zero") {
  CHECK(run_cli("bogus").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("rotate --nope").exit_code == 2);
  CliRun v = run_cli("--version");
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("parityq 0.1.0") != std::string::npos);
  CHECK(run_cli("--help").exit_code == 0);
}
