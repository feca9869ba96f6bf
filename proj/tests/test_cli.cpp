#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Drives the installed binary the way a user would: ctest runs from the
// build directory, where cocoa-synth sits next to the test executables.

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

RunResult run_cli(const std::string& args) {
  std::string cmd = "./cocoa-synth " + args + " > cli_out.txt 2> cli_err.txt";
  int st = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = slurp("cli_out.txt");
  r.err = slurp("cli_err.txt");
  return r;
}

bool has(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') n++;
  return n;
}

const char* kFigGame =
    "[INPUT] u\n"
    "[OUTPUT] x y\n"
    "[LIVENESS] (G F u) -> ((G F x) & (G F y))\n";

// Deterministic parity automaton for the alternation objective over the
// same propositions as kFigGame.
const char* kAlternationHoa = R"(HOA: v1
States: 2
Start: 0
AP: 3 "u" "x" "y"
acc-name: parity min even 3
Acceptance: 3 Inf(0) | (Fin(1) & (Inf(2)))
--BODY--
State: 0
[!1 & !0] 0 {2}
[!1 & 0] 0 {1}
[1] 1 {0}
State: 1
[!2 & !0] 1 {2}
[!2 & 0] 1 {1}
[2] 0 {0}
--END--
)";

}  // namespace

TEST_CASE("solve decides a game and reports through each engine") {
  spit("cli_fig.game", kFigGame);

  RunResult r = run_cli("solve cli_fig.game");
  CHECK(r.code == 0);
  CHECK(has(r.out, "\"engine\": \"gr1\""));
  CHECK(has(r.out, "\"realizable\": true"));

  r = run_cli("solve cli_fig.game --engine parity --format text");
  CHECK(r.code == 0);
  CHECK(has(r.out, "engine: parity"));
  CHECK(has(r.out, "realizable: yes"));

  r = run_cli("solve cli_fig.game --engine cocoa --format csv");
  CHECK(r.code == 0);
  CHECK(has(r.out,
            "engine,translate_ms,realizable,iterations,enfpre_calls,"
            "peak_nodes,wall_ms,timed_out,folded\n"));
  CHECK(has(r.out, "\ncocoa,"));

  r = run_cli("solve cli_fig.game --reorder");
  CHECK(r.code == 0);
}

TEST_CASE("solve flags unrealizable games through the exit code") {
  // Raising x needs u now and next, so the environment can pin x down.
  spit("cli_unreal.game",
       "[INPUT] u\n"
       "[OUTPUT] x\n"
       "[TRANS] x' -> (u' & u)\n"
       "[LIVENESS] G F x\n");
  CHECK(run_cli("solve cli_unreal.game").code == 1);
  CHECK(run_cli("solve cli_unreal.game --engine parity").code == 1);
  CHECK(run_cli("solve cli_unreal.game --engine cocoa").code == 1);
}

TEST_CASE("engine and fragment errors exit with code 2") {
  spit("cli_or.game",
       "[INPUT] u\n"
       "[OUTPUT] x\n"
       "[LIVENESS] (G F u) | (G F x)\n");
  RunResult r = run_cli("solve cli_or.game --engine gr1");
  CHECK(r.code == 2);
  CHECK(has(r.err, "objective not in GR(1) shape"));
  CHECK(run_cli("solve cli_or.game").code == 0);

  spit("cli_until.game",
       "[INPUT] u\n"
       "[OUTPUT] x\n"
       "[LIVENESS] x U u\n");
  r = run_cli("solve cli_until.game");
  CHECK(r.code == 2);
  CHECK(has(r.err, "outside the supported fragment"));

  r = run_cli("solve cli_no_such_file.game");
  CHECK(r.code == 2);
  CHECK(has(r.err, "cannot read"));

  spit("cli_fig.game", kFigGame);
  CHECK(run_cli("solve cli_fig.game --engine bogus").code == 2);
  CHECK(run_cli("").code == 2);

  r = run_cli("--help");
  CHECK(r.code == 0);
  CHECK(has(r.out, "symbolic realizability"));
}

TEST_CASE("translate writes the chain and reports sizes") {
  fs::remove_all("cli_tr");
  fs::remove_all("cli_tr2");
  spit("cli_formula.txt", "(G F u) -> ((G F x) & (G F y))\n");

  RunResult r = run_cli("translate cli_formula.txt --out cli_tr");
  CHECK(r.code == 0);
  CHECK(has(r.out, "chain: 2 levels, sizes 2 2"));
  CHECK(has(r.out, "product: 2 states"));
  CHECK(fs::exists("cli_tr/level1.hoa"));
  CHECK(fs::exists("cli_tr/level2.hoa"));
  CHECK(fs::exists("cli_tr/product.txt"));
  CHECK(has(slurp("cli_tr/level1.hoa"), "HOA:"));

  spit("cli_dpa.hoa", kAlternationHoa);
  r = run_cli("translate --hoa cli_dpa.hoa --out cli_tr2");
  CHECK(r.code == 0);
  CHECK(has(r.out, "chain: 2 levels"));
  CHECK(has(r.out, "product: 2 states"));

  r = run_cli("translate cli_formula.txt --hoa cli_dpa.hoa");
  CHECK(r.code == 2);
  CHECK(has(r.err, "either a formula file or --hoa"));
  CHECK(run_cli("translate").code == 2);
}

TEST_CASE("solve accepts an automaton objective") {
  spit("cli_fig.game", kFigGame);
  spit("cli_dpa.hoa", kAlternationHoa);

  RunResult r = run_cli("solve cli_fig.game --hoa cli_dpa.hoa");
  CHECK(r.code == 0);
  CHECK(has(r.out, "\"engine\": \"cocoa\""));
  CHECK(has(r.out, "\"realizable\": true"));

  r = run_cli("solve cli_fig.game --hoa cli_dpa.hoa --engine parity");
  CHECK(r.code == 0);

  r = run_cli("solve cli_fig.game --hoa cli_dpa.hoa --engine gr1");
  CHECK(r.code == 2);
  CHECK(has(r.err, "objective not in GR(1) shape"));
}

TEST_CASE("bench produces the table, emitted files, and cactus data") {
  fs::remove_all("cli_emit");
  RunResult r = run_cli(
      "bench --family lift --min 2 --max 3 --variant gr1 "
      "--out cli_bench.csv --cactus cli_cactus.csv --emit cli_emit");
  CHECK(r.code == 0);

  std::string csv = slurp("cli_bench.csv");
  CHECK(has(csv,
            "name,family,variant,props,engine,translate_ms,realizable,"
            "iterations,enfpre_calls,peak_nodes,wall_ms,timed_out,folded\n"));
  CHECK(has(csv, "lift_2_gr1,lift,gr1,3,gr1,"));
  CHECK(has(csv, "lift_3_gr1,lift,gr1,4,parity,"));
  CHECK(has(csv, ",cocoa,"));
  CHECK(count_lines(csv) == 7);

  CHECK(has(slurp("cli_emit/lift_2_gr1.game"), "[LIVENESS]"));
  CHECK(has(slurp("cli_emit/manifest.json"), "\"family\": \"lift\""));

  std::string cactus = slurp("cli_cactus.csv");
  CHECK(has(cactus, "engine,solved,wall_ms\n"));
  CHECK(has(cactus, "gr1,2,"));
  CHECK(has(cactus, "parity,2,"));
  CHECK(has(cactus, "cocoa,2,"));
}

TEST_CASE("verify cross-checks engines and catches disagreement") {
  RunResult r = run_cli("verify --count 5 --seed 9 --props 4");
  CHECK(r.code == 0);
  CHECK(has(r.out, "verified 5 instances (seed 9"));

  fs::remove("verify_failure.game");
  r = run_cli("verify --count 3 --seed 11 --mutate");
  CHECK(r.code == 3);
  CHECK(has(r.err, "disagreement on instance 0 (seed 11)"));
  CHECK(has(r.err, "reproducer written"));
  CHECK(fs::exists("verify_failure.game"));
  fs::remove("verify_failure.game");

  r = run_cli("verify --props 1");
  CHECK(r.code == 2);
  CHECK(has(r.err, "--props must be between 2 and 12"));
}

TEST_CASE("solve honors the timeout") {
  spit("cli_fig.game", kFigGame);
  RunResult r = run_cli("solve cli_fig.game --engine parity --timeout 1e-7");
  CHECK(r.code == 4);
  CHECK(has(r.out, "\"timed_out\": true"));
}
