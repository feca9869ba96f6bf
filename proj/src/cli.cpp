#include "cosy/cli.hpp"

#include <CLI11.hpp>
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "cosy/benchgen.hpp"
#include "cosy/cocoa.hpp"
#include "cosy/fixpoint.hpp"
#include "cosy/game.hpp"
#include "cosy/hoa.hpp"
#include "cosy/ltl.hpp"
#include "cosy/oracle.hpp"

namespace cosy {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr int kCliMaxAtoms = 16;
constexpr size_t kOracleCap = 20000;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

bool is_word_char(char c) {
  return std::isalnum((unsigned char)c) || c == '_';
}

// Declaration order of the propositions in a bare formula file.
std::vector<std::string> scan_props(const std::string& text) {
  static const std::set<std::string> keep{"G", "F", "X", "U", "true", "false"};
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (size_t i = 0; i < text.size();) {
    if (!std::isalpha((unsigned char)text[i]) && text[i] != '_') {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    std::string word = text.substr(i, j - i);
    i = j;
    if (!keep.count(word) && seen.insert(word).second) out.push_back(word);
  }
  return out;
}

std::vector<std::string> scan_hoa_props(const std::string& text) {
  std::vector<std::string> out;
  size_t pos = text.find("AP:");
  if (pos == std::string::npos) return out;
  size_t end = text.find('\n', pos);
  if (end == std::string::npos) end = text.size();
  for (size_t i = pos; i < end;) {
    if (text[i] != '"') {
      ++i;
      continue;
    }
    size_t close = text.find('"', i + 1);
    if (close == std::string::npos || close > end) break;
    out.push_back(text.substr(i + 1, close - i - 1));
    i = close + 1;
  }
  return out;
}

std::unique_ptr<Store> store_over(const std::vector<std::string>& names) {
  std::vector<PropInfo> props;
  for (const std::string& n : names) props.push_back({n, PropKind::Output});
  return std::make_unique<Store>(props);
}

// ---------------------------------------------------------------- solve

struct SolveCfg {
  std::string game_file;
  std::string hoa;
  std::string engine = "auto";
  std::string format = "json";
  bool no_fold = false;
  bool reorder = false;
  double timeout = 0;
};

void print_report(const std::string& engine, double translate_ms,
                  const SolveReport& r, const std::string& format) {
  if (format == "json") {
    nlohmann::json j = nlohmann::json::parse(report_json(r));
    j["engine"] = engine;
    j["translate_ms"] = translate_ms;
    std::cout << j.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "engine,translate_ms," << kReportCsvHeader << "\n"
              << engine << "," << translate_ms << "," << report_csv(r)
              << "\n";
  } else {
    std::cout << "engine: " << engine << "\n"
              << "realizable: " << (r.realizable ? "yes" : "no") << "\n";
    std::cout << "iterations:";
    for (long i : r.iterations) std::cout << " " << i;
    std::cout << "\n"
              << "enfpre calls: " << r.enfpre_calls << "\n"
              << "peak nodes: " << r.peak_nodes << "\n"
              << "translate ms: " << translate_ms << "\n"
              << "solve ms: " << r.wall_ms << "\n"
              << "folded: " << (r.folded ? "yes" : "no") << "\n"
              << "timed out: " << (r.timed_out ? "yes" : "no") << "\n";
  }
}

int run_solve(const SolveCfg& c) {
  SymbolicGame g = parse_game(slurp(c.game_file));
  Clock::time_point t0 = Clock::now();
  Classified cls;
  std::optional<ParityAutomaton> dpa;
  if (!c.hoa.empty())
    dpa = import_hoa(slurp(c.hoa), *g.store);
  else
    cls = classify(parse_ltl(g.objective_text, *g.store), *g.store);

  std::string engine = c.engine;
  if (engine == "auto")
    engine = !dpa && cls.kind == ObjKind::Gr1Shape ? "gr1" : "cocoa";
  if (engine == "gr1" && (dpa || !cls.gr1))
    throw std::runtime_error("objective not in GR(1) shape");
  if (engine != "gr1" && !dpa) {
    if (!cls.combo)
      throw std::runtime_error(
          "objective outside the supported fragment; pass --hoa with an "
          "automaton for it");
    dpa = gfcombo_to_dpa(*cls.combo, *g.store, kCliMaxAtoms);
  }
  CocoaProduct prod;
  if (engine == "cocoa")
    prod = chain_product(dpa_to_chain(*dpa), ProductKind::Optimized);
  double translate_ms = ms_since(t0);

  SolveOptions opt;
  opt.timeout_ms = c.timeout * 1000.0;
  opt.fold = !c.no_fold;
  SolveReport r;
  if (engine == "gr1")
    r = solve_gr1(g, *cls.gr1, opt);
  else if (engine == "parity")
    r = solve_parity_dpa(g, *dpa, opt);
  else
    r = solve_cocoa(g, prod, opt);

  print_report(engine, translate_ms, r, c.format);
  if (r.timed_out) return 4;
  return r.realizable ? 0 : 1;
}

// ------------------------------------------------------------- translate

struct TranslateCfg {
  std::string formula_file;
  std::string hoa;
  std::string out_dir = ".";
};

int run_translate(const TranslateCfg& c) {
  if (c.formula_file.empty() == c.hoa.empty())
    throw std::runtime_error("pass either a formula file or --hoa");
  std::unique_ptr<Store> store;
  ParityAutomaton dpa;
  if (!c.hoa.empty()) {
    std::string text = slurp(c.hoa);
    store = store_over(scan_hoa_props(text));
    dpa = import_hoa(text, *store);
  } else {
    std::string text = slurp(c.formula_file);
    store = store_over(scan_props(text));
    Classified cls = classify(parse_ltl(text, *store), *store);
    if (!cls.combo)
      throw std::runtime_error(
          "objective outside the supported fragment; pass --hoa instead");
    dpa = gfcombo_to_dpa(*cls.combo, *store, kCliMaxAtoms);
  }
  ParityAutomaton reduced = reduce_colors(dpa);
  CocoaChain chain = dpa_to_chain(dpa);
  CocoaProduct prod = chain_product(chain, ProductKind::Optimized);

  fs::create_directories(c.out_dir);
  for (size_t i = 0; i < chain.levels.size(); ++i)
    spit(fs::path(c.out_dir) / ("level" + std::to_string(i + 1) + ".hoa"),
         export_hoa(chain.levels[i]));
  spit(fs::path(c.out_dir) / "product.txt", describe(prod));

  std::cout << "automaton: " << reduced.states << " states, "
            << reduced.max_color() + 1 << " colors\n";
  std::cout << "chain: " << chain.levels.size() << " levels, sizes";
  for (const CoBuchiAutomaton& l : chain.levels) std::cout << " " << l.states;
  std::cout << "\n";
  std::cout << "product: " << prod.tuples.size() << " states, colors 0.."
            << prod.max_color() << "\n";
  return 0;
}

// ----------------------------------------------------------------- bench

struct BenchCfg {
  std::vector<std::string> families{"all"};
  int min = -1;
  int max = -1;
  std::string variant = "both";
  std::string out;
  std::string cactus;
  std::string emit;
  double timeout = 0;
  bool no_fold = false;
};

struct BenchRow {
  std::string engine;
  double translate_ms = 0;
  SolveReport rep;
};

int worker_count() {
  const char* env = std::getenv("COCOA_SYNTH_WORKERS");
  if (!env) return 1;
  int n = std::atoi(env);
  return std::clamp(n, 1, 64);
}

std::vector<BenchRow> bench_instance(const BenchmarkInstance& b,
                                     const SolveOptions& opt) {
  std::vector<BenchRow> rows;
  SymbolicGame g = parse_game(b.text);
  Clock::time_point t0 = Clock::now();
  Classified cls = classify(parse_ltl(g.objective_text, *g.store), *g.store);
  double cls_ms = ms_since(t0);
  if (cls.gr1) {
    BenchRow r{"gr1", cls_ms, solve_gr1(g, *cls.gr1, opt)};
    rows.push_back(std::move(r));
  }
  ParityAutomaton dpa = gfcombo_to_dpa(*cls.combo, *g.store, kCliMaxAtoms);
  double dpa_ms = ms_since(t0);
  rows.push_back({"parity", dpa_ms, solve_parity_dpa(g, dpa, opt)});
  CocoaProduct prod = chain_product(dpa_to_chain(dpa), ProductKind::Optimized);
  double prod_ms = ms_since(t0);
  rows.push_back({"cocoa", prod_ms, solve_cocoa(g, prod, opt)});
  return rows;
}

int run_bench(const BenchCfg& c) {
  std::set<std::string> fam(c.families.begin(), c.families.end());
  bool all = fam.count("all") > 0;
  std::vector<BenchmarkInstance> set;
  auto want = [&](Variant v) {
    return c.variant == "both" ||
           (c.variant == "gr1") == (v == Variant::Gr1);
  };
  auto add = [&](BenchmarkInstance b) {
    if (want(b.variant)) set.push_back(std::move(b));
  };
  if (all || fam.count("lift")) {
    int lo = c.min > 0 ? c.min : 2, hi = c.max > 0 ? c.max : 8;
    for (int f = lo; f <= hi; ++f) {
      add(gen_lift(f, Variant::Gr1));
      add(gen_lift(f, Variant::Ltl));
    }
  }
  if (all || fam.count("amba")) {
    int lo = c.min > 0 ? c.min : 1, hi = c.max > 0 ? c.max : 4;
    for (int cl = lo; cl <= hi; ++cl) {
      add(gen_amba(cl, Variant::Gr1));
      add(gen_amba(cl, Variant::Ltl));
    }
  }
  if (all || fam.count("robot")) {
    for (const RobotMap& m : shipped_robot_maps()) {
      add(gen_robot(m, Variant::Gr1));
      add(gen_robot(m, Variant::Ltl));
    }
  }

  if (!c.emit.empty()) {
    fs::create_directories(c.emit);
    for (const BenchmarkInstance& b : set)
      spit(fs::path(c.emit) / (b.name + ".game"), b.text);
    spit(fs::path(c.emit) / "manifest.json", manifest_json(set));
    std::cerr << "wrote " << set.size() << " instances to " << c.emit << "\n";
  }

  SolveOptions opt;
  opt.timeout_ms = c.timeout * 1000.0;
  opt.fold = !c.no_fold;

  std::vector<std::vector<BenchRow>> rows(set.size());
  std::atomic<size_t> next{0};
  int workers = std::min(worker_count(), (int)std::max<size_t>(set.size(), 1));
  auto work = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= set.size()) return;
      rows[i] = bench_instance(set[i], opt);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  std::ostringstream csv;
  csv << "name,family,variant,props,engine,translate_ms," << kReportCsvHeader
      << "\n";
  for (size_t i = 0; i < set.size(); ++i) {
    const BenchmarkInstance& b = set[i];
    for (const BenchRow& r : rows[i])
      csv << b.name << "," << b.family << ","
          << (b.variant == Variant::Ltl ? "ltl" : "gr1") << "," << b.props
          << "," << r.engine << "," << r.translate_ms << ","
          << report_csv(r.rep) << "\n";
  }
  if (c.out.empty())
    std::cout << csv.str();
  else
    spit(c.out, csv.str());

  if (!c.cactus.empty()) {
    // per engine: instances sorted by solve time, for solved-vs-budget plots
    std::ostringstream data;
    data << "engine,solved,wall_ms\n";
    for (const char* engine : {"gr1", "parity", "cocoa"}) {
      std::vector<double> times;
      for (const auto& inst : rows)
        for (const BenchRow& r : inst)
          if (r.engine == engine && !r.rep.timed_out)
            times.push_back(r.rep.wall_ms);
      std::sort(times.begin(), times.end());
      for (size_t k = 0; k < times.size(); ++k)
        data << engine << "," << k + 1 << "," << times[k] << "\n";
    }
    spit(c.cactus, data.str());
  }
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyCfg {
  int count = 100;
  unsigned long long seed = 1;
  int props = 5;
  bool mutate = false;
};

int run_verify(const VerifyCfg& c) {
  if (c.props < 2 || c.props > 12)
    throw std::runtime_error("--props must be between 2 and 12");
  std::mt19937_64 rng(c.seed);
  int oracle_checked = 0, oracle_skipped = 0;
  for (int i = 0; i < c.count; ++i) {
    std::string text = fuzz_game_text(rng, c.props);
    SymbolicGame g = parse_game(text);
    Classified cls =
        classify(parse_ltl(g.objective_text, *g.store), *g.store);
    ParityAutomaton dpa = gfcombo_to_dpa(*cls.combo, *g.store, kCliMaxAtoms);
    SolveReport rp = solve_parity_dpa(g, dpa);
    CocoaProduct prod =
        chain_product(dpa_to_chain(dpa), ProductKind::Optimized);
    SolveReport rc = solve_cocoa(g, prod);
    if (c.mutate && i == 0) rc.realizable = !rc.realizable;

    std::string why;
    if (rc.realizable != rp.realizable ||
        (!c.mutate && !(rc.winning == rp.winning)))
      why = "parity and cocoa engines disagree";
    if (why.empty() && cls.gr1) {
      SolveReport rg = solve_gr1(g, *cls.gr1);
      if (rg.realizable != rp.realizable || !(rg.winning == rp.winning))
        why = "gr1 and parity engines disagree";
    }
    if (why.empty()) {
      try {
        ExplicitGame eg = expand(g, dpa, kOracleCap);
        ++oracle_checked;
        if (zielonka_solve(eg).initial_won != rp.realizable)
          why = "explicit oracle disagrees with the symbolic engines";
      } catch (const std::runtime_error&) {
        ++oracle_skipped;  // product too large for the oracle bound
      }
    }
    if (!why.empty()) {
      std::string file = "verify_failure.game";
      spit(file, text);
      std::cerr << "disagreement on instance " << i << " (seed " << c.seed
                << "): " << why << "\nreproducer written to " << file << "\n";
      return 3;
    }
  }
  std::cout << "verified " << c.count << " instances (seed " << c.seed << ", "
            << oracle_checked << " oracle-checked, " << oracle_skipped
            << " beyond oracle bounds)\n";
  return 0;
}

}  // namespace

std::string fuzz_game_text(std::mt19937_64& rng, int max_props) {
  auto pick = [&](int n) { return (int)(rng() % (uint64_t)n); };
  int p = std::max(2, 2 + pick(std::max(1, max_props - 1)));
  int nin = 1 + pick(p - 1);
  auto name = [](int i) { return "v" + std::to_string(i); };

  auto minterm = [&](int lo, int hi, bool primed) {
    std::string out = "(";
    for (int i = lo; i < hi; ++i) {
      if (i > lo) out += " & ";
      if (!(rng() & 1)) out += "!";
      out += name(i);
      if (primed) out += "'";
    }
    return out + ")";
  };
  auto pattern = [&](int value, int lo, int hi, bool primed) {
    std::string out = "(";
    for (int i = lo; i < hi; ++i) {
      if (i > lo) out += " & ";
      if (!((value >> (i - lo)) & 1)) out += "!";
      out += name(i);
      if (primed) out += "'";
    }
    return out + ")";
  };
  auto atom = [&]() -> std::string {
    int a = pick(p), b = pick(p);
    switch (pick(4)) {
      case 0: return name(a);
      case 1: return "!" + name(a);
      case 2: return "(" + name(a) + " | " + name(b) + ")";
      default: return "(" + name(a) + " & !" + name(b) + ")";
    }
  };

  std::string t = "[INPUT]\n";
  for (int i = 0; i < nin; ++i) t += name(i) + "\n";
  t += "[OUTPUT]\n";
  for (int i = nin; i < p; ++i) t += name(i) + "\n";
  t += "[INIT]\n" + minterm(0, p, false) + "\n";

  t += "[TRANS]\n";
  int nout = p - nin;
  int flavor = pick(3);
  if (flavor == 2 && nout > 4) flavor = 1;
  if (flavor == 0) {
    t += "true\n";
  } else if (flavor == 1) {
    std::vector<std::string> pairs;
    int k = 4 + pick(5);
    for (int j = 0; j < k; ++j)
      pairs.push_back("(" + minterm(0, p, false) + " & " +
                      minterm(nin, p, true) + ")");
    std::string line = pairs[0];
    for (size_t j = 1; j < pairs.size(); ++j) line += " | " + pairs[j];
    t += line + "\n";
  } else {
    for (int m = 0; m < (1 << nout); ++m) {
      std::string moves = pattern(pick(1 << nout), nin, p, true);
      if (rng() & 1) moves += " | " + pattern(pick(1 << nout), nin, p, true);
      t += pattern(m, nin, p, false) + " -> (" + moves + ")\n";
    }
  }

  t += "[LIVENESS]\n";
  if (rng() & 1) {
    int m = 1 + pick(2), n = 1 + pick(2);
    std::vector<std::string> left, right;
    for (int j = 0; j < m; ++j) left.push_back("(G F " + atom() + ")");
    for (int j = 0; j < n; ++j) right.push_back("(G F " + atom() + ")");
    std::string l = left[0], r = right[0];
    for (size_t j = 1; j < left.size(); ++j) l += " & " + left[j];
    for (size_t j = 1; j < right.size(); ++j) r += " & " + right[j];
    t += "(" + l + ") -> (" + r + ")\n";
  } else {
    static const char* ops[3] = {" & ", " | ", " -> "};
    int leaves = 2 + pick(2);
    std::string f = (rng() & 1 ? "(G F " : "(F G ") + atom() + ")";
    for (int j = 1; j < leaves; ++j) {
      std::string leaf = (rng() & 1 ? "(G F " : "(F G ") + atom() + ")";
      f = "(" + f + ops[pick(3)] + leaf + ")";
    }
    t += f + "\n";
  }
  return t;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"symbolic realizability for games with omega-regular "
               "objectives"};
  app.require_subcommand(1);

  SolveCfg sc;
  CLI::App* solve = app.add_subcommand("solve", "decide one game file");
  solve->add_option("game", sc.game_file, "game file")->required();
  solve->add_option("--engine", sc.engine, "gr1, parity, cocoa, or auto")
      ->check(CLI::IsMember({"auto", "gr1", "parity", "cocoa"}));
  solve->add_option("--hoa", sc.hoa,
                    "parity automaton file overriding the liveness formula");
  solve->add_flag("--no-fold", sc.no_fold, "disable product folding");
  solve->add_flag("--reorder", sc.reorder,
                  "accepted for compatibility; the interleaved variable "
                  "order is always used");
  solve->add_option("--timeout", sc.timeout, "seconds per solve");
  solve->add_option("--format", sc.format, "json, csv, or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  TranslateCfg tc;
  CLI::App* translate = app.add_subcommand(
      "translate", "dump the chain and product for a formula");
  translate->add_option("formula", tc.formula_file,
                        "file holding one liveness formula");
  translate->add_option("--hoa", tc.hoa, "parity automaton file instead");
  translate->add_option("--out", tc.out_dir, "output directory");

  BenchCfg bc;
  CLI::App* bench =
      app.add_subcommand("bench", "run the benchmark families");
  bench->add_option("--family", bc.families, "lift, amba, robot, or all");
  bench->add_option("--min", bc.min, "smallest parameter value");
  bench->add_option("--max", bc.max, "largest parameter value");
  bench->add_option("--variant", bc.variant, "gr1, ltl, or both")
      ->check(CLI::IsMember({"gr1", "ltl", "both"}));
  bench->add_option("--out", bc.out, "CSV output file (default stdout)");
  bench->add_option("--cactus", bc.cactus, "cactus-plot data file");
  bench->add_option("--emit", bc.emit, "write game files and manifest here");
  bench->add_option("--timeout", bc.timeout, "seconds per engine run");
  bench->add_flag("--no-fold", bc.no_fold, "disable product folding");

  VerifyCfg vc;
  CLI::App* verify = app.add_subcommand(
      "verify", "cross-check the engines on random instances");
  verify->add_option("--count", vc.count, "number of instances");
  verify->add_option("--seed", vc.seed, "generator seed");
  verify->add_option("--props", vc.props, "proposition bound");
  verify->add_flag("--mutate", vc.mutate,
                   "flip one verdict to exercise the detector");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return run_solve(sc);
    if (*translate) return run_translate(tc);
    if (*bench) return run_bench(bc);
    return run_verify(vc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cosy
