#include "cosy/fixpoint.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace cosy {

namespace {

struct TimedOut {};

struct Session {
  const SymbolicGame& g;
  Store& s;
  SolveReport& rep;
  Region core;
  double limit_ms;
  std::chrono::steady_clock::time_point start;

  Session(const SymbolicGame& game, SolveReport& r, double limit)
      : g(game),
        s(*game.store),
        rep(r),
        core(restrict_to_arena(game)),
        limit_ms(limit),
        start(std::chrono::steady_clock::now()) {}

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }

  // One row evaluation: everything under enf_pre, clipped to the core.
  Bdd row(Bdd arg) {
    if (limit_ms > 0 && elapsed_ms() > limit_ms) throw TimedOut{};
    Bdd r = core & enf_pre(g, s.prime(arg));
    rep.enfpre_calls++;
    rep.peak_nodes = std::max(rep.peak_nodes, (long)s.node_count());
    return r;
  }

  void finish(Region winning) {
    rep.winning = winning;
    rep.realizable = (g.init & !winning).is_false();
    rep.wall_ms = elapsed_ms();
  }

  void bail() {
    rep.timed_out = true;
    rep.realizable = false;
    rep.winning = s.lfalse();
    rep.wall_ms = elapsed_ms();
  }
};

void check_monotone(bool shrinking, const Bdd& prev, const Bdd& next) {
  bool ok = shrinking ? (next & !prev).is_false() : (prev & !next).is_false();
  if (!ok) throw std::logic_error("fixpoint iteration is not monotone");
}

// Vector system over colors 0..ncolors-1, one row per state. Terms with
// conj set combine their targets with AND (rejector-controlled moves).
struct VectorSystem {
  struct Term {
    Bdd pred;
    int color;
    bool conj;
    std::vector<int> targets;
  };
  std::vector<std::vector<Term>> rows;
  int ncolors = 1;
  int initial = 0;
};

void run_vector(Session& ses, const VectorSystem& sys) {
  Store& s = ses.s;
  size_t nrows = sys.rows.size();
  int nc = sys.ncolors;
  ses.rep.iterations.assign(nc, 0);
  std::vector<std::vector<Bdd>> x(nc, std::vector<Bdd>(nrows));

  auto eval_rows = [&] {
    std::vector<Bdd> v(nrows);
    for (size_t r = 0; r < nrows; r++) {
      Bdd arg = s.lfalse();
      for (const VectorSystem::Term& t : sys.rows[r]) {
        Bdd mix = t.conj ? s.ltrue() : s.lfalse();
        for (int q : t.targets)
          mix = t.conj ? (mix & x[t.color][q]) : (mix | x[t.color][q]);
        arg = arg | (t.pred & mix);
      }
      v[r] = ses.row(arg);
    }
    return v;
  };

  std::function<void(int)> fix = [&](int c) {
    bool even = c % 2 == 0;
    for (size_t r = 0; r < nrows; r++)
      x[c][r] = even ? ses.core : s.lfalse();
    for (;;) {
      ses.rep.iterations[c] += (long)nrows;
      std::vector<Bdd> v;
      if (c + 1 == nc) {
        v = eval_rows();
      } else {
        fix(c + 1);
        v = x[c + 1];
      }
      bool stable = true;
      for (size_t r = 0; r < nrows; r++) {
        check_monotone(even, x[c][r], v[r]);
        if (v[r] != x[c][r]) stable = false;
      }
      if (stable) break;
      x[c] = std::move(v);
    }
  };

  fix(0);
  ses.finish(x[0][sys.initial]);
}

}  // namespace

SolveReport solve_gr1(const SymbolicGame& g, const Gr1Spec& spec,
                      const SolveOptions& opt) {
  SolveReport rep;
  Session ses(g, rep, opt.timeout_ms);
  Store& s = ses.s;

  std::vector<Bdd> as = spec.assumptions, gs = spec.guarantees;
  if (as.empty()) as.push_back(s.ltrue());
  if (gs.empty()) gs.push_back(s.ltrue());

  rep.iterations.assign(3, 0);
  try {
    Bdd z = ses.core;
    for (;;) {
      rep.iterations[0]++;
      Bdd znew = ses.core;
      for (const Bdd& gj : gs) {
        Bdd y = s.lfalse();
        for (;;) {
          rep.iterations[1]++;
          Bdd ynew = s.lfalse();
          for (const Bdd& ai : as) {
            Bdd x = ses.core;
            for (;;) {
              rep.iterations[2]++;
              Bdd xnew = ses.row((gj & z) | y | ((!ai) & x));
              check_monotone(true, x, xnew);
              if (xnew == x) break;
              x = xnew;
            }
            ynew = ynew | x;
          }
          check_monotone(false, y, ynew);
          if (ynew == y) break;
          y = ynew;
        }
        znew = znew & y;
      }
      check_monotone(true, z, znew);
      if (znew == z) break;
      z = znew;
    }
    ses.finish(z);
  } catch (const TimedOut&) {
    ses.bail();
  }
  return rep;
}

SolveReport solve_parity_dpa(const SymbolicGame& g, const ParityAutomaton& dpa,
                             const SolveOptions& opt) {
  if (!dpa.deterministic || !dpa.complete)
    throw std::logic_error("parity engine needs a deterministic complete "
                           "automaton");
  SolveReport rep;
  Session ses(g, rep, opt.timeout_ms);

  VectorSystem sys;
  sys.ncolors = dpa.max_color() + 1;
  sys.initial = dpa.initial;
  sys.rows.resize(dpa.states);
  for (const PTrans& t : dpa.trans)
    sys.rows[t.from].push_back({t.pred, t.color, false, {t.to}});

  try {
    run_vector(ses, sys);
  } catch (const TimedOut&) {
    ses.bail();
  }
  return rep;
}

FoldedSystem fold_gr1_like(const CocoaProduct& p) {
  FoldedSystem f;
  int n = (int)p.tuples.size();
  if (n == 0 || p.max_color() != 2) return f;

  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<const ProductMove*> waitm(n), stepm(n), goalm(n);
  for (int st = 0; st < n; st++) {
    if (p.moves[st].size() != 3) return f;
    for (const ProductMove& m : p.moves[st]) {
      if (m.color == 2 && m.rejector_controls &&
          m.choices == std::vector<int>{st}) {
        waitm[st] = &m;
      } else if (m.color == 1 && !m.rejector_controls) {
        stepm[st] = &m;
      } else if (m.color == 0 && m.rejector_controls && m.choices == all) {
        goalm[st] = &m;
      } else {
        return f;
      }
    }
    if (!waitm[st] || !stepm[st] || !goalm[st]) return f;
  }

  // Columns are the acceptor-move choice sets; they must partition the
  // states and share the color-0 predicate.
  std::map<std::vector<int>, int> colid;
  f.column.assign(n, -1);
  for (int st = 0; st < n; st++) {
    auto [it, fresh] =
        colid.try_emplace(stepm[st]->choices, (int)colid.size());
    f.column[st] = it->second;
    if (fresh) f.goal.push_back(goalm[st]->pred);
    else if (!(f.goal[it->second] == goalm[st]->pred)) return f;
  }
  for (const auto& [set, c] : colid)
    for (int member : set)
      if (member < 0 || member >= n || f.column[member] != c) return f;

  for (int st = 0; st < n; st++) {
    Bdd w = waitm[st]->pred, a = stepm[st]->pred, gl = goalm[st]->pred;
    if (!(w & a).is_false() || !(w & gl).is_false() || !(a & gl).is_false())
      return f;
    if (!(w | a | gl).is_true()) return f;
    f.wait.push_back(w);
    f.step.push_back(a);
  }
  f.folded = true;
  return f;
}

SolveReport solve_cocoa(const SymbolicGame& g, const CocoaProduct& product,
                        const SolveOptions& opt) {
  SolveReport rep;
  Session ses(g, rep, opt.timeout_ms);
  Store& s = ses.s;

  FoldedSystem f;
  if (opt.fold) f = fold_gr1_like(product);

  try {
    if (!f.folded) {
      VectorSystem sys;
      sys.ncolors = product.max_color() + 1;
      sys.initial = product.initial;
      sys.rows.resize(product.tuples.size());
      for (size_t st = 0; st < product.tuples.size(); st++)
        for (const ProductMove& m : product.moves[st])
          sys.rows[st].push_back(
              {m.pred, m.color, m.rejector_controls, m.choices});
      run_vector(ses, sys);
      return rep;
    }

    rep.folded = true;
    rep.iterations.assign(3, 0);
    int ncols = (int)f.goal.size();
    int n = (int)product.tuples.size();
    Bdd z = ses.core;
    for (;;) {
      rep.iterations[0]++;
      Bdd znew = ses.core;
      for (int j = 0; j < ncols; j++) {
        Bdd y = s.lfalse();
        for (;;) {
          rep.iterations[1]++;
          Bdd ynew = s.lfalse();
          for (int st = 0; st < n; st++) {
            if (f.column[st] != j) continue;
            Bdd x = ses.core;
            for (;;) {
              rep.iterations[2]++;
              Bdd xnew = ses.row((f.goal[j] & z) | (f.step[st] & y) |
                                 (f.wait[st] & x));
              check_monotone(true, x, xnew);
              if (xnew == x) break;
              x = xnew;
            }
            ynew = ynew | x;
          }
          check_monotone(false, y, ynew);
          if (ynew == y) break;
          y = ynew;
        }
        znew = znew & y;
      }
      check_monotone(true, z, znew);
      if (znew == z) break;
      z = znew;
    }
    ses.finish(z);
  } catch (const TimedOut&) {
    ses.bail();
  }
  return rep;
}

std::string report_json(const SolveReport& r) {
  nlohmann::json j;
  j["realizable"] = r.realizable;
  j["iterations"] = r.iterations;
  j["enfpre_calls"] = r.enfpre_calls;
  j["peak_nodes"] = r.peak_nodes;
  j["wall_ms"] = r.wall_ms;
  j["timed_out"] = r.timed_out;
  j["folded"] = r.folded;
  return j.dump();
}

const char* const kReportCsvHeader =
    "realizable,iterations,enfpre_calls,peak_nodes,wall_ms,timed_out,folded";

std::string report_csv(const SolveReport& r) {
  long total = std::accumulate(r.iterations.begin(), r.iterations.end(), 0L);
  char buf[160];
  snprintf(buf, sizeof buf, "%d,%ld,%ld,%ld,%.3f,%d,%d", (int)r.realizable,
           total, r.enfpre_calls, r.peak_nodes, r.wall_ms, (int)r.timed_out,
           (int)r.folded);
  return buf;
}

}  // namespace cosy
