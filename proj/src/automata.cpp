#include "cosy/automata.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <climits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace cosy {

int ParityAutomaton::max_color() const {
  int m = 0;
  for (const auto& t : trans) m = std::max(m, t.color);
  return m;
}

std::vector<Bdd> letter_cells(Store& store, const std::vector<Bdd>& preds) {
  std::vector<Bdd> cells{store.ltrue()};
  for (Bdd p : preds) {
    if (p.is_true() || p.is_false()) continue;
    std::vector<Bdd> split;
    split.reserve(cells.size() * 2);
    for (Bdd c : cells) {
      Bdd in = c & p, out = c & (!p);
      if (!in.is_false()) split.push_back(in);
      if (!out.is_false()) split.push_back(out);
    }
    if (split.size() > 65536)
      throw std::runtime_error("letter cell basis too large");
    cells = std::move(split);
  }
  return cells;
}

namespace {

// Strongly connected components of the graph spanned by the given arcs;
// every node 0..n-1 gets a component id.
std::vector<int> scc_partition_impl(int n, const std::vector<std::pair<int, int>>& arcs) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : arcs) adj[u].push_back(v);
  std::vector<int> comp(n, -1), index(n, -1), low(n, 0), stk;
  std::vector<bool> on(n, false);
  int next_index = 0, count = 0;
  struct Frame {
    int v;
    size_t i;
  };
  for (int s = 0; s < n; s++) {
    if (index[s] != -1) continue;
    std::vector<Frame> call{{s, 0}};
    index[s] = low[s] = next_index++;
    stk.push_back(s);
    on[s] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.i < adj[f.v].size()) {
        int w = adj[f.v][f.i++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stk.push_back(w);
          on[w] = true;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          int w;
          do {
            w = stk.back();
            stk.pop_back();
            on[w] = false;
            comp[w] = count;
          } while (w != f.v);
          count++;
        }
        int v = f.v;
        call.pop_back();
        if (!call.empty())
          low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
  return comp;
}

// Recoloring pass: inside each component the minimal color decides the
// parity; edges carrying it get the smallest admissible new color and the
// rest are handled one layer deeper with that color as the floor.
void reduce_rec(const ParityAutomaton& a, const std::vector<int>& edges,
                int out, std::vector<int>& nc) {
  std::vector<std::pair<int, int>> arcs;
  arcs.reserve(edges.size());
  for (int e : edges) arcs.emplace_back(a.trans[e].from, a.trans[e].to);
  std::vector<int> comp = scc_partition_impl(a.states, arcs);

  std::map<int, std::vector<int>> internal;
  for (int e : edges)
    if (comp[a.trans[e].from] == comp[a.trans[e].to])
      internal[comp[a.trans[e].from]].push_back(e);

  for (auto& [c, es] : internal) {
    int mu = INT_MAX;
    for (int e : es) mu = std::min(mu, a.trans[e].color);
    int o = ((out ^ mu) & 1) ? out + 1 : out;
    std::vector<int> rest;
    for (int e : es) {
      if (a.trans[e].color == mu)
        nc[e] = o;
      else
        rest.push_back(e);
    }
    if (!rest.empty()) reduce_rec(a, rest, o, nc);
  }
}

}  // namespace

std::vector<int> scc_partition(int n,
                               const std::vector<std::pair<int, int>>& arcs) {
  return scc_partition_impl(n, arcs);
}

ParityAutomaton reduce_colors(const ParityAutomaton& a) {
  std::vector<int> all(a.trans.size());
  for (size_t i = 0; i < all.size(); i++) all[i] = static_cast<int>(i);
  std::vector<int> nc(a.trans.size(), -1);
  reduce_rec(a, all, 0, nc);
  // transitions on no cycle are seen finitely often; any color works
  int maxc = 0;
  for (int c : nc) maxc = std::max(maxc, c);
  ParityAutomaton r = a;
  for (size_t i = 0; i < nc.size(); i++)
    r.trans[i].color = nc[i] < 0 ? maxc : nc[i];
  return r;
}

CoBuchiAutomaton ncw_determinize(const CoBuchiAutomaton& a) {
  if (a.deterministic) return a;
  if (a.states > 63)
    throw std::runtime_error("determinization bound exceeded");
  Store& s = *a.store;
  std::vector<Bdd> preds;
  preds.reserve(a.trans.size());
  for (const auto& t : a.trans) preds.push_back(t.pred);
  std::vector<Bdd> cells = letter_cells(s, preds);
  size_t nc = cells.size();

  std::vector<uint64_t> all(a.states * nc, 0), safe(a.states * nc, 0);
  for (const auto& t : a.trans)
    for (size_t ci = 0; ci < nc; ci++)
      if (!(t.pred & cells[ci]).is_false()) {
        all[t.from * nc + ci] |= 1ull << t.to;
        if (t.color == kAccepting) safe[t.from * nc + ci] |= 1ull << t.to;
      }
  auto image = [&](uint64_t set, size_t ci, const std::vector<uint64_t>& tbl) {
    uint64_t r = 0;
    while (set) {
      int q = std::countr_zero(set);
      set &= set - 1;
      r |= tbl[q * nc + ci];
    }
    return r;
  };

  // breakpoint subsets: all runs, and runs safe since the last breakpoint
  std::map<std::pair<uint64_t, uint64_t>, int> idx;
  std::vector<std::pair<uint64_t, uint64_t>> work;
  auto intern = [&](uint64_t set, uint64_t brk) {
    auto [it, fresh] =
        idx.try_emplace({set, brk}, static_cast<int>(idx.size()));
    if (fresh) work.push_back({set, brk});
    return it->second;
  };
  uint64_t init = 1ull << a.initial;
  intern(init, init);

  std::map<std::tuple<int, int, int>, Bdd> merged;
  for (size_t wi = 0; wi < work.size(); wi++) {
    auto [set, brk] = work[wi];
    for (size_t ci = 0; ci < nc; ci++) {
      uint64_t set2 = image(set, ci, all);
      if (!set2)
        throw std::logic_error("determinization requires completeness");
      uint64_t brk2 = image(brk, ci, safe);
      int color = kAccepting;
      if (!brk2) {
        color = kRejecting;
        brk2 = set2;
      }
      int to = intern(set2, brk2);
      auto [it, fresh] = merged.try_emplace(
          std::tuple{static_cast<int>(wi), to, color}, s.lfalse());
      it->second = it->second | cells[ci];
    }
  }

  CoBuchiAutomaton d;
  d.store = a.store;
  d.states = static_cast<int>(work.size());
  d.initial = 0;
  d.deterministic = true;
  for (const auto& [key, pred] : merged)
    d.trans.push_back(
        {std::get<0>(key), pred, std::get<1>(key), std::get<2>(key)});
  return d;
}

namespace {

template <typename Trans>
int det_step(const Store& s, const std::vector<Trans>& trans, int q,
             uint64_t letter, int* color) {
  for (const auto& t : trans)
    if (t.from == q && s.eval(t.pred, letter)) {
      *color = t.color;
      return t.to;
    }
  throw std::logic_error("missing transition in a complete automaton");
}

template <typename Trans>
bool det_lasso(const Store& s, const std::vector<Trans>& trans, int initial,
               const Lasso& w) {
  assert(!w.loop.empty());
  int q = initial, c = 0;
  for (uint64_t x : w.prefix) q = det_step(s, trans, q, x, &c);
  std::map<std::pair<int, size_t>, size_t> first;
  std::vector<int> colors;
  size_t i = 0;
  for (;;) {
    auto [it, fresh] = first.try_emplace({q, i}, colors.size());
    if (!fresh) {
      int mc = INT_MAX;
      for (size_t j = it->second; j < colors.size(); j++)
        mc = std::min(mc, colors[j]);
      return (mc & 1) == 0;
    }
    q = det_step(s, trans, q, w.loop[i], &c);
    colors.push_back(c);
    i = (i + 1) % w.loop.size();
  }
}

}  // namespace

bool lasso_member(const ParityAutomaton& a, const Lasso& w) {
  return det_lasso(*a.store, a.trans, a.initial, w);
}

bool lasso_member(const CoBuchiAutomaton& a, const Lasso& w) {
  if (a.deterministic) return det_lasso(*a.store, a.trans, a.initial, w);
  if (a.states > 63) throw std::runtime_error("automaton too large");
  assert(!w.loop.empty());
  const Store& s = *a.store;
  auto image = [&](uint64_t set, uint64_t letter, bool safe_only) {
    uint64_t r = 0;
    for (const auto& t : a.trans)
      if ((set >> t.from & 1) && (!safe_only || t.color == kAccepting) &&
          s.eval(t.pred, letter))
        r |= 1ull << t.to;
    return r;
  };

  uint64_t set = 1ull << a.initial;
  for (uint64_t x : w.prefix) set = image(set, x, false);
  size_t len = w.loop.size();

  // product of the automaton with the loop positions: reachable part,
  // then the largest sub-structure with everlasting safe paths
  std::vector<uint64_t> reach(len, 0);
  reach[0] = set;
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < len; i++) {
      uint64_t nxt = image(reach[i], w.loop[i], false);
      size_t j = (i + 1) % len;
      if (nxt & ~reach[j]) {
        reach[j] |= nxt;
        changed = true;
      }
    }
  }
  std::vector<uint64_t> live = reach;
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < len; i++) {
      uint64_t keep = 0, cand = live[i];
      while (cand) {
        int q = std::countr_zero(cand);
        cand &= cand - 1;
        if (image(1ull << q, w.loop[i], true) & live[(i + 1) % len])
          keep |= 1ull << q;
      }
      if (keep != live[i]) {
        live[i] = keep;
        changed = true;
      }
    }
  }
  for (uint64_t m : live)
    if (m) return true;
  return false;
}

namespace {

// Deterministic per-cell successor table; -1 entries mark missing moves.
std::vector<std::pair<int, int>> cell_table(const CoBuchiAutomaton& m,
                                            const std::vector<Bdd>& cells) {
  std::vector<std::pair<int, int>> tbl(m.states * cells.size(), {-1, -1});
  for (const auto& t : m.trans)
    for (size_t ci = 0; ci < cells.size(); ci++)
      if (!(t.pred & cells[ci]).is_false())
        tbl[t.from * cells.size() + ci] = {t.to, t.color};
  return tbl;
}

}  // namespace

bool language_subset(const CoBuchiAutomaton& a, int from_a,
                     const CoBuchiAutomaton& b, int from_b) {
  assert(a.deterministic && b.deterministic);
  Store& s = *a.store;
  std::vector<Bdd> preds;
  for (const auto& t : a.trans) preds.push_back(t.pred);
  for (const auto& t : b.trans) preds.push_back(t.pred);
  std::vector<Bdd> cells = letter_cells(s, preds);
  auto ta = cell_table(a, cells), tb = cell_table(b, cells);

  std::map<std::pair<int, int>, int> idx;
  std::vector<std::pair<int, int>> work;
  auto intern = [&](int pa, int pb) {
    auto [it, fresh] =
        idx.try_emplace({pa, pb}, static_cast<int>(idx.size()));
    if (fresh) work.push_back({pa, pb});
    return it->second;
  };
  intern(from_a, from_b);

  struct PEdge {
    int from, to, ca, cb;
  };
  std::vector<PEdge> edges;
  for (size_t wi = 0; wi < work.size(); wi++) {
    auto [pa, pb] = work[wi];
    for (size_t ci = 0; ci < cells.size(); ci++) {
      auto [na, ca] = ta[pa * cells.size() + ci];
      auto [nb, cb] = tb[pb * cells.size() + ci];
      if (na < 0 || nb < 0)
        throw std::logic_error("language comparison requires completeness");
      edges.push_back({static_cast<int>(wi), intern(na, nb), ca, cb});
    }
  }

  // a word separates the languages iff some reachable cycle is safe on
  // the left and rejecting somewhere on the right
  std::vector<std::pair<int, int>> arcs;
  for (const auto& e : edges)
    if (e.ca == kAccepting) arcs.emplace_back(e.from, e.to);
  std::vector<int> comp = scc_partition_impl(static_cast<int>(work.size()), arcs);
  for (const auto& e : edges)
    if (e.ca == kAccepting && e.cb == kRejecting && comp[e.from] == comp[e.to])
      return false;
  return true;
}

bool language_subset(const CoBuchiAutomaton& a, const CoBuchiAutomaton& b) {
  return language_subset(a, a.initial, b, b.initial);
}

bool language_equal(const CoBuchiAutomaton& a, const CoBuchiAutomaton& b) {
  return language_subset(a, b) && language_subset(b, a);
}

bool state_language_equal(const CoBuchiAutomaton& a, int p, int q) {
  return language_subset(a, p, a, q) && language_subset(a, q, a, p);
}

DenseDpa densify(const ParityAutomaton& a) {
  int np = a.store->prop_count();
  if (np > 20) throw std::runtime_error("alphabet too large to densify");
  DenseDpa d;
  d.states = a.states;
  d.initial = a.initial;
  d.letters = 1 << np;
  d.succ.assign(static_cast<size_t>(a.states) * d.letters, -1);
  d.color.assign(d.succ.size(), -1);
  for (const auto& t : a.trans)
    for (int x = 0; x < d.letters; x++)
      if (a.store->eval(t.pred, static_cast<uint64_t>(x))) {
        d.succ[static_cast<size_t>(t.from) * d.letters + x] = t.to;
        d.color[static_cast<size_t>(t.from) * d.letters + x] = t.color;
      }
  return d;
}

DenseNcw densify(const CoBuchiAutomaton& a) {
  int np = a.store->prop_count();
  if (np > 20) throw std::runtime_error("alphabet too large to densify");
  if (a.states > 63) throw std::runtime_error("automaton too large");
  DenseNcw d;
  d.states = a.states;
  d.letters = 1 << np;
  d.initial_set = 1ull << a.initial;
  d.succ_all.assign(static_cast<size_t>(a.states) * d.letters, 0);
  d.succ_safe.assign(d.succ_all.size(), 0);
  for (const auto& t : a.trans)
    for (int x = 0; x < d.letters; x++)
      if (a.store->eval(t.pred, static_cast<uint64_t>(x))) {
        size_t k = static_cast<size_t>(t.from) * d.letters + x;
        d.succ_all[k] |= 1ull << t.to;
        if (t.color == kAccepting) d.succ_safe[k] |= 1ull << t.to;
      }
  return d;
}

bool lasso_member(const DenseDpa& a, const Lasso& w) {
  assert(!w.loop.empty());
  int q = a.initial;
  for (uint64_t x : w.prefix) {
    q = a.succ[static_cast<size_t>(q) * a.letters + x];
    if (q < 0) throw std::logic_error("dense table has a hole");
  }
  size_t len = w.loop.size();
  thread_local std::vector<int> first;
  thread_local std::vector<int> colors;
  first.assign(static_cast<size_t>(a.states) * len, -1);
  colors.clear();
  size_t i = 0;
  for (;;) {
    size_t key = static_cast<size_t>(q) * len + i;
    if (first[key] >= 0) {
      int mc = INT_MAX;
      for (size_t j = first[key]; j < colors.size(); j++)
        mc = std::min(mc, colors[j]);
      return (mc & 1) == 0;
    }
    first[key] = static_cast<int>(colors.size());
    size_t at = static_cast<size_t>(q) * a.letters + w.loop[i];
    colors.push_back(a.color[at]);
    q = a.succ[at];
    if (q < 0) throw std::logic_error("dense table has a hole");
    i = (i + 1) % len;
  }
}

bool lasso_member(const DenseNcw& a, const Lasso& w) {
  assert(!w.loop.empty());
  auto image = [&](uint64_t set, uint64_t x, const std::vector<uint64_t>& tbl) {
    uint64_t r = 0;
    while (set) {
      int q = std::countr_zero(set);
      set &= set - 1;
      r |= tbl[static_cast<size_t>(q) * a.letters + x];
    }
    return r;
  };
  uint64_t set = a.initial_set;
  for (uint64_t x : w.prefix) set = image(set, x, a.succ_all);
  if (!set) return false;
  size_t len = w.loop.size();
  thread_local std::vector<uint64_t> reach, live;
  reach.assign(len, 0);
  reach[0] = set;
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < len; i++) {
      uint64_t nxt = image(reach[i], w.loop[i], a.succ_all);
      size_t j = (i + 1) % len;
      if (nxt & ~reach[j]) {
        reach[j] |= nxt;
        changed = true;
      }
    }
  }
  live = reach;
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < len; i++) {
      uint64_t keep = 0, cand = live[i];
      while (cand) {
        int q = std::countr_zero(cand);
        cand &= cand - 1;
        if (a.succ_safe[static_cast<size_t>(q) * a.letters + w.loop[i]] &
            live[(i + 1) % len])
          keep |= 1ull << q;
      }
      if (keep != live[i]) {
        live[i] = keep;
        changed = true;
      }
    }
  }
  for (uint64_t m : live)
    if (m) return true;
  return false;
}

std::string pred_to_string(const Store& store, Bdd pred) {
  if (pred.is_true()) return "true";
  if (pred.is_false()) return "false";
  std::vector<int> levels = store.support(pred);
  std::string out;
  store.foreach_minterm(pred, levels, [&](uint64_t bits) {
    std::string cube;
    for (size_t k = 0; k < levels.size(); k++) {
      if (!cube.empty()) cube += " & ";
      int lvl = levels[k];
      std::string nm;
      if (store.has_primed()) {
        nm = store.prop(lvl / 2).name;
        if (lvl & 1) nm += "'";
      } else {
        nm = store.prop(lvl).name;
      }
      cube += (bits >> k & 1) ? nm : "!" + nm;
    }
    if (!out.empty()) out += " | ";
    out += cube;
  });
  return out;
}

namespace {

template <typename Aut>
std::string describe_impl(const char* kind, const Aut& a) {
  std::ostringstream os;
  os << kind << ": " << a.states << " states, initial " << a.initial;
  if (a.deterministic) os << ", deterministic";
  os << "\n";
  for (int q = 0; q < a.states; q++)
    for (const auto& t : a.trans)
      if (t.from == q)
        os << "  " << t.from << " --[" << pred_to_string(*a.store, t.pred)
           << "]:" << t.color << "--> " << t.to << "\n";
  return os.str();
}

}  // namespace

std::string describe(const ParityAutomaton& a) {
  return describe_impl("parity automaton", a);
}

std::string describe(const CoBuchiAutomaton& a) {
  return describe_impl("co-buchi automaton", a);
}

}  // namespace cosy
