#include "cosy/cocoa.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "cosy/oracle.hpp"

namespace cosy {

namespace {

// Several safe-deterministic co-Buchi automata read in lockstep over a
// shared letter-cell refinement. safe_succ holds, per level, the unique
// accepting successor for each (state, cell) or -1.
struct SafeSystem {
  std::vector<const CoBuchiAutomaton*> levels;
  std::vector<Bdd> cells;
  std::vector<std::vector<int>> safe_succ;
};

SafeSystem make_safe_system(Store& s,
                            std::vector<const CoBuchiAutomaton*> levels) {
  SafeSystem sys;
  sys.levels = std::move(levels);
  std::vector<Bdd> preds;
  for (const CoBuchiAutomaton* a : sys.levels)
    for (const PTrans& t : a->trans) preds.push_back(t.pred);
  sys.cells = letter_cells(s, preds);
  for (const CoBuchiAutomaton* a : sys.levels) {
    std::vector<int> table(a->states * sys.cells.size(), -1);
    for (const PTrans& t : a->trans) {
      if (t.color != kAccepting) continue;
      for (size_t c = 0; c < sys.cells.size(); c++) {
        if ((sys.cells[c] & t.pred).is_false()) continue;
        int& slot = table[t.from * sys.cells.size() + c];
        if (slot != -1 && slot != t.to)
          throw std::logic_error("accepting transitions are not deterministic");
        slot = t.to;
      }
    }
    sys.safe_succ.push_back(std::move(table));
  }
  return sys;
}

// Joint safe-reachable tuple space with liveness: a tuple is live when
// some cell continues safely into a live tuple.
struct SafeClosure {
  std::map<std::vector<int>, int> id;
  std::vector<std::vector<int>> succ;  // per tuple, per cell
  std::vector<char> live;
};

SafeClosure safe_closure(const SafeSystem& sys,
                         const std::vector<std::vector<int>>& roots) {
  SafeClosure c;
  std::vector<std::vector<int>> list;
  auto intern = [&](const std::vector<int>& t) {
    auto [it, fresh] = c.id.try_emplace(t, (int)list.size());
    if (fresh) list.push_back(t);
    return it->second;
  };
  for (const auto& r : roots) intern(r);
  size_t ncells = sys.cells.size();
  for (size_t i = 0; i < list.size(); i++) {
    std::vector<int> t = list[i];
    std::vector<int> row(ncells, -1);
    for (size_t cell = 0; cell < ncells; cell++) {
      std::vector<int> out(t.size());
      bool ok = true;
      for (size_t l = 0; l < t.size() && ok; l++) {
        int s = sys.safe_succ[l][t[l] * ncells + cell];
        if (s < 0) ok = false;
        else out[l] = s;
      }
      if (ok) row[cell] = intern(out);
    }
    c.succ.push_back(std::move(row));
  }
  c.live.assign(list.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < c.succ.size(); i++) {
      if (!c.live[i]) continue;
      bool alive = false;
      for (int s : c.succ[i])
        if (s >= 0 && c.live[s]) alive = true;
      if (!alive) {
        c.live[i] = 0;
        changed = true;
      }
    }
  }
  return c;
}

// Safe-language containment T(a) subset of T(b), both tuples over the
// same system: search for a reachable pair where the left side continues
// safely into a live tuple and the right side cannot follow.
bool joint_safe_subset(const SafeSystem& sys, const std::vector<int>& a,
                       const std::vector<int>& b) {
  SafeClosure c = safe_closure(sys, {a, b});
  int ida = c.id.at(a), idb = c.id.at(b);
  if (!c.live[ida]) return true;
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> queue{{ida, idb}};
  seen.insert(queue[0]);
  for (size_t qi = 0; qi < queue.size(); qi++) {
    auto [u, v] = queue[qi];
    for (size_t cell = 0; cell < sys.cells.size(); cell++) {
      int ua = c.succ[u][cell];
      if (ua < 0 || !c.live[ua]) continue;
      int vb = c.succ[v][cell];
      if (vb < 0) return false;
      if (seen.insert({ua, vb}).second) queue.push_back({ua, vb});
    }
  }
  return true;
}

// Reachable part of a co-Buchi automaton, states renumbered in BFS order.
CoBuchiAutomaton prune_reachable(const CoBuchiAutomaton& a) {
  std::vector<int> remap(a.states, -1), order;
  remap[a.initial] = 0;
  order.push_back(a.initial);
  for (size_t i = 0; i < order.size(); i++)
    for (const PTrans& t : a.trans)
      if (t.from == order[i] && remap[t.to] < 0) {
        remap[t.to] = (int)order.size();
        order.push_back(t.to);
      }
  CoBuchiAutomaton out = a;
  out.states = (int)order.size();
  out.initial = 0;
  out.trans.clear();
  out.lang_class.clear();
  for (const PTrans& t : a.trans)
    if (remap[t.from] >= 0)
      out.trans.push_back({remap[t.from], t.pred, remap[t.to], t.color});
  return out;
}

void merge_duplicate_edges(CoBuchiAutomaton& a) {
  std::map<std::tuple<int, int, int>, Bdd> merged;
  for (const PTrans& t : a.trans) {
    auto [it, fresh] =
        merged.try_emplace({t.from, t.to, t.color}, t.pred);
    if (!fresh) it->second = it->second | t.pred;
  }
  a.trans.clear();
  for (const auto& [key, pred] : merged)
    a.trans.push_back(
        {std::get<0>(key), pred, std::get<1>(key), std::get<2>(key)});
}

}  // namespace

CoBuchiAutomaton canonicalize(const CoBuchiAutomaton& a0) {
  if (!a0.store || a0.states <= 0)
    throw std::logic_error("canonicalize needs a nonempty automaton");
  Store& s = *a0.store;
  CoBuchiAutomaton d = a0.deterministic ? a0 : ncw_determinize(a0);
  d = prune_reachable(d);

  // Normalization: an accepting transition that leaves a strongly
  // connected component of the accepting subgraph is taken finitely often
  // by any run, so demoting it to rejecting preserves the language.
  {
    std::vector<std::pair<int, int>> sarc;
    for (const PTrans& t : d.trans)
      if (t.color == kAccepting) sarc.emplace_back(t.from, t.to);
    std::vector<int> comp = scc_partition(d.states, sarc);
    for (PTrans& t : d.trans)
      if (t.color == kAccepting && comp[t.from] != comp[t.to])
        t.color = kRejecting;
    merge_duplicate_edges(d);
  }

  int n = d.states;
  SafeSystem sys = make_safe_system(s, {&d});
  size_t ncells = sys.cells.size();

  // Full successor table; also validates determinism and completeness.
  std::vector<int> det(n * ncells, -1);
  for (const PTrans& t : d.trans)
    for (size_t c = 0; c < ncells; c++) {
      if ((sys.cells[c] & t.pred).is_false()) continue;
      int& slot = det[t.from * ncells + c];
      if (slot != -1 && slot != t.to)
        throw std::logic_error("automaton is not deterministic");
      slot = t.to;
    }
  for (int q = 0; q < n; q++)
    for (size_t c = 0; c < ncells; c++)
      if (det[q * ncells + c] < 0)
        throw std::logic_error("automaton is not complete");

  std::vector<int> lclass(n, -1);
  std::vector<int> reps;
  for (int q = 0; q < n; q++) {
    for (size_t r = 0; r < reps.size(); r++)
      if (state_language_equal(d, q, reps[r])) {
        lclass[q] = (int)r;
        break;
      }
    if (lclass[q] < 0) {
      lclass[q] = (int)reps.size();
      reps.push_back(q);
    }
  }
  int nclasses = (int)reps.size();

  std::map<std::pair<int, int>, bool> subset_memo;
  auto subset_t = [&](int p, int q) {
    auto [it, fresh] = subset_memo.try_emplace({p, q}, false);
    if (fresh) it->second = joint_safe_subset(sys, {p}, {q});
    return it->second;
  };

  // Safe components of the normalized automaton. A component is dropped
  // when some other component strictly covers it: one of its safe
  // languages fits inside a safe language of the other within the same
  // language class, and not the other way around. Containment between
  // states of one component is fine and keeps both states.
  std::vector<int> comp;
  {
    std::vector<std::pair<int, int>> sarc;
    for (const PTrans& t : d.trans)
      if (t.color == kAccepting) sarc.emplace_back(t.from, t.to);
    comp = scc_partition(n, sarc);
  }
  int ncomp = 0;
  for (int c : comp) ncomp = std::max(ncomp, c + 1);
  std::vector<std::vector<int>> members(ncomp);
  for (int q = 0; q < n; q++) members[comp[q]].push_back(q);

  auto covers = [&](int big, int small) {
    for (int p : members[small])
      for (int q : members[big])
        if (lclass[p] == lclass[q] && subset_t(p, q)) return true;
    return false;
  };
  std::vector<char> kept(n, 0);
  for (int c = 0; c < ncomp; c++) {
    bool dominated = false;
    for (int o = 0; o < ncomp && !dominated; o++)
      dominated = o != c && covers(o, c) && !covers(c, o);
    if (!dominated)
      for (int q : members[c]) kept[q] = 1;
  }

  // Merge kept states with equal language and equal safe language.
  struct Group {
    int rep;
    int cls;
  };
  std::vector<Group> groups;
  std::vector<int> group_of(n, -1);
  for (int q = 0; q < n; q++) {
    if (!kept[q]) continue;
    for (size_t g = 0; g < groups.size(); g++)
      if (groups[g].cls == lclass[q] && subset_t(q, groups[g].rep) &&
          subset_t(groups[g].rep, q)) {
        group_of[q] = (int)g;
        break;
      }
    if (group_of[q] < 0) {
      group_of[q] = (int)groups.size();
      groups.push_back({q, lclass[q]});
    }
  }

  std::vector<Group>& outs = groups;
  std::vector<std::vector<int>> of_class(nclasses);
  for (size_t o = 0; o < outs.size(); o++)
    of_class[outs[o].cls].push_back((int)o);

  std::map<std::tuple<int, int, int>, Bdd> edges;
  auto add_edge = [&](int from, int to, int color, Bdd pred) {
    auto [it, fresh] = edges.try_emplace({from, to, color}, pred);
    if (!fresh) it->second = it->second | pred;
  };
  for (size_t o = 0; o < outs.size(); o++) {
    int q = outs[o].rep;
    for (size_t c = 0; c < ncells; c++) {
      // Accepting edges never leave a component, so a kept state's safe
      // successor is kept as well.
      int ss = sys.safe_succ[0][q * ncells + c];
      if (ss >= 0) {
        add_edge((int)o, group_of[ss], kAccepting, sys.cells[c]);
      } else {
        int dc = lclass[det[q * ncells + c]];
        for (int t : of_class[dc])
          add_edge((int)o, t, kRejecting, sys.cells[c]);
      }
    }
  }

  CoBuchiAutomaton out;
  out.store = &s;
  out.states = (int)outs.size();
  out.initial = of_class[lclass[d.initial]].front();
  for (const auto& [key, pred] : edges)
    out.trans.push_back(
        {std::get<0>(key), pred, std::get<1>(key), std::get<2>(key)});
  out.gfg = true;
  out.canonical = true;
  for (const Group& g : outs) out.lang_class.push_back(g.cls);

  // Unreachable output states are never fan targets (a fan reaches every
  // state of its class), so dropping them keeps all fans intact.
  {
    CoBuchiAutomaton pruned = prune_reachable(out);
    if (pruned.states < out.states) {
      std::vector<int> remap(out.states, -1), order;
      remap[out.initial] = 0;
      order.push_back(out.initial);
      for (size_t i = 0; i < order.size(); i++)
        for (const PTrans& t : out.trans)
          if (t.from == order[i] && remap[t.to] < 0) {
            remap[t.to] = (int)order.size();
            order.push_back(t.to);
          }
      pruned.lang_class.resize(pruned.states);
      for (int q = 0; q < out.states; q++)
        if (remap[q] >= 0) pruned.lang_class[remap[q]] = out.lang_class[q];
      out = std::move(pruned);
    }
  }
  // Compact class ids in order of first appearance.
  {
    std::map<int, int> dense;
    for (int& c : out.lang_class) {
      auto [it, fresh] = dense.try_emplace(c, (int)dense.size());
      c = it->second;
    }
  }

  out.deterministic = true;
  for (size_t i = 0; i < out.trans.size() && out.deterministic; i++)
    for (size_t j = i + 1; j < out.trans.size(); j++) {
      const PTrans &a = out.trans[i], &b = out.trans[j];
      if (a.from != b.from || a.to == b.to) continue;
      if (!(a.pred & b.pred).is_false()) {
        out.deterministic = false;
        break;
      }
    }
  return out;
}

std::optional<std::string> canonical_violation(const CoBuchiAutomaton& a) {
  if (!a.store || a.states <= 0) return "empty automaton";
  if ((int)a.lang_class.size() != a.states)
    return "missing language class annotation";
  Store& s = *a.store;

  std::vector<char> reach(a.states, 0);
  std::vector<int> order{a.initial};
  reach[a.initial] = 1;
  for (size_t i = 0; i < order.size(); i++)
    for (const PTrans& t : a.trans)
      if (t.from == order[i] && !reach[t.to]) {
        reach[t.to] = 1;
        order.push_back(t.to);
      }
  for (int q = 0; q < a.states; q++)
    if (!reach[q]) return "unreachable state";

  std::vector<Bdd> preds;
  for (const PTrans& t : a.trans) preds.push_back(t.pred);
  std::vector<Bdd> cells = letter_cells(s, preds);

  for (int q = 0; q < a.states; q++)
    for (const Bdd& cell : cells) {
      std::vector<int> acc, rej;
      for (const PTrans& t : a.trans) {
        if (t.from != q || (cell & t.pred).is_false()) continue;
        (t.color == kAccepting ? acc : rej).push_back(t.to);
      }
      if (acc.size() > 1) return "two accepting transitions on one letter";
      if (!acc.empty() && !rej.empty())
        return "accepting and rejecting transitions share a letter";
      if (acc.empty() && rej.empty()) return "incomplete state";
      if (!rej.empty()) {
        std::set<int> fan(rej.begin(), rej.end());
        int cls = a.lang_class[*fan.begin()];
        std::set<int> want;
        for (int r = 0; r < a.states; r++)
          if (a.lang_class[r] == cls) want.insert(r);
        if (fan != want) return "rejecting fan does not match a language class";
      }
    }

  std::vector<int> comp;
  {
    std::vector<std::pair<int, int>> sarc;
    for (const PTrans& t : a.trans)
      if (t.color == kAccepting) sarc.emplace_back(t.from, t.to);
    comp = scc_partition(a.states, sarc);
  }
  for (const PTrans& t : a.trans)
    if (t.color == kAccepting && comp[t.from] != comp[t.to])
      return "accepting transition leaves its component";

  SafeSystem sys = make_safe_system(s, {&a});
  for (int p = 0; p < a.states; p++)
    for (int q = 0; q < a.states; q++) {
      if (p == q || a.lang_class[p] != a.lang_class[q]) continue;
      bool pq = joint_safe_subset(sys, {p}, {q});
      bool qp = joint_safe_subset(sys, {q}, {p});
      if (pq && qp && p < q) return "two states share a safe language";
      if (pq && !qp && comp[p] != comp[q])
        return "safe language covered by another component";
    }
  return std::nullopt;
}

CocoaChain dpa_to_chain(const ParityAutomaton& a) {
  if (!a.deterministic || !a.complete)
    throw std::logic_error("chain translation needs a deterministic "
                           "complete automaton");
  ParityAutomaton r = reduce_colors(a);
  CocoaChain chain;
  chain.store = a.store;
  int top = r.max_color();
  for (int i = 1; i <= top; i++) {
    CoBuchiAutomaton lvl;
    lvl.store = a.store;
    lvl.states = r.states;
    lvl.initial = r.initial;
    lvl.deterministic = true;
    for (const PTrans& t : r.trans)
      lvl.trans.push_back(
          {t.from, t.pred, t.to, t.color < i ? kRejecting : kAccepting});
    chain.levels.push_back(canonicalize(lvl));
  }
  return chain;
}

bool lasso_member(const CocoaChain& chain, const Lasso& w) {
  int deepest = 0;
  for (size_t k = 0; k < chain.levels.size(); k++) {
    if (!lasso_member(chain.levels[k], w)) break;
    deepest = (int)k + 1;
  }
  return deepest % 2 == 0;
}

int CocoaProduct::max_color() const {
  int m = 0;
  for (const auto& ms : moves)
    for (const ProductMove& mv : ms) m = std::max(m, mv.color);
  return m;
}

namespace {

struct LevelTables {
  size_t ncells = 0;
  std::vector<int> acc;                  // state * ncells + cell, or -1
  std::vector<std::vector<int>> fan;     // rejecting targets
  std::vector<int> dclass;               // successor language class
};

LevelTables level_tables(const CoBuchiAutomaton& a,
                         const std::vector<Bdd>& cells) {
  if ((int)a.lang_class.size() != a.states)
    throw std::logic_error("chain level lacks language classes");
  LevelTables t;
  t.ncells = cells.size();
  t.acc.assign(a.states * cells.size(), -1);
  t.fan.assign(a.states * cells.size(), {});
  t.dclass.assign(a.states * cells.size(), -1);
  for (const PTrans& e : a.trans)
    for (size_t c = 0; c < cells.size(); c++) {
      if ((cells[c] & e.pred).is_false()) continue;
      size_t slot = e.from * cells.size() + c;
      if (e.color == kAccepting) {
        if (t.acc[slot] != -1 && t.acc[slot] != e.to)
          throw std::logic_error("level is not safe-deterministic");
        t.acc[slot] = e.to;
      } else {
        t.fan[slot].push_back(e.to);
      }
      t.dclass[slot] = a.lang_class[e.to];
    }
  for (auto& f : t.fan) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
  }
  return t;
}

CocoaProduct trivial_product(Store* store) {
  CocoaProduct p;
  p.store = store;
  p.levels = 0;
  p.tuples = {{}};
  p.initial = 0;
  Bdd t = store->ltrue();
  p.moves = {{ProductMove{t, 0, true, {0}}}};
  return p;
}

void merge_moves(CocoaProduct& p) {
  for (auto& ms : p.moves) {
    std::map<std::tuple<int, bool, std::vector<int>>, Bdd> merged;
    for (ProductMove& m : ms) {
      std::sort(m.choices.begin(), m.choices.end());
      m.choices.erase(std::unique(m.choices.begin(), m.choices.end()),
                      m.choices.end());
      auto [it, fresh] = merged.try_emplace(
          std::tuple{m.color, m.rejector_controls, m.choices}, m.pred);
      if (!fresh) it->second = it->second | m.pred;
    }
    ms.clear();
    for (const auto& [key, pred] : merged)
      ms.push_back({pred, std::get<0>(key), std::get<1>(key),
                    std::get<2>(key)});
  }
}

}  // namespace

CocoaProduct chain_product(const CocoaChain& chain, ProductKind kind) {
  if (!chain.store) throw std::logic_error("chain without a store");
  Store& s = *chain.store;
  if (chain.levels.empty()) return trivial_product(&s);

  if (kind == ProductKind::Optimized) {
    // Same state space as the reduced product, with every move allowed to
    // jump to any same-language state at levels at or below the rejecting
    // one.
    CocoaProduct red = chain_product(chain, ProductKind::Reduced);
    std::vector<Bdd> preds;
    for (const CoBuchiAutomaton& a : chain.levels)
      for (const PTrans& t : a.trans) preds.push_back(t.pred);
    std::vector<Bdd> cells = letter_cells(s, preds);
    std::vector<LevelTables> tab;
    for (const CoBuchiAutomaton& a : chain.levels)
      tab.push_back(level_tables(a, cells));

    size_t nl = chain.levels.size();
    CocoaProduct p;
    p.store = &s;
    p.levels = (int)nl;
    p.tuples = red.tuples;
    p.initial = red.initial;
    p.moves.assign(p.tuples.size(), {});
    for (size_t st = 0; st < p.tuples.size(); st++) {
      const std::vector<int>& t = p.tuples[st];
      for (size_t c = 0; c < cells.size(); c++) {
        size_t r = nl + 1;
        for (size_t l = 0; l < nl; l++)
          if (tab[l].acc[t[l] * tab[l].ncells + c] < 0) {
            r = l + 1;
            break;
          }
        std::vector<int> choices;
        for (size_t u = 0; u < p.tuples.size(); u++) {
          bool ok = true;
          for (size_t l = 0; l < nl && ok; l++) {
            size_t slot = t[l] * tab[l].ncells + c;
            if (l + 1 < r)
              ok = p.tuples[u][l] == tab[l].acc[slot];
            else
              ok = chain.levels[l].lang_class[p.tuples[u][l]] ==
                   tab[l].dclass[slot];
          }
          if (ok) choices.push_back((int)u);
        }
        p.moves[st].push_back(
            {cells[c], (int)r - 1, r % 2 == 1, std::move(choices)});
      }
    }
    merge_moves(p);
    return p;
  }

  std::vector<Bdd> preds;
  for (const CoBuchiAutomaton& a : chain.levels)
    for (const PTrans& t : a.trans) preds.push_back(t.pred);
  std::vector<Bdd> cells = letter_cells(s, preds);
  std::vector<LevelTables> tab;
  for (const CoBuchiAutomaton& a : chain.levels)
    tab.push_back(level_tables(a, cells));
  size_t nl = chain.levels.size();

  // Safe systems over level prefixes, for the successor restriction of
  // the reduced product. Containment queries repeat heavily across source
  // states and letter cells, so they are memoized.
  std::vector<SafeSystem> prefix_sys;
  if (kind == ProductKind::Reduced)
    for (size_t l = 1; l <= nl; l++) {
      std::vector<const CoBuchiAutomaton*> lv;
      for (size_t k = 0; k < l; k++) lv.push_back(&chain.levels[k]);
      prefix_sys.push_back(make_safe_system(s, std::move(lv)));
    }
  std::map<std::vector<int>, bool> subset_memo;
  auto cond_subset = [&](size_t l, const std::vector<int>& pre, int x, int y) {
    std::vector<int> key{(int)l, x, y};
    key.insert(key.end(), pre.begin(), pre.end());
    auto [it, fresh] = subset_memo.try_emplace(std::move(key), false);
    if (fresh) {
      std::vector<int> a = pre, b = pre;
      a.push_back(x);
      b.push_back(y);
      it->second = joint_safe_subset(prefix_sys[l], a, b);
    }
    return it->second;
  };
  std::map<std::vector<int>, bool> tuple_memo;
  auto tuple_language_equal = [&](const std::vector<int>& a,
                                  const std::vector<int>& b) {
    std::vector<int> key = a;
    key.insert(key.end(), b.begin(), b.end());
    auto [it, fresh] = tuple_memo.try_emplace(std::move(key), false);
    if (fresh)
      it->second = joint_safe_subset(prefix_sys[nl - 1], a, b) &&
                   joint_safe_subset(prefix_sys[nl - 1], b, a);
    return it->second;
  };

  CocoaProduct p;
  p.store = &s;
  p.levels = (int)nl;
  std::map<std::vector<int>, int> id;
  auto same_classes = [&](const std::vector<int>& a,
                          const std::vector<int>& b) {
    for (size_t l = 0; l < nl; l++)
      if (chain.levels[l].lang_class[a[l]] != chain.levels[l].lang_class[b[l]])
        return false;
    return true;
  };
  auto intern = [&](const std::vector<int>& t) {
    auto [it, fresh] = id.try_emplace(t, (int)p.tuples.size());
    if (fresh && kind == ProductKind::Reduced)
      // Tuples reached along different histories can denote the same joint
      // safe language while agreeing on every level's language class; such
      // states are interchangeable, so fold them into one.
      for (size_t o = 0; o < p.tuples.size(); o++)
        if (same_classes(t, p.tuples[o]) &&
            tuple_language_equal(t, p.tuples[o])) {
          it->second = (int)o;
          return (int)o;
        }
    if (fresh) {
      p.tuples.push_back(t);
      p.moves.emplace_back();
    }
    return it->second;
  };
  std::vector<int> init;
  for (const CoBuchiAutomaton& a : chain.levels) init.push_back(a.initial);
  p.initial = intern(init);

  for (size_t st = 0; st < p.tuples.size(); st++) {
    std::vector<int> t = p.tuples[st];
    for (size_t c = 0; c < cells.size(); c++) {
      size_t r = nl + 1;
      for (size_t l = 0; l < nl; l++)
        if (tab[l].acc[t[l] * tab[l].ncells + c] < 0) {
          r = l + 1;
          break;
        }

      std::vector<std::vector<int>> partial{{}};
      for (size_t l = 0; l < nl; l++) {
        size_t slot = t[l] * tab[l].ncells + c;
        std::vector<int> cand;
        if (tab[l].acc[slot] >= 0)
          cand.push_back(tab[l].acc[slot]);
        else
          cand = tab[l].fan[slot];
        std::vector<std::vector<int>> next;
        for (const std::vector<int>& pre : partial) {
          std::vector<int> sel = cand;
          if (kind == ProductKind::Reduced && cand.size() > 1) {
            // Keep candidates whose joint safe language with the already
            // chosen upper levels is maximal; on equality the smaller
            // state index survives.
            std::vector<int> keep;
            for (int x : cand) {
              bool drop = false;
              for (int y : keep) {
                bool xy = cond_subset(l, pre, x, y);
                bool yx = cond_subset(l, pre, y, x);
                if (xy && (!yx || y < x)) {
                  drop = true;
                  break;
                }
              }
              if (drop) continue;
              std::vector<int> kept2;
              for (int y : keep) {
                bool yx = cond_subset(l, pre, y, x);
                bool xy = cond_subset(l, pre, x, y);
                if (yx && !xy) continue;
                kept2.push_back(y);
              }
              kept2.push_back(x);
              keep = std::move(kept2);
            }
            sel = std::move(keep);
          }
          for (int x : sel) {
            std::vector<int> ext = pre;
            ext.push_back(x);
            next.push_back(std::move(ext));
          }
        }
        partial = std::move(next);
      }

      std::vector<int> choices;
      for (const std::vector<int>& u : partial) choices.push_back(intern(u));
      std::sort(choices.begin(), choices.end());
      choices.erase(std::unique(choices.begin(), choices.end()),
                    choices.end());
      p.moves[st].push_back(
          {cells[c], (int)r - 1, r % 2 == 1, std::move(choices)});
    }
  }
  merge_moves(p);
  return p;
}

bool lasso_member(const CocoaProduct& p, const Lasso& w) {
  const Store& s = *p.store;
  int pre = (int)w.prefix.size(), n = pre + (int)w.loop.size();
  auto letter = [&](int k) {
    return k < pre ? w.prefix[k] : w.loop[k - pre];
  };
  ExplicitGame g;
  size_t nodes = p.tuples.size() * n;
  g.owner.assign(nodes, 0);
  g.moves.assign(nodes, {});
  for (size_t st = 0; st < p.tuples.size(); st++)
    for (int k = 0; k < n; k++) {
      size_t node = st * n + k;
      int next = k + 1 < n ? k + 1 : pre;
      for (const ProductMove& m : p.moves[st]) {
        if (!s.eval(m.pred, letter(k))) continue;
        g.owner[node] = m.rejector_controls ? 1 : 0;
        for (int t : m.choices)
          g.moves[node].push_back({(int)(t * n + next), m.color});
        break;
      }
    }
  g.initial = {p.initial * n};
  return zielonka_solve(g).initial_won;
}

std::string describe(const CocoaProduct& p) {
  std::ostringstream out;
  out << "product: " << p.tuples.size() << " states, " << p.levels
      << " levels, initial " << p.initial << "\n";
  for (size_t st = 0; st < p.tuples.size(); st++) {
    out << st << " (";
    for (size_t l = 0; l < p.tuples[st].size(); l++)
      out << (l ? "," : "") << p.tuples[st][l];
    out << "):\n";
    for (const ProductMove& m : p.moves[st]) {
      out << "  [" << pred_to_string(*p.store, m.pred) << "] color "
          << m.color << (m.rejector_controls ? " rej" : " acc") << " ->";
      for (int t : m.choices) out << " " << t;
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace cosy
