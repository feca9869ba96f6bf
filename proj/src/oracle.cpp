#include "cosy/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>

namespace cosy {

namespace {

// Deterministic step: the unique enabled transition of a at (q, letter).
const PTrans& dpa_step(const ParityAutomaton& a, int q, uint64_t letter) {
  const PTrans* hit = nullptr;
  for (const PTrans& t : a.trans) {
    if (t.from != q || !a.store->eval(t.pred, letter)) continue;
    if (hit) throw std::logic_error("automaton is not deterministic");
    hit = &t;
  }
  if (!hit) throw std::logic_error("automaton is not complete");
  return *hit;
}

}  // namespace

ExplicitGame expand(const SymbolicGame& g, const ParityAutomaton& a,
                    size_t max_positions) {
  const Store& s = *g.store;
  if (a.store != &s) throw std::logic_error("automaton built on another store");

  std::vector<uint64_t> in_vals, out_vals;
  {
    uint64_t ni = 1ull << g.inputs.size(), no = 1ull << g.outputs.size();
    for (uint64_t m = 0; m < ni; m++) {
      uint64_t bits = 0;
      for (size_t k = 0; k < g.inputs.size(); k++)
        if (m >> k & 1) bits |= 1ull << g.inputs[k];
      in_vals.push_back(bits);
    }
    for (uint64_t m = 0; m < no; m++) {
      uint64_t bits = 0;
      for (size_t k = 0; k < g.outputs.size(); k++)
        if (m >> k & 1) bits |= 1ull << g.outputs[k];
      out_vals.push_back(bits);
    }
  }

  ExplicitGame eg;
  std::map<std::pair<uint64_t, int>, int> id;
  std::vector<std::pair<uint64_t, int>> todo;
  int neutral = a.max_color();

  auto intern = [&](uint64_t pos, int q) {
    auto [it, fresh] = id.try_emplace({pos, q}, (int)eg.owner.size());
    if (fresh) {
      if (id.size() > max_positions)
        throw std::runtime_error("expansion exceeds the position bound");
      eg.owner.push_back(1);
      eg.moves.emplace_back();
      todo.push_back({pos, q});
    }
    return it->second;
  };

  s.foreach_minterm(g.init, s.current_levels(), [&](uint64_t bits) {
    eg.initial.push_back(intern(bits, a.initial));
  });

  for (size_t next = 0; next < todo.size(); next++) {
    auto [pos, q] = todo[next];
    int node = id.at({pos, q});
    for (uint64_t in : in_vals) {
      int mid = (int)eg.owner.size();
      eg.owner.push_back(0);
      eg.moves.emplace_back();
      eg.moves[node].push_back({mid, neutral});
      for (uint64_t out : out_vals) {
        uint64_t succ = in | out;
        if (!s.eval(g.trans, pos, succ)) continue;
        const PTrans& t = dpa_step(a, q, succ);
        int tgt = intern(succ, t.to);  // may grow eg.moves
        eg.moves[mid].push_back({tgt, t.color});
      }
    }
  }
  return eg;
}

namespace {

// Max-parity node game used by the Zielonka solver. Edge colors are
// subdivided into mid nodes; priorities are complemented so that the
// acceptor becomes the max-even player.
struct NodeGame {
  std::vector<int> owner, prio;
  std::vector<std::vector<int>> succ, pred;
};

NodeGame subdivide(const ExplicitGame& g0) {
  ExplicitGame g = g0;
  for (size_t n = 0; n < g.moves.size(); n++)
    if (g.moves[n].empty())
      g.moves[n].push_back({(int)n, g.owner[n] == 0 ? 1 : 0});

  int cmax = 0;
  for (auto& ms : g.moves)
    for (auto& e : ms) cmax = std::max(cmax, e.color);
  int top = cmax % 2 ? cmax + 1 : cmax;  // even, so parities survive

  NodeGame ng;
  size_t n = g.moves.size();
  ng.owner.assign(n, 0);
  ng.prio.assign(n, top - cmax);
  ng.succ.assign(n, {});
  for (size_t v = 0; v < n; v++) {
    ng.owner[v] = g.owner[v];
    for (auto& e : g.moves[v]) {
      int mid = (int)ng.owner.size();
      ng.owner.push_back(0);
      ng.prio.push_back(top - e.color);
      ng.succ[v].push_back(mid);
      ng.succ.push_back({e.to});
    }
  }
  ng.pred.assign(ng.owner.size(), {});
  for (size_t v = 0; v < ng.succ.size(); v++)
    for (int w : ng.succ[v]) ng.pred[w].push_back((int)v);
  return ng;
}

std::vector<char> attractor(const NodeGame& ng, const std::vector<char>& alive,
                            const std::vector<char>& target, int player) {
  size_t n = ng.owner.size();
  std::vector<char> in(n, 0);
  std::vector<int> cnt(n, 0), queue;
  for (size_t v = 0; v < n; v++) {
    if (!alive[v]) continue;
    for (int w : ng.succ[v])
      if (alive[w]) cnt[v]++;
    if (target[v]) {
      in[v] = 1;
      queue.push_back((int)v);
    }
  }
  for (size_t qi = 0; qi < queue.size(); qi++) {
    for (int u : ng.pred[queue[qi]]) {
      if (!alive[u] || in[u]) continue;
      if (ng.owner[u] == player || --cnt[u] == 0) {
        in[u] = 1;
        queue.push_back(u);
      }
    }
  }
  return in;
}

void zielonka_rec(const NodeGame& ng, std::vector<char> alive,
                  std::vector<char>& win0, std::vector<char>& win1) {
  size_t n = ng.owner.size();
  int p = -1;
  for (size_t v = 0; v < n; v++)
    if (alive[v]) p = std::max(p, ng.prio[v]);
  if (p < 0) return;
  int player = p & 1;

  std::vector<char> target(n, 0);
  for (size_t v = 0; v < n; v++)
    if (alive[v] && ng.prio[v] == p) target[v] = 1;
  std::vector<char> a = attractor(ng, alive, target, player);

  std::vector<char> rest = alive;
  for (size_t v = 0; v < n; v++)
    if (a[v]) rest[v] = 0;
  std::vector<char> w0(n, 0), w1(n, 0);
  zielonka_rec(ng, rest, w0, w1);

  std::vector<char>& wopp = player == 0 ? w1 : w0;
  bool opp_empty = std::none_of(wopp.begin(), wopp.end(), [](char c) { return c; });
  if (opp_empty) {
    std::vector<char>& mine = player == 0 ? win0 : win1;
    for (size_t v = 0; v < n; v++)
      if (alive[v]) mine[v] = 1;
    return;
  }

  std::vector<char> b = attractor(ng, alive, wopp, 1 - player);
  std::vector<char> rest2 = alive;
  for (size_t v = 0; v < n; v++)
    if (b[v]) rest2[v] = 0;
  std::vector<char> w0b(n, 0), w1b(n, 0);
  zielonka_rec(ng, rest2, w0b, w1b);
  std::vector<char>& wopp_out = player == 0 ? win1 : win0;
  std::vector<char>& wopp_b = player == 0 ? w1b : w0b;
  std::vector<char>& wme_out = player == 0 ? win0 : win1;
  std::vector<char>& wme_b = player == 0 ? w0b : w1b;
  for (size_t v = 0; v < n; v++) {
    if (b[v] || wopp_b[v]) wopp_out[v] = 1;
    if (wme_b[v]) wme_out[v] = 1;
  }
}

ExplicitResult finish(const ExplicitGame& g, const std::vector<char>& win0) {
  ExplicitResult r;
  r.acceptor_wins.assign(g.moves.size(), false);
  for (size_t v = 0; v < g.moves.size(); v++) r.acceptor_wins[v] = win0[v];
  r.initial_won = std::all_of(g.initial.begin(), g.initial.end(),
                              [&](int v) { return r.acceptor_wins[v]; });
  return r;
}

}  // namespace

ExplicitResult zielonka_solve(const ExplicitGame& g) {
  NodeGame ng = subdivide(g);
  size_t n = ng.owner.size();
  std::vector<char> alive(n, 1), win0(n, 0), win1(n, 0);
  zielonka_rec(ng, std::move(alive), win0, win1);
  return finish(g, win0);
}

ExplicitResult fixpoint_solve(const ExplicitGame& g) {
  size_t n = g.moves.size();
  int cmax = 0;
  for (auto& ms : g.moves)
    for (auto& e : ms) cmax = std::max(cmax, e.color);

  std::vector<std::vector<char>> x(cmax + 1);
  auto step = [&]() {
    std::vector<char> v(n, 0);
    for (size_t u = 0; u < n; u++) {
      bool good;
      if (g.owner[u] == 0) {
        good = false;
        for (auto& e : g.moves[u]) good = good || x[e.color][e.to];
      } else {
        good = true;
        for (auto& e : g.moves[u]) good = good && x[e.color][e.to];
      }
      v[u] = good;
    }
    return v;
  };
  std::function<std::vector<char>(int)> fix = [&](int c) {
    x[c].assign(n, c % 2 == 0 ? 1 : 0);
    for (;;) {
      std::vector<char> v = c == cmax ? step() : fix(c + 1);
      if (v == x[c]) return v;
      x[c] = std::move(v);
    }
  };
  return finish(g, fix(0));
}

std::vector<Lasso> enumerate_lassos(const Store& store, int max_prefix,
                                    int max_loop) {
  uint64_t letters = 1ull << store.prop_count();
  std::vector<Lasso> out;
  std::vector<uint64_t> prefix, loop;
  auto gen = [&](int plen, int llen) {
    prefix.assign(plen, 0);
    loop.assign(llen, 0);
    uint64_t ptotal = 1, ltotal = 1;
    for (int i = 0; i < plen; i++) ptotal *= letters;
    for (int i = 0; i < llen; i++) ltotal *= letters;
    for (uint64_t pi = 0; pi < ptotal; pi++) {
      uint64_t rem = pi;
      for (int i = 0; i < plen; i++) {
        prefix[i] = rem % letters;
        rem /= letters;
      }
      for (uint64_t li = 0; li < ltotal; li++) {
        uint64_t lrem = li;
        for (int i = 0; i < llen; i++) {
          loop[i] = lrem % letters;
          lrem /= letters;
        }
        out.push_back({prefix, loop});
      }
    }
  };
  for (int plen = 0; plen <= max_prefix; plen++)
    for (int llen = 1; llen <= max_loop; llen++) gen(plen, llen);
  return out;
}

}  // namespace cosy
