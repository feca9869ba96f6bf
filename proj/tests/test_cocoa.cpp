#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <random>
#include <tuple>

#include "cosy/cocoa.hpp"
#include "cosy/ltl.hpp"
#include "cosy/oracle.hpp"
#include "doctest.h"

using namespace cosy;

namespace {

Store make_store(int n) {
  std::vector<PropInfo> props;
  for (int i = 0; i < n; i++)
    props.push_back({"p" + std::to_string(i), PropKind::Output});
  return Store(props, false);
}

using EdgeMap = std::map<std::tuple<int, int, int>, Bdd>;

EdgeMap edge_map(const CoBuchiAutomaton& a) {
  EdgeMap m;
  for (const PTrans& t : a.trans) {
    auto [it, fresh] = m.try_emplace({t.from, t.to, t.color}, t.pred);
    if (!fresh) it->second = it->second | t.pred;
  }
  return m;
}

// Four-state deterministic automaton for "eventually constant": the
// canonical form drops the fourth state, whose safe language collapses
// into another one after normalization.
CoBuchiAutomaton eventually_constant(Store& s) {
  Bdd a = s.var(0);
  CoBuchiAutomaton d;
  d.store = &s;
  d.states = 4;
  d.initial = 0;
  d.deterministic = true;
  d.trans = {
      {0, s.ltrue(), 1, kAccepting}, {1, !a, 0, kAccepting},
      {1, a, 2, kRejecting},         {2, a, 2, kAccepting},
      {2, !a, 3, kRejecting},        {3, !a, 3, kAccepting},
      {3, a, 1, kAccepting},
  };
  return d;
}

ParityAutomaton alternation_dpa(Store& s) {
  Bdd u = s.var(0), x = s.var(1), y = s.var(2);
  ParityAutomaton a;
  a.store = &s;
  a.states = 2;
  a.initial = 0;
  a.trans = {
      {0, (!x) & (!u), 0, 2}, {0, (!x) & u, 0, 1}, {0, x, 1, 0},
      {1, (!y) & (!u), 1, 2}, {1, (!y) & u, 1, 1}, {1, y, 0, 0},
  };
  a.deterministic = a.complete = true;
  return a;
}

}  // namespace

TEST_CASE("canonical form of the eventually-constant automaton") {
  Store s = make_store(1);
  Bdd a = s.var(0);
  CoBuchiAutomaton can = canonicalize(eventually_constant(s));

  CHECK(can.states == 3);
  CHECK(can.initial == 0);
  CHECK(can.gfg);
  CHECK(can.canonical);
  CHECK(!can.deterministic);
  CHECK(can.lang_class == std::vector<int>({0, 0, 0}));
  CHECK(canonical_violation(can) == std::nullopt);

  EdgeMap m = edge_map(can);
  CHECK(m.size() == 9);
  CHECK(m.at({0, 1, kAccepting}) == s.ltrue());
  CHECK(m.at({1, 0, kAccepting}) == !a);
  CHECK(m.at({2, 2, kAccepting}) == a);
  for (int t = 0; t < 3; t++) {
    CHECK(m.at({1, t, kRejecting}) == a);
    CHECK(m.at({2, t, kRejecting}) == !a);
  }

  CoBuchiAutomaton in = eventually_constant(s);
  for (const Lasso& l : enumerate_lassos(s, 4, 4))
    REQUIRE(lasso_member(in, l) == lasso_member(can, l));

  // Round trip through determinization reproduces the same automaton.
  CoBuchiAutomaton again = canonicalize(can);
  CHECK(again.states == 3);
  CHECK(canonical_violation(again) == std::nullopt);
  for (const Lasso& l : enumerate_lassos(s, 3, 3))
    REQUIRE(lasso_member(can, l) == lasso_member(again, l));
}

TEST_CASE("canonical form of trivial languages") {
  Store s = make_store(1);
  CoBuchiAutomaton full;
  full.store = &s;
  full.states = 2;
  full.initial = 0;
  full.deterministic = true;
  full.trans = {{0, s.ltrue(), 1, kAccepting}, {1, s.ltrue(), 0, kAccepting}};
  CoBuchiAutomaton cf = canonicalize(full);
  CHECK(cf.states == 1);
  CHECK(canonical_violation(cf) == std::nullopt);
  CHECK(lasso_member(cf, {{}, {0}}));

  CoBuchiAutomaton empty = full;
  empty.trans = {{0, s.ltrue(), 1, kRejecting}, {1, s.ltrue(), 0, kRejecting}};
  CoBuchiAutomaton ce = canonicalize(empty);
  CHECK(ce.states == 1);
  CHECK(canonical_violation(ce) == std::nullopt);
  CHECK(!lasso_member(ce, {{}, {0}}));
  CHECK(!lasso_member(ce, {{1}, {0, 1}}));
}

TEST_CASE("violation detector notices tampering") {
  Store s = make_store(1);
  CoBuchiAutomaton can = canonicalize(eventually_constant(s));
  REQUIRE(canonical_violation(can) == std::nullopt);

  CoBuchiAutomaton broken = can;
  for (size_t i = 0; i < broken.trans.size(); i++)
    if (broken.trans[i].color == kRejecting && broken.trans[i].from == 1 &&
        broken.trans[i].to == 2) {
      broken.trans.erase(broken.trans.begin() + i);
      break;
    }
  CHECK(canonical_violation(broken).has_value());

  CoBuchiAutomaton unreach = can;
  unreach.states += 1;
  unreach.lang_class.push_back(0);
  unreach.trans.push_back({3, s.ltrue(), 3, kAccepting});
  CHECK(canonical_violation(unreach) == std::string("unreachable state"));
}

TEST_CASE("random automata canonicalize to equivalent canonical forms") {
  std::mt19937 rng(91);
  Store s = make_store(2);
  std::vector<Bdd> letters;
  for (int v = 0; v < 4; v++)
    letters.push_back(s.minterm(v));
  for (int round = 0; round < 60; round++) {
    int n = 3 + (int)(rng() % 2);
    CoBuchiAutomaton d;
    d.store = &s;
    d.states = n;
    d.initial = 0;
    d.deterministic = true;
    std::map<std::tuple<int, int, int>, Bdd> merged;
    for (int q = 0; q < n; q++)
      for (int v = 0; v < 4; v++) {
        int to = (int)(rng() % n);
        int col = rng() % 2 ? kAccepting : kRejecting;
        auto [it, fresh] = merged.try_emplace({q, to, col}, s.lfalse());
        it->second = it->second | letters[v];
      }
    for (const auto& [key, pred] : merged)
      d.trans.push_back(
          {std::get<0>(key), pred, std::get<1>(key), std::get<2>(key)});

    CoBuchiAutomaton can = canonicalize(d);
    REQUIRE(canonical_violation(can) == std::nullopt);
    REQUIRE(can.states <= d.states);
    for (const Lasso& l : enumerate_lassos(s, 3, 3))
      REQUIRE(lasso_member(d, l) == lasso_member(can, l));
  }
}

TEST_CASE("chain translation of single-liveness automata") {
  Store s = make_store(1);
  Bdd a = s.var(0);

  ParityAutomaton inf;  // infinitely often a
  inf.store = &s;
  inf.states = 1;
  inf.initial = 0;
  inf.trans = {{0, a, 0, 0}, {0, !a, 0, 1}};
  inf.deterministic = inf.complete = true;
  CocoaChain ci = dpa_to_chain(inf);
  REQUIRE(ci.levels.size() == 1);
  CHECK(ci.levels[0].states == 1);
  CHECK(lasso_member(ci.levels[0], {{}, {0}}));       // finitely many a
  CHECK(!lasso_member(ci.levels[0], {{}, {1}}));
  CHECK(!lasso_member(ci.levels[0], {{}, {0, 1}}));

  ParityAutomaton fin;  // finitely often not-a
  fin.store = &s;
  fin.states = 1;
  fin.initial = 0;
  fin.trans = {{0, a, 0, 2}, {0, !a, 0, 1}};
  fin.deterministic = fin.complete = true;
  CocoaChain cf = dpa_to_chain(fin);
  REQUIRE(cf.levels.size() == 2);
  CHECK(cf.levels[0].states == 1);
  CHECK(lasso_member(cf.levels[0], {{}, {0}}));       // full language
  CHECK(lasso_member(cf.levels[0], {{}, {1}}));
  CHECK(lasso_member(cf.levels[1], {{}, {1}}));       // finitely many not-a
  CHECK(!lasso_member(cf.levels[1], {{}, {0, 1}}));

  ParityAutomaton triv = inf;
  triv.trans = {{0, s.ltrue(), 0, 0}};
  CHECK(dpa_to_chain(triv).levels.empty());

  ParityAutomaton none = inf;
  none.trans = {{0, s.ltrue(), 0, 1}};
  CocoaChain cn = dpa_to_chain(none);
  REQUIRE(cn.levels.size() == 1);
  CHECK(!lasso_member(cn, {{}, {0}}));
  CHECK(!lasso_member(cn, {{}, {1}}));

  for (const Lasso& l : enumerate_lassos(s, 3, 3)) {
    REQUIRE(lasso_member(ci, l) == lasso_member(inf, l));
    REQUIRE(lasso_member(cf, l) == lasso_member(fin, l));
    REQUIRE(lasso_member(cn, l) == lasso_member(none, l));
  }
}

TEST_CASE("chain of the alternation automaton") {
  Store s({{"u", PropKind::Input},
           {"x", PropKind::Output},
           {"y", PropKind::Output}},
          false);
  Bdd u = s.var(0), x = s.var(1), y = s.var(2);
  ParityAutomaton dpa = alternation_dpa(s);
  CocoaChain chain = dpa_to_chain(dpa);
  REQUIRE(chain.levels.size() == 2);

  const CoBuchiAutomaton& l1 = chain.levels[0];
  REQUIRE(l1.states == 2);
  CHECK(l1.initial == 0);
  EdgeMap m1 = edge_map(l1);
  CHECK(m1.size() == 6);
  CHECK(m1.at({0, 0, kAccepting}) == !x);
  CHECK(m1.at({1, 1, kAccepting}) == !y);
  CHECK(m1.at({0, 0, kRejecting}) == x);
  CHECK(m1.at({0, 1, kRejecting}) == x);
  CHECK(m1.at({1, 0, kRejecting}) == y);
  CHECK(m1.at({1, 1, kRejecting}) == y);

  const CoBuchiAutomaton& l2 = chain.levels[1];
  REQUIRE(l2.states == 2);
  EdgeMap m2 = edge_map(l2);
  CHECK(m2.size() == 6);
  CHECK(m2.at({0, 0, kAccepting}) == ((!x) & (!u)));
  CHECK(m2.at({1, 1, kAccepting}) == ((!y) & (!u)));
  CHECK(m2.at({0, 0, kRejecting}) == (x | u));
  CHECK(m2.at({0, 1, kRejecting}) == (x | u));
  CHECK(m2.at({1, 0, kRejecting}) == (y | u));
  CHECK(m2.at({1, 1, kRejecting}) == (y | u));

  for (const Lasso& l : enumerate_lassos(s, 2, 2))
    REQUIRE(lasso_member(chain, l) == lasso_member(dpa, l));
}

TEST_CASE("products of the alternation chain") {
  Store s({{"u", PropKind::Input},
           {"x", PropKind::Output},
           {"y", PropKind::Output}},
          false);
  ParityAutomaton dpa = alternation_dpa(s);
  CocoaChain chain = dpa_to_chain(dpa);

  CocoaProduct opt = chain_product(chain, ProductKind::Optimized);
  CHECK(opt.tuples.size() == 2);
  CHECK(opt.levels == 2);
  CHECK(opt.max_color() == 2);
  CHECK(opt.tuples[opt.initial] == std::vector<int>({0, 0}));

  int nondet_rej = 0;
  for (const auto& ms : opt.moves) {
    CHECK(ms.size() == 3);
    for (const ProductMove& m : ms) {
      if (m.rejector_controls && m.choices.size() > 1) {
        nondet_rej++;
        CHECK(m.color == 0);
        CHECK(m.choices.size() == 2);
      }
    }
  }
  CHECK(nondet_rej == 2);

  CocoaProduct red = chain_product(chain, ProductKind::Reduced);
  CHECK(red.tuples.size() == 2);
  CocoaProduct naive = chain_product(chain, ProductKind::Naive);
  CHECK(naive.tuples.size() >= red.tuples.size());

  for (const Lasso& l : enumerate_lassos(s, 1, 2)) {
    bool want = lasso_member(chain, l);
    REQUIRE(lasso_member(naive, l) == want);
    REQUIRE(lasso_member(red, l) == want);
    REQUIRE(lasso_member(opt, l) == want);
  }
}

TEST_CASE("empty chain product") {
  Store s = make_store(1);
  CocoaChain chain;
  chain.store = &s;
  CocoaProduct p = chain_product(chain, ProductKind::Optimized);
  CHECK(p.tuples.size() == 1);
  CHECK(lasso_member(p, {{}, {0}}));
  CHECK(lasso_member(p, {{1}, {0, 1}}));
}

TEST_CASE("recurrence-implication products stay at grid size") {
  for (int m = 1; m <= 2; m++)
    for (int n = 1; n <= 2; n++) {
      std::vector<PropInfo> props;
      for (int i = 0; i < m; i++)
        props.push_back({"a" + std::to_string(i), PropKind::Input});
      for (int j = 0; j < n; j++)
        props.push_back({"g" + std::to_string(j), PropKind::Output});
      Store s(props, false);

      std::string f = "(";
      for (int i = 0; i < m; i++)
        f += (i ? " & " : "") + std::string("G F a") + std::to_string(i);
      f += ") -> (";
      for (int j = 0; j < n; j++)
        f += (j ? " & " : "") + std::string("G F g") + std::to_string(j);
      f += ")";

      Classified cls = classify(parse_ltl(f, s), s);
      REQUIRE(cls.combo.has_value());
      ParityAutomaton dpa = gfcombo_to_dpa(*cls.combo, s);
      CocoaChain chain = dpa_to_chain(dpa);
      REQUIRE(chain.levels.size() == 2);
      CHECK(chain.levels[0].states == n);
      CHECK(chain.levels[1].states == m * n);

      CocoaProduct red = chain_product(chain, ProductKind::Reduced);
      CocoaProduct opt = chain_product(chain, ProductKind::Optimized);
      CHECK((int)red.tuples.size() == m * n);
      CHECK((int)opt.tuples.size() == m * n);

      for (const Lasso& l : enumerate_lassos(s, 1, 2))
        REQUIRE(lasso_member(opt, l) == lasso_member(dpa, l));
    }
}

TEST_CASE("random parity automata round-trip through chains and products") {
  std::mt19937 rng(2024);
  Store s = make_store(2);
  std::vector<Bdd> letters;
  for (int v = 0; v < 4; v++)
    letters.push_back(s.minterm(v));
  for (int round = 0; round < 20; round++) {
    int n = 1 + (int)(rng() % 4);
    ParityAutomaton a;
    a.store = &s;
    a.states = n;
    a.initial = 0;
    std::map<std::tuple<int, int, int>, Bdd> merged;
    for (int q = 0; q < n; q++)
      for (int v = 0; v < 4; v++) {
        int to = (int)(rng() % n), c = (int)(rng() % 4);
        auto [it, fresh] = merged.try_emplace({q, to, c}, s.lfalse());
        it->second = it->second | letters[v];
      }
    for (const auto& [key, pred] : merged)
      a.trans.push_back(
          {std::get<0>(key), pred, std::get<1>(key), std::get<2>(key)});
    a.deterministic = a.complete = true;

    CocoaChain chain = dpa_to_chain(a);
    for (const CoBuchiAutomaton& lvl : chain.levels)
      REQUIRE(canonical_violation(lvl) == std::nullopt);

    CocoaProduct naive = chain_product(chain, ProductKind::Naive);
    CocoaProduct red = chain_product(chain, ProductKind::Reduced);
    CocoaProduct opt = chain_product(chain, ProductKind::Optimized);
    REQUIRE(red.tuples.size() <= naive.tuples.size());
    REQUIRE(opt.tuples.size() == red.tuples.size());

    for (const Lasso& l : enumerate_lassos(s, 2, 2)) {
      bool want = lasso_member(a, l);
      REQUIRE(lasso_member(chain, l) == want);
      REQUIRE(lasso_member(naive, l) == want);
      REQUIRE(lasso_member(red, l) == want);
      REQUIRE(lasso_member(opt, l) == want);
    }
  }
}
