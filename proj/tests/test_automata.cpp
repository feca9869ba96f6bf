#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <tuple>

#include "cosy/automata.hpp"

using namespace cosy;

namespace {

Store make_store(int nprops) {
  std::vector<PropInfo> props;
  for (int i = 0; i < nprops; i++)
    props.push_back({"p" + std::to_string(i), PropKind::Input});
  return Store(props, false);
}

ParityAutomaton random_dpa(std::mt19937& rng, Store& s, int states,
                           int max_color) {
  int letters = 1 << s.prop_count();
  std::map<std::tuple<int, int, int>, Bdd> merged;
  for (int q = 0; q < states; q++)
    for (int x = 0; x < letters; x++) {
      int to = static_cast<int>(rng() % states);
      int c = static_cast<int>(rng() % (max_color + 1));
      auto [it, fresh] = merged.try_emplace(std::tuple{q, to, c}, s.lfalse());
      it->second = it->second | s.minterm(static_cast<uint64_t>(x));
    }
  ParityAutomaton a;
  a.store = &s;
  a.states = states;
  a.initial = 0;
  a.deterministic = a.complete = true;
  for (const auto& [k, p] : merged)
    a.trans.push_back({std::get<0>(k), p, std::get<1>(k), std::get<2>(k)});
  return a;
}

CoBuchiAutomaton random_ncw(std::mt19937& rng, Store& s, int states) {
  int letters = 1 << s.prop_count();
  CoBuchiAutomaton a;
  a.store = &s;
  a.states = states;
  a.initial = 0;
  std::map<std::tuple<int, int, int>, Bdd> merged;
  for (int q = 0; q < states; q++)
    for (int x = 0; x < letters; x++) {
      int fanout = 1 + static_cast<int>(rng() % 2);
      for (int f = 0; f < fanout; f++) {
        int to = static_cast<int>(rng() % states);
        int c = (rng() & 1) ? kAccepting : kRejecting;
        auto [it, fresh] =
            merged.try_emplace(std::tuple{q, to, c}, s.lfalse());
        it->second = it->second | s.minterm(static_cast<uint64_t>(x));
      }
    }
  for (const auto& [k, p] : merged)
    a.trans.push_back({std::get<0>(k), p, std::get<1>(k), std::get<2>(k)});
  return a;
}

CoBuchiAutomaton random_dcw(std::mt19937& rng, Store& s, int states) {
  int letters = 1 << s.prop_count();
  CoBuchiAutomaton a;
  a.store = &s;
  a.states = states;
  a.initial = 0;
  a.deterministic = true;
  std::map<std::tuple<int, int, int>, Bdd> merged;
  for (int q = 0; q < states; q++)
    for (int x = 0; x < letters; x++) {
      int to = static_cast<int>(rng() % states);
      int c = (rng() & 1) ? kAccepting : kRejecting;
      auto [it, fresh] = merged.try_emplace(std::tuple{q, to, c}, s.lfalse());
      it->second = it->second | s.minterm(static_cast<uint64_t>(x));
    }
  for (const auto& [k, p] : merged)
    a.trans.push_back({std::get<0>(k), p, std::get<1>(k), std::get<2>(k)});
  return a;
}

// All lassos with prefix length up to max_u and loop length up to max_v.
template <typename Fn>
void foreach_lasso(int letters, int max_u, int max_v, Fn fn) {
  Lasso w;
  for (int ul = 0; ul <= max_u; ul++) {
    uint64_t unum = 1;
    for (int i = 0; i < ul; i++) unum *= letters;
    for (uint64_t uc = 0; uc < unum; uc++) {
      w.prefix.assign(ul, 0);
      uint64_t rest = uc;
      for (int i = 0; i < ul; i++) {
        w.prefix[i] = rest % letters;
        rest /= letters;
      }
      for (int vl = 1; vl <= max_v; vl++) {
        uint64_t vnum = 1;
        for (int i = 0; i < vl; i++) vnum *= letters;
        for (uint64_t vc = 0; vc < vnum; vc++) {
          w.loop.assign(vl, 0);
          rest = vc;
          for (int i = 0; i < vl; i++) {
            w.loop[i] = rest % letters;
            rest /= letters;
          }
          fn(w);
        }
      }
    }
  }
}

// The alternation benchmark automaton: two states watching x then y, with
// a relief input u separating the middle color from the top one.
ParityAutomaton alternation_dpa(Store& s) {
  Bdd u = s.var(0), x = s.var(1), y = s.var(2);
  ParityAutomaton a;
  a.store = &s;
  a.states = 2;
  a.initial = 0;
  a.deterministic = a.complete = true;
  a.trans = {
      {0, (!x) & (!u), 0, 2}, {0, (!x) & u, 0, 1}, {0, x, 1, 0},
      {1, (!y) & (!u), 1, 2}, {1, (!y) & u, 1, 1}, {1, y, 0, 0},
  };
  return a;
}

}  // namespace

TEST_CASE("letter cells partition the alphabet") {
  Store s = make_store(3);
  std::mt19937 rng(5);
  for (int round = 0; round < 20; round++) {
    std::vector<Bdd> preds;
    for (int i = 0; i < 4; i++) {
      Bdd p = s.lfalse();
      for (uint64_t m = 0; m < 8; m++)
        if (rng() & 1) p = p | s.minterm(m);
      preds.push_back(p);
    }
    std::vector<Bdd> cells = letter_cells(s, preds);
    Bdd all = s.lfalse();
    for (size_t i = 0; i < cells.size(); i++) {
      CHECK(!cells[i].is_false());
      for (size_t j = i + 1; j < cells.size(); j++)
        CHECK((cells[i] & cells[j]).is_false());
      all = all | cells[i];
      for (Bdd p : preds) {
        Bdd meet = cells[i] & p;
        CHECK((meet.is_false() || meet == cells[i]));
      }
    }
    CHECK(all.is_true());
  }
}

TEST_CASE("color reduction on small loops") {
  Store s = make_store(1);
  Bdd p = s.var(0);
  auto loops = [&](int c0, int c1) {
    ParityAutomaton a;
    a.store = &s;
    a.states = 1;
    a.initial = 0;
    a.deterministic = a.complete = true;
    a.trans = {{0, p, 0, c0}, {0, (!p), 0, c1}};
    return a;
  };
  auto colors = [](const ParityAutomaton& a) {
    return std::pair{a.trans[0].color, a.trans[1].color};
  };
  CHECK(colors(reduce_colors(loops(0, 2))) == std::pair{0, 0});
  CHECK(colors(reduce_colors(loops(1, 2))) == std::pair{1, 2});
  CHECK(colors(reduce_colors(loops(2, 3))) == std::pair{0, 1});
  CHECK(colors(reduce_colors(loops(4, 4))) == std::pair{0, 0});
  CHECK(colors(reduce_colors(loops(3, 5))) == std::pair{1, 1});

  // a transition on no cycle may take any color
  ParityAutomaton b;
  b.store = &s;
  b.states = 2;
  b.initial = 0;
  b.deterministic = b.complete = true;
  b.trans = {{0, p, 0, 3}, {0, (!p), 1, 0}, {1, s.ltrue(), 1, 1}};
  ParityAutomaton rb = reduce_colors(b);
  CHECK(rb.trans[0].color == 1);  // odd self-loop
  CHECK(rb.trans[2].color == 1);
}

TEST_CASE("color reduction preserves the language") {
  Store s = make_store(2);
  std::mt19937 rng(17);
  for (int round = 0; round < 25; round++) {
    ParityAutomaton a = random_dpa(rng, s, 2 + rng() % 3, 1 + rng() % 4);
    ParityAutomaton r = reduce_colors(a);
    CHECK(r.max_color() <= a.max_color());
    DenseDpa da = densify(a), dr = densify(r);
    foreach_lasso(4, 2, 3, [&](const Lasso& w) {
      CHECK(lasso_member(da, w) == lasso_member(dr, w));
    });
  }
}

TEST_CASE("alternation automaton basics") {
  Store s = make_store(3);
  ParityAutomaton a = alternation_dpa(s);
  CHECK(a.max_color() == 2);
  ParityAutomaton r = reduce_colors(a);
  for (size_t i = 0; i < a.trans.size(); i++)
    CHECK(r.trans[i].color == a.trans[i].color);

  // letters pack as (u, x, y) with u the lowest bit
  uint64_t X = 2, Y = 4, REST = 0, RESTU = 1;
  CHECK(lasso_member(a, {{}, {X, Y}}));
  CHECK(lasso_member(a, {{}, {REST}}));
  CHECK(!lasso_member(a, {{}, {RESTU}}));
  CHECK(lasso_member(a, {{X}, {REST}}));  // parked before y: !y & !u is fine
  CHECK(!lasso_member(a, {{X}, {RESTU}}));
  CHECK(lasso_member(a, {{RESTU}, {X, Y}}));
}

TEST_CASE("breakpoint determinization on a guessing automaton") {
  Store s = make_store(1);
  Bdd a0 = s.var(0);
  CoBuchiAutomaton n;
  n.store = &s;
  n.states = 2;
  n.initial = 0;
  // stay forever, or guess that the letter stops appearing
  n.trans = {{0, s.ltrue(), 0, kRejecting},
             {0, s.ltrue(), 1, kRejecting},
             {1, (!a0), 1, kAccepting},
             {1, a0, 1, kRejecting}};
  CoBuchiAutomaton d = ncw_determinize(n);
  CHECK(d.deterministic);

  CoBuchiAutomaton ref;  // finitely many occurrences of the letter
  ref.store = &s;
  ref.states = 1;
  ref.initial = 0;
  ref.deterministic = true;
  ref.trans = {{0, (!a0), 0, kAccepting}, {0, a0, 0, kRejecting}};
  CHECK(language_equal(d, ref));
  CHECK(language_subset(d, ref));
  CHECK(language_subset(ref, d));
}

TEST_CASE("breakpoint determinization preserves the language") {
  Store s = make_store(2);
  std::mt19937 rng(23);
  for (int round = 0; round < 20; round++) {
    CoBuchiAutomaton n = random_ncw(rng, s, 2 + rng() % 2);
    CoBuchiAutomaton d = ncw_determinize(n);
    CHECK(d.deterministic);
    foreach_lasso(4, 2, 3, [&](const Lasso& w) {
      CHECK(lasso_member(n, w) == lasso_member(d, w));
    });
  }
}

TEST_CASE("language comparisons") {
  Store s = make_store(1);
  Bdd p = s.var(0);
  auto one_state = [&](int on_p, int on_not_p) {
    CoBuchiAutomaton a;
    a.store = &s;
    a.states = 1;
    a.initial = 0;
    a.deterministic = true;
    a.trans = {{0, p, 0, on_p}, {0, (!p), 0, on_not_p}};
    return a;
  };
  CoBuchiAutomaton all = one_state(kAccepting, kAccepting);
  CoBuchiAutomaton fin_p = one_state(kRejecting, kAccepting);
  CoBuchiAutomaton none = one_state(kRejecting, kRejecting);

  CHECK(language_subset(fin_p, all));
  CHECK(!language_subset(all, fin_p));
  CHECK(language_subset(none, fin_p));
  CHECK(!language_subset(fin_p, none));
  CHECK(language_equal(all, all));
  CHECK(!language_equal(all, none));

  // two states with identical rows are language-equal; the sink is not
  CoBuchiAutomaton twin;
  twin.store = &s;
  twin.states = 3;
  twin.initial = 0;
  twin.deterministic = true;
  twin.trans = {{0, p, 1, kAccepting},    {0, (!p), 2, kRejecting},
                {1, p, 1, kAccepting},    {1, (!p), 2, kRejecting},
                {2, s.ltrue(), 2, kRejecting}};
  CHECK(state_language_equal(twin, 0, 1));
  CHECK(!state_language_equal(twin, 0, 2));
}

TEST_CASE("language subset agrees with bounded word search") {
  Store s = make_store(2);
  std::mt19937 rng(31);
  for (int round = 0; round < 30; round++) {
    CoBuchiAutomaton a = random_dcw(rng, s, 2 + rng() % 2);
    CoBuchiAutomaton b = random_dcw(rng, s, 2 + rng() % 2);
    CHECK(language_subset(a, a));
    bool sub = language_subset(a, b);
    bool witness = false;
    foreach_lasso(4, 2, 3, [&](const Lasso& w) {
      if (!witness && lasso_member(a, w) && !lasso_member(b, w))
        witness = true;
    });
    if (witness) CHECK(!sub);
    if (sub) CHECK(!witness);
  }
}

TEST_CASE("dense tables match symbolic runs") {
  Store s = make_store(2);
  std::mt19937 rng(41);
  for (int round = 0; round < 15; round++) {
    ParityAutomaton a = random_dpa(rng, s, 2 + rng() % 3, 3);
    DenseDpa da = densify(a);
    CoBuchiAutomaton n = random_ncw(rng, s, 2 + rng() % 2);
    DenseNcw dn = densify(n);
    foreach_lasso(4, 2, 2, [&](const Lasso& w) {
      CHECK(lasso_member(a, w) == lasso_member(da, w));
      CHECK(lasso_member(n, w) == lasso_member(dn, w));
    });
  }
}

TEST_CASE("descriptions render predicates") {
  Store s = make_store(3);
  ParityAutomaton a = alternation_dpa(s);
  std::string d = describe(a);
  CHECK(d.find("2 states") != std::string::npos);
  CHECK(d.find("!p0 & !p1") != std::string::npos);
  CHECK(pred_to_string(s, s.ltrue()) == "true");
  CHECK(pred_to_string(s, s.var(1)) == "p1");
  CHECK(pred_to_string(s, (!s.var(0)) & s.var(2)) == "!p0 & p2");
}
