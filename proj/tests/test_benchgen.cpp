#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "cosy/benchgen.hpp"
#include "cosy/fixpoint.hpp"
#include "cosy/oracle.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cosy;

namespace {

struct Pipeline {
  SymbolicGame game;
  Classified cls;
  ParityAutomaton dpa;

  explicit Pipeline(const BenchmarkInstance& b) : game(parse_game(b.text)) {
    cls = classify(parse_ltl(game.objective_text, *game.store), *game.store);
    dpa = gfcombo_to_dpa(*cls.combo, *game.store, 16);
  }
};

// Solves with every applicable engine, checks the winning regions match,
// and optionally replays the product game explicitly.
void check_realizable(Pipeline& p, bool expected, size_t oracle_cap = 20000) {
  SolveReport rp = solve_parity_dpa(p.game, p.dpa);
  CocoaProduct prod = chain_product(dpa_to_chain(p.dpa), ProductKind::Optimized);
  SolveReport rc = solve_cocoa(p.game, prod);
  CHECK(rp.realizable == expected);
  CHECK(rc.realizable == expected);
  CHECK(rp.winning == rc.winning);
  if (p.cls.gr1) {
    SolveReport rg = solve_gr1(p.game, *p.cls.gr1);
    CHECK(rg.realizable == expected);
    CHECK(rg.winning == rp.winning);
  }
  if (oracle_cap) {
    ExplicitGame eg = expand(p.game, p.dpa, oracle_cap);
    CHECK(zielonka_solve(eg).initial_won == expected);
  }
}

int count_char(const RobotMap& m, char ch) {
  int n = 0;
  for (const auto& row : m.rows)
    for (char c : row)
      if (c == ch) ++n;
  return n;
}

}  // namespace

TEST_CASE("generators are deterministic") {
  CHECK(gen_lift(3, Variant::Gr1).text == gen_lift(3, Variant::Gr1).text);
  CHECK(gen_amba(2, Variant::Ltl).text == gen_amba(2, Variant::Ltl).text);
  RobotMap m = ring_map("r", 8, 16, 2, 1);
  CHECK(gen_robot(m, Variant::Ltl).text == gen_robot(m, Variant::Ltl).text);
  CHECK(manifest_json(shipped_suite()) == manifest_json(shipped_suite()));
}

TEST_CASE("every shipped instance parses and classifies as declared") {
  std::vector<BenchmarkInstance> suite = shipped_suite();
  CHECK(suite.size() == 54);
  std::set<std::string> names;
  for (const BenchmarkInstance& b : suite) {
    CAPTURE(b.name);
    CHECK(names.insert(b.name).second);
    SymbolicGame g = parse_game(b.text);
    CHECK((int)(g.inputs.size() + g.outputs.size()) == b.props);
    Classified c = classify(parse_ltl(g.objective_text, *g.store), *g.store);
    if (b.variant == Variant::Gr1) {
      CHECK(c.kind == ObjKind::Gr1Shape);
    } else {
      CHECK(c.kind == ObjKind::GfCombo);
    }
    REQUIRE(c.combo.has_value());
    CHECK(c.combo->atoms.size() <= 16);
  }
}

TEST_CASE("lift instances are realizable under every engine") {
  for (int floors : {2, 3}) {
    for (Variant v : {Variant::Gr1, Variant::Ltl}) {
      CAPTURE(floors);
      Pipeline p(gen_lift(floors, v));
      check_realizable(p, true);
    }
  }
  // the recurrence-implication product folds back to the three-variable form
  Pipeline p(gen_lift(2, Variant::Gr1));
  CocoaProduct prod = chain_product(dpa_to_chain(p.dpa), ProductKind::Optimized);
  CHECK(solve_cocoa(p.game, prod).folded);
}

TEST_CASE("amba instances are realizable under every engine") {
  for (int clients : {1, 2}) {
    for (Variant v : {Variant::Gr1, Variant::Ltl}) {
      CAPTURE(clients);
      Pipeline p(gen_amba(clients, v));
      check_realizable(p, true);
    }
  }
}

TEST_CASE("persistence variants pin their color counts") {
  for (int floors : {2, 3}) {
    Pipeline p(gen_lift(floors, Variant::Ltl));
    CHECK(reduce_colors(p.dpa).max_color() == 4);
  }
  for (int clients : {1, 2}) {
    Pipeline p(gen_amba(clients, Variant::Ltl));
    CHECK(reduce_colors(p.dpa).max_color() == 6);
  }
}

TEST_CASE("trivial robot maps without a patrol loop") {
  Pipeline g(gen_robot({"still", {"R.", ".S"}}, Variant::Gr1));
  CHECK(g.cls.kind == ObjKind::Gr1Shape);
  check_realizable(g, true);

  Pipeline l(gen_robot({"still_x", {"RX", ".S"}}, Variant::Ltl));
  CHECK(l.cls.kind == ObjKind::GfCombo);
  check_realizable(l, true);
}

TEST_CASE("small patrol maps agree with the explicit game") {
  // room outside the loop: the robot can wait next to the door untouched
  RobotMap mini{"mini", {"Hoo.", "o.oR", "oooS"}};
  Pipeline g(gen_robot(mini, Variant::Gr1));
  check_realizable(g, true);

  RobotMap minix{"minix", {"HooX", "o.oR", "oooS"}};
  Pipeline l(gen_robot(minix, Variant::Ltl));
  check_realizable(l, true, 120000);

  // room inside the loop: reaching it forces the robot across the patrol
  RobotMap cross{"cross", {"Hooooo..", "o..S.oR.", "oooooo..", "........"}};
  Pipeline cg(gen_robot(cross, Variant::Gr1));
  check_realizable(cg, true, 120000);

  RobotMap crossx{"crossx", {"Hooooo..", "o..S.oR.", "oooooo..", ".......X"}};
  Pipeline cl(gen_robot(crossx, Variant::Ltl));
  check_realizable(cl, true, 400000);
}

TEST_CASE("a small ring map is realizable") {
  RobotMap m = ring_map("r68", 6, 8, 1, 0);
  for (Variant v : {Variant::Gr1, Variant::Ltl}) {
    Pipeline p(gen_robot(m, v));
    check_realizable(p, true, 0);
  }
}

TEST_CASE("ring map geometry") {
  std::vector<RobotMap> maps = shipped_robot_maps();
  CHECK(maps.size() == 16);
  std::set<std::string> names;
  for (size_t i = 0; i < maps.size(); ++i) {
    const RobotMap& m = maps[i];
    CAPTURE(m.name);
    CHECK(names.insert(m.name).second);
    CHECK(m.rows.size() == 8);
    for (const auto& row : m.rows) CHECK(row.size() == 16);
    int services = (int)i / 4 + 1;
    CHECK(count_char(m, 'S') == services);
    CHECK(count_char(m, 'H') == 1);
    CHECK(count_char(m, 'R') == 1);
    CHECK(count_char(m, 'X') == 1);
    BenchmarkInstance b = gen_robot(m, Variant::Gr1);
    CHECK(b.props == 25 + services);
    CHECK(b.props >= 24);
    CHECK(b.props <= 53);
  }
}

TEST_CASE("inconsistent maps are rejected") {
  auto gen = [](std::vector<std::string> rows,
                Variant v = Variant::Gr1) {
    return gen_robot({"bad", std::move(rows)}, v);
  };
  CHECK_THROWS_AS(gen({"R"}), std::invalid_argument);          // one column
  CHECK_THROWS_AS(gen({"R.", "..."}), std::invalid_argument);  // ragged
  CHECK_THROWS_AS(gen({"R?"}), std::invalid_argument);         // unknown cell
  CHECK_THROWS_AS(gen({"RR"}), std::invalid_argument);
  CHECK_THROWS_AS(gen({"..", ".."}), std::invalid_argument);   // no start
  CHECK_THROWS_AS(gen({"Ro", ".o"}), std::invalid_argument);   // no home
  CHECK_THROWS_AS(gen({"HH", "oo", "R."}), std::invalid_argument);
  CHECK_THROWS_AS(gen({"Ho", ".o", "R."}), std::invalid_argument);  // open path
  // two separate loops pass the local degree check but not the walk
  CHECK_THROWS_AS(gen({"Ho.ooR", "oo.oo."}), std::invalid_argument);
  CHECK_THROWS_AS(gen({"R#S"}), std::invalid_argument);  // walled-off room
  CHECK_THROWS_AS(gen({"R.", ".S"}, Variant::Ltl), std::invalid_argument);
  CHECK_THROWS_AS(ring_map("r", 5, 8, 1), std::invalid_argument);
  CHECK_THROWS_AS(ring_map("r", 8, 6, 3), std::invalid_argument);
}

TEST_CASE("the manifest lists every instance") {
  std::vector<BenchmarkInstance> suite = shipped_suite();
  nlohmann::json m = nlohmann::json::parse(manifest_json(suite));
  REQUIRE(m.is_array());
  REQUIRE(m.size() == suite.size());
  CHECK(m[0]["name"] == "lift_2_gr1");
  CHECK(m[0]["family"] == "lift");
  CHECK(m[0]["variant"] == "gr1");
  CHECK(m[0]["props"] == 3);
  for (const auto& e : m) {
    CHECK(e.contains("params"));
    CHECK(e["props"].get<int>() >= 1);
  }
}
