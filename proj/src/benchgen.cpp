#include "cosy/benchgen.hpp"

#include "json.hpp"

#include <queue>
#include <set>
#include <stdexcept>
#include <utility>

namespace cosy {

namespace {

std::string join(const std::vector<std::string>& parts,
                 const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// left and right are lists of already-parenthesized recurrence terms.
std::string implication(const std::vector<std::string>& left,
                        const std::vector<std::string>& right) {
  if (right.empty()) return "true";
  std::string rhs = join(right, " & ");
  if (left.empty()) return rhs;
  return "(" + join(left, " & ") + ") -> (" + rhs + ")";
}

std::string variant_suffix(Variant v) {
  return v == Variant::Ltl ? "_ltl" : "_gr1";
}

}  // namespace

BenchmarkInstance gen_lift(int floors, Variant v) {
  if (floors < 2)
    throw std::invalid_argument("gen_lift: need at least 2 floors");
  auto p = [](int i) { return "p" + std::to_string(i); };

  std::string t = "[INPUT]\nu\n";
  if (v == Variant::Ltl) t += "c\n";
  t += "[OUTPUT]\n";
  for (int i = 1; i <= floors; ++i) t += p(i) + "\n";
  if (v == Variant::Ltl) t += "o\n";

  t += "[INIT]\n" + p(1) + "\n";
  for (int i = 2; i <= floors; ++i) t += "!" + p(i) + "\n";

  t += "[TRANS]\n";
  {
    std::vector<std::string> some;
    for (int i = 1; i <= floors; ++i) some.push_back(p(i) + "'");
    t += join(some, " | ") + "\n";
  }
  {
    std::vector<std::string> pairs;
    for (int i = 1; i <= floors; ++i)
      for (int j = i + 1; j <= floors; ++j)
        pairs.push_back("!(" + p(i) + "' & " + p(j) + "')");
    t += join(pairs, " & ") + "\n";
  }
  for (int i = 1; i <= floors; ++i) {
    std::vector<std::string> adj;
    if (i > 1) adj.push_back(p(i - 1) + "'");
    adj.push_back(p(i) + "'");
    if (i < floors) adj.push_back(p(i + 1) + "'");
    t += p(i) + " -> (" + join(adj, " | ") + ")\n";
  }

  std::vector<std::string> left{"(G F u)"};
  if (v == Variant::Ltl) left.push_back("((G F c) -> (G F o))");
  std::vector<std::string> right;
  for (int i = 1; i <= floors; ++i) right.push_back("(G F " + p(i) + ")");
  t += "[LIVENESS]\n" + implication(left, right) + "\n";

  BenchmarkInstance b;
  b.family = "lift";
  b.name = "lift_" + std::to_string(floors) + variant_suffix(v);
  b.params = "floors=" + std::to_string(floors);
  b.variant = v;
  b.props = floors + (v == Variant::Ltl ? 3 : 1);
  b.text = std::move(t);
  return b;
}

BenchmarkInstance gen_amba(int clients, Variant v) {
  if (clients < 1)
    throw std::invalid_argument("gen_amba: need at least 1 client");
  auto g = [](int i) { return "g" + std::to_string(i); };

  std::string t = "[INPUT]\nready\n";
  if (v == Variant::Ltl) t += "busy\ndone\n";
  t += "[OUTPUT]\n";
  for (int i = 1; i <= clients; ++i) t += g(i) + "\n";
  if (v == Variant::Ltl) t += "e\n";

  t += "[INIT]\n" + g(1) + "\n";
  for (int i = 2; i <= clients; ++i) t += "!" + g(i) + "\n";

  t += "[TRANS]\n";
  {
    std::vector<std::string> some;
    for (int i = 1; i <= clients; ++i) some.push_back(g(i) + "'");
    t += join(some, " | ") + "\n";
  }
  if (clients > 1) {
    std::vector<std::string> pairs;
    for (int i = 1; i <= clients; ++i)
      for (int j = i + 1; j <= clients; ++j)
        pairs.push_back("!(" + g(i) + "' & " + g(j) + "')");
    t += join(pairs, " & ") + "\n";
  }

  std::vector<std::string> left{"(G F ready)"};
  if (v == Variant::Ltl) left.push_back("((G F busy) -> (G F done))");
  std::vector<std::string> right;
  if (v == Variant::Ltl) right.push_back("(F G !e)");
  for (int i = 1; i <= clients; ++i) right.push_back("(G F " + g(i) + ")");
  t += "[LIVENESS]\n" + implication(left, right) + "\n";

  BenchmarkInstance b;
  b.family = "amba";
  b.name = "amba_" + std::to_string(clients) + variant_suffix(v);
  b.params = "clients=" + std::to_string(clients);
  b.variant = v;
  b.props = clients + (v == Variant::Ltl ? 4 : 1);
  b.text = std::move(t);
  return b;
}

namespace {

using Cell = std::pair<int, int>;

constexpr int kDr[4] = {-1, 0, 1, 0};  // N E S W
constexpr int kDc[4] = {0, 1, 0, -1};

struct Layout {
  int rows = 0;
  int cols = 0;
  int bits = 0;  // column bits
  std::vector<std::string> g;
  Cell start{-1, -1};
  std::vector<Cell> rooms;  // reading order, door i+1 belongs to rooms[i]
  std::vector<Cell> avoid;
  std::vector<Cell> loop;  // patrol order, loop[0] is the home cell
};

[[noreturn]] void bad_map(const std::string& name, const std::string& why) {
  throw std::invalid_argument("robot map '" + name + "': " + why);
}

Layout read_map(const RobotMap& m) {
  Layout L;
  L.g = m.rows;
  L.rows = (int)L.g.size();
  if (L.rows == 0) bad_map(m.name, "empty map");
  L.cols = (int)L.g[0].size();
  for (const auto& row : L.g)
    if ((int)row.size() != L.cols) bad_map(m.name, "rows differ in length");
  if (L.cols < 2) bad_map(m.name, "needs at least two columns");
  while ((1 << L.bits) < L.cols) ++L.bits;

  std::set<Cell> track;
  Cell home{-1, -1};
  int nr = 0, nh = 0;
  for (int r = 0; r < L.rows; ++r) {
    for (int c = 0; c < L.cols; ++c) {
      switch (L.g[r][c]) {
        case '#':
        case '.':
          break;
        case 'o':
          track.insert({r, c});
          break;
        case 'H':
          track.insert({r, c});
          home = {r, c};
          ++nh;
          break;
        case 'S':
          L.rooms.push_back({r, c});
          break;
        case 'R':
          L.start = {r, c};
          ++nr;
          break;
        case 'X':
          L.avoid.push_back({r, c});
          break;
        default:
          bad_map(m.name, std::string("unknown cell '") + L.g[r][c] + "'");
      }
    }
  }
  if (nr != 1) bad_map(m.name, "needs exactly one robot start");
  if (!track.empty()) {
    if (nh != 1) bad_map(m.name, "patrol loop needs exactly one home cell");
    for (const Cell& t : track) {
      int n = 0;
      for (int d = 0; d < 4; ++d)
        if (track.count({t.first + kDr[d], t.second + kDc[d]})) ++n;
      if (n != 2) bad_map(m.name, "patrol loop is not a single cycle");
    }
    Cell prev = home, cur = home;
    for (int d = 0; d < 4; ++d) {
      Cell n{home.first + kDr[d], home.second + kDc[d]};
      if (track.count(n)) {
        cur = n;
        break;
      }
    }
    L.loop.push_back(home);
    while (cur != home) {
      L.loop.push_back(cur);
      for (int d = 0; d < 4; ++d) {
        Cell n{cur.first + kDr[d], cur.second + kDc[d]};
        if (n != prev && track.count(n)) {
          prev = cur;
          cur = n;
          break;
        }
      }
    }
    if (L.loop.size() != track.size())
      bad_map(m.name, "patrol loop is not a single cycle");
  }

  std::set<Cell> seen{L.start};
  std::queue<Cell> q;
  q.push(L.start);
  while (!q.empty()) {
    Cell c = q.front();
    q.pop();
    for (int d = 0; d < 4; ++d) {
      Cell n{c.first + kDr[d], c.second + kDc[d]};
      if (n.first < 0 || n.first >= L.rows || n.second < 0 ||
          n.second >= L.cols)
        continue;
      if (L.g[n.first][n.second] == '#' || seen.count(n)) continue;
      seen.insert(n);
      q.push(n);
    }
  }
  for (const Cell& s : L.rooms)
    if (!seen.count(s)) bad_map(m.name, "service room unreachable from the start");
  return L;
}

// One-hot row bits plus binary column bits; who is 'r' or 'o'.
std::string cell_pred(const Layout& L, char who, Cell cell, bool primed) {
  std::string tick = primed ? "'" : "";
  std::vector<std::string> lits;
  for (int r = 0; r < L.rows; ++r)
    lits.push_back((r == cell.first ? "" : "!") + std::string(1, who) + "r" +
                   std::to_string(r) + tick);
  for (int b = 0; b < L.bits; ++b)
    lits.push_back((((cell.second >> b) & 1) ? "" : "!") +
                   std::string(1, who) + "x" + std::to_string(b) + tick);
  return "(" + join(lits, " & ") + ")";
}

}  // namespace

BenchmarkInstance gen_robot(const RobotMap& map, Variant v) {
  Layout L = read_map(map);
  if (v == Variant::Ltl && L.avoid.empty())
    bad_map(map.name, "ltl variant needs at least one X cell");
  bool patrol = !L.loop.empty();
  int k = (int)L.rooms.size();
  auto room_index = [&](Cell c) {
    for (int i = 0; i < k; ++i)
      if (L.rooms[i] == c) return i;
    return -1;
  };

  std::string t = "[INPUT]\n";
  if (patrol) t += "adv\n";
  for (int i = 1; i <= k; ++i) t += "d" + std::to_string(i) + "\n";
  t += "[OUTPUT]\n";
  for (int r = 0; r < L.rows; ++r) t += "rr" + std::to_string(r) + "\n";
  for (int b = 0; b < L.bits; ++b) t += "rx" + std::to_string(b) + "\n";
  if (patrol) {
    for (int r = 0; r < L.rows; ++r) t += "or" + std::to_string(r) + "\n";
    for (int b = 0; b < L.bits; ++b) t += "ox" + std::to_string(b) + "\n";
  }

  t += "[INIT]\n" + cell_pred(L, 'r', L.start, false) + "\n";
  if (patrol) t += cell_pred(L, 'o', L.loop[0], false) + "\n";

  t += "[TRANS]\n";
  for (int r = 0; r < L.rows; ++r) {
    for (int c = 0; c < L.cols; ++c) {
      if (L.g[r][c] == '#') continue;
      std::vector<std::string> mv{cell_pred(L, 'r', {r, c}, true)};
      for (int d = 0; d < 4; ++d) {
        Cell n{r + kDr[d], c + kDc[d]};
        if (n.first < 0 || n.first >= L.rows || n.second < 0 ||
            n.second >= L.cols || L.g[n.first][n.second] == '#')
          continue;
        std::string step = cell_pred(L, 'r', n, true);
        int ri = room_index(n);
        if (ri >= 0)
          step = "(" + step + " & d" + std::to_string(ri + 1) + "')";
        mv.push_back(step);
      }
      t += cell_pred(L, 'r', {r, c}, false) + " -> (" + join(mv, " | ") +
           ")\n";
    }
  }
  if (patrol) {
    for (size_t i = 0; i < L.loop.size(); ++i) {
      const Cell& here = L.loop[i];
      const Cell& next = L.loop[(i + 1) % L.loop.size()];
      t += cell_pred(L, 'o', here, false) + " -> ((adv' & " +
           cell_pred(L, 'o', next, true) + ") | (!adv' & " +
           cell_pred(L, 'o', here, true) + "))\n";
    }
    for (const Cell& c : L.loop)
      t += "!(" + cell_pred(L, 'r', c, true) + " & " +
           cell_pred(L, 'o', c, true) + ")\n";
  }

  std::vector<std::string> left, right;
  if (patrol) {
    if (v == Variant::Ltl) {
      std::vector<std::string> on;
      for (const Cell& c : L.loop) on.push_back(cell_pred(L, 'o', c, false));
      left.push_back("(F G (" + join(on, " | ") + "))");
    }
    left.push_back("(G F " + cell_pred(L, 'o', L.loop[0], false) + ")");
  }
  for (int i = 1; i <= k; ++i)
    left.push_back("(G F d" + std::to_string(i) + ")");
  if (v == Variant::Ltl) {
    std::vector<std::string> bad;
    for (const Cell& c : L.avoid) bad.push_back(cell_pred(L, 'r', c, false));
    right.push_back("(F G !(" + join(bad, " | ") + "))");
  }
  for (const Cell& s : L.rooms)
    right.push_back("(G F " + cell_pred(L, 'r', s, false) + ")");
  t += "[LIVENESS]\n" + implication(left, right) + "\n";

  BenchmarkInstance b;
  b.family = "robot";
  b.name = "robot_" + map.name + variant_suffix(v);
  b.params = "map=" + map.name + " " + std::to_string(L.rows) + "x" +
             std::to_string(L.cols) + " rooms=" + std::to_string(k);
  b.variant = v;
  b.props = (patrol ? 1 : 0) + k + (L.rows + L.bits) * (patrol ? 2 : 1);
  b.text = std::move(t);
  return b;
}

RobotMap ring_map(const std::string& name, int rows, int cols, int services,
                  int style) {
  if (rows < 6 || cols < 6)
    throw std::invalid_argument("ring_map: needs at least 6x6");
  if (services < 1)
    throw std::invalid_argument("ring_map: needs at least one service room");
  if (style < 0 || style > 3)
    throw std::invalid_argument("ring_map: style must be 0..3");

  std::vector<std::string> g(rows, std::string(cols, '.'));
  for (int c = 1; c <= cols - 2; ++c) g[1][c] = g[rows - 2][c] = 'o';
  for (int r = 1; r <= rows - 2; ++r) g[r][1] = g[r][cols - 2] = 'o';
  for (int r = 2; r <= rows - 3; ++r)
    for (int c = 2; c <= cols - 3; ++c) g[r][c] = '#';

  // Each room sits behind an open pocket carved out of the block, so the
  // robot can wait next to the door out of the patrol's way.
  std::set<int> used;
  for (int j = 0; j < services; ++j) {
    int col = 2 + ((2 * j + 1) * (cols - 4)) / (2 * services);
    if (style == 3) col = cols - 3 - (col - 2);
    if (used.count(col))
      throw std::invalid_argument("ring_map: too many service rooms");
    used.insert(col);
    bool top = style == 2 ? false : (style == 1 ? j % 2 == 0 : true);
    g[top ? 2 : rows - 3][col] = '.';
    g[top ? 3 : rows - 4][col] = 'S';
  }

  switch (style) {
    case 0: g[1][1] = 'H'; break;
    case 1: g[1][cols - 2] = 'H'; break;
    case 2: g[rows - 2][1] = 'H'; break;
    default: g[rows - 2][cols - 2] = 'H'; break;
  }
  g[0][0] = 'X';
  g[0][1] = 'R';
  return RobotMap{name, std::move(g)};
}

std::vector<RobotMap> shipped_robot_maps() {
  std::vector<RobotMap> maps;
  for (int services = 1; services <= 4; ++services)
    for (int style = 0; style <= 3; ++style)
      maps.push_back(ring_map("ring16_s" + std::to_string(services) + "_v" +
                                  std::to_string(style),
                              8, 16, services, style));
  return maps;
}

std::vector<BenchmarkInstance> shipped_suite() {
  std::vector<BenchmarkInstance> set;
  for (int floors = 2; floors <= 8; ++floors) {
    set.push_back(gen_lift(floors, Variant::Gr1));
    set.push_back(gen_lift(floors, Variant::Ltl));
  }
  for (int clients = 1; clients <= 4; ++clients) {
    set.push_back(gen_amba(clients, Variant::Gr1));
    set.push_back(gen_amba(clients, Variant::Ltl));
  }
  for (const RobotMap& m : shipped_robot_maps()) {
    set.push_back(gen_robot(m, Variant::Gr1));
    set.push_back(gen_robot(m, Variant::Ltl));
  }
  return set;
}

std::string manifest_json(const std::vector<BenchmarkInstance>& set) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : set) {
    arr.push_back({{"family", b.family},
                   {"name", b.name},
                   {"params", b.params},
                   {"variant", b.variant == Variant::Ltl ? "ltl" : "gr1"},
                   {"props", b.props}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace cosy
