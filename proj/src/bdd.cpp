#include "cosy/bdd.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>

namespace cosy {

namespace {
constexpr int kOpAnd = 0;
constexpr int kOpOr = 1;
constexpr int kOpXor = 2;
constexpr int kOpNot = 3;
constexpr int kOpExists = 4;
constexpr int kOpForall = 5;
constexpr int kOpShiftUp = 6;
constexpr int kOpShiftDown = 7;
constexpr int kOpSwap = 8;
constexpr int kOpRemap = 9;

uint64_t pack3(uint32_t var, uint32_t lo, uint32_t hi) {
  return (uint64_t(var) << 52) | (uint64_t(lo) << 26) | hi;
}
uint64_t packop(int op, uint32_t a, uint32_t b) {
  return (uint64_t(op) << 58) | (uint64_t(a) << 29) | b;
}
}  // namespace

Store::Store(std::vector<PropInfo> props, bool with_primed)
    : props_(std::move(props)), with_primed_(with_primed) {
  if (props_.size() > 60)
    throw std::invalid_argument("store: too many propositions");
  for (int i = 0; i < (int)props_.size(); ++i) {
    if (!by_name_.emplace(props_[i].name, i).second)
      throw std::invalid_argument("store: duplicate proposition " +
                                  props_[i].name);
  }
  levels_ = (int)props_.size() * (with_primed_ ? 2 : 1);
  for (int i = 0; i < (int)props_.size(); ++i) {
    cur_levels_.push_back(level_of(i, false));
    if (with_primed_) {
      if (props_[i].kind == PropKind::Input)
        pin_levels_.push_back(level_of(i, true));
      else
        pout_levels_.push_back(level_of(i, true));
    }
  }
  nodes_.push_back({kTermVar, 0, 0});  // false
  nodes_.push_back({kTermVar, 1, 1});  // true
}

int Store::prop_index(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? -1 : it->second;
}

int Store::level_of(int prop, bool primed) const {
  if (prop < 0 || prop >= (int)props_.size())
    throw std::out_of_range("store: bad proposition index");
  if (!with_primed_) {
    if (primed) throw std::logic_error("store: no primed copies");
    return prop;
  }
  return 2 * prop + (primed ? 1 : 0);
}

void Store::check(const Bdd& f) const {
  if (f.store() != this || f.id() >= nodes_.size())
    throw std::logic_error("store: foreign or invalid handle");
}

uint32_t Store::mk(uint32_t var, uint32_t lo, uint32_t hi) {
  if (lo == hi) return lo;
  uint64_t key = pack3(var, lo, hi);
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  if (nodes_.size() >= (1u << 26))
    throw std::runtime_error("store: node limit exceeded");
  uint32_t id = (uint32_t)nodes_.size();
  nodes_.push_back({var, lo, hi});
  unique_.emplace(key, id);
  return id;
}

Bdd Store::var(int prop, bool primed) {
  return Bdd(this, mk((uint32_t)level_of(prop, primed), 0, 1));
}
Bdd Store::nvar(int prop, bool primed) {
  return Bdd(this, mk((uint32_t)level_of(prop, primed), 1, 0));
}

uint32_t Store::neg(uint32_t a) {
  if (a <= 1) return a ^ 1u;
  uint64_t key = packop(kOpNot, a, 0);
  auto it = op_cache_.find(key);
  if (it != op_cache_.end()) return it->second;
  const Node n = nodes_[a];
  uint32_t r = mk(n.var, neg(n.lo), neg(n.hi));
  op_cache_.emplace(key, r);
  return r;
}

uint32_t Store::apply(int op, uint32_t a, uint32_t b) {
  switch (op) {
    case kOpAnd:
      if (a == 0 || b == 0) return 0;
      if (a == 1) return b;
      if (b == 1) return a;
      if (a == b) return a;
      break;
    case kOpOr:
      if (a == 1 || b == 1) return 1;
      if (a == 0) return b;
      if (b == 0) return a;
      if (a == b) return a;
      break;
    case kOpXor:
      if (a == b) return 0;
      if (a == 0) return b;
      if (b == 0) return a;
      if (a == 1) return neg(b);
      if (b == 1) return neg(a);
      break;
  }
  if (a > b) std::swap(a, b);  // all three ops are commutative
  uint64_t key = packop(op, a, b);
  auto it = op_cache_.find(key);
  if (it != op_cache_.end()) return it->second;
  const Node na = nodes_[a], nb = nodes_[b];
  uint32_t v = std::min(na.var, nb.var);
  uint32_t alo = na.var == v ? na.lo : a, ahi = na.var == v ? na.hi : a;
  uint32_t blo = nb.var == v ? nb.lo : b, bhi = nb.var == v ? nb.hi : b;
  uint32_t r = mk(v, apply(op, alo, blo), apply(op, ahi, bhi));
  op_cache_.emplace(key, r);
  return r;
}

Bdd Store::land(Bdd a, Bdd b) {
  check(a), check(b);
  return Bdd(this, apply(kOpAnd, a.id(), b.id()));
}
Bdd Store::lor(Bdd a, Bdd b) {
  check(a), check(b);
  return Bdd(this, apply(kOpOr, a.id(), b.id()));
}
Bdd Store::lxor(Bdd a, Bdd b) {
  check(a), check(b);
  return Bdd(this, apply(kOpXor, a.id(), b.id()));
}
Bdd Store::lnot(Bdd a) {
  check(a);
  return Bdd(this, neg(a.id()));
}
Bdd Store::ite(Bdd c, Bdd t, Bdd e) {
  check(c), check(t), check(e);
  uint32_t ct = apply(kOpAnd, c.id(), t.id());
  uint32_t ce = apply(kOpAnd, neg(c.id()), e.id());
  return Bdd(this, apply(kOpOr, ct, ce));
}

int Store::intern_cube(const std::vector<int>& levels) {
  std::string key((const char*)levels.data(), levels.size() * sizeof(int));
  auto it = cube_ids_.find(key);
  if (it != cube_ids_.end()) return it->second;
  int id = (int)cubes_.size();
  cubes_.push_back(levels);
  cube_ids_.emplace(std::move(key), id);
  return id;
}

uint32_t Store::quant(uint32_t f, uint32_t cube_id, bool univ) {
  if (f <= 1) return f;
  const std::vector<int>& cube = cubes_[cube_id];
  const Node n = nodes_[f];
  // nothing left to quantify below this node?
  if (cube.empty() || (uint32_t)cube.back() < n.var) return f;
  uint64_t key = packop(univ ? kOpForall : kOpExists, f, cube_id);
  auto it = op_cache_.find(key);
  if (it != op_cache_.end()) return it->second;
  uint32_t lo = quant(n.lo, cube_id, univ);
  uint32_t hi = quant(n.hi, cube_id, univ);
  uint32_t r;
  if (std::binary_search(cube.begin(), cube.end(), (int)n.var))
    r = apply(univ ? kOpAnd : kOpOr, lo, hi);
  else
    r = mk(n.var, lo, hi);
  op_cache_.emplace(key, r);
  return r;
}

Bdd Store::exists(Bdd f, const std::vector<int>& levels) {
  check(f);
  std::vector<int> c(levels);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return Bdd(this, quant(f.id(), intern_cube(c), false));
}
Bdd Store::forall(Bdd f, const std::vector<int>& levels) {
  check(f);
  std::vector<int> c(levels);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return Bdd(this, quant(f.id(), intern_cube(c), true));
}

uint32_t Store::shift(uint32_t f, int delta) {
  if (f <= 1) return f;
  uint64_t key = packop(delta > 0 ? kOpShiftUp : kOpShiftDown, f, 0);
  auto it = op_cache_.find(key);
  if (it != op_cache_.end()) return it->second;
  const Node n = nodes_[f];
  if (delta > 0 && (n.var & 1u))
    throw std::logic_error("prime: handle already mentions next variables");
  if (delta < 0 && !(n.var & 1u))
    throw std::logic_error("unprime: handle mentions current variables");
  uint32_t r = mk(n.var + delta, shift(n.lo, delta), shift(n.hi, delta));
  op_cache_.emplace(key, r);
  return r;
}

Bdd Store::prime(Bdd f) {
  check(f);
  if (!with_primed_) throw std::logic_error("prime: no primed copies");
  return Bdd(this, shift(f.id(), +1));
}
Bdd Store::unprime(Bdd f) {
  check(f);
  if (!with_primed_) throw std::logic_error("unprime: no primed copies");
  return Bdd(this, shift(f.id(), -1));
}

uint32_t Store::swap_rec(uint32_t f) {
  if (f <= 1) return f;
  uint64_t key = packop(kOpSwap, f, 0);
  auto it = op_cache_.find(key);
  if (it != op_cache_.end()) return it->second;
  const Node n = nodes_[f];
  uint32_t a = n.var & ~1u;  // current level of the pair
  uint32_t b = a | 1u;       // next level of the pair
  uint32_t f0 = n.var == a ? n.lo : f;
  uint32_t f1 = n.var == a ? n.hi : f;
  auto cof = [&](uint32_t g, bool high) {
    if (g <= 1) return g;
    const Node m = nodes_[g];
    if (m.var != b) return g;
    return high ? m.hi : m.lo;
  };
  uint32_t c00 = cof(f0, false), c01 = cof(f0, true);
  uint32_t c10 = cof(f1, false), c11 = cof(f1, true);
  // g(xa, xb, rest) = f(xb, xa, rest)
  uint32_t g0 = mk(b, swap_rec(c00), swap_rec(c10));
  uint32_t g1 = mk(b, swap_rec(c01), swap_rec(c11));
  uint32_t r = mk(a, g0, g1);
  op_cache_.emplace(key, r);
  return r;
}

Bdd Store::swap_current_next(Bdd f) {
  check(f);
  if (!with_primed_) throw std::logic_error("swap: no primed copies");
  return Bdd(this, swap_rec(f.id()));
}

uint32_t Store::remap(uint32_t f, const std::vector<int>& total_map,
                      uint64_t key_base) {
  if (f <= 1) return f;
  uint64_t key = key_base | f;
  auto it = op_cache_.find(key);
  if (it != op_cache_.end()) return it->second;
  const Node n = nodes_[f];
  uint32_t r = mk((uint32_t)total_map[n.var], remap(n.lo, total_map, key_base),
                  remap(n.hi, total_map, key_base));
  op_cache_.emplace(key, r);
  return r;
}

Bdd Store::rename(Bdd f, const std::vector<std::pair<int, int>>& map) {
  check(f);
  std::vector<int> total(levels_);
  for (int i = 0; i < levels_; ++i) total[i] = i;
  for (auto [from, to] : map) {
    if (from < 0 || from >= levels_ || to < 0 || to >= levels_)
      throw std::invalid_argument("rename: level out of range");
    total[from] = to;
  }
  // Only f's support matters: images there must be distinct and keep the
  // traversal order, otherwise the recursive relabeling would break canonicity.
  std::vector<int> sup = support(f);
  for (size_t i = 0; i < sup.size(); ++i) {
    for (size_t j = i + 1; j < sup.size(); ++j)
      if (total[sup[i]] == total[sup[j]])
        throw std::invalid_argument("rename: map not injective on support");
    if (i > 0 && total[sup[i]] <= total[sup[i - 1]])
      throw std::invalid_argument("rename: map not order-compatible");
  }
  std::vector<int> key_vec(total);
  key_vec.push_back(-1);  // distinguish from cube interning
  uint64_t key_base = packop(kOpRemap, (uint32_t)intern_cube(key_vec), 0);
  return Bdd(this, remap(f.id(), total, key_base));
}

Bdd Store::minterm(uint64_t bits, bool primed) {
  uint32_t acc = 1;
  for (int i = (int)props_.size() - 1; i >= 0; --i) {
    uint32_t lvl = (uint32_t)level_of(i, primed);
    if (bits & (uint64_t(1) << i))
      acc = mk(lvl, 0, acc);
    else
      acc = mk(lvl, acc, 0);
  }
  return Bdd(this, acc);
}

bool Store::eval(Bdd f, uint64_t cur_bits, uint64_t next_bits) const {
  check(f);
  uint32_t id = f.id();
  while (id > 1) {
    const Node& n = nodes_[id];
    int prop = with_primed_ ? (int)(n.var >> 1) : (int)n.var;
    bool primed = with_primed_ && (n.var & 1u);
    bool bit = ((primed ? next_bits : cur_bits) >> prop) & 1u;
    id = bit ? n.hi : n.lo;
  }
  return id == 1;
}

void Store::foreach_minterm(Bdd f, const std::vector<int>& levels,
                            const std::function<void(uint64_t)>& fn) const {
  check(f);
  std::function<void(uint32_t, size_t, uint64_t)> rec =
      [&](uint32_t id, size_t k, uint64_t bits) {
        if (id == 0) return;
        if (k == levels.size()) {
          if (id != 1)
            throw std::logic_error("foreach_minterm: support outside levels");
          fn(bits);
          return;
        }
        const Node& n = nodes_[id];
        uint32_t lvl = (uint32_t)levels[k];
        if (id == 1 || n.var > lvl) {
          rec(id, k + 1, bits);
          rec(id, k + 1, bits | (uint64_t(1) << k));
        } else if (n.var == lvl) {
          rec(n.lo, k + 1, bits);
          rec(n.hi, k + 1, bits | (uint64_t(1) << k));
        } else {
          throw std::logic_error("foreach_minterm: support outside levels");
        }
      };
  rec(f.id(), 0, 0);
}

std::vector<int> Store::support(Bdd f) const {
  check(f);
  std::vector<bool> seen(levels_, false);
  std::vector<bool> mark(nodes_.size(), false);
  std::vector<uint32_t> stack{f.id()};
  while (!stack.empty()) {
    uint32_t id = stack.back();
    stack.pop_back();
    if (id <= 1 || mark[id]) continue;
    mark[id] = true;
    seen[nodes_[id].var] = true;
    stack.push_back(nodes_[id].lo);
    stack.push_back(nodes_[id].hi);
  }
  std::vector<int> out;
  for (int i = 0; i < levels_; ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

}  // namespace cosy
