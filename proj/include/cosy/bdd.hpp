#pragma once

// Hash-consed BDD store. Variables live on levels; when a store is created
// with primed copies, proposition i occupies level 2i (current) and level
// 2i+1 (next), i.e. current/next copies are interleaved. Handles are plain
// node indices into a monotone arena, so handle equality is function
// equality and node_count() doubles as the peak-size statistic.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cosy {

enum class PropKind { Input, Output };

struct PropInfo {
  std::string name;
  PropKind kind;
};

class Store;

class Bdd {
 public:
  Bdd() = default;
  bool valid() const { return s_ != nullptr; }
  bool is_true() const { return valid() && id_ == 1; }
  bool is_false() const { return valid() && id_ == 0; }
  uint32_t id() const { return id_; }
  Store* store() const { return s_; }

  bool operator==(const Bdd& o) const { return s_ == o.s_ && id_ == o.id_; }
  bool operator!=(const Bdd& o) const { return !(*this == o); }

  Bdd operator&(const Bdd& o) const;
  Bdd operator|(const Bdd& o) const;
  Bdd operator^(const Bdd& o) const;
  Bdd operator!() const;
  Bdd implies(const Bdd& o) const;
  Bdd iff(const Bdd& o) const;

 private:
  friend class Store;
  Bdd(Store* s, uint32_t id) : s_(s), id_(id) {}
  Store* s_ = nullptr;
  uint32_t id_ = 0;
};

class Store {
 public:
  explicit Store(std::vector<PropInfo> props, bool with_primed = true);

  int prop_count() const { return static_cast<int>(props_.size()); }
  const PropInfo& prop(int i) const { return props_.at(i); }
  int prop_index(std::string_view name) const;  // -1 if unknown
  bool has_primed() const { return with_primed_; }
  int level_count() const { return levels_; }
  int level_of(int prop, bool primed) const;

  // Dynamic reordering knob. The built-in store keeps its fixed interleaved
  // order; the flag is accepted so callers can wire it through uniformly.
  void set_auto_reorder(bool on) { auto_reorder_ = on; }
  bool auto_reorder() const { return auto_reorder_; }

  Bdd ltrue() { return Bdd(this, 1); }
  Bdd lfalse() { return Bdd(this, 0); }
  Bdd var(int prop, bool primed = false);
  Bdd nvar(int prop, bool primed = false);

  Bdd land(Bdd a, Bdd b);
  Bdd lor(Bdd a, Bdd b);
  Bdd lxor(Bdd a, Bdd b);
  Bdd lnot(Bdd a);
  Bdd implies(Bdd a, Bdd b) { return lor(lnot(a), b); }
  Bdd iff(Bdd a, Bdd b) { return lnot(lxor(a, b)); }
  Bdd ite(Bdd c, Bdd t, Bdd e);

  // Quantification over a set of levels.
  Bdd exists(Bdd f, const std::vector<int>& levels);
  Bdd forall(Bdd f, const std::vector<int>& levels);

  // current -> next (f must only mention current levels) and back.
  Bdd prime(Bdd f);
  Bdd unprime(Bdd f);
  // Simultaneous swap of every current level with its next copy.
  Bdd swap_current_next(Bdd f);
  // General rename by level pairs (from -> to). The induced total map must be
  // injective and strictly order-preserving; otherwise throws.
  Bdd rename(Bdd f, const std::vector<std::pair<int, int>>& map);

  // Minterm over current (or next) props from a bitmask, lowest prop = bit 0.
  Bdd minterm(uint64_t bits, bool primed = false);

  bool eval(Bdd f, uint64_t cur_bits, uint64_t next_bits = 0) const;
  // Enumerate all satisfying assignments of f restricted to `levels`
  // (f's support must be within `levels`). Callback gets bits indexed by
  // position within `levels`.
  void foreach_minterm(Bdd f, const std::vector<int>& levels,
                       const std::function<void(uint64_t)>& fn) const;
  std::vector<int> support(Bdd f) const;

  size_t node_count() const { return nodes_.size(); }

  const std::vector<int>& current_levels() const { return cur_levels_; }
  const std::vector<int>& primed_input_levels() const { return pin_levels_; }
  const std::vector<int>& primed_output_levels() const { return pout_levels_; }

 private:
  struct Node {
    uint32_t var;
    uint32_t lo;
    uint32_t hi;
  };
  static constexpr uint32_t kTermVar = 0xFFFFFFFFu;

  uint32_t mk(uint32_t var, uint32_t lo, uint32_t hi);
  uint32_t apply(int op, uint32_t a, uint32_t b);
  uint32_t neg(uint32_t a);
  uint32_t ite_rec(uint32_t c, uint32_t t, uint32_t e);
  uint32_t quant(uint32_t f, uint32_t cube_id, bool univ);
  uint32_t shift(uint32_t f, int delta);
  uint32_t swap_rec(uint32_t f);
  uint32_t remap(uint32_t f, const std::vector<int>& total_map, uint64_t key);
  void check(const Bdd& f) const;
  int intern_cube(const std::vector<int>& levels);

  std::vector<PropInfo> props_;
  std::unordered_map<std::string, int> by_name_;
  bool with_primed_;
  bool auto_reorder_ = false;
  int levels_;
  std::vector<int> cur_levels_, pin_levels_, pout_levels_;

  std::vector<Node> nodes_;
  std::unordered_map<uint64_t, uint32_t> unique_;
  std::unordered_map<uint64_t, uint32_t> op_cache_;
  std::vector<std::vector<int>> cubes_;
  std::unordered_map<std::string, int> cube_ids_;
};

inline Bdd Bdd::operator&(const Bdd& o) const { return s_->land(*this, o); }
inline Bdd Bdd::operator|(const Bdd& o) const { return s_->lor(*this, o); }
inline Bdd Bdd::operator^(const Bdd& o) const { return s_->lxor(*this, o); }
inline Bdd Bdd::operator!() const { return s_->lnot(*this); }
inline Bdd Bdd::implies(const Bdd& o) const { return s_->implies(*this, o); }
inline Bdd Bdd::iff(const Bdd& o) const { return s_->iff(*this, o); }

}  // namespace cosy
