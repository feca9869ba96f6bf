#pragma once

// Omega-automata with predicate-labeled transitions and min-even parity
// acceptance, plus the word machinery shared by the translation pipeline
// and the test oracles. Letters are valuations of the store's
// propositions; transition predicates read current-state variables only.

#include <cstdint>
#include <string>
#include <vector>

#include "cosy/bdd.hpp"

namespace cosy {

struct PTrans {
  int from;
  Bdd pred;
  int to;
  int color;
};

// A word is accepted iff the least color visited infinitely often is even.
struct ParityAutomaton {
  Store* store = nullptr;
  int states = 0;
  int initial = 0;
  std::vector<PTrans> trans;
  bool deterministic = false;
  bool complete = false;

  int max_color() const;
};

constexpr int kRejecting = 1;
constexpr int kAccepting = 2;

// Co-Buchi automaton as the parity fragment with colors {1, 2}: accepted
// iff some run takes rejecting transitions only finitely often. May be
// nondeterministic. gfg marks automata whose nondeterminism can be
// resolved on the fly; canonical marks the normal form.
struct CoBuchiAutomaton {
  Store* store = nullptr;
  int states = 0;
  int initial = 0;
  std::vector<PTrans> trans;
  bool deterministic = false;
  bool gfg = false;
  bool canonical = false;
  // Filled by canonicalize: states with the same value recognize the same
  // language. Empty otherwise.
  std::vector<int> lang_class;
};

// Ultimately periodic word: prefix, then loop forever. Letters are packed
// proposition valuations as accepted by Store::eval.
struct Lasso {
  std::vector<uint64_t> prefix;
  std::vector<uint64_t> loop;  // nonempty
};

// Disjoint satisfiable predicates refining every input predicate: each
// cell is contained in or disjoint from each of them. The disjunction of
// all cells is true.
std::vector<Bdd> letter_cells(Store& store, const std::vector<Bdd>& preds);

// Strongly connected components of the graph spanned by the given arcs;
// every node 0..n-1 gets a component id.
std::vector<int> scc_partition(int n,
                               const std::vector<std::pair<int, int>>& arcs);

// Minimal equivalent coloring; structure and language are unchanged.
ParityAutomaton reduce_colors(const ParityAutomaton& a);

// Breakpoint determinization. Input must be complete.
CoBuchiAutomaton ncw_determinize(const CoBuchiAutomaton& a);

bool lasso_member(const ParityAutomaton& a, const Lasso& w);
bool lasso_member(const CoBuchiAutomaton& a, const Lasso& w);

// Language comparisons between states of deterministic complete automata.
bool language_subset(const CoBuchiAutomaton& a, int from_a,
                     const CoBuchiAutomaton& b, int from_b);
bool language_subset(const CoBuchiAutomaton& a, const CoBuchiAutomaton& b);
bool language_equal(const CoBuchiAutomaton& a, const CoBuchiAutomaton& b);
bool state_language_equal(const CoBuchiAutomaton& a, int p, int q);

// Dense letter-indexed forms for bulk word checks. Letters enumerate all
// valuations of the store's propositions.
struct DenseDpa {
  int states = 0;
  int initial = 0;
  int letters = 0;
  std::vector<int> succ;   // state * letters + letter
  std::vector<int> color;
};

struct DenseNcw {
  int states = 0;
  int letters = 0;
  uint64_t initial_set = 0;
  std::vector<uint64_t> succ_all;   // state * letters + letter, as bitmask
  std::vector<uint64_t> succ_safe;  // accepting transitions only
};

DenseDpa densify(const ParityAutomaton& a);
DenseNcw densify(const CoBuchiAutomaton& a);
bool lasso_member(const DenseDpa& a, const Lasso& w);
bool lasso_member(const DenseNcw& a, const Lasso& w);

std::string pred_to_string(const Store& store, Bdd pred);
std::string describe(const ParityAutomaton& a);
std::string describe(const CoBuchiAutomaton& a);

}  // namespace cosy
