#pragma once

// Chains of good-for-games co-Buchi automata: the canonical form, the
// translation from deterministic parity automata, and the alternating
// products the symbolic engines run on.

#include <optional>
#include <string>
#include <vector>

#include "cosy/automata.hpp"

namespace cosy {

// Falling chain of co-Buchi languages. A word belongs to the chain
// language when it lies outside the first level, or when the deepest
// level containing it has even 1-based index.
struct CocoaChain {
  Store* store = nullptr;
  std::vector<CoBuchiAutomaton> levels;
};

// Canonical minimal good-for-games co-Buchi automaton for the language
// of a complete co-Buchi automaton (determinized first if needed).
CoBuchiAutomaton canonicalize(const CoBuchiAutomaton& a);

// First structural defect of a claimed canonical automaton, or nothing.
// Checked: reachability and completeness; per state and letter either a
// single accepting transition or a fan of rejecting ones covering exactly
// the states of one language class; safe languages within a language
// class forming an antichain.
std::optional<std::string> canonical_violation(const CoBuchiAutomaton& a);

// Chain of canonical levels recognizing the parity language: level i
// rejects exactly the transitions with color below i, so it captures the
// words whose least recurring color is at least i.
CocoaChain dpa_to_chain(const ParityAutomaton& a);

bool lasso_member(const CocoaChain& chain, const Lasso& w);

enum class ProductKind { Naive, Reduced, Optimized };

// One move of the alternating product: fires on the letters of pred,
// announces the color, and one player picks the successor among choices.
struct ProductMove {
  Bdd pred;
  int color;
  bool rejector_controls;
  std::vector<int> choices;
};

// Alternating parity automaton over tuples of chain-level states. The
// color of a move is one less than the shallowest level taking a
// rejecting transition; the rejector resolves moves of even color, the
// acceptor those of odd color.
struct CocoaProduct {
  Store* store = nullptr;
  int levels = 0;
  std::vector<std::vector<int>> tuples;  // level states per product state
  int initial = 0;
  std::vector<std::vector<ProductMove>> moves;

  int max_color() const;
};

CocoaProduct chain_product(const CocoaChain& chain, ProductKind kind);

// Membership of an ultimately periodic word, resolved as a finite parity
// game between the two players over (state, position) pairs.
bool lasso_member(const CocoaProduct& p, const Lasso& w);

std::string describe(const CocoaProduct& p);

}  // namespace cosy
