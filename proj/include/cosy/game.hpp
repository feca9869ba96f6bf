#pragma once

// Symbolic game arenas: the text format, the enforceable-predecessor
// operator, and the deadlock-free core.
//
// A position is a valuation of all declared propositions. Each step the
// environment fixes the next values of the inputs, then the system fixes
// the next values of the outputs; the joint move must satisfy the
// transition relation. A player with no legal completion loses
// immediately.

#include <memory>
#include <string>
#include <vector>

#include "cosy/bdd.hpp"

namespace cosy {

// Predicate over current-state variables.
using Region = Bdd;

struct SymbolicGame {
  std::unique_ptr<Store> store;
  std::vector<int> inputs;   // proposition indices
  std::vector<int> outputs;  // proposition indices
  Bdd init;                  // over current variables
  Bdd trans;                 // over current and next variables
  std::string objective_text;  // raw liveness formula, "true" if absent
};

SymbolicGame parse_game(const std::string& text);

// {v | forall next inputs, exists next outputs: trans and phi(next)}.
// phi must be over next-state variables.
Region enf_pre(const SymbolicGame& g, Bdd phi);

// nu X. enf_pre(X'): positions from which the system can keep the play
// going forever regardless of the inputs.
Region restrict_to_arena(const SymbolicGame& g);

}  // namespace cosy
