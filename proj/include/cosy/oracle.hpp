#pragma once

// Explicit-state cross-checking oracles: the product of a symbolic arena
// with a deterministic automaton as an explicit parity game, two
// independent solvers for such games, and exhaustive lasso enumeration.

#include <cstdint>
#include <vector>

#include "cosy/automata.hpp"
#include "cosy/game.hpp"

namespace cosy {

// Parity game with colors on moves, min-even winning condition. Owner 0
// moves are resolved by the acceptor (who wants the least color seen
// infinitely often to be even), owner 1 by the rejector. A player whose
// node has no moves loses immediately.
struct ExplicitGame {
  struct Edge {
    int to;
    int color;
  };
  std::vector<int> owner;
  std::vector<std::vector<Edge>> moves;
  std::vector<int> initial;
};

struct ExplicitResult {
  std::vector<bool> acceptor_wins;
  bool initial_won = false;  // every initial node is won by the acceptor
};

// Unrolls the arena against a deterministic automaton. Nodes alternate
// between (position, state), where the environment picks the next inputs,
// and intermediate nodes where the system completes the move. The
// automaton reads the valuation of the position a move lands on, so the
// word of a play starts at its second position; the transition color
// lands on the completing half-move. Throws when more than max_positions
// distinct (position, state) nodes appear.
ExplicitGame expand(const SymbolicGame& g, const ParityAutomaton& a,
                    size_t max_positions = 20000);

ExplicitResult zielonka_solve(const ExplicitGame& g);
ExplicitResult fixpoint_solve(const ExplicitGame& g);

// All lassos over full proposition valuations with prefix length up to
// max_prefix and loop length 1..max_loop.
std::vector<Lasso> enumerate_lassos(const Store& store, int max_prefix,
                                    int max_loop);

}  // namespace cosy
