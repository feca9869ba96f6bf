#pragma once

// The three symbolic realizability engines. All of them evaluate nested
// fixpoints over the arena with enf_pre; they differ in how the objective
// enters the formula:
//
//   solve_gr1        nu Z. AND_j mu Y. OR_i nu X.
//                      EnfPre(g_j Z | Y | !a_i X)
//   solve_parity_dpa one vector variable per (color, automaton state),
//                      row of q:  EnfPre(OR_t pred_t X^color_t_target)
//   solve_cocoa      like the parity vector, but rows follow the product
//                      moves: the controller of a move decides whether its
//                      choices are joined by OR (acceptor) or AND
//                      (rejector); recurrence-implication shaped products
//                      are folded back into the three-variable form first.
//
// Letters are read under EnfPre, so the objective word of a play starts
// at its second position, matching the explicit oracle.

#include <string>
#include <vector>

#include "cosy/automata.hpp"
#include "cosy/cocoa.hpp"
#include "cosy/game.hpp"
#include "cosy/ltl.hpp"

namespace cosy {

struct SolveOptions {
  double timeout_ms = 0;  // 0 disables the limit
  bool fold = true;       // let solve_cocoa fold matching products
};

struct SolveReport {
  bool realizable = false;
  Region winning;  // W for gr1, W_1 for the vector engines
  // Region updates per fixpoint level, outermost first. One update of one
  // variable counts once, so the counts compare across engines with
  // different vector widths; the innermost count equals enfpre_calls.
  std::vector<long> iterations;
  long enfpre_calls = 0;
  long peak_nodes = 0;
  double wall_ms = 0;
  bool timed_out = false;
  bool folded = false;
};

SolveReport solve_gr1(const SymbolicGame& g, const Gr1Spec& spec,
                      const SolveOptions& opt = {});

// dpa must be deterministic and complete.
SolveReport solve_parity_dpa(const SymbolicGame& g,
                             const ParityAutomaton& dpa,
                             const SolveOptions& opt = {});

SolveReport solve_cocoa(const SymbolicGame& g, const CocoaProduct& product,
                        const SolveOptions& opt = {});

// Structural match for products of recurrence-implication chains: every
// state carries exactly a rejector self-loop of color 2, an acceptor move
// of color 1 within its column, and a rejector move of color 0 to all
// states, with the three letter predicates partitioning the alphabet and
// the color-0 predicate shared within a column. folded stays false when
// the product has any other shape.
struct FoldedSystem {
  bool folded = false;
  std::vector<int> column;  // per product state
  std::vector<Bdd> goal;    // per column: color-0 letter predicate
  std::vector<Bdd> step;    // per state: color-1 letter predicate
  std::vector<Bdd> wait;    // per state: color-2 letter predicate
};
FoldedSystem fold_gr1_like(const CocoaProduct& p);

// JSON object with keys realizable, iterations, enfpre_calls, peak_nodes,
// wall_ms, timed_out, folded; the CSV row carries the same fields with
// iterations summed, in that order.
std::string report_json(const SolveReport& r);
std::string report_csv(const SolveReport& r);
extern const char* const kReportCsvHeader;

}  // namespace cosy
