#pragma once

// LTL objective frontend: the expression parser shared with the game file
// format, objective shape classification, and the data carried by the two
// recognized fragments (GR(1) and Boolean combinations of GF atoms).

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cosy/automata.hpp"
#include "cosy/bdd.hpp"

namespace cosy {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col);
  int line;
  int col;
};

enum class LtlKind { True, False, Var, Not, And, Or, Implies, Iff, G, F, X, U };

struct Ltl;
using LtlPtr = std::shared_ptr<const Ltl>;

struct Ltl {
  LtlKind kind;
  int var = -1;         // Var: proposition index in the store
  bool primed = false;  // Var: next-state copy (transition relations only)
  LtlPtr a, b;          // operands; unary operators use a
};

LtlPtr ltl_true();
LtlPtr ltl_false();
LtlPtr ltl_var(int prop, bool primed = false);
LtlPtr ltl_un(LtlKind k, LtlPtr a);
LtlPtr ltl_bin(LtlKind k, LtlPtr a, LtlPtr b);

// Temporal formula over the store's propositions. Primed names are rejected.
LtlPtr parse_ltl(const std::string& text, const Store& store,
                 int line_base = 1);

// Propositional expression: temporal operators are rejected, primed names
// allowed only when allow_primed is set. line_base offsets error positions
// so multi-line callers can report file lines.
LtlPtr parse_bool_expr(const std::string& text, const Store& store,
                       bool allow_primed, int line_base = 1);

bool is_propositional(const LtlPtr& f);
Bdd to_bdd(const LtlPtr& f, Store& store);  // propositional formulas only
std::string to_string(const LtlPtr& f, const Store& store);

struct Gr1Spec {
  std::vector<Bdd> assumptions;  // a_i, propositional
  std::vector<Bdd> guarantees;   // g_j, propositional
};

// Boolean combination of GF atoms in normal form: FG b enters as !GF !b.
// verdict[S] holds iff the formula is true when exactly the atoms in
// bitmask S fire infinitely often.
struct GfCombo {
  std::vector<Bdd> atoms;
  std::vector<bool> verdict;  // size 1 << atoms.size()
};

enum class ObjKind { Gr1Shape, GfCombo, External };

struct Classified {
  ObjKind kind;
  std::optional<Gr1Spec> gr1;    // present for Gr1Shape
  std::optional<GfCombo> combo;  // present for Gr1Shape and GfCombo
};

Classified classify(const LtlPtr& f, Store& store);

// Deterministic parity automaton for a GF combination, built from the
// tree of verdict-flipping atom subsets. States are the leaves; the color
// emitted by a step is the depth of the deepest tree node whose label
// covers the atoms fired by the letter. Throws when the combination has
// more than max_atoms distinct atoms.
ParityAutomaton gfcombo_to_dpa(const GfCombo& combo, Store& store,
                               int max_atoms = 8);

}  // namespace cosy
