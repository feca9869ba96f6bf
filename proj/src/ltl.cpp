#include "cosy/ltl.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <utility>

namespace cosy {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(msg + " at line " + std::to_string(line) +
                         ", column " + std::to_string(col)),
      line(line),
      col(col) {}

namespace {

LtlPtr make_leaf(LtlKind k) {
  auto n = std::make_shared<Ltl>();
  n->kind = k;
  return n;
}

}  // namespace

LtlPtr ltl_true() {
  static LtlPtr t = make_leaf(LtlKind::True);
  return t;
}

LtlPtr ltl_false() {
  static LtlPtr f = make_leaf(LtlKind::False);
  return f;
}

LtlPtr ltl_var(int prop, bool primed) {
  auto n = std::make_shared<Ltl>();
  n->kind = LtlKind::Var;
  n->var = prop;
  n->primed = primed;
  return n;
}

LtlPtr ltl_un(LtlKind k, LtlPtr a) {
  auto n = std::make_shared<Ltl>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

LtlPtr ltl_bin(LtlKind k, LtlPtr a, LtlPtr b) {
  auto n = std::make_shared<Ltl>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

namespace {

enum class Tok {
  End, LParen, RParen, Not, And, Or, Implies, Iff,
  True, False, G, F, X, U, Name
};

struct Lexer {
  const std::string& text;
  const Store& store;
  size_t pos = 0;
  int line;
  int col = 1;

  Tok tok = Tok::End;
  int tok_line = 1, tok_col = 1;
  std::string name;
  bool primed = false;

  Lexer(const std::string& t, const Store& s, int line_base)
      : text(t), store(s), line(line_base) {
    advance();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_line, tok_col);
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  char take() {
    char c = text[pos++];
    if (c == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
    return c;
  }

  void advance() {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' ||
            text[pos] == '\n'))
      take();
    tok_line = line;
    tok_col = col;
    name.clear();
    primed = false;
    if (pos >= text.size()) {
      tok = Tok::End;
      return;
    }
    char c = take();
    switch (c) {
      case '(': tok = Tok::LParen; return;
      case ')': tok = Tok::RParen; return;
      case '!': tok = Tok::Not; return;
      case '&': tok = Tok::And; return;
      case '|': tok = Tok::Or; return;
      case '-':
        if (peek() == '>') {
          take();
          tok = Tok::Implies;
          return;
        }
        fail("unexpected character '-'");
      case '<':
        if (peek() == '-' && pos + 1 < text.size() && text[pos + 1] == '>') {
          take();
          take();
          tok = Tok::Iff;
          return;
        }
        fail("unexpected character '<'");
      default: break;
    }
    if (!isalpha(static_cast<unsigned char>(c)) && c != '_')
      fail(std::string("unexpected character '") + c + "'");
    name.push_back(c);
    while (pos < text.size() &&
           (isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      name.push_back(take());
    if (name == "true") { tok = Tok::True; return; }
    if (name == "false") { tok = Tok::False; return; }
    if (name == "G") { tok = Tok::G; return; }
    if (name == "F") { tok = Tok::F; return; }
    if (name == "X") { tok = Tok::X; return; }
    if (name == "U") { tok = Tok::U; return; }
    tok = Tok::Name;
    if (peek() == '\'') {
      take();
      primed = true;
    }
  }
};

struct Parser {
  Lexer lex;
  bool allow_temporal;
  bool allow_primed;

  Parser(const std::string& text, const Store& store, bool temporal,
         bool primes, int line_base)
      : lex(text, store, line_base),
        allow_temporal(temporal),
        allow_primed(primes) {}

  LtlPtr parse() {
    LtlPtr f = parse_iff();
    if (lex.tok != Tok::End) lex.fail("unexpected trailing input");
    return f;
  }

  LtlPtr parse_iff() {
    LtlPtr a = parse_implies();
    while (lex.tok == Tok::Iff) {
      lex.advance();
      a = ltl_bin(LtlKind::Iff, a, parse_implies());
    }
    return a;
  }

  LtlPtr parse_implies() {
    LtlPtr a = parse_or();
    if (lex.tok == Tok::Implies) {
      lex.advance();
      return ltl_bin(LtlKind::Implies, a, parse_implies());
    }
    return a;
  }

  LtlPtr parse_or() {
    LtlPtr a = parse_and();
    while (lex.tok == Tok::Or) {
      lex.advance();
      a = ltl_bin(LtlKind::Or, a, parse_and());
    }
    return a;
  }

  LtlPtr parse_and() {
    LtlPtr a = parse_until();
    while (lex.tok == Tok::And) {
      lex.advance();
      a = ltl_bin(LtlKind::And, a, parse_until());
    }
    return a;
  }

  LtlPtr parse_until() {
    LtlPtr a = parse_unary();
    if (lex.tok == Tok::U) {
      require_temporal();
      lex.advance();
      return ltl_bin(LtlKind::U, a, parse_until());
    }
    return a;
  }

  LtlPtr parse_unary() {
    switch (lex.tok) {
      case Tok::Not:
        lex.advance();
        return ltl_un(LtlKind::Not, parse_unary());
      case Tok::G:
        require_temporal();
        lex.advance();
        return ltl_un(LtlKind::G, parse_unary());
      case Tok::F:
        require_temporal();
        lex.advance();
        return ltl_un(LtlKind::F, parse_unary());
      case Tok::X:
        require_temporal();
        lex.advance();
        return ltl_un(LtlKind::X, parse_unary());
      default:
        return parse_primary();
    }
  }

  LtlPtr parse_primary() {
    switch (lex.tok) {
      case Tok::LParen: {
        lex.advance();
        LtlPtr f = parse_iff();
        if (lex.tok != Tok::RParen) lex.fail("expected ')'");
        lex.advance();
        return f;
      }
      case Tok::True:
        lex.advance();
        return ltl_true();
      case Tok::False:
        lex.advance();
        return ltl_false();
      case Tok::Name: {
        int p = lex.store.prop_index(lex.name);
        if (p < 0) lex.fail("unknown proposition '" + lex.name + "'");
        bool pr = lex.primed;
        if (pr && !allow_primed)
          lex.fail("primed proposition not allowed here");
        lex.advance();
        return ltl_var(p, pr);
      }
      default:
        lex.fail("expected expression");
    }
  }

  void require_temporal() {
    if (!allow_temporal) lex.fail("temporal operator not allowed here");
  }
};

}  // namespace

LtlPtr parse_ltl(const std::string& text, const Store& store, int line_base) {
  return Parser(text, store, true, false, line_base).parse();
}

LtlPtr parse_bool_expr(const std::string& text, const Store& store,
                       bool allow_primed, int line_base) {
  return Parser(text, store, false, allow_primed, line_base).parse();
}

bool is_propositional(const LtlPtr& f) {
  switch (f->kind) {
    case LtlKind::True:
    case LtlKind::False:
      return true;
    case LtlKind::Var:
      return true;
    case LtlKind::Not:
      return is_propositional(f->a);
    case LtlKind::And:
    case LtlKind::Or:
    case LtlKind::Implies:
    case LtlKind::Iff:
      return is_propositional(f->a) && is_propositional(f->b);
    default:
      return false;
  }
}

Bdd to_bdd(const LtlPtr& f, Store& store) {
  switch (f->kind) {
    case LtlKind::True: return store.ltrue();
    case LtlKind::False: return store.lfalse();
    case LtlKind::Var: return store.var(f->var, f->primed);
    case LtlKind::Not: return !to_bdd(f->a, store);
    case LtlKind::And: return to_bdd(f->a, store) & to_bdd(f->b, store);
    case LtlKind::Or: return to_bdd(f->a, store) | to_bdd(f->b, store);
    case LtlKind::Implies:
      return to_bdd(f->a, store).implies(to_bdd(f->b, store));
    case LtlKind::Iff: return to_bdd(f->a, store).iff(to_bdd(f->b, store));
    default:
      throw std::logic_error("to_bdd on temporal formula");
  }
}

std::string to_string(const LtlPtr& f, const Store& store) {
  auto wrap = [&](const LtlPtr& g) {
    std::string s = to_string(g, store);
    switch (g->kind) {
      case LtlKind::True:
      case LtlKind::False:
      case LtlKind::Var:
        return s;
      default:
        return "(" + s + ")";
    }
  };
  switch (f->kind) {
    case LtlKind::True: return "true";
    case LtlKind::False: return "false";
    case LtlKind::Var:
      return store.prop(f->var).name + (f->primed ? "'" : "");
    case LtlKind::Not: return "!" + wrap(f->a);
    case LtlKind::And: return wrap(f->a) + " & " + wrap(f->b);
    case LtlKind::Or: return wrap(f->a) + " | " + wrap(f->b);
    case LtlKind::Implies: return wrap(f->a) + " -> " + wrap(f->b);
    case LtlKind::Iff: return wrap(f->a) + " <-> " + wrap(f->b);
    case LtlKind::G: return "G " + wrap(f->a);
    case LtlKind::F: return "F " + wrap(f->a);
    case LtlKind::X: return "X " + wrap(f->a);
    case LtlKind::U: return wrap(f->a) + " U " + wrap(f->b);
  }
  return "?";
}

namespace {

void flatten_and(const LtlPtr& f, std::vector<LtlPtr>& out) {
  if (f->kind == LtlKind::And) {
    flatten_and(f->a, out);
    flatten_and(f->b, out);
  } else {
    out.push_back(f);
  }
}

// GF b with propositional b, either directly or as FG b (= !GF !b).
// Returns the atom predicate and whether the node asserts the atom fires
// infinitely often (GF) or only finitely often (FG of the complement).
struct GfAtomRef {
  Bdd pred;
  bool wants_fired;
};

std::optional<GfAtomRef> match_gf_atom(const LtlPtr& f, Store& store) {
  if (f->kind == LtlKind::G && f->a->kind == LtlKind::F &&
      is_propositional(f->a->a))
    return GfAtomRef{to_bdd(f->a->a, store), true};
  if (f->kind == LtlKind::F && f->a->kind == LtlKind::G &&
      is_propositional(f->a->a))
    return GfAtomRef{!to_bdd(f->a->a, store), false};
  return std::nullopt;
}

// Collects the distinct GF atoms of a Boolean combination of GF/FG nodes.
// Fails (returns false) on any other temporal structure.
bool collect_atoms(const LtlPtr& f, Store& store, std::vector<Bdd>& atoms,
                   std::map<const Ltl*, std::pair<int, bool>>& leaves) {
  switch (f->kind) {
    case LtlKind::True:
    case LtlKind::False:
      return true;
    case LtlKind::Not:
      return collect_atoms(f->a, store, atoms, leaves);
    case LtlKind::And:
    case LtlKind::Or:
    case LtlKind::Implies:
    case LtlKind::Iff:
      return collect_atoms(f->a, store, atoms, leaves) &&
             collect_atoms(f->b, store, atoms, leaves);
    default: {
      auto ref = match_gf_atom(f, store);
      if (!ref) return false;
      int idx = -1;
      for (size_t i = 0; i < atoms.size(); i++)
        if (atoms[i] == ref->pred) idx = static_cast<int>(i);
      if (idx < 0) {
        idx = static_cast<int>(atoms.size());
        atoms.push_back(ref->pred);
      }
      leaves[f.get()] = {idx, ref->wants_fired};
      return true;
    }
  }
}

bool eval_combo(const LtlPtr& f,
                const std::map<const Ltl*, std::pair<int, bool>>& leaves,
                uint32_t fired) {
  switch (f->kind) {
    case LtlKind::True: return true;
    case LtlKind::False: return false;
    case LtlKind::Not: return !eval_combo(f->a, leaves, fired);
    case LtlKind::And:
      return eval_combo(f->a, leaves, fired) &&
             eval_combo(f->b, leaves, fired);
    case LtlKind::Or:
      return eval_combo(f->a, leaves, fired) ||
             eval_combo(f->b, leaves, fired);
    case LtlKind::Implies:
      return !eval_combo(f->a, leaves, fired) ||
             eval_combo(f->b, leaves, fired);
    case LtlKind::Iff:
      return eval_combo(f->a, leaves, fired) ==
             eval_combo(f->b, leaves, fired);
    default: {
      auto it = leaves.find(f.get());
      assert(it != leaves.end());
      bool is_fired = (fired >> it->second.first) & 1;
      return it->second.second ? is_fired : !is_fired;
    }
  }
}

std::optional<GfCombo> build_combo(const LtlPtr& f, Store& store) {
  std::vector<Bdd> atoms;
  std::map<const Ltl*, std::pair<int, bool>> leaves;
  if (!collect_atoms(f, store, atoms, leaves)) return std::nullopt;
  if (atoms.size() > 22) return std::nullopt;  // verdict table would explode
  GfCombo combo;
  combo.atoms = atoms;
  size_t n = size_t{1} << atoms.size();
  combo.verdict.resize(n);
  for (size_t s = 0; s < n; s++)
    combo.verdict[s] = eval_combo(f, leaves, static_cast<uint32_t>(s));
  return combo;
}

// Conjunction of GF over propositional bodies; collects the bodies.
bool gf_conjunction(const LtlPtr& f, Store& store, std::vector<Bdd>& out) {
  std::vector<LtlPtr> parts;
  flatten_and(f, parts);
  for (const auto& p : parts) {
    if (p->kind != LtlKind::G || p->a->kind != LtlKind::F ||
        !is_propositional(p->a->a))
      return false;
    out.push_back(to_bdd(p->a->a, store));
  }
  return true;
}

}  // namespace

Classified classify(const LtlPtr& f, Store& store) {
  Classified c;
  c.kind = ObjKind::External;
  if (f->kind == LtlKind::Implies) {
    Gr1Spec spec;
    if (gf_conjunction(f->a, store, spec.assumptions) &&
        gf_conjunction(f->b, store, spec.guarantees)) {
      c.kind = ObjKind::Gr1Shape;
      c.gr1 = std::move(spec);
    }
  }
  if (auto combo = build_combo(f, store)) {
    c.combo = std::move(combo);
    if (c.kind == ObjKind::External) c.kind = ObjKind::GfCombo;
  }
  return c;
}

ParityAutomaton gfcombo_to_dpa(const GfCombo& combo, Store& store,
                               int max_atoms) {
  int k = static_cast<int>(combo.atoms.size());
  if (k > max_atoms)
    throw std::runtime_error("objective has too many recurrence atoms (" +
                             std::to_string(k) + " > " +
                             std::to_string(max_atoms) + ")");
  uint32_t full = (1u << k) - 1;
  auto verdict = [&](uint32_t s) { return bool(combo.verdict[s]); };

  struct Node {
    uint32_t label;
    int depth;
    std::vector<int> children;
    int leaf_index = -1;  // state number when this node is a leaf
  };
  std::vector<Node> tree;

  // children carry the maximal proper sub-labels with the opposite verdict
  auto children_labels = [&](uint32_t label) {
    std::vector<uint32_t> out;
    if (label == 0) return out;
    bool v = verdict(label);
    std::vector<char> covered(full + 1, 0);  // some flipped superset exists
    for (uint32_t s = (label - 1) & label;; s = (s - 1) & label) {
      covered[s] = verdict(s) != v;
      if (s == 0) break;
    }
    for (int b = 0; b < k; b++) {
      if (!(label >> b & 1)) continue;
      for (uint32_t s = (label - 1) & label;; s = (s - 1) & label) {
        if (!(s >> b & 1)) covered[s] = covered[s] || covered[s | (1u << b)];
        if (s == 0) break;
      }
    }
    for (uint32_t s = (label - 1) & label;; s = (s - 1) & label) {
      if (verdict(s) != v) {
        bool maximal = true;
        for (int b = 0; b < k && maximal; b++)
          if ((label >> b & 1) && !(s >> b & 1) && covered[s | (1u << b)])
            maximal = false;
        if (maximal) out.push_back(s);
      }
      if (s == 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  tree.push_back({full, 0, {}, -1});
  for (size_t n = 0; n < tree.size(); n++) {
    for (uint32_t lbl : children_labels(tree[n].label)) {
      tree[n].children.push_back(static_cast<int>(tree.size()));
      tree.push_back({lbl, tree[n].depth + 1, {}, -1});
    }
    if (tree.size() > 4096)
      throw std::runtime_error("objective too complex to translate");
  }

  // number the leaves in depth-first order; the first one is initial
  std::vector<int> leaves;
  std::vector<int> parent(tree.size(), -1);
  {
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      if (tree[n].children.empty()) {
        tree[n].leaf_index = static_cast<int>(leaves.size());
        leaves.push_back(n);
      }
      for (auto it = tree[n].children.rbegin(); it != tree[n].children.rend();
           ++it) {
        parent[*it] = n;
        stack.push_back(*it);
      }
    }
  }
  auto first_leaf = [&](int n) {
    while (!tree[n].children.empty()) n = tree[n].children[0];
    return tree[n].leaf_index;
  };

  int base = verdict(full) ? 0 : 1;
  // letters whose fired atom set stays within the label
  auto pred_in = [&](uint32_t label) {
    Bdd p = store.ltrue();
    for (int i = 0; i < k; i++)
      if (!(label >> i & 1)) p = p & (!combo.atoms[i]);
    return p;
  };

  ParityAutomaton a;
  a.store = &store;
  a.states = static_cast<int>(leaves.size());
  a.initial = first_leaf(0);
  a.deterministic = true;
  a.complete = true;
  for (int leaf_node : leaves) {
    std::vector<int> path;  // root down to the leaf
    for (int n = leaf_node; n >= 0; n = parent[n]) path.push_back(n);
    std::reverse(path.begin(), path.end());
    int from = tree[leaf_node].leaf_index;
    for (size_t j = 0; j < path.size(); j++) {
      int anchor = path[j];
      Bdd pred = pred_in(tree[anchor].label);
      int target;
      if (j + 1 < path.size()) {
        pred = pred & (!pred_in(tree[path[j + 1]].label));
        const auto& sib = tree[anchor].children;
        size_t ci = 0;
        while (sib[ci] != path[j + 1]) ci++;
        target = first_leaf(sib[(ci + 1) % sib.size()]);
      } else {
        target = from;
      }
      if (pred.is_false()) continue;
      a.trans.push_back({from, pred, target, tree[anchor].depth + base});
    }
  }
  return a;
}

}  // namespace cosy
