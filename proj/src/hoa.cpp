#include "cosy/hoa.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

namespace cosy {

namespace {

enum class AccMode { Parity, Buchi, CoBuchi };

struct LabelParser {
  const std::string& text;
  size_t pos = 0;
  Store& store;
  const std::vector<int>& ap;  // HOA index -> proposition index

  void skip() {
    while (pos < text.size() && isspace(static_cast<unsigned char>(text[pos])))
      pos++;
  }

  bool eat(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      pos++;
      return true;
    }
    return false;
  }

  Bdd expr() {
    Bdd r = term();
    while (eat('|')) r = r | term();
    return r;
  }

  Bdd term() {
    Bdd r = factor();
    while (eat('&')) r = r & factor();
    return r;
  }

  Bdd factor() {
    skip();
    if (eat('!')) return !factor();
    if (eat('(')) {
      Bdd r = expr();
      if (!eat(')')) throw HoaError("expected ')' in label");
      return r;
    }
    if (pos >= text.size()) throw HoaError("truncated label expression");
    char c = text[pos];
    if (c == 't') {
      pos++;
      return store.ltrue();
    }
    if (c == 'f') {
      pos++;
      return store.lfalse();
    }
    if (!isdigit(static_cast<unsigned char>(c)))
      throw HoaError("unexpected character in label expression");
    size_t start = pos;
    while (pos < text.size() &&
           isdigit(static_cast<unsigned char>(text[pos])))
      pos++;
    size_t idx = std::stoul(text.substr(start, pos - start));
    if (idx >= ap.size()) throw HoaError("label references unknown AP");
    return store.var(ap[idx]);
  }
};

std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size();) {
    if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      size_t end = text.find("*/", i + 2);
      if (end == std::string::npos) throw HoaError("unterminated comment");
      i = end + 2;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && isspace(static_cast<unsigned char>(s[a]))) a++;
  while (b > a && isspace(static_cast<unsigned char>(s[b - 1]))) b--;
  return s.substr(a, b - a);
}

// {k1 k2 ...} suffix of an edge or state line; returns the set indices.
std::vector<int> parse_acc_sets(const std::string& s, size_t brace) {
  std::vector<int> out;
  size_t end = s.find('}', brace);
  if (end == std::string::npos) throw HoaError("unterminated acceptance set");
  std::istringstream in(s.substr(brace + 1, end - brace - 1));
  int k;
  while (in >> k) out.push_back(k);
  return out;
}

int color_of(const std::vector<int>& sets, AccMode mode, int pieces) {
  switch (mode) {
    case AccMode::Parity: {
      if (sets.empty())
        throw HoaError("parity input has an edge without a priority");
      int mn = sets[0];
      for (int k : sets) mn = std::min(mn, k);
      if (mn >= pieces) throw HoaError("priority out of range");
      return mn;
    }
    case AccMode::Buchi:
      for (int k : sets)
        if (k == 0) return 0;
      return 1;
    case AccMode::CoBuchi:
      for (int k : sets)
        if (k == 0) return kRejecting;
      return kAccepting;
  }
  return 0;
}

}  // namespace

ParityAutomaton import_hoa(const std::string& text, Store& store) {
  std::istringstream in(strip_comments(text));
  std::string line;

  int states = -1, initial = -1, acc_pieces = 0;
  bool saw_start = false;
  std::optional<AccMode> mode;
  std::vector<int> ap;

  // header
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line == "--BODY--") break;
    size_t colon = line.find(':');
    if (colon == std::string::npos) throw HoaError("malformed header line");
    std::string key = line.substr(0, colon);
    std::string val = trim(line.substr(colon + 1));
    if (key == "HOA") {
      if (val != "v1") throw HoaError("unsupported HOA version");
    } else if (key == "States") {
      states = std::stoi(val);
    } else if (key == "Start") {
      if (saw_start || val.find('&') != std::string::npos)
        throw HoaError("only a single initial state is supported");
      saw_start = true;
      initial = std::stoi(val);
    } else if (key == "AP") {
      std::istringstream av(val);
      int n;
      av >> n;
      for (int i = 0; i < n; i++) {
        std::string name;
        char c;
        while (av.get(c) && c != '"') {
        }
        while (av.get(c) && c != '"') name.push_back(c);
        int p = store.prop_index(name);
        if (p < 0)
          throw HoaError("unknown atomic proposition \"" + name + "\"");
        ap.push_back(p);
      }
    } else if (key == "acc-name") {
      if (val.rfind("parity min even ", 0) == 0) {
        mode = AccMode::Parity;
        acc_pieces = std::stoi(val.substr(16));
      } else if (val == "Buchi") {
        mode = AccMode::Buchi;
      } else if (val == "co-Buchi") {
        mode = AccMode::CoBuchi;
      } else {
        throw HoaError("unsupported acceptance name '" + val + "'");
      }
    }
    // Acceptance:, tool:, name:, properties: carry nothing we need
  }
  if (states < 0) throw HoaError("missing States header");
  if (!saw_start) throw HoaError("missing Start header");
  if (!mode) throw HoaError("missing acc-name header");

  ParityAutomaton a;
  a.store = &store;
  a.states = states;
  a.initial = initial;

  int current = -1;
  std::vector<int> state_sets;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line == "--END--") break;
    if (line.rfind("State:", 0) == 0) {
      std::string rest = trim(line.substr(6));
      if (!rest.empty() && rest[0] == '[')
        throw HoaError("state labels are not supported");
      size_t brace = rest.find('{');
      state_sets.clear();
      if (brace != std::string::npos) {
        state_sets = parse_acc_sets(rest, brace);
        rest = trim(rest.substr(0, brace));
      }
      if (size_t q = rest.find('"'); q != std::string::npos)
        rest = trim(rest.substr(0, q));  // optional state name
      current = std::stoi(rest);
      if (current < 0 || current >= states)
        throw HoaError("state id out of range");
      continue;
    }
    if (line[0] != '[')
      throw HoaError("implicit edge labels are not supported");
    size_t close = line.find(']');
    if (close == std::string::npos) throw HoaError("unterminated label");
    std::string label = line.substr(1, close - 1);
    std::string rest = trim(line.substr(close + 1));
    std::vector<int> sets = state_sets;
    if (size_t brace = rest.find('{'); brace != std::string::npos) {
      for (int k : parse_acc_sets(rest, brace)) sets.push_back(k);
      rest = trim(rest.substr(0, brace));
    }
    if (rest.find('&') != std::string::npos)
      throw HoaError("universal branching is not supported");
    if (current < 0) throw HoaError("edge outside of a state");
    int dest = std::stoi(rest);
    if (dest < 0 || dest >= states) throw HoaError("destination out of range");
    LabelParser lp{label, 0, store, ap};
    Bdd pred = lp.expr();
    lp.skip();
    if (lp.pos != label.size()) throw HoaError("trailing label input");
    if (pred.is_false()) continue;
    a.trans.push_back({current, pred, dest, color_of(sets, *mode, acc_pieces)});
  }

  // flags are recomputed rather than trusted
  a.deterministic = true;
  a.complete = true;
  for (int q = 0; q < a.states; q++) {
    Bdd any = store.lfalse();
    for (const auto& t : a.trans) {
      if (t.from != q) continue;
      if (!(any & t.pred).is_false()) a.deterministic = false;
      any = any | t.pred;
    }
    if (!any.is_true()) a.complete = false;
  }
  return a;
}

namespace {

std::string acceptance_formula(int pieces) {
  std::string out;
  for (int c = pieces - 1; c >= 0; c--) {
    std::string self =
        (c % 2 == 0 ? "Inf(" : "Fin(") + std::to_string(c) + ")";
    if (out.empty())
      out = self;
    else
      out = self + (c % 2 == 0 ? " | (" : " & (") + out + ")";
  }
  return out.empty() ? "t" : out;
}

std::string cube_label(const Store& store, Bdd pred) {
  if (pred.is_true()) return "t";
  if (pred.is_false()) return "f";
  std::vector<int> levels = store.support(pred);
  std::string out;
  store.foreach_minterm(pred, levels, [&](uint64_t bits) {
    std::string cube;
    for (size_t k = 0; k < levels.size(); k++) {
      if (!cube.empty()) cube += "&";
      int prop = store.has_primed() ? levels[k] / 2 : levels[k];
      cube += (bits >> k & 1) ? std::to_string(prop)
                              : "!" + std::to_string(prop);
    }
    if (!out.empty()) out += " | ";
    out += cube;
  });
  return out;
}

template <typename Aut, typename AccFn>
std::string export_impl(const Aut& a, const std::string& acc_name,
                        const std::string& acc_line, AccFn acc_suffix) {
  const Store& s = *a.store;
  std::ostringstream os;
  os << "HOA: v1\n";
  os << "States: " << a.states << "\n";
  os << "Start: " << a.initial << "\n";
  os << "AP: " << s.prop_count();
  for (int p = 0; p < s.prop_count(); p++)
    os << " \"" << s.prop(p).name << "\"";
  os << "\n";
  os << "acc-name: " << acc_name << "\n";
  os << "Acceptance: " << acc_line << "\n";
  os << "properties: trans-labels explicit-labels trans-acc\n";
  os << "--BODY--\n";
  for (int q = 0; q < a.states; q++) {
    os << "State: " << q << "\n";
    for (const auto& t : a.trans)
      if (t.from == q)
        os << "[" << cube_label(s, t.pred) << "] " << t.to
           << acc_suffix(t.color) << "\n";
  }
  os << "--END--\n";
  return os.str();
}

}  // namespace

std::string export_hoa(const ParityAutomaton& a) {
  int pieces = a.max_color() + 1;
  return export_impl(
      a, "parity min even " + std::to_string(pieces),
      std::to_string(pieces) + " " + acceptance_formula(pieces),
      [](int c) { return " {" + std::to_string(c) + "}"; });
}

std::string export_hoa(const CoBuchiAutomaton& a) {
  // rejecting transitions land in the single Fin set
  return export_impl(a, "co-Buchi", "1 Fin(0)", [](int c) {
    return c == kRejecting ? std::string(" {0}") : std::string();
  });
}

}  // namespace cosy
