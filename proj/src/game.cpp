#include "cosy/game.hpp"

#include <cctype>
#include <sstream>

#include "cosy/ltl.hpp"

namespace cosy {

namespace {

enum class Section { None, Input, Output, Init, Trans, Liveness };

struct ExprLine {
  std::string text;  // padded with spaces so columns match the file
  int line;
};

bool reserved_name(const std::string& n) {
  return n == "G" || n == "F" || n == "X" || n == "U" || n == "true" ||
         n == "false";
}

}  // namespace

SymbolicGame parse_game(const std::string& text) {
  std::vector<PropInfo> props;
  std::vector<ExprLine> init_lines, trans_lines, live_lines;
  int init_section_line = 0;

  Section sec = Section::None;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    lineno++;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();

    size_t i = 0;
    while (i < raw.size() && isspace(static_cast<unsigned char>(raw[i]))) i++;
    if (i == raw.size()) continue;

    if (raw[i] == '[') {
      size_t close = raw.find(']', i);
      if (close == std::string::npos)
        throw ParseError("unterminated section header", lineno,
                         static_cast<int>(i) + 1);
      std::string name = raw.substr(i + 1, close - i - 1);
      if (name == "INPUT") sec = Section::Input;
      else if (name == "OUTPUT") sec = Section::Output;
      else if (name == "INIT") sec = Section::Init;
      else if (name == "TRANS") sec = Section::Trans;
      else if (name == "LIVENESS") sec = Section::Liveness;
      else
        throw ParseError("unknown section '" + name + "'", lineno,
                         static_cast<int>(i) + 1);
      if (sec == Section::Init && init_section_line == 0)
        init_section_line = lineno;
      i = close + 1;
      while (i < raw.size() && isspace(static_cast<unsigned char>(raw[i])))
        i++;
      if (i == raw.size()) continue;
    }

    if (sec == Section::None)
      throw ParseError("content outside of a section", lineno,
                       static_cast<int>(i) + 1);

    if (sec == Section::Input || sec == Section::Output) {
      while (i < raw.size()) {
        size_t start = i;
        while (i < raw.size() && !isspace(static_cast<unsigned char>(raw[i])))
          i++;
        std::string name = raw.substr(start, i - start);
        int col = static_cast<int>(start) + 1;
        bool ok = isalpha(static_cast<unsigned char>(name[0])) ||
                  name[0] == '_';
        for (char c : name)
          if (!isalnum(static_cast<unsigned char>(c)) && c != '_') ok = false;
        if (!ok)
          throw ParseError("invalid proposition name '" + name + "'", lineno,
                           col);
        if (reserved_name(name))
          throw ParseError("reserved name '" + name + "'", lineno, col);
        for (const auto& p : props)
          if (p.name == name)
            throw ParseError("duplicate proposition '" + name + "'", lineno,
                             col);
        props.push_back(
            {name, sec == Section::Input ? PropKind::Input : PropKind::Output});
        while (i < raw.size() && isspace(static_cast<unsigned char>(raw[i])))
          i++;
      }
      continue;
    }

    ExprLine e{std::string(i, ' ') + raw.substr(i), lineno};
    if (sec == Section::Init) init_lines.push_back(std::move(e));
    else if (sec == Section::Trans) trans_lines.push_back(std::move(e));
    else live_lines.push_back(std::move(e));
  }

  SymbolicGame g;
  g.store = std::make_unique<Store>(props);
  Store& s = *g.store;
  for (int p = 0; p < s.prop_count(); p++) {
    if (s.prop(p).kind == PropKind::Input) g.inputs.push_back(p);
    else g.outputs.push_back(p);
  }

  g.init = s.ltrue();
  for (const auto& e : init_lines)
    g.init = g.init & to_bdd(parse_bool_expr(e.text, s, false, e.line), s);
  g.trans = s.ltrue();
  for (const auto& e : trans_lines)
    g.trans = g.trans & to_bdd(parse_bool_expr(e.text, s, true, e.line), s);

  if (g.init.is_false())
    throw ParseError("initial condition is unsatisfiable",
                     init_section_line ? init_section_line : 1, 1);

  if (live_lines.empty()) {
    g.objective_text = "true";
  } else {
    std::string joined;
    for (const auto& e : live_lines) {
      parse_ltl(e.text, s, e.line);  // errors point at the file position
      std::string body = e.text.substr(e.text.find_first_not_of(' '));
      if (live_lines.size() == 1) {
        joined = body;
      } else {
        if (!joined.empty()) joined += " & ";
        joined += "(" + body + ")";
      }
    }
    g.objective_text = joined;
  }
  return g;
}

Region enf_pre(const SymbolicGame& g, Bdd phi) {
  Store& s = *g.store;
  Bdd can_move = s.exists(g.trans & phi, s.primed_output_levels());
  return s.forall(can_move, s.primed_input_levels());
}

Region restrict_to_arena(const SymbolicGame& g) {
  Store& s = *g.store;
  Bdd x = s.ltrue();
  for (;;) {
    Bdd next = enf_pre(g, s.prime(x));
    if (next == x) return x;
    x = next;
  }
}

}  // namespace cosy
