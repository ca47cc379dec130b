#include "crdtv/sexpr.hpp"

#include <sstream>

namespace crdtv {

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char next() {
    char c = text[pos++];
    if (c == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
    return c;
  }

  void skip_ws() {
    while (!done()) {
      char c = peek();
      if (c == ';') {
        while (!done() && peek() != '\n') next();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        next();
      } else {
        break;
      }
    }
  }
};

bool is_atom_char(char c) {
  return c != '(' && c != ')' && c != ';' && c != ' ' && c != '\t' &&
         c != '\r' && c != '\n';
}

bool parse_one(Cursor& cur, Sexpr& out, SexprError& err) {
  cur.skip_ws();
  if (cur.done()) {
    err = {"unexpected end of input", cur.line, cur.col};
    return false;
  }
  int line = cur.line, col = cur.col;
  char c = cur.peek();
  if (c == '(') {
    cur.next();
    Sexpr list = Sexpr::make_list({});
    list.line = line;
    list.col = col;
    while (true) {
      cur.skip_ws();
      if (cur.done()) {
        err = {"unclosed '('", line, col};
        return false;
      }
      if (cur.peek() == ')') {
        cur.next();
        out = std::move(list);
        return true;
      }
      Sexpr item;
      if (!parse_one(cur, item, err)) return false;
      list.items.push_back(std::move(item));
    }
  }
  if (c == ')') {
    err = {"unmatched ')'", line, col};
    return false;
  }
  std::string atom;
  if (c == '|') {  // quoted symbol, used by SMT model output
    cur.next();
    while (!cur.done() && cur.peek() != '|') atom.push_back(cur.next());
    if (cur.done()) {
      err = {"unclosed '|'", line, col};
      return false;
    }
    cur.next();
  } else {
    while (!cur.done() && is_atom_char(cur.peek())) atom.push_back(cur.next());
  }
  out = Sexpr::make_atom(std::move(atom));
  out.line = line;
  out.col = col;
  return true;
}

}  // namespace

std::string Sexpr::to_string() const {
  if (is_atom()) return atom;
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < items.size(); i++) {
    if (i) os << ' ';
    os << items[i].to_string();
  }
  os << ')';
  return os.str();
}

bool parse_sexprs(const std::string& text, std::vector<Sexpr>& out, SexprError& err) {
  Cursor cur{text};
  out.clear();
  while (true) {
    cur.skip_ws();
    if (cur.done()) return true;
    Sexpr s;
    if (!parse_one(cur, s, err)) return false;
    out.push_back(std::move(s));
  }
}

}  // namespace crdtv
