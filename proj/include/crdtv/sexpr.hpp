#pragma once

#include <memory>
#include <string>
#include <vector>

namespace crdtv {

// Minimal s-expression reader shared by the .crdt spec parser, the SMT-LIB
// emitter's golden tests and the solver model parser.
struct Sexpr {
  enum class Kind { Atom, List };

  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<Sexpr> items;
  int line = 0;
  int col = 0;

  static Sexpr make_atom(std::string a) {
    Sexpr s;
    s.kind = Kind::Atom;
    s.atom = std::move(a);
    return s;
  }
  static Sexpr make_list(std::vector<Sexpr> xs) {
    Sexpr s;
    s.kind = Kind::List;
    s.items = std::move(xs);
    return s;
  }

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_atom(const std::string& a) const { return is_atom() && atom == a; }
  size_t size() const { return items.size(); }
  const Sexpr& operator[](size_t i) const { return items[i]; }

  // Head symbol of a list, or empty string.
  std::string head() const {
    if (is_list() && !items.empty() && items[0].is_atom()) return items[0].atom;
    return {};
  }

  std::string to_string() const;
};

struct SexprError {
  std::string message;
  int line = 0;
  int col = 0;
};

// Parses a sequence of top-level s-expressions. Comments run from ';' to end
// of line. Returns false and fills `err` on malformed input.
bool parse_sexprs(const std::string& text, std::vector<Sexpr>& out, SexprError& err);

}  // namespace crdtv
