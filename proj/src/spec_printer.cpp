#include <sstream>

#include "crdtv/spec_core.hpp"

namespace crdtv {

namespace {

void print_params(std::ostringstream& os, const std::vector<Param>& ps) {
  os << '(';
  for (size_t i = 0; i < ps.size(); i++) {
    if (i) os << ' ';
    os << '(' << ps[i].name << ' ' << base_sort_name(ps[i].sort);
    if (ps[i].mode == ParamMode::Fresh) os << " fresh";
    if (ps[i].mode == ParamMode::Ref) os << " ref";
    os << ')';
  }
  os << ')';
}

void print_terms(std::ostringstream& os, const std::vector<std::string>& ts) {
  os << '(';
  for (size_t i = 0; i < ts.size(); i++) {
    if (i) os << ' ';
    os << ts[i];
  }
  os << ')';
}

void print_formula(std::ostringstream& os, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
      os << "true";
      return;
    case K::False:
      os << "false";
      return;
    case K::In:
    case K::TgtIn:
      os << '(' << (f.kind == K::In ? "in " : "tgt-in ") << f.rel << ' ';
      print_terms(os, f.terms);
      os << ')';
      return;
    case K::Eq:
    case K::Lt:
      os << '(' << (f.kind == K::Eq ? "=" : "lt") << ' ' << f.terms[0] << ' '
         << f.terms[1] << ')';
      return;
    case K::Not:
      os << "(not ";
      print_formula(os, f.children[0]);
      os << ')';
      return;
    case K::And:
    case K::Or:
      os << '(' << (f.kind == K::And ? "and" : "or");
      for (auto& c : f.children) {
        os << ' ';
        print_formula(os, c);
      }
      os << ')';
      return;
    case K::Implies:
      os << "(implies ";
      print_formula(os, f.children[0]);
      os << ' ';
      print_formula(os, f.children[1]);
      os << ')';
      return;
    case K::Forall:
    case K::Exists:
      os << '(' << (f.kind == K::Forall ? "forall" : "exists") << ' ';
      print_params(os, f.binders);
      os << ' ';
      print_formula(os, f.children[0]);
      os << ')';
      return;
  }
}

bool is_true(const Formula& f) { return f.kind == Formula::Kind::True; }

}  // namespace

std::string pretty_print(const CrdtSpec& spec) {
  std::ostringstream os;
  os << "(crdt " << spec.name << "\n";
  os << "  (state";
  for (auto& r : spec.state) {
    os << "\n    (" << r.name << " (";
    for (size_t i = 0; i < r.columns.size(); i++) {
      if (i) os << ' ';
      os << base_sort_name(r.columns[i]);
    }
    os << "))";
  }
  os << ")\n";
  for (auto& op : spec.ops) {
    os << "  (op " << op.name << ' ';
    print_params(os, op.params);
    if (!is_true(op.guard)) {
      os << "\n    (guard ";
      print_formula(os, op.guard);
      os << ')';
    }
    if (op.when) {
      os << "\n    (when ";
      print_formula(os, *op.when);
      os << ')';
    }
    for (auto& u : op.updates) {
      os << "\n    (" << (u.kind == SetUpdate::Kind::Add ? "add" : "remove")
         << ' ' << u.rel << ' ';
      print_terms(os, u.tuple);
      if (!is_true(u.where)) {
        os << " (where ";
        print_formula(os, u.where);
        os << ')';
      }
      os << ')';
    }
    os << ")\n";
  }
  for (auto& q : spec.queries) {
    os << "  (query " << q.name << ' ';
    print_params(os, q.params);
    os << "\n    ";
    print_formula(os, q.body);
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

bool spec_equal(const CrdtSpec& a, const CrdtSpec& b) {
  return pretty_print(a) == pretty_print(b);
}

}  // namespace crdtv
