#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace crdtv {

// Base sorts of the spec language. States are products of finite relations
// over these; Id carries a strict total order, Elem is uninterpreted.
enum class BaseSort { Elem, Id };

std::string base_sort_name(BaseSort s);

// How an operation parameter is used. Fresh Id parameters are globally unique
// per invocation (ORSet-style tags); Ref Id parameters name ids the caller has
// already observed (RGA parents, RGA removal targets).
enum class ParamMode { Plain, Fresh, Ref };

struct Param {
  std::string name;
  BaseSort sort = BaseSort::Elem;
  ParamMode mode = ParamMode::Plain;

  auto operator<=>(const Param&) const = default;
};

struct RelationDecl {
  std::string name;
  std::vector<BaseSort> columns;
};

// First-order formulas over a state product. `In` atoms read the source
// (generating) state; `TgtIn` atoms read the target state an effector is
// applied to and are what make effectors conditional at application time.
struct Formula {
  enum class Kind {
    True,
    False,
    In,      // (in R (t...))      membership in source relation R
    TgtIn,   // (tgt-in R (t...))  membership in target relation R
    Eq,      // (= a b)
    Lt,      // (lt a b)           strict Id order
    Not,
    And,
    Or,
    Implies,
    Forall,  // (forall ((x S)...) body)
    Exists,
  };

  Kind kind = Kind::True;
  std::string rel;                 // In / TgtIn
  std::vector<std::string> terms;  // In / TgtIn / Eq / Lt argument names
  std::vector<Param> binders;      // Forall / Exists
  std::vector<Formula> children;

  static Formula truth() { return {}; }
  static Formula falsity() {
    Formula f;
    f.kind = Kind::False;
    return f;
  }

  // Out-of-line so the recursive children vector sees a complete type.
  std::strong_ordering operator<=>(const Formula&) const;
  bool operator==(const Formula&) const;
};

inline std::strong_ordering Formula::operator<=>(const Formula&) const = default;
inline bool Formula::operator==(const Formula&) const = default;

struct SetUpdate {
  enum class Kind { Add, Remove };

  Kind kind = Kind::Add;
  std::string rel;
  // Tuple expression; entries are parameter names or comprehension binders.
  std::vector<std::string> tuple;
  // Comprehension binders: tuple names not bound by the op parameters. The
  // update ranges over all instantiations within the atom universe for which
  // `where` holds at the generating state.
  std::vector<Param> binders;
  Formula where;  // source-only; Formula::truth() when absent
};

struct OpSpec {
  std::string name;
  std::vector<Param> params;
  Formula guard;  // source-only; false at generation => identity effector
  std::optional<Formula> when;  // residual condition, may mix In and TgtIn
  std::vector<SetUpdate> updates;
};

struct QuerySpec {
  std::string name;
  std::vector<Param> params;
  Formula body;  // source-only, side-effect free
};

struct CrdtSpec {
  std::string name;
  std::vector<RelationDecl> state;
  std::vector<OpSpec> ops;
  std::vector<QuerySpec> queries;

  const RelationDecl* relation(const std::string& n) const {
    for (auto& r : state)
      if (r.name == n) return &r;
    return nullptr;
  }
  const OpSpec* op(const std::string& n) const {
    for (auto& o : ops)
      if (o.name == n) return &o;
    return nullptr;
  }
  const QuerySpec* query(const std::string& n) const {
    for (auto& q : queries)
      if (q.name == n) return &q;
    return nullptr;
  }
};

struct Diagnostic {
  std::string message;
  int line = 0;
  int col = 0;
};

}  // namespace crdtv
