#include <map>
#include <set>

#include "crdtv/spec_core.hpp"

namespace crdtv {

namespace {

struct Scope {
  std::map<std::string, BaseSort> vars;

  bool lookup(const std::string& n, BaseSort& s) const {
    auto it = vars.find(n);
    if (it == vars.end()) return false;
    s = it->second;
    return true;
  }
};

struct Validator {
  const CrdtSpec& spec;
  std::vector<Diagnostic>& diags;
  bool ok = true;

  void error(const std::string& msg) {
    diags.push_back({msg, 0, 0});
    ok = false;
  }

  void check_formula(const Formula& f, Scope scope, bool allow_tgt,
                     const std::string& ctx) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::True:
      case K::False:
        return;
      case K::TgtIn:
        if (!allow_tgt) {
          error(ctx + ": target-state membership (tgt-in " + f.rel +
                ") is only allowed in 'when' clauses");
          return;
        }
        [[fallthrough]];
      case K::In: {
        const RelationDecl* r = spec.relation(f.rel);
        if (!r) {
          error(ctx + ": unknown relation '" + f.rel + "'");
          return;
        }
        if (r->columns.size() != f.terms.size()) {
          error(ctx + ": relation '" + f.rel + "' expects " +
                std::to_string(r->columns.size()) + " columns");
          return;
        }
        for (size_t i = 0; i < f.terms.size(); i++) {
          BaseSort s;
          if (!scope.lookup(f.terms[i], s)) {
            error(ctx + ": unbound name '" + f.terms[i] + "'");
          } else if (s != r->columns[i]) {
            error(ctx + ": '" + f.terms[i] + "' has sort " +
                  base_sort_name(s) + " but column " + std::to_string(i) +
                  " of " + f.rel + " is " + base_sort_name(r->columns[i]));
          }
        }
        return;
      }
      case K::Eq:
      case K::Lt: {
        BaseSort sa, sb;
        bool ba = scope.lookup(f.terms[0], sa);
        bool bb = scope.lookup(f.terms[1], sb);
        if (!ba) error(ctx + ": unbound name '" + f.terms[0] + "'");
        if (!bb) error(ctx + ": unbound name '" + f.terms[1] + "'");
        if (ba && bb && sa != sb) error(ctx + ": sort mismatch in comparison");
        if (f.kind == K::Lt && ba && sa != BaseSort::Id)
          error(ctx + ": lt is defined on Id only");
        return;
      }
      case K::Not:
      case K::And:
      case K::Or:
      case K::Implies:
        for (auto& c : f.children) check_formula(c, scope, allow_tgt, ctx);
        return;
      case K::Forall:
      case K::Exists: {
        Scope inner = scope;
        for (auto& b : f.binders) inner.vars[b.name] = b.sort;
        check_formula(f.children[0], inner, allow_tgt, ctx);
        return;
      }
    }
  }

  void run() {
    std::set<std::string> rel_names;
    for (auto& r : spec.state) {
      if (!rel_names.insert(r.name).second)
        error("duplicate relation '" + r.name + "'");
      if (r.columns.empty())
        error("relation '" + r.name + "' must have at least one column");
    }
    std::set<std::string> op_names;
    for (auto& op : spec.ops) {
      std::string ctx = spec.name + "." + op.name;
      if (!op_names.insert(op.name).second)
        error("duplicate operation '" + op.name + "'");
      Scope scope;
      for (auto& p : op.params) {
        if (!scope.vars.emplace(p.name, p.sort).second)
          error(ctx + ": duplicate parameter '" + p.name + "'");
      }
      check_formula(op.guard, scope, false, ctx + " guard");
      if (op.when) check_formula(*op.when, scope, true, ctx + " when");
      std::set<std::string> added, removed;
      for (auto& u : op.updates) {
        const RelationDecl* r = spec.relation(u.rel);
        if (!r) {
          error(ctx + ": update on unknown relation '" + u.rel + "'");
          continue;
        }
        if (r->columns.size() != u.tuple.size()) {
          error(ctx + ": update tuple arity mismatch for '" + u.rel + "'");
          continue;
        }
        (u.kind == SetUpdate::Kind::Add ? added : removed).insert(u.rel);
        Scope uscope = scope;
        for (auto& b : u.binders) uscope.vars[b.name] = b.sort;
        for (size_t i = 0; i < u.tuple.size(); i++) {
          BaseSort s;
          if (!uscope.lookup(u.tuple[i], s)) {
            error(ctx + ": unbound tuple entry '" + u.tuple[i] + "'");
          } else if (s != r->columns[i]) {
            error(ctx + ": tuple entry '" + u.tuple[i] + "' sort mismatch");
          }
        }
        check_formula(u.where, uscope, false, ctx + " where");
      }
      for (auto& rel : added)
        if (removed.count(rel))
          error(ctx + ": both add and remove target relation '" + rel + "'");
    }
    for (auto& q : spec.queries) {
      std::string ctx = spec.name + "." + q.name;
      Scope scope;
      for (auto& p : q.params) scope.vars[p.name] = p.sort;
      check_formula(q.body, scope, false, ctx);
    }
  }
};

}  // namespace

bool validate_spec(const CrdtSpec& spec, std::vector<Diagnostic>& diags) {
  Validator v{spec, diags};
  v.run();
  return v.ok;
}

}  // namespace crdtv
