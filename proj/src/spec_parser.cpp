#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "crdtv/sexpr.hpp"
#include "crdtv/spec_core.hpp"

namespace crdtv {

std::string base_sort_name(BaseSort s) {
  return s == BaseSort::Elem ? "E" : "I";
}

namespace {

struct SpecParser {
  std::vector<Diagnostic>& diags;

  void error(const Sexpr& at, const std::string& msg) {
    diags.push_back({msg, at.line, at.col});
  }

  std::optional<BaseSort> parse_sort(const Sexpr& s) {
    if (s.is_atom("E")) return BaseSort::Elem;
    if (s.is_atom("I")) return BaseSort::Id;
    error(s, "unknown sort '" + s.to_string() + "' (expected E or I)");
    return std::nullopt;
  }

  bool parse_params(const Sexpr& s, std::vector<Param>& out) {
    if (!s.is_list()) {
      error(s, "expected parameter list");
      return false;
    }
    for (auto& p : s.items) {
      if (!p.is_list() || p.size() < 2 || !p[0].is_atom() || !p[1].is_atom()) {
        error(p, "expected (name sort [fresh|ref])");
        return false;
      }
      Param param;
      param.name = p[0].atom;
      auto sort = parse_sort(p[1]);
      if (!sort) return false;
      param.sort = *sort;
      if (p.size() == 3) {
        if (p[2].is_atom("fresh"))
          param.mode = ParamMode::Fresh;
        else if (p[2].is_atom("ref"))
          param.mode = ParamMode::Ref;
        else {
          error(p[2], "expected 'fresh' or 'ref'");
          return false;
        }
        if (param.sort != BaseSort::Id) {
          error(p[2], "fresh/ref annotations apply to Id parameters only");
          return false;
        }
      }
      out.push_back(param);
    }
    return true;
  }

  bool parse_terms(const Sexpr& s, std::vector<std::string>& out) {
    if (!s.is_list()) {
      error(s, "expected tuple (t ...)");
      return false;
    }
    for (auto& t : s.items) {
      if (!t.is_atom()) {
        error(t, "tuple entries must be names");
        return false;
      }
      out.push_back(t.atom);
    }
    return true;
  }

  bool parse_formula(const Sexpr& s, Formula& out) {
    if (s.is_atom("true")) {
      out = Formula::truth();
      return true;
    }
    if (s.is_atom("false")) {
      out = Formula::falsity();
      return true;
    }
    std::string h = s.head();
    if (h == "in" || h == "tgt-in") {
      if (s.size() != 3 || !s[1].is_atom()) {
        error(s, "expected (" + h + " REL (t ...))");
        return false;
      }
      out = {};
      out.kind = h == "in" ? Formula::Kind::In : Formula::Kind::TgtIn;
      out.rel = s[1].atom;
      return parse_terms(s[2], out.terms);
    }
    if (h == "=" || h == "lt") {
      if (s.size() != 3 || !s[1].is_atom() || !s[2].is_atom()) {
        error(s, "expected (" + h + " a b)");
        return false;
      }
      out = {};
      out.kind = h == "=" ? Formula::Kind::Eq : Formula::Kind::Lt;
      out.terms = {s[1].atom, s[2].atom};
      return true;
    }
    if (h == "not") {
      if (s.size() != 2) {
        error(s, "expected (not F)");
        return false;
      }
      out = {};
      out.kind = Formula::Kind::Not;
      out.children.resize(1);
      return parse_formula(s[1], out.children[0]);
    }
    if (h == "and" || h == "or") {
      out = {};
      out.kind = h == "and" ? Formula::Kind::And : Formula::Kind::Or;
      for (size_t i = 1; i < s.size(); i++) {
        Formula f;
        if (!parse_formula(s[i], f)) return false;
        out.children.push_back(std::move(f));
      }
      return true;
    }
    if (h == "implies") {
      if (s.size() != 3) {
        error(s, "expected (implies F F)");
        return false;
      }
      out = {};
      out.kind = Formula::Kind::Implies;
      out.children.resize(2);
      return parse_formula(s[1], out.children[0]) &&
             parse_formula(s[2], out.children[1]);
    }
    if (h == "forall" || h == "exists") {
      if (s.size() != 3) {
        error(s, "expected (" + h + " ((x S)...) F)");
        return false;
      }
      out = {};
      out.kind = h == "forall" ? Formula::Kind::Forall : Formula::Kind::Exists;
      if (!parse_params(s[1], out.binders)) return false;
      out.children.resize(1);
      return parse_formula(s[2], out.children[0]);
    }
    error(s, "unknown formula form '" + s.to_string() + "'");
    return false;
  }

  bool parse_op(const Sexpr& s, CrdtSpec& spec) {
    if (s.size() < 3 || !s[1].is_atom()) {
      error(s, "expected (op NAME ((p S)...) clauses...)");
      return false;
    }
    OpSpec op;
    op.name = s[1].atom;
    if (!parse_params(s[2], op.params)) return false;
    for (size_t i = 3; i < s.size(); i++) {
      const Sexpr& c = s[i];
      std::string h = c.head();
      if (h == "guard") {
        if (c.size() != 2) {
          error(c, "expected (guard F)");
          return false;
        }
        if (!parse_formula(c[1], op.guard)) return false;
      } else if (h == "when") {
        if (c.size() != 2) {
          error(c, "expected (when F)");
          return false;
        }
        Formula f;
        if (!parse_formula(c[1], f)) return false;
        op.when = std::move(f);
      } else if (h == "add" || h == "remove") {
        if (c.size() < 3 || !c[1].is_atom()) {
          error(c, "expected (" + h + " REL (t...) [(where F)])");
          return false;
        }
        SetUpdate u;
        u.kind = h == "add" ? SetUpdate::Kind::Add : SetUpdate::Kind::Remove;
        u.rel = c[1].atom;
        if (!parse_terms(c[2], u.tuple)) return false;
        if (c.size() == 4) {
          if (c[3].head() != "where" || c[3].size() != 2) {
            error(c[3], "expected (where F)");
            return false;
          }
          if (!parse_formula(c[3][1], u.where)) return false;
        } else if (c.size() > 4) {
          error(c, "too many clauses in update");
          return false;
        }
        // Comprehension binders: tuple entries not naming an op parameter.
        const RelationDecl* rel = spec.relation(u.rel);
        if (rel && rel->columns.size() == u.tuple.size()) {
          std::set<std::string> seen;
          for (size_t k = 0; k < u.tuple.size(); k++) {
            const std::string& t = u.tuple[k];
            bool is_param = false;
            for (auto& p : op.params)
              if (p.name == t) is_param = true;
            if (!is_param && seen.insert(t).second)
              u.binders.push_back({t, rel->columns[k], ParamMode::Plain});
          }
        }
        op.updates.push_back(std::move(u));
      } else {
        error(c, "unknown op clause '" + h + "'");
        return false;
      }
    }
    spec.ops.push_back(std::move(op));
    return true;
  }

  std::optional<CrdtSpec> parse(const std::string& text) {
    std::vector<Sexpr> top;
    SexprError serr;
    if (!parse_sexprs(text, top, serr)) {
      diags.push_back({serr.message, serr.line, serr.col});
      return std::nullopt;
    }
    if (top.size() != 1 || top[0].head() != "crdt" || top[0].size() < 2 ||
        !top[0][1].is_atom()) {
      diags.push_back({"expected a single (crdt NAME ...) form", 1, 1});
      return std::nullopt;
    }
    const Sexpr& root = top[0];
    CrdtSpec spec;
    spec.name = root[1].atom;
    for (size_t i = 2; i < root.size(); i++) {
      const Sexpr& c = root[i];
      std::string h = c.head();
      if (h == "state") {
        for (size_t k = 1; k < c.size(); k++) {
          const Sexpr& r = c[k];
          if (!r.is_list() || r.size() != 2 || !r[0].is_atom() ||
              !r[1].is_list()) {
            error(r, "expected (REL (S...))");
            return std::nullopt;
          }
          RelationDecl decl;
          decl.name = r[0].atom;
          for (auto& col : r[1].items) {
            auto sort = parse_sort(col);
            if (!sort) return std::nullopt;
            decl.columns.push_back(*sort);
          }
          spec.state.push_back(std::move(decl));
        }
      } else if (h == "op") {
        if (!parse_op(c, spec)) return std::nullopt;
      } else if (h == "query") {
        if (c.size() != 4 || !c[1].is_atom()) {
          error(c, "expected (query NAME ((p S)...) F)");
          return std::nullopt;
        }
        QuerySpec q;
        q.name = c[1].atom;
        if (!parse_params(c[2], q.params)) return std::nullopt;
        if (!parse_formula(c[3], q.body)) return std::nullopt;
        spec.queries.push_back(std::move(q));
      } else {
        error(c, "unknown top-level clause '" + h + "'");
        return std::nullopt;
      }
    }
    return spec;
  }
};

}  // namespace

std::optional<CrdtSpec> parse_spec(const std::string& text,
                                   std::vector<Diagnostic>& diags) {
  SpecParser p{diags};
  auto spec = p.parse(text);
  if (!spec) return std::nullopt;
  if (!validate_spec(*spec, diags)) return std::nullopt;
  return spec;
}

}  // namespace crdtv
