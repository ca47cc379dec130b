#include "crdtv/interp.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace crdtv {

std::string tuple_to_string(const Tuple& t) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < t.size(); i++) {
    if (i) os << ' ';
    os << t[i].name();
  }
  os << ')';
  return os.str();
}

std::string ConcreteState::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first_rel = true;
  for (auto& [rel, tuples] : rels) {
    if (!first_rel) os << ' ';
    first_rel = false;
    os << rel << ":{";
    bool first = true;
    for (auto& t : tuples) {
      if (!first) os << ' ';
      first = false;
      os << tuple_to_string(t);
    }
    os << '}';
  }
  os << '}';
  return os.str();
}

namespace {

Atom resolve(const Env& env, const std::string& name) {
  auto it = env.find(name);
  if (it == env.end())
    throw std::logic_error("unbound name '" + name + "' during evaluation");
  return it->second;
}

Tuple resolve_tuple(const Env& env, const std::vector<std::string>& terms) {
  Tuple t;
  for (auto& n : terms) t.push_back(resolve(env, n));
  return t;
}

// Enumerates instantiations of `binders` over the universe, invoking f with
// the extended environment. Returns true if f returns true for any extension
// (used for Exists) when `any` is set, otherwise requires all (Forall).
bool quantify(const std::vector<Param>& binders, size_t idx, Env& env,
              const AtomUniverse& universe, bool any,
              const std::function<bool(const Env&)>& f) {
  if (idx == binders.size()) return f(env);
  for (auto& a : universe.of(binders[idx].sort)) {
    env[binders[idx].name] = a;
    bool r = quantify(binders, idx + 1, env, universe, any, f);
    if (r == any) {
      env.erase(binders[idx].name);
      return any;
    }
  }
  env.erase(binders[idx].name);
  return !any;
}

}  // namespace

bool eval_formula(const Formula& f, const Env& env, const ConcreteState& src,
                  const ConcreteState* tgt, const AtomUniverse& universe) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::In:
      return src.contains(f.rel, resolve_tuple(env, f.terms));
    case K::TgtIn:
      if (!tgt)
        throw std::logic_error("tgt-in evaluated without a target state");
      return tgt->contains(f.rel, resolve_tuple(env, f.terms));
    case K::Eq:
      return resolve(env, f.terms[0]) == resolve(env, f.terms[1]);
    case K::Lt: {
      Atom a = resolve(env, f.terms[0]), b = resolve(env, f.terms[1]);
      return a.index < b.index;
    }
    case K::Not:
      return !eval_formula(f.children[0], env, src, tgt, universe);
    case K::And:
      for (auto& c : f.children)
        if (!eval_formula(c, env, src, tgt, universe)) return false;
      return true;
    case K::Or:
      for (auto& c : f.children)
        if (eval_formula(c, env, src, tgt, universe)) return true;
      return false;
    case K::Implies:
      return !eval_formula(f.children[0], env, src, tgt, universe) ||
             eval_formula(f.children[1], env, src, tgt, universe);
    case K::Forall:
    case K::Exists: {
      Env e2 = env;
      bool any = f.kind == K::Exists;
      return quantify(f.binders, 0, e2, universe, any, [&](const Env& env2) {
        return eval_formula(f.children[0], env2, src, tgt, universe);
      });
    }
  }
  return false;
}

namespace {

bool formula_mentions_tgt(const Formula& f) {
  if (f.kind == Formula::Kind::TgtIn) return true;
  for (auto& c : f.children)
    if (formula_mentions_tgt(c)) return true;
  return false;
}

}  // namespace

Effector gen_effector(const CrdtSpec& spec, const OpSpec& op,
                      const std::vector<Atom>& args, const ConcreteState& src,
                      const AtomUniverse& universe) {
  if (args.size() != op.params.size())
    throw std::invalid_argument(op.name + ": wrong argument count");
  Effector e;
  e.op = op.name;
  e.args = args;
  e.universe = universe;
  Env env;
  for (size_t i = 0; i < args.size(); i++) {
    if (args[i].sort != op.params[i].sort)
      throw std::invalid_argument(op.name + ": argument '" +
                                  op.params[i].name + "' has the wrong sort");
    env[op.params[i].name] = args[i];
  }

  if (!eval_formula(op.guard, env, src, nullptr, universe)) {
    e.identity = true;
    return e;
  }

  for (auto& u : op.updates) {
    Env uenv = env;
    quantify(u.binders, 0, uenv, universe, /*any=*/false, [&](const Env& env2) {
      if (eval_formula(u.where, env2, src, nullptr, universe)) {
        auto entry = std::make_pair(u.rel, resolve_tuple(env2, u.tuple));
        auto& bucket = u.kind == SetUpdate::Kind::Add ? e.adds : e.removes;
        if (std::find(bucket.begin(), bucket.end(), entry) == bucket.end())
          bucket.push_back(std::move(entry));
      }
      return true;  // keep enumerating
    });
  }
  std::sort(e.adds.begin(), e.adds.end());
  std::sort(e.removes.begin(), e.removes.end());

  if (op.when) {
    // Keep the condition residual only if it still reads the target; source
    // parts are decided now against the generating state.
    if (formula_mentions_tgt(*op.when)) {
      e.when = *op.when;
      e.env = env;
      e.gen = src;
    } else if (!eval_formula(*op.when, env, src, nullptr, universe)) {
      e.identity = true;
      e.adds.clear();
      e.removes.clear();
    }
  }
  return e;
}

ConcreteState apply_effector(const Effector& e, const ConcreteState& tgt) {
  if (e.identity) return tgt;
  if (e.when &&
      !eval_formula(*e.when, e.env, e.gen, &tgt, e.universe))
    return tgt;
  ConcreteState out = tgt;
  for (auto& [rel, t] : e.removes) out.remove(rel, t);
  for (auto& [rel, t] : e.adds) out.add(rel, t);
  return out;
}

ConcreteState apply_all(const std::vector<Effector>& effs,
                        const ConcreteState& start) {
  ConcreteState s = start;
  for (auto& e : effs) s = apply_effector(e, s);
  return s;
}

Effector run_op_with_history(const CrdtSpec& spec, const OpSpec& op,
                             const std::vector<Atom>& args,
                             const ConcreteState& start,
                             const std::vector<Effector>& history,
                             const AtomUniverse& universe) {
  return gen_effector(spec, op, args, apply_all(history, start), universe);
}

bool eval_query(const CrdtSpec& spec, const QuerySpec& query,
                const std::vector<Atom>& args, const ConcreteState& src,
                const AtomUniverse& universe) {
  Env env;
  for (size_t i = 0; i < args.size(); i++) env[query.params[i].name] = args[i];
  return eval_formula(query.body, env, src, nullptr, universe);
}

std::set<std::pair<std::string, Tuple>> wr_set(const Effector& e) {
  std::set<std::pair<std::string, Tuple>> out;
  if (e.identity) return out;
  for (auto& p : e.adds) out.insert(p);
  for (auto& p : e.removes) out.insert(p);
  return out;
}

std::set<std::pair<std::string, Tuple>> wr_set(const CrdtSpec& spec,
                                               const OpSpec& op,
                                               const std::vector<Atom>& args,
                                               const ConcreteState& src,
                                               const AtomUniverse& universe) {
  return wr_set(gen_effector(spec, op, args, src, universe));
}

namespace {

// Ground TgtIn tuples a residual condition may read, over-approximated by
// instantiating quantified positions over the whole universe.
void collect_reads_walk(const CrdtSpec& spec, const Formula& f,
                        std::map<std::string, BaseSort> binder_sorts, Env env,
                        const AtomUniverse& universe,
                        std::set<std::pair<std::string, Tuple>>& out) {
  using K = Formula::Kind;
  if (f.kind == K::TgtIn) {
    const RelationDecl* rel = spec.relation(f.rel);
    std::function<void(size_t, Tuple&)> rec = [&](size_t i, Tuple& t) {
      if (i == f.terms.size()) {
        out.insert({f.rel, t});
        return;
      }
      auto it = env.find(f.terms[i]);
      if (it != env.end()) {
        t.push_back(it->second);
        rec(i + 1, t);
        t.pop_back();
        return;
      }
      for (auto& a : universe.of(rel->columns[i])) {
        t.push_back(a);
        rec(i + 1, t);
        t.pop_back();
      }
    };
    Tuple t;
    rec(0, t);
    return;
  }
  if (f.kind == K::Forall || f.kind == K::Exists) {
    auto bs = binder_sorts;
    Env e2 = env;
    for (auto& b : f.binders) {
      bs[b.name] = b.sort;
      e2.erase(b.name);  // quantified: ranges over the universe
    }
    collect_reads_walk(spec, f.children[0], bs, e2, universe, out);
    return;
  }
  for (auto& c : f.children)
    collect_reads_walk(spec, c, binder_sorts, env, universe, out);
}

std::set<std::pair<std::string, Tuple>> footprint(const CrdtSpec& spec,
                                                  const Effector& e,
                                                  const AtomUniverse& universe) {
  std::set<std::pair<std::string, Tuple>> out = wr_set(e);
  if (e.when)
    collect_reads_walk(spec, *e.when, {}, e.env, universe, out);
  return out;
}

}  // namespace

std::optional<ConcreteState> commute_counterexample(
    const CrdtSpec& spec, const Effector& a, const Effector& b,
    const AtomUniverse& universe) {
  if (a.identity || b.identity) return std::nullopt;
  auto fp = footprint(spec, a, universe);
  auto fpb = footprint(spec, b, universe);
  fp.insert(fpb.begin(), fpb.end());
  std::vector<std::pair<std::string, Tuple>> tuples(fp.begin(), fp.end());
  if (tuples.size() > 24)
    throw std::logic_error("commutativity footprint too large to enumerate");
  size_t n = tuples.size();
  for (size_t mask = 0; mask < (size_t{1} << n); mask++) {
    ConcreteState s = ConcreteState::initial(spec);
    for (size_t i = 0; i < n; i++)
      if (mask & (size_t{1} << i)) s.add(tuples[i].first, tuples[i].second);
    ConcreteState ab = apply_effector(b, apply_effector(a, s));
    ConcreteState ba = apply_effector(a, apply_effector(b, s));
    if (ab != ba) return s;
  }
  return std::nullopt;
}

bool effectors_commute(const CrdtSpec& spec, const Effector& a,
                       const Effector& b, const AtomUniverse& universe) {
  return !commute_counterexample(spec, a, b, universe).has_value();
}

bool effectors_equal(const CrdtSpec& spec, const Effector& a,
                     const Effector& b, const AtomUniverse& universe) {
  auto fp = footprint(spec, a, universe);
  auto fpb = footprint(spec, b, universe);
  fp.insert(fpb.begin(), fpb.end());
  std::vector<std::pair<std::string, Tuple>> tuples(fp.begin(), fp.end());
  if (tuples.size() > 24)
    throw std::logic_error("equality footprint too large to enumerate");
  size_t n = tuples.size();
  for (size_t mask = 0; mask < (size_t{1} << n); mask++) {
    ConcreteState s = ConcreteState::initial(spec);
    for (size_t i = 0; i < n; i++)
      if (mask & (size_t{1} << i)) s.add(tuples[i].first, tuples[i].second);
    if (apply_effector(a, s) != apply_effector(b, s)) return false;
  }
  return true;
}

}  // namespace crdtv
