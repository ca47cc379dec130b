#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crdtv/interp.hpp"
#include "crdtv/spec_core.hpp"

using namespace crdtv;

TEST_CASE("all builtins parse and round-trip through the pretty printer") {
  for (auto& name : builtin_names()) {
    const CrdtSpec& b = builtin(name);
    CHECK(b.name == name);
    std::vector<Diagnostic> diags;
    auto reparsed = parse_spec(pretty_print(b), diags);
    REQUIRE_MESSAGE(reparsed.has_value(), name);
    CHECK(spec_equal(*reparsed, b));
    // Printing is byte-stable.
    CHECK(pretty_print(*reparsed) == pretty_print(b));
  }
}

TEST_CASE("builtin lookup") {
  CHECK(is_builtin("uset"));
  CHECK(!is_builtin("gset"));
  CHECK_THROWS_AS(builtin("gset"), std::invalid_argument);
}

TEST_CASE("uset guards match the source definition") {
  const CrdtSpec& u = builtin("uset");
  const OpSpec* add = u.op("Add");
  REQUIRE(add);
  CHECK(add->guard.kind == Formula::Kind::Not);
  CHECK(add->guard.children[0].kind == Formula::Kind::In);
  CHECK(add->guard.children[0].rel == "S");
  const OpSpec* rem = u.op("Remove");
  REQUIRE(rem);
  CHECK(rem->guard.kind == Formula::Kind::In);
  REQUIRE(rem->when.has_value());
  CHECK(rem->when->kind == Formula::Kind::TgtIn);
}

TEST_CASE("rga state shape and parameter annotations") {
  const CrdtSpec& r = builtin("rga");
  REQUIRE(r.state.size() == 2);
  CHECK(r.state[0].name == "A");
  CHECK(r.state[0].columns ==
        std::vector<BaseSort>{BaseSort::Elem, BaseSort::Id, BaseSort::Id});
  CHECK(r.state[1].name == "R");
  CHECK(r.state[1].columns == std::vector<BaseSort>{BaseSort::Id});
  const OpSpec* ar = r.op("AddRight");
  REQUIRE(ar);
  CHECK(ar->params[0].mode == ParamMode::Ref);
  CHECK(ar->params[2].mode == ParamMode::Fresh);
  REQUIRE(ar->when.has_value());
}

TEST_CASE("empty ops list is a valid degenerate spec") {
  std::vector<Diagnostic> diags;
  auto spec = parse_spec("(crdt empty (state (S (E))))", diags);
  REQUIRE(spec.has_value());
  CHECK(spec->ops.empty());
  CHECK(pretty_print(*spec).find("(crdt empty") == 0);
}

TEST_CASE("guard referencing the target state is rejected") {
  std::vector<Diagnostic> diags;
  auto spec = parse_spec(
      "(crdt bad (state (S (E)))"
      " (op Remove ((a E)) (guard (tgt-in S (a))) (remove S (a))))",
      diags);
  CHECK(!spec.has_value());
  REQUIRE(!diags.empty());
  CHECK(diags[0].message.find("tgt-in") != std::string::npos);
}

TEST_CASE("comprehension conditions may not read the target state") {
  std::vector<Diagnostic> diags;
  auto spec = parse_spec(
      "(crdt bad (state (S (E I)))"
      " (op Remove ((a E)) (remove S (a i) (where (tgt-in S (a i))))))",
      diags);
  CHECK(!spec.has_value());
}

TEST_CASE("syntax errors carry positions") {
  std::vector<Diagnostic> diags;
  auto spec = parse_spec("(crdt x (state (S (E))\n  (op", diags);
  CHECK(!spec.has_value());
  REQUIRE(!diags.empty());
  CHECK(diags[0].line >= 1);
}

TEST_CASE("unknown sorts and relations are diagnosed") {
  std::vector<Diagnostic> diags;
  CHECK(!parse_spec("(crdt x (state (S (Q))))", diags).has_value());
  diags.clear();
  CHECK(!parse_spec("(crdt x (state (S (E))) (op A ((a E)) (add T (a))))",
                    diags)
             .has_value());
}

TEST_CASE("add and remove of the same relation in one op is rejected") {
  std::vector<Diagnostic> diags;
  auto spec = parse_spec(
      "(crdt bad (state (S (E)))"
      " (op Swap ((a E) (b E)) (add S (a)) (remove S (b))))",
      diags);
  CHECK(!spec.has_value());
}

TEST_CASE("mutated builtins fail validation") {
  // Pushing a target read into a guard must be caught.
  CrdtSpec broken = builtin("simple-set");
  Formula f;
  f.kind = Formula::Kind::TgtIn;
  f.rel = "S";
  f.terms = {"a"};
  broken.ops[0].guard = f;
  std::vector<Diagnostic> diags;
  CHECK(!validate_spec(broken, diags));
}

TEST_CASE("wr_set examples") {
  AtomUniverse uni{2, 3};
  Atom a = Atom::elem(0), b = Atom::elem(1);
  Atom i0 = Atom::id(0), i1 = Atom::id(1), i2 = Atom::id(2);

  SUBCASE("simple-set Add writes exactly the added element") {
    const CrdtSpec& s = builtin("simple-set");
    ConcreteState any = ConcreteState::initial(s);
    any.add("S", {b});
    auto ws = wr_set(s, *s.op("Add"), {a}, any, uni);
    CHECK(ws == std::set<std::pair<std::string, Tuple>>{{"S", {a}}});
  }
  SUBCASE("uset Remove with a absent is a no-op") {
    const CrdtSpec& s = builtin("uset");
    auto ws = wr_set(s, *s.op("Remove"), {a}, ConcreteState::initial(s), uni);
    CHECK(ws.empty());
  }
  SUBCASE("orset Remove removes every tagged copy present at the source") {
    const CrdtSpec& s = builtin("orset");
    ConcreteState src = ConcreteState::initial(s);
    src.add("S", {a, i0});
    src.add("S", {a, i1});
    src.add("S", {b, i2});
    auto ws = wr_set(s, *s.op("Remove"), {a}, src, uni);
    CHECK(ws == std::set<std::pair<std::string, Tuple>>{{"S", {a, i0}},
                                                        {"S", {a, i1}}});
  }
}

TEST_CASE("wr_set bounds the effector's write footprint") {
  // apply_effector(e, t) may differ from t only on wr_set(e) tuples.
  AtomUniverse uni{2, 3};
  std::mt19937 rng(7);
  for (auto& name : builtin_names()) {
    const CrdtSpec& spec = builtin(name);
    for (int iter = 0; iter < 200; iter++) {
      ConcreteState src = ConcreteState::initial(spec);
      ConcreteState tgt = src;
      for (auto& r : spec.state)
        for (auto& t : uni.tuples(r.columns)) {
          if (rng() % 3 == 0) src.add(r.name, t);
          if (rng() % 3 == 0) tgt.add(r.name, t);
        }
      const OpSpec& op = spec.ops[rng() % spec.ops.size()];
      std::vector<Atom> args;
      for (auto& p : op.params)
        args.push_back(p.sort == BaseSort::Elem
                           ? Atom::elem(int(rng() % uni.elems))
                           : Atom::id(int(rng() % uni.ids)));
      Effector e = gen_effector(spec, op, args, src, uni);
      auto ws = wr_set(e);
      ConcreteState out = apply_effector(e, tgt);
      for (auto& r : spec.state)
        for (auto& t : uni.tuples(r.columns)) {
          if (out.contains(r.name, t) != tgt.contains(r.name, t))
            CHECK(ws.count({r.name, t}) == 1);
        }
    }
  }
}
