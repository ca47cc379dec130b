#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crdtv/opsem.hpp"
#include "crdtv/policy.hpp"
#include "crdtv/spec_core.hpp"

using namespace crdtv;

namespace {

const AtomUniverse kUni{2, 3};
const Atom a = Atom::elem(0);

// Two simple-set events over element a, optionally with the first visible to
// the second.
struct TwoEvents {
  Configuration config;
  EffectorMap effs;

  TwoEvents(const std::string& op1, const std::string& op2, bool vis12) {
    const CrdtSpec& s = builtin("simple-set");
    ConcreteState init = ConcreteState::initial(s);
    Event e1{0, op1, {a}, init, {}, {}};
    Event e2{1, op2, {a}, init, {}, {}};
    if (vis12) {
      e2.delta_r = {0};
      e2.eo_r = {0};
      config.vis.insert({0, 1});
    }
    config.events = {e1, e2};
    effs[0] = gen_effector(s, *s.op(op1), {a}, init, kUni);
    effs[1] = effector_of_event(
        s, e2, [&](int eid) -> const Effector& { return effs.at(eid); }, kUni);
  }
};

}  // namespace

TEST_CASE("empty configuration satisfies every policy") {
  Configuration c;
  EffectorMap effs;
  for (auto* name : {"ec", "cc", "sc", "psi"})
    CHECK(holds(policy(name), c, effs));
  CHECK(holds(policy("rb", {"Add"}), c, effs));
  CHECK(holds(policy("psi+rb", {}, {{"Add", "Remove"}}), c, effs));
  CHECK(holds(policy("bounded", {}, {}, 1), c, effs));
}

TEST_CASE("ec admits concurrency but no effector order") {
  TwoEvents t("Add", "Add", false);
  CHECK(holds(policy("ec"), t.config, t.effs));
  t.config.eo.insert({0, 1});
  CHECK(!holds(policy("ec"), t.config, t.effs));
}

TEST_CASE("psi rejects unordered conflicting writes") {
  TwoEvents conflict("Add", "Add", false);
  CHECK(!holds(policy("psi"), conflict.config, conflict.effs));
  CHECK(holds(policy("ec"), conflict.config, conflict.effs));

  // With visibility, the conflicting pair must also be eo-ordered.
  TwoEvents seen("Add", "Add", true);
  CHECK(!holds(policy("psi"), seen.config, seen.effs));
  seen.config.eo.insert({0, 1});
  CHECK(holds(policy("psi"), seen.config, seen.effs));
}

TEST_CASE("cc equates visibility and effector order and closes vis") {
  TwoEvents t("Add", "Remove", true);
  CHECK(!holds(policy("cc"), t.config, t.effs));  // vis without eo
  t.config.eo.insert({0, 1});
  CHECK(holds(policy("cc"), t.config, t.effs));

  // vis must be transitive.
  const CrdtSpec& s = builtin("simple-set");
  ConcreteState init = ConcreteState::initial(s);
  Configuration c;
  EffectorMap effs;
  for (int i = 0; i < 3; i++) {
    Event e{i, "Add", {a}, init, {}, {}};
    if (i > 0) {
      e.delta_r = {i - 1};
      e.eo_r = {i - 1};
      c.vis.insert({i - 1, i});
      c.eo.insert({i - 1, i});
    }
    c.events.push_back(e);
    effs[i] = gen_effector(s, *s.op("Add"), {a}, init, kUni);
  }
  CHECK(!holds(policy("cc"), c, effs));
  c.vis.insert({0, 2});
  c.eo.insert({0, 2});
  CHECK(holds(policy("cc"), c, effs));
}

TEST_CASE("sc requires total visibility") {
  TwoEvents t("Add", "Add", false);
  CHECK(!holds(policy("sc"), t.config, t.effs));
  TwoEvents u("Add", "Add", true);
  u.config.eo.insert({0, 1});
  CHECK(holds(policy("sc"), u.config, u.effs));
}

TEST_CASE("rb constrains only the synchronized set") {
  PolicySpec rb = policy("rb", {"Add"});
  TwoEvents adds("Add", "Add", false);
  CHECK(!holds(rb, adds.config, adds.effs));  // totality violated
  TwoEvents mixed("Add", "Remove", false);
  CHECK(holds(rb, mixed.config, mixed.effs));
}

TEST_CASE("psi+rb orders selected pairs sharing an argument") {
  PolicySpec p = policy("psi+rb", {}, {{"Add", "Remove"}});
  TwoEvents pair("Add", "Remove", true);
  CHECK(!holds(p, pair.config, pair.effs));  // selected+shared: vis forces eo
  pair.config.eo.insert({0, 1});
  CHECK(holds(p, pair.config, pair.effs));
  // Unselected pair: no requirement at all.
  TwoEvents adds("Add", "Add", false);
  CHECK(holds(p, adds.config, adds.effs));
}

TEST_CASE("policy construction errors") {
  CHECK_THROWS_AS(policy("unknown"), std::invalid_argument);
  CHECK_THROWS_AS(policy("rb"), std::invalid_argument);
  CHECK_THROWS_AS(policy("psi+rb"), std::invalid_argument);
}

TEST_CASE("policy CLI selectors") {
  std::string err;
  auto p = parse_policy("psi+rb:AddRight/Remove", "rga", err);
  REQUIRE(p.has_value());
  CHECK(p->pairs.size() == 1);
  CHECK(p->pairs[0].matches("Remove", "AddRight"));
  CHECK(parse_policy("psi+rb", "uset", err)->pairs ==
        default_psirb_pairs("uset"));
  CHECK(parse_policy("rb:Add,Remove", "uset", err)->o_r.size() == 2);
  CHECK(parse_policy("bounded:2", "uset", err)->bound == 2);
  CHECK(!parse_policy("weird", "uset", err).has_value());
  CHECK(!err.empty());
}

namespace {

// Independent rendering of the consistency table, used to cross-check the
// production `holds` on enumerated configurations.
bool table_holds(const PolicySpec& p, const Configuration& c,
                 const EffectorMap& effs) {
  auto vis = [&](int x, int y) { return c.vis_rel(x, y); };
  auto eo = [&](int x, int y) { return c.eo_rel(x, y); };
  auto conflict = [&](const Event& x, const Event& y) {
    auto wx = wr_set(effs.at(x.eid));
    for (auto& w : wr_set(effs.at(y.eid)))
      if (wx.count(w)) return true;
    return false;
  };
  auto selected_shared = [&](const Event& x, const Event& y) {
    bool sel = false;
    for (auto& pr : p.pairs) sel = sel || pr.matches(x.op, y.op);
    bool share = false;
    for (auto& ax : x.args)
      for (auto& ay : y.args) share = share || ax == ay;
    return sel && share;
  };
  for (auto& [x, y] : c.eo)
    if (c.eo_rel(y, x)) return false;
  for (auto& x : c.events)
    for (auto& y : c.events) {
      if (x.eid == y.eid) continue;
      switch (p.kind) {
        case PolicyKind::EC:
          if (eo(x.eid, y.eid)) return false;
          break;
        case PolicyKind::CC:
          if (vis(x.eid, y.eid) != eo(x.eid, y.eid)) return false;
          break;
        case PolicyKind::SC:
          if (vis(x.eid, y.eid) != eo(x.eid, y.eid)) return false;
          if (!vis(x.eid, y.eid) && !vis(y.eid, x.eid)) return false;
          break;
        case PolicyKind::RB: {
          bool both = p.o_r.count(x.op) && p.o_r.count(y.op);
          if ((both && vis(x.eid, y.eid)) != eo(x.eid, y.eid)) return false;
          if (both && !vis(x.eid, y.eid) && !vis(y.eid, x.eid)) return false;
          break;
        }
        case PolicyKind::PSI: {
          bool conf = conflict(x, y);
          if ((conf && vis(x.eid, y.eid)) != eo(x.eid, y.eid)) return false;
          if (conf && !vis(x.eid, y.eid) && !vis(y.eid, x.eid)) return false;
          break;
        }
        case PolicyKind::PSIRB: {
          bool ss = selected_shared(x, y);
          if ((ss && vis(x.eid, y.eid)) != eo(x.eid, y.eid)) return false;
          if (ss && !vis(x.eid, y.eid) && !vis(y.eid, x.eid)) return false;
          break;
        }
        case PolicyKind::Bounded:
          break;
      }
    }
  if (p.kind == PolicyKind::CC) {
    for (auto& [x, y] : c.vis)
      for (auto& [y2, z] : c.vis)
        if (y == y2 && x != z && !c.vis_rel(x, z)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("executable checks agree with the table formulas on enumerations") {
  for (auto* crdt : {"simple-set", "orset", "uset"}) {
    const CrdtSpec& spec = builtin(crdt);
    for (auto& p : matrix_policies(crdt)) {
      auto samples = sample_configurations(spec, p, 2, kUni, 400);
      CHECK(!samples.empty());
      for (auto& s : samples) {
        CHECK(holds(p, s.config, s.effs));
        CHECK(table_holds(p, s.config, s.effs));
      }
    }
  }
}

TEST_CASE("stability probe passes for the table policies") {
  const CrdtSpec& spec = builtin("orset");
  for (auto* name : {"ec", "cc", "sc", "psi"}) {
    PolicySpec p = policy(name);
    auto samples = sample_configurations(spec, p, 3, kUni, 4000);
    CHECK(!stability_probe(spec, p, samples, kUni).has_value());
  }
  PolicySpec rb = policy("rb", {"Add", "Remove"});
  auto samples = sample_configurations(spec, rb, 3, kUni, 4000);
  CHECK(!stability_probe(spec, rb, samples, kUni).has_value());
}

TEST_CASE("bounded concurrency is not behaviorally stable") {
  const CrdtSpec& spec = builtin("simple-set");
  PolicySpec p = policy("bounded", {}, {}, 1);
  auto samples = sample_configurations(spec, p, 2, kUni, 20000);
  auto v = stability_probe(spec, p, samples, kUni);
  REQUIRE(v.has_value());
  CHECK(v->description.find("bounded") != std::string::npos);
}
