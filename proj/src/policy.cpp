#include "crdtv/policy.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace crdtv {

PolicyAxioms PolicySpec::axioms() const {
  PolicyAxioms ax;
  switch (kind) {
    case PolicyKind::EC:
      ax.trigger = PairTrigger::Never;
      break;
    case PolicyKind::CC:
      ax.trigger = PairTrigger::Always;
      ax.vis_transitive = true;
      break;
    case PolicyKind::RB:
      ax.trigger = PairTrigger::BothInSyncSet;
      ax.totality = PairTrigger::BothInSyncSet;
      break;
    case PolicyKind::PSI:
      ax.trigger = PairTrigger::WriteConflict;
      ax.totality = PairTrigger::WriteConflict;
      break;
    case PolicyKind::PSIRB:
      ax.trigger = PairTrigger::SelectedShared;
      ax.totality = PairTrigger::SelectedShared;
      break;
    case PolicyKind::SC:
      ax.trigger = PairTrigger::Always;
      ax.totality = PairTrigger::Always;
      break;
    case PolicyKind::Bounded:
      ax.trigger = PairTrigger::Never;  // eo unconstrained by vis; see holds()
      break;
  }
  return ax;
}

PolicySpec policy(const std::string& name, const std::vector<std::string>& o_r,
                  const std::vector<OpPair>& pairs, int bound) {
  PolicySpec p;
  if (name == "ec") {
    p.kind = PolicyKind::EC;
  } else if (name == "cc") {
    p.kind = PolicyKind::CC;
  } else if (name == "sc") {
    p.kind = PolicyKind::SC;
  } else if (name == "psi") {
    p.kind = PolicyKind::PSI;
  } else if (name == "rb") {
    p.kind = PolicyKind::RB;
    if (o_r.empty()) throw std::invalid_argument("rb needs synchronized ops");
    p.o_r.insert(o_r.begin(), o_r.end());
  } else if (name == "psi+rb") {
    p.kind = PolicyKind::PSIRB;
    if (pairs.empty())
      throw std::invalid_argument("psi+rb needs selected op pairs");
    p.pairs = pairs;
  } else if (name == "bounded") {
    p.kind = PolicyKind::Bounded;
    p.bound = bound;
  } else {
    throw std::invalid_argument("unknown policy '" + name + "'");
  }
  std::ostringstream os;
  os << name;
  if (p.kind == PolicyKind::RB) {
    os << ':';
    bool first = true;
    for (auto& o : p.o_r) {
      if (!first) os << ',';
      first = false;
      os << o;
    }
  } else if (p.kind == PolicyKind::PSIRB) {
    os << ':';
    for (size_t i = 0; i < p.pairs.size(); i++) {
      if (i) os << ',';
      os << p.pairs[i].a << '/' << p.pairs[i].b;
    }
  } else if (p.kind == PolicyKind::Bounded) {
    os << ':' << bound;
  }
  p.name = os.str();
  return p;
}

std::vector<OpPair> default_psirb_pairs(const std::string& crdt_name) {
  // Simple-Set synchronizes add/remove of the same element; the list CRDTs
  // synchronize AddRight with Remove and with other AddRights touching the
  // same id; USet orders repeated adds (its unique-add assumption); the graph
  // CRDTs order the vertex-removal/edge pairs plus their component sets.
  if (crdt_name == "simple-set" || crdt_name == "orset" ||
      crdt_name == "orset-tomb")
    return {{"Add", "Remove"}};
  if (crdt_name == "uset") return {{"Add", "Add"}};
  if (crdt_name == "rga" || crdt_name == "rga-no-tomb")
    return {{"AddRight", "AddRight"}, {"AddRight", "Remove"}};
  if (crdt_name == "2p2p-graph")
    return {{"AddVertex", "RemoveVertex"}, {"AddEdge", "RemoveEdge"}};
  if (crdt_name == "graph-with-orset")
    return {{"AddVertex", "RemoveVertex"},
            {"AddEdge", "RemoveEdge"},
            {"RemoveVertex", "AddEdge"},
            {"RemoveVertex", "RemoveEdge"}};
  return {{"Add", "Remove"}};
}

std::vector<PolicySpec> matrix_policies(const std::string& crdt_name) {
  return {policy("ec"), policy("cc"),
          policy("psi+rb", {}, default_psirb_pairs(crdt_name)), policy("psi")};
}

std::optional<PolicySpec> parse_policy(const std::string& selector,
                                       const std::string& crdt_name,
                                       std::string& error) {
  std::string head = selector, tail;
  auto colon = selector.find(':');
  if (colon != std::string::npos) {
    head = selector.substr(0, colon);
    tail = selector.substr(colon + 1);
  }
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == sep) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  };
  try {
    if (head == "ec" || head == "cc" || head == "sc" || head == "psi")
      return policy(head);
    if (head == "rb") {
      auto ops = split(tail, ',');
      if (ops.empty()) {
        error = "rb needs a synchronized op list, e.g. rb:Add,Remove";
        return std::nullopt;
      }
      return policy("rb", ops);
    }
    if (head == "psi+rb") {
      if (tail.empty())
        return policy("psi+rb", {}, default_psirb_pairs(crdt_name));
      std::vector<OpPair> pairs;
      for (auto& part : split(tail, ',')) {
        auto sides = split(part, '/');
        if (sides.size() != 2) {
          error = "psi+rb pairs look like Op1/Op2";
          return std::nullopt;
        }
        pairs.push_back({sides[0], sides[1]});
      }
      return policy("psi+rb", {}, pairs);
    }
    if (head == "bounded") {
      int k = tail.empty() ? 1 : std::stoi(tail);
      return policy("bounded", {}, {}, k);
    }
  } catch (const std::exception& e) {
    error = e.what();
    return std::nullopt;
  }
  error = "unknown policy '" + selector + "'";
  return std::nullopt;
}

namespace {

bool share_argument_atom(const Event& x, const Event& y) {
  for (auto& a : x.args)
    for (auto& b : y.args)
      if (a == b) return true;
  return false;
}

bool wr_conflict(const Effector& ex, const Effector& ey) {
  auto wx = wr_set(ex);
  auto wy = wr_set(ey);
  for (auto& w : wx)
    if (wy.count(w)) return true;
  return false;
}

}  // namespace

bool pair_trigger_holds(PairTrigger t, const PolicySpec& p, const Event& x,
                        const Event& y, const Effector& ex,
                        const Effector& ey) {
  switch (t) {
    case PairTrigger::Never:
      return false;
    case PairTrigger::Always:
      return true;
    case PairTrigger::BothInSyncSet:
      return p.o_r.count(x.op) && p.o_r.count(y.op);
    case PairTrigger::WriteConflict:
      return wr_conflict(ex, ey);
    case PairTrigger::SelectedShared: {
      bool selected = false;
      for (auto& pr : p.pairs)
        if (pr.matches(x.op, y.op)) selected = true;
      return selected && share_argument_atom(x, y);
    }
  }
  return false;
}

namespace {

// Longest antichain of the eo relation, for the bounded-concurrency policy.
// Configurations here are tiny, so brute force over subsets.
size_t max_antichain(const Configuration& c) {
  size_t n = c.events.size();
  size_t best = 0;
  for (size_t mask = 0; mask < (size_t{1} << n); mask++) {
    std::vector<int> eids;
    for (size_t i = 0; i < n; i++)
      if (mask & (size_t{1} << i)) eids.push_back(c.events[i].eid);
    bool anti = true;
    for (size_t i = 0; i < eids.size() && anti; i++)
      for (size_t j = 0; j < eids.size() && anti; j++)
        if (i != j && c.eo_rel(eids[i], eids[j])) anti = false;
    if (anti) best = std::max(best, eids.size());
  }
  return best;
}

}  // namespace

bool holds(const PolicySpec& p, const Configuration& c,
           const EffectorMap& effs) {
  // Anti-symmetry of eo is structural.
  for (auto& [x, y] : c.eo)
    if (c.eo_rel(y, x)) return false;

  if (p.kind == PolicyKind::Bounded)
    return max_antichain(c) <= size_t(p.bound);

  PolicyAxioms ax = p.axioms();
  for (auto& ex : c.events) {
    for (auto& ey : c.events) {
      if (ex.eid == ey.eid) continue;
      const Effector& fx = effs.at(ex.eid);
      const Effector& fy = effs.at(ey.eid);
      bool trig = pair_trigger_holds(ax.trigger, p, ex, ey, fx, fy);
      bool want_eo = trig && c.vis_rel(ex.eid, ey.eid);
      if (c.eo_rel(ex.eid, ey.eid) != want_eo) return false;
      if (ax.totality) {
        bool need = pair_trigger_holds(*ax.totality, p, ex, ey, fx, fy);
        if (need && !c.vis_rel(ex.eid, ey.eid) && !c.vis_rel(ey.eid, ex.eid))
          return false;
      }
    }
  }
  if (ax.vis_transitive) {
    for (auto& [x, y] : c.vis)
      for (auto& [y2, z] : c.vis)
        if (y == y2 && x != z && !c.vis_rel(x, z)) return false;
  }
  return true;
}

std::set<std::pair<int, int>> forced_eo(const PolicySpec& p,
                                        const Configuration& c,
                                        const EffectorMap& effs) {
  std::set<std::pair<int, int>> out;
  PolicyAxioms ax = p.axioms();
  for (auto& ex : c.events)
    for (auto& ey : c.events) {
      if (ex.eid == ey.eid || !c.vis_rel(ex.eid, ey.eid)) continue;
      if (pair_trigger_holds(ax.trigger, p, ex, ey, effs.at(ex.eid),
                             effs.at(ey.eid)))
        out.insert({ex.eid, ey.eid});
    }
  return out;
}

std::optional<StabilityViolation> stability_probe(
    const CrdtSpec& spec, const PolicySpec& p,
    const std::vector<ConfigSample>& samples, const AtomUniverse& universe) {
  // Key: structurally equal effectors with matching ops and visibility bit.
  // Structural equality implies behavioral equivalence, so any disagreement
  // on the effector-order bits below is a genuine stability violation.
  struct Key {
    std::string op1, op2;
    std::string eff1, eff2;
    bool vis;
    auto operator<=>(const Key&) const = default;
  };
  auto eff_key = [](const Effector& e) {
    std::ostringstream os;
    if (is_noop(e)) return std::string("noop");
    os << e.op;
    for (auto& [rel, t] : e.adds) os << " +" << rel << tuple_to_string(t);
    for (auto& [rel, t] : e.removes) os << " -" << rel << tuple_to_string(t);
    if (e.when) os << " when " << e.gen.to_string();
    return os.str();
  };
  std::map<Key, std::pair<std::pair<bool, bool>, std::string>> seen;
  for (auto& sample : samples) {
    const Configuration& c = sample.config;
    for (auto& e1 : c.events)
      for (auto& e2 : c.events) {
        if (e1.eid == e2.eid) continue;
        Key k{e1.op, e2.op, eff_key(sample.effs.at(e1.eid)),
              eff_key(sample.effs.at(e2.eid)), c.vis_rel(e1.eid, e2.eid)};
        std::pair<bool, bool> eo{c.eo_rel(e1.eid, e2.eid),
                                 c.eo_rel(e2.eid, e1.eid)};
        std::ostringstream where;
        where << "events " << e1.eid << "/" << e2.eid << " ops " << e1.op
              << "/" << e2.op;
        auto [it, inserted] = seen.emplace(k, std::make_pair(eo, where.str()));
        if (!inserted && it->second.first != eo) {
          StabilityViolation v;
          v.description = "policy " + p.name +
                          ": behaviorally equivalent pairs with matching "
                          "visibility disagree on effector order (" +
                          it->second.second + " vs " + where.str() + ")";
          return v;
        }
      }
  }
  return std::nullopt;
}

}  // namespace crdtv
