#include "crdtv/opsem.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace crdtv {

Effector effector_of_event(const CrdtSpec& spec, const Event& ev,
                           const std::function<const Effector&(int)>& resolve,
                           const AtomUniverse& universe) {
  std::vector<Effector> history;
  for (int eid : ev.eo_r) history.push_back(resolve(eid));
  const OpSpec* op = spec.op(ev.op);
  if (!op) throw std::invalid_argument("unknown op '" + ev.op + "'");
  return run_op_with_history(spec, *op, ev.args, ev.sigma_s, history, universe);
}

namespace {

bool order_consistent(const std::vector<int>& order,
                      const std::set<std::pair<int, int>>& eo) {
  for (size_t i = 0; i < order.size(); i++)
    for (size_t j = i + 1; j < order.size(); j++)
      if (eo.count({order[j], order[i]})) return false;
  return true;
}

// All permutations of `eids` whose order extends `eo`.
std::vector<std::vector<int>> linearizations(
    std::vector<int> eids, const std::set<std::pair<int, int>>& eo) {
  std::sort(eids.begin(), eids.end());
  std::vector<std::vector<int>> out;
  do {
    if (order_consistent(eids, eo)) out.push_back(eids);
  } while (std::next_permutation(eids.begin(), eids.end()));
  return out;
}

}  // namespace

std::vector<StepResult> step_all(const CrdtSpec& spec, const Configuration& c,
                                 const EffectorMap& effs,
                                 const std::string& op,
                                 const std::vector<Atom>& args,
                                 const ConcreteState& sigma_s,
                                 const std::vector<int>& delta_r,
                                 const std::vector<int>& eo_r,
                                 const PolicySpec& policy,
                                 const AtomUniverse& universe) {
  std::vector<StepResult> out;
  for (int eid : delta_r)
    if (!c.event(eid)) return out;  // rejection: unknown history event
  if (eo_r.size() != delta_r.size()) return out;
  if (!order_consistent(eo_r, c.eo)) return out;

  Event ev;
  ev.eid = c.events.empty() ? 0 : c.events.back().eid + 1;
  ev.op = op;
  ev.args = args;
  ev.sigma_s = sigma_s;
  ev.delta_r = delta_r;
  ev.eo_r = eo_r;

  Effector eff = effector_of_event(
      spec, ev, [&](int eid) -> const Effector& { return effs.at(eid); },
      universe);

  Configuration next = c;
  next.events.push_back(ev);
  for (int eid : delta_r) next.vis.insert({eid, ev.eid});

  EffectorMap effs2 = effs;
  effs2[ev.eid] = eff;

  if (policy.eo_is_functional()) {
    Configuration cand = next;
    cand.eo = c.eo;
    for (auto& p : forced_eo(policy, cand, effs2)) cand.eo.insert(p);
    if (holds(policy, cand, effs2)) out.push_back({cand, ev, eff});
    return out;
  }

  // Enumerate anti-symmetric extensions over pairs touching the new event.
  std::vector<int> olds;
  for (auto& e : c.events) olds.push_back(e.eid);
  size_t n = olds.size();
  std::vector<int> choice(n, 0);  // 0: unrelated, 1: old->new, 2: new->old
  while (true) {
    Configuration cand = next;
    for (size_t i = 0; i < n; i++) {
      if (choice[i] == 1) cand.eo.insert({olds[i], ev.eid});
      if (choice[i] == 2) cand.eo.insert({ev.eid, olds[i]});
    }
    if (holds(policy, cand, effs2)) out.push_back({cand, ev, eff});
    size_t k = 0;
    while (k < n && choice[k] == 2) choice[k++] = 0;
    if (k == n) break;
    choice[k]++;
  }
  return out;
}

std::optional<StepResult> step(const CrdtSpec& spec, const Configuration& c,
                               const EffectorMap& effs, const std::string& op,
                               const std::vector<Atom>& args,
                               const ConcreteState& sigma_s,
                               const std::vector<int>& delta_r,
                               const std::vector<int>& eo_r,
                               const PolicySpec& policy,
                               const AtomUniverse& universe) {
  auto all = step_all(spec, c, effs, op, args, sigma_s, delta_r, eo_r, policy,
                      universe);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<ConcreteState> reachable_states(
    const CrdtSpec& spec, const Event& ev,
    const std::set<std::pair<int, int>>& eo_global, const EffectorMap& effs) {
  std::vector<ConcreteState> out;
  for (auto& order : linearizations(ev.delta_r, eo_global)) {
    std::vector<Effector> seq;
    for (int eid : order) seq.push_back(effs.at(eid));
    ConcreteState s = apply_all(seq, ev.sigma_s);
    if (std::find(out.begin(), out.end(), s) == out.end())
      out.push_back(std::move(s));
  }
  if (out.empty()) out.push_back(ev.sigma_s);
  return out;
}

bool is_convergent(const CrdtSpec& spec, const Event& ev,
                   const std::set<std::pair<int, int>>& eo_global,
                   const EffectorMap& effs) {
  return reachable_states(spec, ev, eo_global, effs).size() == 1;
}

namespace {

struct Enumerator {
  const CrdtSpec& spec;
  const PolicySpec& policy;
  int depth;
  AtomUniverse budget;
  const std::function<bool(const Execution&)>& visit;
  bool stopped = false;

  Execution exec;
  int next_fresh = 0;
  int elems_used = 0;

  // Argument vectors for `op`, honoring the canonical-prefix symmetry rule
  // for Elem atoms and the monotone fresh-id counter.
  void arg_combos(const OpSpec& op, size_t idx, std::vector<Atom>& cur,
                  int used, const std::function<void(const std::vector<Atom>&,
                                                     int)>& emit) {
    if (idx == op.params.size()) {
      emit(cur, used);
      return;
    }
    const Param& p = op.params[idx];
    if (p.sort == BaseSort::Elem) {
      int hi = std::min(used, budget.elems - 1);
      for (int i = 0; i <= hi; i++) {
        cur.push_back(Atom::elem(i));
        arg_combos(op, idx + 1, cur, std::max(used, i + 1), emit);
        cur.pop_back();
      }
      return;
    }
    if (p.mode == ParamMode::Fresh) {
      if (next_fresh >= budget.ids) return;  // id budget exhausted
      cur.push_back(Atom::id(next_fresh));
      arg_combos(op, idx + 1, cur, used, emit);
      cur.pop_back();
      return;
    }
    for (int i = 0; i < budget.ids; i++) {
      cur.push_back(Atom::id(i));
      arg_combos(op, idx + 1, cur, used, emit);
      cur.pop_back();
    }
  }

  void extend() {
    if (stopped) return;
    if (!visit(exec)) {
      stopped = true;
      return;
    }
    if (int(exec.length()) >= depth) return;

    const Configuration& c = exec.final();
    std::vector<int> eids;
    for (auto& e : c.events) eids.push_back(e.eid);

    for (auto& op : spec.ops) {
      // Subsets of existing events as the new event's history.
      for (size_t mask = 0; mask < (size_t{1} << eids.size()); mask++) {
        std::vector<int> delta_r;
        for (size_t i = 0; i < eids.size(); i++)
          if (mask & (size_t{1} << i)) delta_r.push_back(eids[i]);
        for (auto& eo_r : linearizations(delta_r, c.eo)) {
          std::vector<Atom> cur;
          arg_combos(op, 0, cur, elems_used,
                     [&](const std::vector<Atom>& args, int used) {
                       if (stopped) return;
                       take_step(op, args, used, delta_r, eo_r);
                     });
          if (stopped) return;
        }
      }
    }
  }

  void take_step(const OpSpec& op, const std::vector<Atom>& args, int used,
                 const std::vector<int>& delta_r,
                 const std::vector<int>& eo_r) {
    const Configuration& c = exec.final();
    auto results = step_all(spec, c, exec.effs, op.name, args,
                            ConcreteState::initial(spec), delta_r, eo_r,
                            policy, budget);
    int fresh_used = 0;
    for (auto& p : op.params)
      if (p.mode == ParamMode::Fresh) fresh_used++;
    for (auto& r : results) {
      int save_elems = elems_used;
      int save_fresh = next_fresh;
      elems_used = used;
      next_fresh += fresh_used;
      exec.trace.push_back(r.config);
      exec.effs[r.event.eid] = r.effector;
      extend();
      exec.trace.pop_back();
      exec.effs.erase(r.event.eid);
      elems_used = save_elems;
      next_fresh = save_fresh;
      if (stopped) return;
    }
  }

  void run() {
    exec.trace = {Configuration{}};
    exec.universe = budget;
    extend();
  }
};

}  // namespace

void enumerate_wf(const CrdtSpec& spec, const PolicySpec& policy, int depth,
                  const AtomUniverse& budget,
                  const std::function<bool(const Execution&)>& visit) {
  if (depth < 0) depth = 0;
  Enumerator en{spec, policy, depth, budget, visit};
  en.run();
}

namespace {

std::optional<SecWitness> divergence_of(const CrdtSpec& spec,
                                        const Execution& exec, const Event& ev,
                                        const std::set<std::pair<int, int>>& eo,
                                        bool merge_of_all) {
  auto orders = linearizations(ev.delta_r, eo);
  for (size_t i = 0; i < orders.size(); i++)
    for (size_t j = i + 1; j < orders.size(); j++) {
      std::vector<Effector> sa, sb;
      for (int eid : orders[i]) sa.push_back(exec.effs.at(eid));
      for (int eid : orders[j]) sb.push_back(exec.effs.at(eid));
      ConcreteState a = apply_all(sa, ev.sigma_s);
      ConcreteState b = apply_all(sb, ev.sigma_s);
      if (a != b) {
        SecWitness w;
        w.execution = exec;
        w.event_eid = merge_of_all ? -1 : ev.eid;
        w.merge_of_all = merge_of_all;
        w.order_a = orders[i];
        w.order_b = orders[j];
        w.state_a = a;
        w.state_b = b;
        return w;
      }
    }
  return std::nullopt;
}

}  // namespace

std::optional<SecWitness> check_sec_bounded(const CrdtSpec& spec,
                                            const PolicySpec& policy,
                                            int depth,
                                            const AtomUniverse& budget) {
  std::optional<SecWitness> found;
  // Iterative deepening so the first witness has minimal length.
  for (int target = 1; target <= depth && !found; target++) {
    enumerate_wf(spec, policy, target, budget, [&](const Execution& exec) {
      if (int(exec.length()) != target) return true;
      // Per-event convergence: each event against the effector order of its
      // pre-state configuration.
      for (size_t k = 0; k < exec.final().events.size(); k++) {
        const Event& ev = exec.final().events[k];
        const Configuration& pre = exec.trace[k];
        if (auto w = divergence_of(spec, exec, ev, pre.eo, false)) {
          found = w;
          return false;
        }
      }
      // Terminal merge: a replica that received every effector, i.e. the
      // history of a next event observing the full configuration.
      Event all;
      all.eid = -1;
      all.op = "(merge)";
      all.sigma_s = ConcreteState::initial(spec);
      for (auto& e : exec.final().events) all.delta_r.push_back(e.eid);
      if (auto w = divergence_of(spec, exec, all, exec.final().eo, true)) {
        found = w;
        return false;
      }
      return true;
    });
  }
  return found;
}

std::vector<ConfigSample> sample_configurations(const CrdtSpec& spec,
                                                const PolicySpec& policy,
                                                int depth,
                                                const AtomUniverse& budget,
                                                size_t limit) {
  std::vector<ConfigSample> out;
  enumerate_wf(spec, policy, depth, budget, [&](const Execution& exec) {
    out.push_back({exec.final(), exec.effs});
    return out.size() < limit;
  });
  return out;
}

std::string SecWitness::to_json() const {
  nlohmann::json j;
  j["schema"] = "crdtv-witness-v1";
  j["length"] = execution.final().events.size();
  j["events"] = nlohmann::json::array();
  for (auto& e : execution.final().events) {
    nlohmann::json je;
    je["eid"] = e.eid;
    je["op"] = e.op;
    je["args"] = nlohmann::json::array();
    for (auto& a : e.args) je["args"].push_back(a.name());
    je["history"] = e.delta_r;
    j["events"].push_back(je);
  }
  j["vis"] = nlohmann::json::array();
  for (auto& [x, y] : execution.final().vis)
    j["vis"].push_back(nlohmann::json::array({x, y}));
  j["eo"] = nlohmann::json::array();
  for (auto& [x, y] : execution.final().eo)
    j["eo"].push_back(nlohmann::json::array({x, y}));
  j["diverging_event"] = merge_of_all ? nlohmann::json("merge-of-all")
                                      : nlohmann::json(event_eid);
  j["order_a"] = order_a;
  j["order_b"] = order_b;
  j["state_a"] = state_a.to_string();
  j["state_b"] = state_b.to_string();
  return j.dump(2);
}

}  // namespace crdtv
