#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crdtv/config.hpp"
#include "crdtv/policy.hpp"
#include "crdtv/spec_core.hpp"

namespace crdtv {

// A trace of the labeled transition system. trace[0] is C_init; effectors are
// shared across prefixes.
struct Execution {
  std::vector<Configuration> trace;
  EffectorMap effs;
  AtomUniverse universe;

  const Configuration& final() const { return trace.back(); }
  size_t length() const { return final().events.size(); }
};

// The effector of an event: history effectors applied to the start state in
// local order, then the operation generated at the resulting state.
Effector effector_of_event(const CrdtSpec& spec, const Event& ev,
                           const std::function<const Effector&(int)>& resolve,
                           const AtomUniverse& universe);

// One transition. Returns every admissible successor, one per effector-order
// extension the policy admits; policies whose eo is pinned by their axioms
// yield at most one.
struct StepResult {
  Configuration config;
  Event event;
  Effector effector;
};
std::vector<StepResult> step_all(const CrdtSpec& spec, const Configuration& c,
                                 const EffectorMap& effs,
                                 const std::string& op,
                                 const std::vector<Atom>& args,
                                 const ConcreteState& sigma_s,
                                 const std::vector<int>& delta_r,
                                 const std::vector<int>& eo_r,
                                 const PolicySpec& policy,
                                 const AtomUniverse& universe);

// Deterministic minimal-extension variant; nullopt is a rejection.
std::optional<StepResult> step(const CrdtSpec& spec, const Configuration& c,
                               const EffectorMap& effs, const std::string& op,
                               const std::vector<Atom>& args,
                               const ConcreteState& sigma_s,
                               const std::vector<int>& delta_r,
                               const std::vector<int>& eo_r,
                               const PolicySpec& policy,
                               const AtomUniverse& universe);

// Replica states the event can witness: one fold per permutation of its
// history compatible with the global effector order.
std::vector<ConcreteState> reachable_states(
    const CrdtSpec& spec, const Event& ev,
    const std::set<std::pair<int, int>>& eo_global, const EffectorMap& effs);

bool is_convergent(const CrdtSpec& spec, const Event& ev,
                   const std::set<std::pair<int, int>>& eo_global,
                   const EffectorMap& effs);

// Exhaustively enumerates well-formed executions of at most `depth` events
// over the atom budget, modulo canonical renaming of Elem atoms. The visitor
// sees every execution (each prefix included); returning false stops the
// enumeration.
void enumerate_wf(const CrdtSpec& spec, const PolicySpec& policy, int depth,
                  const AtomUniverse& budget,
                  const std::function<bool(const Execution&)>& visit);

// A non-convergent event found by bounded search. `merge_of_all` marks the
// terminal divergence check: the state a replica that applied every effector
// would reach, i.e. the Σ of an event observing the whole configuration.
struct SecWitness {
  Execution execution;
  int event_eid = -1;
  bool merge_of_all = false;
  std::vector<int> order_a, order_b;  // diverging permutations, as eids
  ConcreteState state_a, state_b;

  std::string to_json() const;
};

// Searches executions of increasing length for a non-convergent event,
// including the terminal merge of each complete configuration.
std::optional<SecWitness> check_sec_bounded(const CrdtSpec& spec,
                                            const PolicySpec& policy,
                                            int depth,
                                            const AtomUniverse& budget);

// All configuration samples of the bounded enumeration, for the stability
// probe and the policy agreement tests.
std::vector<ConfigSample> sample_configurations(const CrdtSpec& spec,
                                                const PolicySpec& policy,
                                                int depth,
                                                const AtomUniverse& budget,
                                                size_t limit = SIZE_MAX);

}  // namespace crdtv
