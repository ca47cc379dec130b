#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crdtv/ast.hpp"
#include "crdtv/state.hpp"

namespace crdtv {

using Env = std::map<std::string, Atom>;

// A closed update function. Comprehensions have been evaluated against the
// generating state; only the residual `when` condition still reads the state
// the effector is applied to.
struct Effector {
  std::string op;
  std::vector<Atom> args;
  bool identity = false;  // guard was false at generation

  std::vector<std::pair<std::string, Tuple>> adds;
  std::vector<std::pair<std::string, Tuple>> removes;

  // Residual condition. In-atoms read `gen` (frozen below), TgtIn-atoms read
  // the application target. Empty optional means unconditional.
  std::optional<Formula> when;
  Env env;
  ConcreteState gen;
  AtomUniverse universe;

  auto operator<=>(const Effector&) const = default;
};

// Evaluates a formula; `tgt` may be null when the formula has no TgtIn atoms.
bool eval_formula(const Formula& f, const Env& env, const ConcreteState& src,
                  const ConcreteState* tgt, const AtomUniverse& universe);

// Generates the effector of op(args) issued at state `src`. A false guard
// yields the identity effector.
Effector gen_effector(const CrdtSpec& spec, const OpSpec& op,
                      const std::vector<Atom>& args, const ConcreteState& src,
                      const AtomUniverse& universe);

ConcreteState apply_effector(const Effector& e, const ConcreteState& tgt);

ConcreteState apply_all(const std::vector<Effector>& effs,
                        const ConcreteState& start);

// o(sigma, pi f) = o(f(sigma), pi): folds the history over `start` (earliest
// first) and generates the effector at the resulting state.
Effector run_op_with_history(const CrdtSpec& spec, const OpSpec& op,
                             const std::vector<Atom>& args,
                             const ConcreteState& start,
                             const std::vector<Effector>& history,
                             const AtomUniverse& universe);

bool eval_query(const CrdtSpec& spec, const QuerySpec& query,
                const std::vector<Atom>& args, const ConcreteState& src,
                const AtomUniverse& universe);

// (relation, tuple) pairs the effector may add or remove; empty for identity.
std::set<std::pair<std::string, Tuple>> wr_set(const Effector& e);

std::set<std::pair<std::string, Tuple>> wr_set(const CrdtSpec& spec,
                                               const OpSpec& op,
                                               const std::vector<Atom>& args,
                                               const ConcreteState& src,
                                               const AtomUniverse& universe);

// True when the effector can never change a state: a false guard or an empty
// ground update list.
inline bool is_noop(const Effector& e) {
  return e.identity || (e.adds.empty() && e.removes.empty());
}

// Extensional commutativity within the atom universe. Decided by enumerating
// all states over the tuples either effector reads or writes; behavior is
// constant outside that footprint, so this equals equality over every state
// in the universe.
bool effectors_commute(const CrdtSpec& spec, const Effector& a,
                       const Effector& b, const AtomUniverse& universe);

// A state on which the two compositions disagree, if any.
std::optional<ConcreteState> commute_counterexample(const CrdtSpec& spec,
                                                    const Effector& a,
                                                    const Effector& b,
                                                    const AtomUniverse& universe);

// Functional equality of two effectors over the atom universe, decided the
// same way as effectors_commute.
bool effectors_equal(const CrdtSpec& spec, const Effector& a,
                     const Effector& b, const AtomUniverse& universe);

}  // namespace crdtv
