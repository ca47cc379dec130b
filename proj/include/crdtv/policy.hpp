#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crdtv/config.hpp"
#include "crdtv/spec_core.hpp"

namespace crdtv {

enum class PolicyKind { EC, CC, RB, PSI, PSIRB, SC, Bounded };

// An unordered pair of operation names.
struct OpPair {
  std::string a, b;

  bool matches(const std::string& x, const std::string& y) const {
    return (a == x && b == y) || (a == y && b == x);
  }
  auto operator<=>(const OpPair&) const = default;
};

// The per-pair ordering trigger of a policy: eo(x,y) holds exactly when the
// trigger holds and vis(x,y) holds. Together with the totality requirement
// this captures every row of the consistency table.
enum class PairTrigger {
  Never,           // EC: empty effector order
  Always,          // CC / SC: eo follows vis
  BothInSyncSet,   // RB: both ops in O_r
  WriteConflict,   // PSI: overlapping write sets
  SelectedShared,  // PSI+RB: selected op pair sharing an argument atom
};

// Axioms of a policy over event pairs/triples, used for the executable and
// symbolic encodings alike.
struct PolicyAxioms {
  PairTrigger trigger = PairTrigger::Never;
  // Pairs satisfying this must be visibility-related one way or the other.
  std::optional<PairTrigger> totality;
  bool vis_transitive = false;
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::EC;
  std::string name;             // canonical CLI spelling
  std::set<std::string> o_r;    // RB synchronized ops
  std::vector<OpPair> pairs;    // PSI+RB selected pairs
  int bound = 1;                // Bounded: max antichain size

  PolicyAxioms axioms() const;

  // True when the policy's effector-order extension is pinned by the
  // axioms; Bounded is the one built-in that instead needs enumeration.
  bool eo_is_functional() const { return kind != PolicyKind::Bounded; }
};

// Constructs a built-in policy. Accepted names: ec, cc, sc, psi, rb, psi+rb,
// bounded. RB requires o_r; PSI+RB requires pairs; bounded takes the bound.
PolicySpec policy(const std::string& name,
                  const std::vector<std::string>& o_r = {},
                  const std::vector<OpPair>& pairs = {}, int bound = 1);

// Parses a CLI policy selector such as "cc", "rb:Add,Remove",
// "psi+rb:Add/Remove,AddRight/Remove" or "bounded:2". When the selector is
// plain "psi+rb", the CRDT's default pair set is used.
std::optional<PolicySpec> parse_policy(const std::string& selector,
                                       const std::string& crdt_name,
                                       std::string& error);

// Default PSI+RB pair selection per built-in CRDT: the operation pairs whose
// synchronization the experiments enable for that datatype.
std::vector<OpPair> default_psirb_pairs(const std::string& crdt_name);

// The four policies of the verdict matrix, in column order.
std::vector<PolicySpec> matrix_policies(const std::string& crdt_name);

// Trigger evaluation on concrete events.
bool pair_trigger_holds(PairTrigger t, const PolicySpec& p, const Event& x,
                        const Event& y, const Effector& ex, const Effector& ey);

// The full consistency check Ψ(Δ, vis, eo) on a finite configuration.
bool holds(const PolicySpec& p, const Configuration& c,
           const EffectorMap& effs);

// Effector-order pairs the policy forces for the configuration (the ⇔ rows
// instantiated over vis). Only meaningful for functional-eo policies.
std::set<std::pair<int, int>> forced_eo(const PolicySpec& p,
                                        const Configuration& c,
                                        const EffectorMap& effs);

// A sampled configuration together with its effectors, as produced by the
// bounded enumerator.
struct ConfigSample {
  Configuration config;
  EffectorMap effs;
};

struct StabilityViolation {
  std::string description;
};

// Probes Definition-style behavioral stability over sampled configurations:
// behaviorally equivalent event pairs with matching visibility must agree on
// their effector order. Returns a violation if one exists in the sample.
std::optional<StabilityViolation> stability_probe(
    const CrdtSpec& spec, const PolicySpec& p,
    const std::vector<ConfigSample>& samples, const AtomUniverse& universe);

}  // namespace crdtv
