#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "crdtv/interp.hpp"
#include "crdtv/state.hpp"

namespace crdtv {

// An event of the labeled transition system: an operation instance together
// with its start state, history and local effector order.
struct Event {
  int eid = 0;
  std::string op;
  std::vector<Atom> args;
  ConcreteState sigma_s;
  std::vector<int> delta_r;  // history, as eids
  std::vector<int> eo_r;     // delta_r sorted earliest-applied-first

  auto operator<=>(const Event&) const = default;
};

struct Configuration {
  std::vector<Event> events;  // Δ in eid order
  std::set<std::pair<int, int>> vis;
  std::set<std::pair<int, int>> eo;

  auto operator<=>(const Configuration&) const = default;

  const Event* event(int eid) const {
    for (auto& e : events)
      if (e.eid == eid) return &e;
    return nullptr;
  }
  bool vis_rel(int a, int b) const { return vis.count({a, b}) > 0; }
  bool eo_rel(int a, int b) const { return eo.count({a, b}) > 0; }
};

// Effectors of the configuration's events, keyed by eid.
using EffectorMap = std::map<int, Effector>;

}  // namespace crdtv
