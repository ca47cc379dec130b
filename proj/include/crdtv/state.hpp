#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "crdtv/ast.hpp"

namespace crdtv {

// Atoms are drawn from per-sort finite universes: e0,e1,... and i0,i1,...
// The Id order is the index order.
struct Atom {
  BaseSort sort = BaseSort::Elem;
  int index = 0;

  auto operator<=>(const Atom&) const = default;

  std::string name() const {
    return (sort == BaseSort::Elem ? "e" : "i") + std::to_string(index);
  }
  static Atom elem(int i) { return {BaseSort::Elem, i}; }
  static Atom id(int i) { return {BaseSort::Id, i}; }
};

using Tuple = std::vector<Atom>;

struct AtomUniverse {
  int elems = 2;
  int ids = 3;

  auto operator<=>(const AtomUniverse&) const = default;

  std::vector<Atom> of(BaseSort s) const {
    std::vector<Atom> out;
    int n = s == BaseSort::Elem ? elems : ids;
    for (int i = 0; i < n; i++) out.push_back({s, i});
    return out;
  }

  // All tuples over the given column sorts.
  std::vector<Tuple> tuples(const std::vector<BaseSort>& cols) const {
    std::vector<Tuple> out{{}};
    for (auto c : cols) {
      std::vector<Tuple> next;
      for (auto& t : out)
        for (auto& a : of(c)) {
          Tuple t2 = t;
          t2.push_back(a);
          next.push_back(std::move(t2));
        }
      out = std::move(next);
    }
    return out;
  }
};

// A finite product of relations; canonical by construction, so equality is
// structural.
struct ConcreteState {
  std::map<std::string, std::set<Tuple>> rels;

  auto operator<=>(const ConcreteState&) const = default;

  bool contains(const std::string& rel, const Tuple& t) const {
    auto it = rels.find(rel);
    return it != rels.end() && it->second.count(t) > 0;
  }
  void add(const std::string& rel, Tuple t) { rels[rel].insert(std::move(t)); }
  void remove(const std::string& rel, const Tuple& t) {
    auto it = rels.find(rel);
    if (it != rels.end()) it->second.erase(t);
  }
  bool empty() const {
    for (auto& [r, s] : rels)
      if (!s.empty()) return false;
    return true;
  }

  static ConcreteState initial(const CrdtSpec& spec) {
    ConcreteState s;
    for (auto& r : spec.state) s.rels[r.name];
    return s;
  }

  std::string to_string() const;
};

std::string tuple_to_string(const Tuple& t);

}  // namespace crdtv
