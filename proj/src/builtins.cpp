#include <map>
#include <stdexcept>

#include "crdtv/spec_core.hpp"

namespace crdtv {

namespace {

// Each definition mirrors the corresponding abstract spec: source-state
// conditions go in (guard ...) / (where ...), conditions on the state an
// effector is applied to go in (when ...) and stay residual until application.

const char* kSimpleSet = R"((crdt simple-set
  (state (S (E)))
  (op Add ((a E))
    (add S (a)))
  (op Remove ((a E))
    (remove S (a)))
  (query Lookup ((a E))
    (in S (a)))))";

const char* kOrset = R"((crdt orset
  (state (S (E I)))
  (op Add ((a E) (i I fresh))
    (add S (a i)))
  (op Remove ((a E))
    (remove S (a i) (where (in S (a i)))))
  (query Lookup ((a E))
    (exists ((i I)) (in S (a i))))))";

const char* kOrsetTomb = R"((crdt orset-tomb
  (state (A (E I)) (R (E I)))
  (op Add ((a E) (i I fresh))
    (add A (a i)))
  (op Remove ((a E))
    (add R (a i) (where (in A (a i)))))
  (query Lookup ((a E))
    (exists ((i I)) (and (in A (a i)) (not (in R (a i))))))))";

const char* kUset = R"((crdt uset
  (state (S (E)))
  (op Add ((a E))
    (guard (not (in S (a))))
    (add S (a)))
  (op Remove ((a E))
    (guard (in S (a)))
    (when (tgt-in S (a)))
    (remove S (a)))
  (query Lookup ((a E))
    (in S (a)))))";

// A holds (element, id, parent-id) triples; R is the tombstone set of removed
// ids. The parent may be found either in the source or in the target state.
const char* kRga = R"((crdt rga
  (state (A (E I I)) (R (I)))
  (op AddRight ((e I ref) (a E) (i I fresh))
    (guard (and (not (in R (e)))
                (forall ((x E) (y I) (z I)) (implies (in A (x y z)) (lt y i)))))
    (when (or (exists ((x E) (z I)) (in A (x e z)))
              (exists ((x E) (z I)) (tgt-in A (x e z)))))
    (add A (a i e)))
  (op Remove ((i I ref))
    (guard (exists ((x E) (z I)) (in A (x i z))))
    (add R (i)))
  (query Lookup ((i I ref))
    (and (exists ((x E) (z I)) (in A (x i z))) (not (in R (i)))))))";

const char* kRgaNoTomb = R"((crdt rga-no-tomb
  (state (A (E I I)))
  (op AddRight ((e I ref) (a E) (i I fresh))
    (guard (forall ((x E) (y I) (z I)) (implies (in A (x y z)) (lt y i))))
    (when (or (exists ((x E) (z I)) (in A (x e z)))
              (exists ((x E) (z I)) (tgt-in A (x e z)))))
    (add A (a i e)))
  (op Remove ((i I ref))
    (guard (exists ((x E) (z I)) (in A (x i z))))
    (remove A (x i z)))
  (query Lookup ((i I ref))
    (exists ((x E) (z I)) (in A (x i z))))))";

const char* kTpTpGraph = R"((crdt 2p2p-graph
  (state (VA (E)) (VR (E)) (EA (E E)) (ER (E E)))
  (op AddVertex ((v E))
    (add VA (v)))
  (op RemoveVertex ((v E))
    (guard (and (in VA (v)) (not (in VR (v)))
                (forall ((u E) (w E))
                  (implies (and (in EA (u w)) (not (in ER (u w))))
                           (and (not (= u v)) (not (= w v)))))))
    (when (implies (exists ((u E) (w E)) (and (in EA (u w)) (not (in ER (u w)))))
                   (tgt-in VA (v))))
    (add VR (v)))
  (op AddEdge ((u E) (v E))
    (guard (and (in VA (u)) (not (in VR (u))) (in VA (v)) (not (in VR (v)))))
    (add EA (u v)))
  (op RemoveEdge ((u E) (v E))
    (guard (and (in EA (u v)) (not (in ER (u v)))
                (in VA (u)) (not (in VR (u))) (in VA (v)) (not (in VR (v)))))
    (when (tgt-in EA (u v)))
    (add ER (u v)))
  (query LookupVertex ((v E))
    (and (in VA (v)) (not (in VR (v)))))
  (query LookupEdge ((u E) (v E))
    (and (in EA (u v)) (not (in ER (u v))) (not (in VR (u))) (not (in VR (v)))))))";

// Two inlined ORSets: V holds tagged vertices, Ed holds tagged edges.
const char* kGraphOrset = R"((crdt graph-with-orset
  (state (V (E I)) (Ed (E E I)))
  (op AddVertex ((v E) (i I fresh))
    (add V (v i)))
  (op RemoveVertex ((v E))
    (guard (and (exists ((j I)) (in V (v j)))
                (forall ((x E) (y E) (j I))
                  (implies (in Ed (x y j)) (and (not (= x v)) (not (= y v)))))))
    (when (forall ((x E) (y E) (j I))
            (implies (tgt-in Ed (x y j)) (and (not (= x v)) (not (= y v))))))
    (remove V (v j) (where (in V (v j)))))
  (op AddEdge ((u E) (w E) (i I fresh))
    (guard (and (exists ((j I)) (in V (u j))) (exists ((j I)) (in V (w j)))))
    (when (and (exists ((j I)) (tgt-in V (u j)))
               (exists ((j I)) (tgt-in V (w j)))))
    (add Ed (u w i)))
  (op RemoveEdge ((u E) (w E))
    (remove Ed (u w j) (where (in Ed (u w j)))))
  (query LookupVertex ((v E))
    (exists ((j I)) (in V (v j))))
  (query LookupEdge ((u E) (w E))
    (exists ((j I)) (in Ed (u w j))))))";

const std::vector<std::pair<std::string, const char*>>& builtin_sources() {
  static const std::vector<std::pair<std::string, const char*>> sources = {
      {"simple-set", kSimpleSet}, {"orset", kOrset},
      {"orset-tomb", kOrsetTomb}, {"uset", kUset},
      {"rga", kRga},              {"rga-no-tomb", kRgaNoTomb},
      {"2p2p-graph", kTpTpGraph}, {"graph-with-orset", kGraphOrset},
  };
  return sources;
}

std::map<std::string, CrdtSpec> parse_all() {
  std::map<std::string, CrdtSpec> out;
  for (auto& [name, src] : builtin_sources()) {
    std::vector<Diagnostic> diags;
    auto spec = parse_spec(src, diags);
    if (!spec) {
      std::string msg = "builtin '" + name + "' failed to parse:";
      for (auto& d : diags) msg += " " + d.message;
      throw std::logic_error(msg);
    }
    out.emplace(name, std::move(*spec));
  }
  return out;
}

const std::map<std::string, CrdtSpec>& builtin_map() {
  static const std::map<std::string, CrdtSpec> specs = parse_all();
  return specs;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (auto& [name, src] : builtin_sources()) out.push_back(name);
    return out;
  }();
  return names;
}

bool is_builtin(const std::string& name) {
  return builtin_map().count(name) > 0;
}

const CrdtSpec& builtin(const std::string& name) {
  auto& m = builtin_map();
  auto it = m.find(name);
  if (it == m.end()) throw std::invalid_argument("unknown CRDT '" + name + "'");
  return it->second;
}

}  // namespace crdtv
