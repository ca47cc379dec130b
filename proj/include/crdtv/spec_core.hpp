#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crdtv/ast.hpp"

namespace crdtv {

// Parses `.crdt` source text into an AST. On failure returns std::nullopt and
// fills `diags` with positioned messages. A successful parse has already been
// validated (see validate_spec).
std::optional<CrdtSpec> parse_spec(const std::string& text,
                                   std::vector<Diagnostic>& diags);

// Byte-stable pretty printer; parse_spec(pretty_print(s)) reproduces s.
std::string pretty_print(const CrdtSpec& spec);

// Structural well-formedness: unique op names, known relations and sorts,
// arity agreement, source-only guards and comprehension conditions, no
// add/remove of the same relation within one op.
bool validate_spec(const CrdtSpec& spec, std::vector<Diagnostic>& diags);

// Built-in CRDT library. Names: simple-set, orset, orset-tomb, uset, rga,
// rga-no-tomb, 2p2p-graph, graph-with-orset.
const std::vector<std::string>& builtin_names();
const CrdtSpec& builtin(const std::string& name);
bool is_builtin(const std::string& name);

bool spec_equal(const CrdtSpec& a, const CrdtSpec& b);

}  // namespace crdtv
