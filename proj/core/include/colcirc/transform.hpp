#pragma once

#include <map>
#include <set>
#include <string>

#include "colcirc/catalog.hpp"
#include "colcirc/circuit.hpp"

namespace colcirc {

// Interface label given to a severed port of an induced subcircuit.
std::string cut_label(const std::string& vertex, const std::string& port);
inline constexpr std::string_view kCutPrefix = "cut:";

// Disjoint union. Vertex ids and labels of `b` that collide with `a` get a
// "#2", "#3", ... suffix.
Circuit circuit_union(const Circuit& a, const Circuit& b);

// Feeds circuit input `label` from out-port `source`; the label disappears.
Circuit assign_input(const Circuit& c, const std::string& label, const PortRef& source);

// Restriction to `vertex_ids`. Ports fed from outside become inputs and
// out-ports feeding outside become outputs, labeled by cut_label().
Circuit induced_subcircuit(const Circuit& c, const std::set<std::string>& vertex_ids);

// Replaces the subcircuit induced by `vertex_ids` with `replacement`. `rho`
// maps replacement labels to induced-subcircuit labels; unmapped labels map
// to themselves.
Circuit replace_subcircuit(const Circuit& c, const std::set<std::string>& vertex_ids,
                           const Circuit& replacement,
                           const std::map<std::string, std::string>& rho = {});

Circuit lift_operator(OperatorPtr op, const std::string& vertex_id = "op");

// Replaces `vertex_ids` by one vertex running the induced subcircuit, and
// registers that operator in `catalog` under `fused_name`.
Circuit fuse_subcircuit(const Circuit& c, const std::set<std::string>& vertex_ids,
                        const std::string& fused_name,
                        OperatorCatalog& catalog = OperatorCatalog::global());

// Merges vertices with equal (op, params) and identical in-port sources,
// repeated to a fixpoint. Fused operators are never merged.
Circuit eliminate_duplicate_vertices(const Circuit& c);

OperatorPtr make_fused_operator(const std::string& name, const Circuit& inner);
OperatorPtr make_fused_operator(const std::string& name, const json& inner_circuit);

}  // namespace colcirc
