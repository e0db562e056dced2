#include "colcirc/circuit.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "colcirc/error.hpp"

namespace colcirc {

PortRef PortRef::parse(const std::string& text) {
  auto dot = text.rfind('.');
  require(dot != std::string::npos && dot > 0 && dot + 1 < text.size(), Errc::parse_error,
          "port reference '" + text + "' is not of the form vertex.port");
  return PortRef{text.substr(0, dot), text.substr(dot + 1)};
}

void Circuit::add_vertex(const std::string& id, OperatorPtr op) {
  require(!id.empty() && id.find('.') == std::string::npos, Errc::invalid_argument,
          "vertex id '" + id + "' must be non-empty and free of '.'");
  require(op != nullptr, Errc::invalid_argument, "null operator for vertex '" + id + "'");
  require(!vertices_.count(id), Errc::duplicate_id, "duplicate vertex id '" + id + "'");
  vertices_.emplace(id, std::move(op));
}

void Circuit::add_edge(PortRef from, PortRef to) {
  edges_.push_back(Edge{std::move(from), std::move(to)});
}

void Circuit::set_input(const std::string& label, PortRef port) {
  require(!outputs_.count(label), Errc::name_collision,
          "label '" + label + "' already names an output");
  inputs_[label] = std::move(port);
}

void Circuit::set_output(const std::string& label, PortRef port) {
  require(!inputs_.count(label), Errc::name_collision,
          "label '" + label + "' already names an input");
  outputs_[label] = std::move(port);
}

void Circuit::remove_input(const std::string& label) { inputs_.erase(label); }
void Circuit::remove_output(const std::string& label) { outputs_.erase(label); }

const OperatorPtr& Circuit::op(const std::string& id) const {
  auto it = vertices_.find(id);
  require(it != vertices_.end(), Errc::invalid_argument, "unknown vertex '" + id + "'");
  return it->second;
}

PortDirection Circuit::direction(const PortRef& p) const {
  auto it = vertices_.find(p.vertex);
  if (it == vertices_.end()) return PortDirection::none;
  const auto& sig = it->second->signature();
  if (sig.find_input(p.port)) return PortDirection::in;
  if (sig.find_output(p.port)) return PortDirection::out;
  return PortDirection::none;
}

ElementType Circuit::port_type(const PortRef& p) const {
  const auto& sig = op(p.vertex)->signature();
  if (const auto* in = sig.find_input(p.port)) return in->type;
  if (const auto* out = sig.find_output(p.port)) return out->type;
  fail(Errc::invalid_argument, "unknown port '" + p.to_string() + "'");
}

Signature Circuit::signature() const {
  Signature sig;
  for (const auto& [label, port] : inputs_) sig.inputs.push_back({label, port_type(port)});
  for (const auto& [label, port] : outputs_) sig.outputs.push_back({label, port_type(port)});
  return sig;
}

std::string_view violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::unknown_port: return "unknown-port";
    case ViolationKind::orientation: return "orientation";
    case ViolationKind::cycle: return "cycle";
    case ViolationKind::multi_fed_port: return "multi-fed-port";
    case ViolationKind::type_mismatch: return "type-mismatch";
    case ViolationKind::dangling_interface: return "dangling-interface";
    case ViolationKind::unmapped_disengaged_input: return "unmapped-disengaged-input";
    case ViolationKind::label_collision: return "label-collision";
  }
  return "?";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    if (k) out << "; ";
    out << violation_name(violations[k].kind) << ": " << violations[k].detail;
  }
  return out.str();
}

ValidationReport validate_circuit(const Circuit& c) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };

  std::map<PortRef, int> fed;
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& e : c.edges()) {
    auto dfrom = c.direction(e.from);
    auto dto = c.direction(e.to);
    if (dfrom == PortDirection::none || dto == PortDirection::none) {
      add(ViolationKind::unknown_port,
          "edge " + e.from.to_string() + " -> " + e.to.to_string() + " names a missing port");
      continue;
    }
    if (dfrom != PortDirection::out || dto != PortDirection::in) {
      add(ViolationKind::orientation,
          "edge " + e.from.to_string() + " -> " + e.to.to_string() + " is not out -> in");
      continue;
    }
    if (++fed[e.to] == 2) {
      add(ViolationKind::multi_fed_port, "in-port " + e.to.to_string() + " has several sources");
    }
    auto tf = c.port_type(e.from), tt = c.port_type(e.to);
    if (tf != tt) {
      add(ViolationKind::type_mismatch, "edge " + e.from.to_string() + " (" + tf.to_string() +
                                            ") -> " + e.to.to_string() + " (" + tt.to_string() + ")");
    }
    succ[e.from.vertex].insert(e.to.vertex);
  }

  // Acyclicity of the layout graph (self-loops included).
  std::map<std::string, int> state;
  std::vector<std::string> on_cycle;
  for (const auto& [root, op] : c.vertices()) {
    if (state[root]) continue;
    std::vector<std::pair<std::string, std::set<std::string>::const_iterator>> stack;
    static const std::set<std::string> none;
    auto children = [&](const std::string& v) -> const std::set<std::string>& {
      auto it = succ.find(v);
      return it == succ.end() ? none : it->second;
    };
    state[root] = 1;
    stack.emplace_back(root, children(root).begin());
    while (!stack.empty()) {
      auto& [v, it] = stack.back();
      if (it == children(v).end()) {
        state[v] = 2;
        stack.pop_back();
        continue;
      }
      const std::string& w = *it++;
      if (state[w] == 1) {
        on_cycle.push_back(w);
      } else if (state[w] == 0) {
        state[w] = 1;
        stack.emplace_back(w, children(w).begin());
      }
    }
  }
  if (!on_cycle.empty()) {
    std::sort(on_cycle.begin(), on_cycle.end());
    on_cycle.erase(std::unique(on_cycle.begin(), on_cycle.end()), on_cycle.end());
    std::string names;
    for (const auto& v : on_cycle) names += (names.empty() ? "" : ",") + v;
    add(ViolationKind::cycle, "layout graph has a cycle through " + names);
  }

  std::map<PortRef, std::string> input_ports;
  for (const auto& [label, port] : c.inputs()) {
    if (c.direction(port) != PortDirection::in) {
      add(ViolationKind::dangling_interface,
          "input '" + label + "' maps to " + port.to_string() + ", not a vertex in-port");
      continue;
    }
    if (fed.count(port)) {
      add(ViolationKind::multi_fed_port,
          "input '" + label + "' maps to engaged in-port " + port.to_string());
    }
    auto [it, fresh] = input_ports.emplace(port, label);
    if (!fresh) {
      add(ViolationKind::dangling_interface, "inputs '" + it->second + "' and '" + label +
                                                 "' map to the same port " + port.to_string());
    }
  }
  for (const auto& [label, port] : c.outputs()) {
    if (c.direction(port) != PortDirection::out) {
      add(ViolationKind::dangling_interface,
          "output '" + label + "' maps to " + port.to_string() + ", not a vertex out-port");
    }
  }
  for (const auto& [id, op] : c.vertices()) {
    for (const auto& p : op->signature().inputs) {
      PortRef ref{id, p.label};
      if (!fed.count(ref) && !input_ports.count(ref)) {
        add(ViolationKind::unmapped_disengaged_input,
            "in-port " + ref.to_string() + " has no edge and no input label");
      }
    }
  }
  return report;
}

void require_valid(const Circuit& c) {
  auto report = validate_circuit(c);
  if (!report.ok()) fail(Errc::invalid_circuit, "invalid circuit: " + report.to_string());
}

}  // namespace colcirc
