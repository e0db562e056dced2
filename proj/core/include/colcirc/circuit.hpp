#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "colcirc/column.hpp"
#include "colcirc/operator.hpp"

namespace colcirc {

// A vertex port. Rendered "vertex.port"; parsing splits at the last '.'.
struct PortRef {
  std::string vertex;
  std::string port;

  std::string to_string() const { return vertex + "." + port; }
  static PortRef parse(const std::string& text);
  auto operator<=>(const PortRef&) const = default;
};

struct Edge {
  PortRef from;  // out-port
  PortRef to;    // in-port
  auto operator<=>(const Edge&) const = default;
};

enum class PortDirection { in, out, none };

// Port digraph with operator-labeled vertices and an interface mapping circuit
// labels to vertex ports. A plain value: transformations return new circuits.
class Circuit {
 public:
  void add_vertex(const std::string& id, OperatorPtr op);
  void add_edge(PortRef from, PortRef to);
  void set_input(const std::string& label, PortRef port);
  void set_output(const std::string& label, PortRef port);
  void remove_input(const std::string& label);
  void remove_output(const std::string& label);

  const std::map<std::string, OperatorPtr>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::map<std::string, PortRef>& inputs() const { return inputs_; }
  const std::map<std::string, PortRef>& outputs() const { return outputs_; }

  bool has_vertex(const std::string& id) const { return vertices_.count(id) != 0; }
  const OperatorPtr& op(const std::string& id) const;
  PortDirection direction(const PortRef& p) const;
  // Element type of a port; throws if the port does not exist.
  ElementType port_type(const PortRef& p) const;

  // Derived from the interface; ordered by label.
  Signature signature() const;

 private:
  std::map<std::string, OperatorPtr> vertices_;
  std::vector<Edge> edges_;
  std::map<std::string, PortRef> inputs_;
  std::map<std::string, PortRef> outputs_;
};

enum class ViolationKind {
  unknown_port,
  orientation,
  cycle,
  multi_fed_port,
  type_mismatch,
  dangling_interface,
  unmapped_disengaged_input,
  label_collision,
};

std::string_view violation_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string to_string() const;
};

ValidationReport validate_circuit(const Circuit& c);
// Throws Error(invalid_circuit) carrying the report text.
void require_valid(const Circuit& c);

struct EvalOptions {
  std::size_t threads = 1;   // >1 runs ready vertices concurrently
  bool trace = false;        // record every port's column
  bool skip_validation = false;
};

struct EvalResult {
  ColumnFamily outputs;
  std::map<std::string, Column> trace;  // "vertex.port" -> column, in and out ports
};

// Parallelism cap: COLCIRC_THREADS if set, else hardware concurrency.
std::size_t default_thread_count();

EvalResult evaluate_circuit_full(const Circuit& c, const ColumnFamily& inputs,
                                 const EvalOptions& options = {});
ColumnFamily evaluate_circuit(const Circuit& c, const ColumnFamily& inputs,
                              const EvalOptions& options = {});
// Single bit output of length one; throws non_scalar_output otherwise.
bool evaluate_decision_circuit(const Circuit& c, const ColumnFamily& inputs,
                               const EvalOptions& options = {});

json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const json& j);
Circuit read_circuit(const std::string& path);
void write_circuit(const std::string& path, const Circuit& c);

}  // namespace colcirc
