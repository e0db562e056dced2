#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "colcirc/circuit.hpp"

namespace colcirc {

// A value flowing in a circuit under construction: a vertex out-port, or a
// circuit input not yet bound to any in-port.
struct Wire {
  std::string vertex;  // empty for circuit inputs
  std::string port;    // out-port label, or the input label
  ElementType type;

  bool is_input() const { return vertex.empty(); }
};

// Assembles circuits from catalog operators, inferring type parameters from
// wires. Inputs used zero or several times, and inputs routed straight to an
// output, are relayed through a NoOp vertex at build().
class CircuitBuilder {
 public:
  Wire input(const std::string& label, const ElementType& type);

  // Adds a vertex for `op` and connects `connections` (in-port -> wire).
  std::vector<Wire> add(const std::string& op, json params,
                        const std::vector<std::pair<std::string, Wire>>& connections,
                        const std::string& id_hint = "");
  Wire add1(const std::string& op, json params,
            const std::vector<std::pair<std::string, Wire>>& connections,
            const std::string& id_hint = "");

  void output(const std::string& label, const Wire& w);
  Circuit build() const;

  Wire constant(const ElementType& type, json value);
  Wire noop(const Wire& w);
  Wire ew(const std::string& fn, const std::vector<Wire>& args, json extra = json::object());
  Wire ew_const(const std::string& fn, const Wire& a, json constant);
  Wire cast(const Wire& w, const ElementType& to);
  Wire length(const Wire& col, const ElementType& out = ElementType::u(64));
  Wire replicate(const Wire& value, const Wire& count);
  Wire iota(const Wire& count, const ElementType& type = ElementType::u(64));
  Wire gather(const Wire& pos, const Wire& data);
  Wire scatter(const Wire& col, const Wire& pos, const Wire& data);
  Wire permute(const Wire& pos, const Wire& data);
  Wire select(const Wire& data, const Wire& selection);
  Wire select_indices(const Wire& selection, const ElementType& type = ElementType::u(64));
  Wire concat(const std::vector<Wire>& parts);
  Wire prefix(const Wire& col, const std::string& fn, bool inclusive,
              const ElementType& out_type);
  Wire prefix_sum(const Wire& col, bool inclusive = true) {
    return prefix(col, "add", inclusive, col.type);
  }
  Wire last(const Wire& col);
  Wire derivative(const Wire& col);
  std::pair<Wire, Wire> split_first(const Wire& col);
  Wire zip(const std::vector<Wire>& parts);
  std::vector<Wire> unzip(const Wire& col);
  Wire is_same_as_previous(const Wire& col);

  // Total of an integer column as a scalar of `type` (0 when empty).
  Wire sum(const Wire& col, const ElementType& type);
  // For run lengths [l0, l1, ...] yields the run index of every element
  // (l0 zeros, l1 ones, ...). Zero-length runs are skipped.
  Wire expand_runs(const Wire& lengths);
  // Elementwise a ? b : c.
  Wire if_else(const Wire& cond, const Wire& a, const Wire& b);

 private:
  std::string fresh_id(const std::string& base);

  struct Pending {
    Wire source;
    PortRef target;
  };

  Circuit circuit_;
  std::map<std::string, int> counters_;
  std::map<std::string, ElementType> inputs_;
  std::vector<Pending> pending_;
  std::vector<std::pair<std::string, Wire>> outputs_;
};

}  // namespace colcirc
